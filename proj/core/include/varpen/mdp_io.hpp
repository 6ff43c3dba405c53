#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "varpen/mdp.hpp"

namespace varpen {

/// Parses and validates the line-based model format:
///
///     states s_init a goal
///     init s_init
///     goal goal
///     trans s_init alpha 0 a 1
///     trans a tau 1 goal 2/3 a 1/3
///
/// `#` starts a comment. Syntax problems raise ParseError, model problems
/// ValidationError; both carry the offending line when there is one.
Mdp parse_mdp(std::string_view text);

std::string serialize_mdp(const Mdp& m);

/// Reads and parses a file; IO failures surface as ParseError.
Mdp load_mdp(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace varpen

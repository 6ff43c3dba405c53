#pragma once

#include <cstddef>
#include <vector>

namespace varpen::detail {

/// Tarjan SCC on an adjacency list. Returns the component id of every node;
/// ids are assigned in reverse topological order (sink components first).
std::vector<std::size_t> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& adjacency, std::size_t* component_count = nullptr);

}  // namespace varpen::detail

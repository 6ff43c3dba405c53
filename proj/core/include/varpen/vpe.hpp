#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "varpen/distribution.hpp"
#include "varpen/saturation.hpp"
#include "varpen/scheduler.hpp"
#include "varpen/variance.hpp"

namespace varpen {

enum class VpeObjective {
  MaximizeExpectation,  // E - lambda*V
  MinimizeExpectation,  // -E - lambda*V
};

struct VpeOptions {
  std::optional<std::uint64_t> bound;  // defaults to the saturation point K
  VpeObjective objective = VpeObjective::MaximizeExpectation;
  unsigned jobs = 1;
  std::uint64_t max_assignments = std::uint64_t{1} << 24;
  std::size_t max_pairs = 2'000'000;
};

struct VpeReport {
  Rational lambda;
  VpeObjective objective = VpeObjective::MaximizeExpectation;
  std::uint64_t bound_used = 0;
  bool exact = false;  // bound_used >= K: value is the optimum, not just a lower bound
  Rational value;
  WeightBasedScheduler scheduler;
  MomentPair moments;
};

enum class Verdict { Holds, Fails, LowerBoundOnly };

struct ThresholdResult {
  Verdict verdict = Verdict::Holds;
  VpeReport report;
};

struct FrontierRow {
  Rational lambda;
  Rational expectation;
  Rational variance;
  Rational vpe;
};

/// Everything that depends only on (model, lambda): the saturation constants
/// and the variance-minimal expectation-minimal scheduler used as the tail of
/// every candidate.
class VpeSolver {
 public:
  /// Requires an end-component free model with non-negative weights and
  /// lambda > 0.
  VpeSolver(Mdp m, Rational lambda);

  const Mdp& model() const noexcept { return m_; }
  const Rational& lambda() const noexcept { return lambda_; }
  const SaturationConstants& saturation() const noexcept { return saturation_; }
  const VarianceMinSolution& tail() const noexcept { return tail_; }

  Rational objective_value(const MomentPair& moments, VpeObjective objective) const;

  /// Exact VPE of a weight-based scheduler whose tail is the variance-min
  /// scheduler (TailMismatch otherwise).
  VpeReport evaluate(const WeightBasedScheduler& sched,
                     VpeObjective objective = VpeObjective::MaximizeExpectation) const;

  /// Best deterministic weight-based scheduler with the given bound, by
  /// exhaustive enumeration over the decision pairs of the unfolding. Ties go
  /// to the lexicographically least assignment. Throws BoundTooLarge when the
  /// assignment count exceeds the budget.
  VpeReport maximize(const VpeOptions& options = {}) const;

  ThresholdResult threshold(const Rational& theta, const VpeOptions& options = {}) const;

 private:
  Mdp m_;
  Rational lambda_;
  SaturationConstants saturation_;
  VarianceMinSolution tail_;
};

VpeReport vpe_of_scheduler(const Mdp& m, const Rational& lambda, const WeightBasedScheduler& sched);
VpeReport maximize_vpe(const Mdp& m, const Rational& lambda, const VpeOptions& options = {});
ThresholdResult threshold(const Mdp& m, const Rational& lambda, const Rational& theta,
                          const VpeOptions& options = {});
std::vector<FrontierRow> frontier(const Mdp& m, const std::vector<Rational>& lambdas,
                                  const VpeOptions& options = {});

/// `lambda,expectation,variance,vpe` rows (exact fractions) with a header.
std::string frontier_csv(const std::vector<FrontierRow>& rows);

}  // namespace varpen

#include "varpen/simulate.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <thread>

#include "varpen/errors.hpp"

namespace varpen {

namespace {

constexpr std::uint64_t kChunk = 8192;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class Weights>
std::size_t pick(std::mt19937_64& rng, const Weights& cumulative) {
  if (cumulative.size() == 1) return 0;
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

struct ChunkResult {
  mpz_class sum = 0;
  mpz_class sum_sq = 0;
  std::uint64_t min = UINT64_MAX;
  std::uint64_t max = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;
};

class Walker {
 public:
  Walker(const Mdp& m, const WeightBasedScheduler& sched, std::uint64_t step_limit)
      : m_(m), sched_(sched), step_limit_(step_limit), successors_(m.num_states()) {
    for (StateId s = 0; s < m.num_states(); ++s) {
      for (const auto& act : m.actions(s)) {
        std::vector<double> cum;
        Rational acc = 0;
        for (const auto& tr : act.successors) {
          acc += tr.probability;
          cum.push_back(acc.to_double());
        }
        successors_[s].push_back(std::move(cum));
      }
    }
  }

  std::uint64_t run(std::mt19937_64& rng) const {
    StateId s = m_.init();
    std::uint64_t w = 0;
    std::uint64_t steps = 0;
    std::vector<double> cum;
    while (s != m_.goal()) {
      if (++steps > step_limit_) {
        throw Error(ErrorKind::StepLimitExceeded,
                    "a run exceeded " + std::to_string(step_limit_) + " steps");
      }
      const ActionDistribution& d = sched_.at(s, w);
      ActionId a = d.front().action;
      if (d.size() > 1) {
        cum.clear();
        Rational acc = 0;
        for (const auto& aw : d) {
          acc += aw.probability;
          cum.push_back(acc.to_double());
        }
        a = d[pick(rng, cum)].action;
      }
      const Action& act = m_.action(s, a);
      w += static_cast<std::uint64_t>(act.weight);
      s = act.successors[pick(rng, successors_[s][a])].target;
    }
    return w;
  }

 private:
  const Mdp& m_;
  const WeightBasedScheduler& sched_;
  std::uint64_t step_limit_;
  std::vector<std::vector<std::vector<double>>> successors_;
};

ChunkResult run_chunk(const Walker& walker, std::uint64_t seed, std::uint64_t chunk, std::uint64_t count) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(chunk)));
  ChunkResult r;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t w = walker.run(rng);
    const mpz_class wz(static_cast<unsigned long>(w));
    r.sum += wz;
    r.sum_sq += wz * wz;
    r.min = std::min(r.min, w);
    r.max = std::max(r.max, w);
    ++r.histogram[w];
  }
  return r;
}

}  // namespace

SimulationSummary simulate(const Mdp& m, const WeightBasedScheduler& sched, const SimulationOptions& options) {
  if (options.samples == 0) throw Error(ErrorKind::InvalidArgument, "samples must be at least 1");
  if (m.has_negative_weights()) throw Error(ErrorKind::NegativeWeight, "simulation needs non-negative weights");
  validate_scheduler(m, sched);

  const Walker walker(m, sched, options.step_limit);
  const std::uint64_t chunks = (options.samples + kChunk - 1) / kChunk;
  std::vector<ChunkResult> results(chunks);
  auto size_of = [&](std::uint64_t c) { return std::min(kChunk, options.samples - c * kChunk); };

  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(chunks)));
  std::vector<std::exception_ptr> errors(jobs);
  auto worker = [&](unsigned k) {
    try {
      for (std::uint64_t c = k; c < chunks; c += jobs) results[c] = run_chunk(walker, options.seed, c, size_of(c));
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned k = 0; k < jobs; ++k) threads.emplace_back(worker, k);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SimulationSummary out;
  out.samples = options.samples;
  out.min = UINT64_MAX;
  mpz_class sum = 0;
  mpz_class sum_sq = 0;
  for (const auto& r : results) {
    sum += r.sum;
    sum_sq += r.sum_sq;
    out.min = std::min(out.min, r.min);
    out.max = std::max(out.max, r.max);
    for (const auto& [w, c] : r.histogram) out.histogram[w] += c;
  }
  const Rational count(BigInt(static_cast<unsigned long>(options.samples)));
  out.mean = Rational(sum) / count;
  out.variance = Rational(sum_sq) / count - out.mean.square();
  return out;
}

std::string histogram_csv(const SimulationSummary& summary) {
  std::ostringstream out;
  out << "weight,count\n";
  for (const auto& [w, c] : summary.histogram) out << w << ',' << c << '\n';
  return out.str();
}

}  // namespace varpen

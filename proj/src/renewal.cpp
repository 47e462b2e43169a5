#include "stable_passage/renewal.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace stable_passage {

namespace {

std::vector<double> make_grid(const IncrementModel& model, double x_max) {
  std::vector<double> grid;
  if (model.is_integer_lattice()) {
    const std::int64_t top = static_cast<std::int64_t>(std::floor(x_max));
    grid.reserve(static_cast<std::size_t>(top + 1));
    for (std::int64_t x = 0; x <= top; ++x) grid.push_back(static_cast<double>(x));
  } else {
    grid.push_back(0.0);
    const int points = 200;
    const double lo = std::max(1e-3, x_max * 1e-4);
    const double ratio = std::pow(x_max / lo, 1.0 / (points - 1));
    double x = lo;
    for (int i = 0; i < points; ++i) {
      grid.push_back(x);
      x *= ratio;
    }
    grid.back() = x_max;
  }
  return grid;
}

struct Accum {
  std::vector<double> sum;
  std::vector<double> sumsq;
  std::int64_t chains = 0;
  std::int64_t censored = 0;

  explicit Accum(std::size_t k) : sum(k, 0.0), sumsq(k, 0.0) {}

  void add(const std::vector<double>& counts) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      sum[i] += counts[i];
      sumsq[i] += counts[i] * counts[i];
    }
    ++chains;
  }

  void merge(const Accum& o) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sumsq[i] += o.sumsq[i];
    }
    chains += o.chains;
    censored += o.censored;
  }
};

// Generic chain: run ladder_chain and turn heights into per-grid-point counts.
bool generic_chain_counts(const IncrementModel& model, LadderKind kind, double x_max,
                          std::int64_t step_cap, Stream& stream, const std::vector<double>& grid,
                          std::vector<double>* counts) {
  const LadderChain chain = ladder_chain(model, kind, x_max, step_cap, stream);
  if (chain.censored) return false;
  // cumulative heights: origin + partial sums
  std::vector<double> cum;
  cum.reserve(chain.heights.size() + 1);
  cum.push_back(0.0);
  double acc = 0.0;
  for (double h : chain.heights) {
    acc += h;
    cum.push_back(acc);
  }
  // counts[i] = #{k : cum[k] <= grid[i]}; cum is sorted
  std::size_t j = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    while (j < cum.size() && cum[j] <= grid[i]) ++j;
    (*counts)[i] = static_cast<double>(j);
  }
  return true;
}

// Fast path for the simple +-1 walk: one Philox word feeds 64 steps. Between
// ladder events the walk is far from the record level most of the time, so
// whole 64-step blocks can be applied with a popcount. Counts per integer
// depth d are the number of ladder points at cumulative height d.
bool srw_chain_counts_weak_desc(std::int64_t x_top, std::int64_t step_cap, Stream& stream,
                                std::vector<std::int64_t>* depth_counts) {
  std::int64_t depth = 0;
  (*depth_counts)[0] = 1;  // the origin
  std::uint64_t bits = 0;
  int avail = 0;
  while (depth <= x_top) {
    // search for the next weak-descending epoch from the current record
    std::int64_t d = 0;  // S - min
    std::int64_t steps = 0;
    for (;;) {
      if (steps >= step_cap) return false;
      if (d > 66) {
        if (avail < 64) {
          bits = stream.bits64();
          avail = 64;
        }
        d += 2 * std::popcount(bits) - 64;
        bits = 0;
        avail = 0;
        steps += 64;
        continue;
      }
      if (avail == 0) {
        bits = stream.bits64();
        avail = 64;
      }
      const bool up = (bits & 1u) != 0;
      bits >>= 1;
      --avail;
      ++steps;
      if (up) {
        ++d;
      } else {
        --d;
        if (d <= 0) break;
      }
    }
    // d == 0: height-0 epoch (same depth); d == -1: new minimum (height 1)
    if (d < 0) ++depth;
    if (depth <= x_top) ++(*depth_counts)[static_cast<std::size_t>(depth)];
    else break;
  }
  return true;
}

bool srw_chain_counts_strict_asc(std::int64_t x_top, std::int64_t step_cap, Stream& stream,
                                 std::vector<std::int64_t>* depth_counts) {
  std::int64_t depth = 0;
  (*depth_counts)[0] = 1;
  std::uint64_t bits = 0;
  int avail = 0;
  while (depth <= x_top) {
    std::int64_t d = 0;  // max - S
    std::int64_t steps = 0;
    for (;;) {
      if (steps >= step_cap) return false;
      if (d > 66) {
        if (avail < 64) {
          bits = stream.bits64();
          avail = 64;
        }
        d -= 2 * std::popcount(bits) - 64;
        bits = 0;
        avail = 0;
        steps += 64;
        continue;
      }
      if (avail == 0) {
        bits = stream.bits64();
        avail = 64;
      }
      const bool up = (bits & 1u) != 0;
      bits >>= 1;
      --avail;
      ++steps;
      if (up) {
        --d;
        if (d < 0) break;  // S > max: strict epoch, height 1
      } else {
        ++d;
      }
    }
    ++depth;
    if (depth <= x_top) ++(*depth_counts)[static_cast<std::size_t>(depth)];
    else break;
  }
  return true;
}

}  // namespace

RenewalEstimate estimate_renewal(const IncrementModel& model, LadderKind kind, double x_max,
                                 std::int64_t chains, std::int64_t step_cap, std::uint64_t seed,
                                 const WorkerOptions& opts) {
  if (chains < 1) throw std::invalid_argument("estimate_renewal: chains must be >= 1");
  if (x_max < 0.0) throw std::invalid_argument("estimate_renewal: x_max must be >= 0");
  const auto grid = make_grid(model, x_max);
  const std::size_t k = grid.size();

  constexpr std::int64_t kChunk = 4096;
  const std::int64_t n_chunks = (chains + kChunk - 1) / kChunk;
  std::vector<Accum> partials(static_cast<std::size_t>(n_chunks), Accum(k));
  const bool srw = model.is_simple_random_walk();
  const std::int64_t x_top = static_cast<std::int64_t>(std::floor(x_max));

  const int workers = resolve_worker_count(opts);
  std::atomic<std::int64_t> next{0};
  auto work = [&] {
    std::vector<double> counts(k, 0.0);
    std::vector<std::int64_t> depth_counts(static_cast<std::size_t>(x_top + 1), 0);
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      Accum& acc = partials[static_cast<std::size_t>(c)];
      const std::int64_t begin = c * kChunk;
      const std::int64_t end = std::min(chains, begin + kChunk);
      for (std::int64_t r = begin; r < end; ++r) {
        Stream stream = resolve_stream(seed, static_cast<std::uint64_t>(r));
        bool ok;
        if (srw) {
          std::fill(depth_counts.begin(), depth_counts.end(), 0);
          ok = (kind == LadderKind::kWeakDescending)
                   ? srw_chain_counts_weak_desc(x_top, step_cap, stream, &depth_counts)
                   : srw_chain_counts_strict_asc(x_top, step_cap, stream, &depth_counts);
          if (ok) {
            std::int64_t run = 0;
            for (std::size_t i = 0; i < depth_counts.size(); ++i) {
              run += depth_counts[i];
              counts[i] = static_cast<double>(run);
            }
          }
        } else {
          ok = generic_chain_counts(model, kind, x_max, step_cap, stream, grid, &counts);
        }
        if (ok) {
          acc.add(counts);
        } else {
          ++acc.censored;
        }
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  Accum total(k);
  for (const auto& p : partials) total.merge(p);

  RenewalEstimate est;
  est.kind = kind;
  est.grid = grid;
  est.chains = chains;
  est.model_id = model.id();
  est.censored_fraction = static_cast<double>(total.censored) / static_cast<double>(chains);
  est.values.resize(k);
  est.stderrs.resize(k);
  const double m = static_cast<double>(total.chains);
  if (total.chains == 0) throw std::runtime_error("estimate_renewal: all chains censored");
  for (std::size_t i = 0; i < k; ++i) {
    const double mean = total.sum[i] / m;
    est.values[i] = mean;
    const double var = std::max(0.0, total.sumsq[i] / m - mean * mean);
    est.stderrs[i] = std::sqrt(var / m);
  }
  return est;
}

double renewal_eval(const RenewalEstimate& est, double x, bool* extrapolated) {
  if (x < 0.0) throw std::invalid_argument("renewal_eval: x must be >= 0");
  if (extrapolated) *extrapolated = false;
  const auto& g = est.grid;
  const auto& v = est.values;
  if (g.size() == 1) return v[0];
  if (x >= g.back()) {
    if (x > g.back() && extrapolated) *extrapolated = true;
    const std::size_t k = g.size() - 1;
    const double slope = (v[k] - v[k - 1]) / (g[k] - g[k - 1]);
    return v[k] + slope * (x - g[k]);
  }
  const auto it = std::upper_bound(g.begin(), g.end(), x);
  const std::size_t hi = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - g.begin()));
  const std::size_t lo = hi - 1;
  const double w = (x - g[lo]) / (g[hi] - g[lo]);
  return v[lo] + w * (v[hi] - v[lo]);
}

double lrt_diagnostic(const RenewalEstimate& est, double x_min, double x_max) {
  if (x_min < 1.0) throw std::invalid_argument("lrt_diagnostic: x_min must be >= 1");
  double sup = 0.0;
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    const double x = est.grid[i];
    if (x < x_min || x > x_max) continue;
    const double vx = est.values[i];
    if (vx <= 0.0) continue;
    const double vx1 = renewal_eval(est, x + 1.0);
    sup = std::max(sup, x * (vx1 - vx) / vx);
  }
  return sup;
}

std::vector<LimitConstantPoint> limit_constants(const std::vector<SurvivalEstimate>& tau0_survival,
                                                const std::vector<SurvivalEstimate>& tau_plus_survival,
                                                const RenewalEstimate& v_est,
                                                const RenewalEstimate& h_est,
                                                const ScalingSequence& c_seq) {
  if (tau0_survival.size() != tau_plus_survival.size()) {
    throw std::invalid_argument("limit_constants: survival lists must share the n-grid");
  }
  auto check_model = [&](const std::string& id) {
    if (!id.empty() && id != c_seq.model_id()) {
      throw std::invalid_argument("limit_constants: estimates built from different models");
    }
  };
  check_model(v_est.model_id);
  check_model(h_est.model_id);
  for (const auto& s : tau0_survival) check_model(s.model_id);
  for (const auto& s : tau_plus_survival) check_model(s.model_id);

  std::vector<LimitConstantPoint> out;
  out.reserve(tau0_survival.size());
  for (std::size_t i = 0; i < tau0_survival.size(); ++i) {
    const auto& s0 = tau0_survival[i];
    const auto& sp = tau_plus_survival[i];
    if (s0.n != sp.n) throw std::invalid_argument("limit_constants: mismatched n grids");
    const double cn = c_seq.value(s0.n);
    LimitConstantPoint pt;
    pt.n = s0.n;
    const double v = renewal_eval(v_est, cn);
    const double h = renewal_eval(h_est, cn);
    // first-order error propagation; renewal stderr taken at the nearest grid point
    auto se_near = [](const RenewalEstimate& e, double x) {
      if (e.stderrs.empty()) return 0.0;
      const auto it = std::upper_bound(e.grid.begin(), e.grid.end(), x);
      const std::size_t i = std::min<std::size_t>(e.stderrs.size() - 1,
                                                  static_cast<std::size_t>(it - e.grid.begin()));
      return e.stderrs[i];
    };
    const double v_se = se_near(v_est, cn);
    const double h_se = se_near(h_est, cn);
    pt.a_hat = v * s0.p_hat;
    pt.a_hat_ci = v * s0.ci_half_width + s0.p_hat * 1.96 * v_se;
    pt.a_plus_hat = h * sp.p_hat;
    pt.a_plus_hat_ci = h * sp.ci_half_width + sp.p_hat * 1.96 * h_se;
    pt.vh_hat = v * h / static_cast<double>(s0.n);
    pt.vh_hat_ci = (v * 1.96 * h_se + h * 1.96 * v_se) / static_cast<double>(s0.n);
    out.push_back(pt);
  }
  return out;
}

}  // namespace stable_passage

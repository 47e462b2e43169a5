#include "stable_passage/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace stable_passage {

VSource VSource::srw_harmonic() {
  VSource v;
  v.eval = [](double x) { return 2.0 * x; };
  v.id = "srw_harmonic[2x]";
  return v;
}

VSource VSource::from_estimate(const RenewalEstimate& est) {
  VSource v;
  RenewalEstimate copy = est;
  v.eval = [copy](double x) { return x < 0.0 ? 0.0 : renewal_eval(copy, x); };
  v.id = "renewal_estimate[" + copy.model_id + "]";
  return v;
}

VSource VSource::from_function(std::function<double(double)> f, std::string id) {
  VSource v;
  v.eval = std::move(f);
  v.id = std::move(id);
  return v;
}

namespace {

UgPoint ug_mc(const IncrementModel& model, const std::vector<double>& g, std::int64_t n,
              const VSource& v_source, std::uint64_t seed, std::int64_t replicas,
              const WorkerOptions& opts) {
  // mean of V(S_n - g_n) 1{T_g > n} over replicas, chunked for determinism
  constexpr std::int64_t kChunk = 8192;
  const std::int64_t n_chunks = (replicas + kChunk - 1) / kChunk;
  std::vector<double> sums(static_cast<std::size_t>(n_chunks), 0.0);
  std::vector<double> sumsqs(static_cast<std::size_t>(n_chunks), 0.0);
  const double gn = g[static_cast<std::size_t>(n - 1)];
  std::atomic<std::int64_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      const std::int64_t begin = c * kChunk;
      const std::int64_t end = std::min(replicas, begin + kChunk);
      double s = 0.0, s2 = 0.0;
      for (std::int64_t r = begin; r < end; ++r) {
        Stream stream = resolve_stream(seed, static_cast<std::uint64_t>(r));
        const auto rec = first_passage_table(model, g, stream);
        if (rec.censored()) {
          const double v = v_source.eval(rec.position_at_t - gn);
          s += v;
          s2 += v * v;
        }
      }
      sums[static_cast<std::size_t>(c)] = s;
      sumsqs[static_cast<std::size_t>(c)] = s2;
    }
  };
  const int workers = resolve_worker_count(opts);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    s += sums[i];
    s2 += sumsqs[i];
  }
  const double m = static_cast<double>(replicas);
  UgPoint pt;
  pt.n = n;
  pt.value = s / m;
  const double var = std::max(0.0, s2 / m - pt.value * pt.value);
  pt.ci_half_width = 1.96 * std::sqrt(var / m);
  pt.exact = false;
  return pt;
}

}  // namespace

UgCurve estimate_ug(const IncrementModel& model, const BoundarySpec& b,
                    const std::vector<std::int64_t>& n_grid, const VSource& v_source,
                    EstimateMethod method, std::uint64_t seed, std::int64_t replicas,
                    const WorkerOptions& opts, const ScalingSequence* c_seq) {
  if (n_grid.empty()) throw std::invalid_argument("estimate_ug: empty n grid");
  if (method == EstimateMethod::kDpExact && !model.is_integer_lattice()) {
    throw std::invalid_argument("estimate_ug: dp_exact method needs a lattice model");
  }
  if (method == EstimateMethod::kMonteCarlo && replicas < 1) {
    throw std::invalid_argument("estimate_ug: monte_carlo needs replicas >= 1");
  }
  UgCurve curve;
  curve.model_id = model.id();
  curve.boundary_id = b.id();
  curve.v_source_id = v_source.id;
  const std::int64_t n_top = *std::max_element(n_grid.begin(), n_grid.end());
  const auto g = b.evaluate(n_top, c_seq);
  for (auto n : n_grid) {
    if (method == EstimateMethod::kDpExact) {
      UgPoint pt;
      pt.n = n;
      pt.value = dp_expectation_V(model, b, n, v_source.eval, c_seq);
      pt.exact = true;
      curve.points.push_back(pt);
    } else {
      curve.points.push_back(ug_mc(model, g, n, v_source, seed, replicas, opts));
    }
  }
  return curve;
}

std::vector<RatioPoint> ratio_curve(const IncrementModel& model, const BoundarySpec& b,
                                    const std::vector<std::int64_t>& n_grid, const VSource& v_source,
                                    EstimateMethod method, std::uint64_t seed,
                                    std::int64_t replicas, const WorkerOptions& opts,
                                    const ScalingSequence* c_seq) {
  const UgCurve ug = estimate_ug(model, b, n_grid, v_source, method, seed, replicas, opts, c_seq);
  const BoundarySpec zero = BoundarySpec::constant(0.0);
  std::vector<RatioPoint> out;
  out.reserve(n_grid.size());
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const std::int64_t n = n_grid[i];
    RatioPoint pt;
    pt.n = n;
    pt.ug = ug.points[i].value;
    if (method == EstimateMethod::kDpExact) {
      pt.p_moving = dp_survival(model, b, n, c_seq);
      pt.p_tau0 = dp_survival(model, zero, n);
    } else {
      pt.p_moving = simulate_survival(model, b, n, replicas, seed, opts, c_seq).p_hat;
      pt.p_tau0 = simulate_survival(model, zero, n, replicas, seed + 1, opts).p_hat;
    }
    const double denom = pt.p_tau0 * pt.ug;
    if (denom > 10.0 * std::numeric_limits<double>::epsilon()) {
      pt.ratio = pt.p_moving / denom;
    }
    out.push_back(pt);
  }
  return out;
}

TailFit tail_exponent(const std::vector<SurvivalEstimate>& survival) {
  if (survival.size() < 4) throw std::invalid_argument("tail_exponent: need at least 4 points");
  std::vector<double> x, y;
  for (const auto& s : survival) {
    if (!(s.p_hat > 0.0)) throw std::invalid_argument("tail_exponent: survival values must be positive");
    x.push_back(std::log(static_cast<double>(s.n)));
    y.push_back(std::log(s.p_hat));
  }
  const std::size_t m = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - intercept - slope * x[i];
    ssr += r * r;
  }
  TailFit fit;
  fit.exponent = slope;
  fit.stderr_ = m > 2 ? std::sqrt(ssr / (static_cast<double>(m) - 2.0) / sxx) : 0.0;
  fit.n_lo = survival.front().n;
  fit.n_hi = survival.back().n;
  return fit;
}

std::string to_string(LimitClass c) {
  switch (c) {
    case LimitClass::kConvergesPositive: return "converges_positive";
    case LimitClass::kTendsToZero: return "tends_to_zero";
    case LimitClass::kTendsToInfinity: return "tends_to_infinity";
    case LimitClass::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LimitClassification classify_limit(const BoundarySpec& b, const ScalingSequence& c_seq,
                                   const UgCurve& ug, std::int64_t n_max_classify) {
  LimitClassification out;
  const auto rep = check_summability_T21(b, c_seq, n_max_classify);
  out.summability = rep.verdict;
  const std::int64_t scan_n = std::min<std::int64_t>(n_max_classify, 1 << 16);
  out.monotonicity = b.monotonicity(scan_n, &c_seq);
  if (!ug.points.empty() && ug.points.front().value > 0.0) {
    out.ug_trend = ug.points.back().value / ug.points.front().value;
  }
  if (rep.verdict == Summability::kSummable && out.monotonicity != Monotonicity::kNone) {
    out.verdict = LimitClass::kConvergesPositive;
  } else if (rep.verdict == Summability::kNotSummable &&
             out.monotonicity == Monotonicity::kIncreasing) {
    out.verdict = LimitClass::kTendsToZero;
  } else if (rep.verdict == Summability::kNotSummable &&
             out.monotonicity == Monotonicity::kDecreasing) {
    out.verdict = LimitClass::kTendsToInfinity;
  } else {
    out.verdict = LimitClass::kInconclusive;
  }
  return out;
}

std::vector<UniformityPoint> constant_boundary_uniformity(const IncrementModel& model,
                                                          const std::vector<double>& x_list,
                                                          std::int64_t n, const VSource& v_source,
                                                          EstimateMethod method, std::uint64_t seed,
                                                          std::int64_t replicas,
                                                          const WorkerOptions& opts) {
  for (double x : x_list) {
    if (x < 0.0) throw std::invalid_argument("constant_boundary_uniformity: x must be >= 0");
  }
  auto survival_at = [&](double level) {
    const BoundarySpec b = BoundarySpec::constant(-level);
    if (method == EstimateMethod::kDpExact) return dp_survival(model, b, n);
    return simulate_survival(model, b, n, replicas, seed, opts).p_hat;
  };
  const double p0 = survival_at(0.0);

  // W(x): one-step harmonic smoothing of V for lattice models, V(x)/V(0) otherwise.
  std::function<double(double)> W;
  if (model.is_integer_lattice()) {
    const auto& off = model.lattice_offsets();
    const auto& pr = model.lattice_probs();
    auto smooth = [&, off, pr](double x) {
      double s = 0.0;
      for (std::size_t i = 0; i < off.size(); ++i) {
        const double y = x + static_cast<double>(off[i]);
        if (y > 0.0) s += pr[i] * v_source.eval(y);
      }
      return s;
    };
    const double w0 = smooth(0.0);
    W = [smooth, w0](double x) { return x == 0.0 ? 1.0 : smooth(x) / w0; };
  } else {
    const double v0 = v_source.eval(0.0);
    W = [&v_source, v0](double x) { return v_source.eval(x) / v0; };
  }

  const double cn = scaling_sequence(model).value(n);
  std::vector<UniformityPoint> out;
  out.reserve(x_list.size());
  for (double x : x_list) {
    UniformityPoint pt;
    pt.x = x;
    const double px = survival_at(x);
    pt.ratio = px / (W(x) * p0);
    pt.bound_ratio = px / (W(std::min(x, cn)) * p0);
    out.push_back(pt);
  }
  return out;
}

double two_sample_ks(const std::vector<double>& sample_a, const std::vector<double>& sample_b) {
  if (sample_a.empty() || sample_b.empty()) {
    throw std::invalid_argument("two_sample_ks: samples must be nonempty");
  }
  std::vector<double> a = sample_a, b = sample_b;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_permutation_band(const std::vector<double>& sample_a, const std::vector<double>& sample_b,
                           int permutations, std::uint64_t seed) {
  std::vector<double> pool = sample_a;
  pool.insert(pool.end(), sample_b.begin(), sample_b.end());
  const std::size_t na = sample_a.size();
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(permutations));
  for (int p = 0; p < permutations; ++p) {
    Stream stream = resolve_stream(seed, 0x7065726d00000000ull + static_cast<std::uint64_t>(p));
    std::vector<double> shuffled = pool;
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(stream.uniform() * static_cast<double>(i + 1));
      std::swap(shuffled[i], shuffled[std::min(j, i)]);
    }
    std::vector<double> a(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(na));
    std::vector<double> b(shuffled.begin() + static_cast<std::ptrdiff_t>(na), shuffled.end());
    stats.push_back(two_sample_ks(a, b));
  }
  std::sort(stats.begin(), stats.end());
  const std::size_t idx = static_cast<std::size_t>(0.99 * (static_cast<double>(stats.size()) - 1.0));
  return stats[idx];
}

MeanderComparison meander_compare(const IncrementModel& model, const BoundarySpec& b,
                                  std::int64_t n, std::int64_t count, PathFunctional functional,
                                  std::uint64_t seed, const WorkerOptions& opts,
                                  const ScalingSequence* c_seq, int permutations) {
  // Disjoint substream halves of the 64-bit index space per side.
  constexpr std::uint64_t kSideB = 1ull << 62;
  ScalingSequence local_seq = c_seq ? *c_seq : scaling_sequence(model);
  const auto side_a =
      conditioned_functionals(model, b, n, count, seed, opts, &local_seq, 0);
  const auto side_b = conditioned_functionals(model, BoundarySpec::constant(0.0), n, count, seed,
                                              opts, &local_seq, kSideB);
  auto pick = [&](const ConditionedFunctionals& f) -> const std::vector<double>& {
    switch (functional) {
      case PathFunctional::kEndpoint: return f.endpoint;
      case PathFunctional::kSupremum: return f.supremum;
      case PathFunctional::kAverage: return f.time_average;
    }
    return f.endpoint;
  };
  MeanderComparison cmp;
  cmp.count = count;
  cmp.attempts_a = side_a.attempts;
  cmp.attempts_b = side_b.attempts;
  cmp.ks = two_sample_ks(pick(side_a), pick(side_b));
  cmp.null_band_99 = ks_permutation_band(pick(side_a), pick(side_b), permutations, seed ^ 0x6b73ull);
  return cmp;
}

}  // namespace stable_passage

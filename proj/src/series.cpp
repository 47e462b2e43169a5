#include "stable_passage/series.hpp"

#include <cmath>
#include <stdexcept>

namespace stable_passage {

namespace {
constexpr std::size_t kMaxOrder = 4096;
}

SeriesCoefficients exp_series(const SeriesCoefficients& p) {
  if (p.coeffs.size() > kMaxOrder + 1) throw std::invalid_argument("exp_series: order above 4096");
  const std::size_t n = p.coeffs.size();
  SeriesCoefficients e;
  e.coeffs.assign(n, 0.0);
  if (n == 0) return e;
  e.coeffs[0] = std::exp(p.coeffs[0]);
  for (std::size_t m = 1; m < n; ++m) {
    double s = 0.0, c = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
      const double y = static_cast<double>(k) * p.coeffs[k] * e.coeffs[m - k] - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    e.coeffs[m] = s / static_cast<double>(m);
  }
  return e;
}

SeriesCoefficients cauchy_product(const SeriesCoefficients& a, const SeriesCoefficients& b) {
  const std::size_t n = std::min(a.coeffs.size(), b.coeffs.size());
  SeriesCoefficients out;
  out.coeffs.assign(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double s = 0.0, c = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
      const double y = a.coeffs[k] * b.coeffs[m - k] - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    out.coeffs[m] = s;
  }
  return out;
}

SeriesCoefficients sparre_andersen_survival(const std::vector<double>& positive_probs) {
  SeriesCoefficients p;
  p.coeffs.assign(positive_probs.size() + 1, 0.0);
  for (std::size_t k = 0; k < positive_probs.size(); ++k) {
    const double q = positive_probs[k];
    if (!(q >= 0.0 && q <= 1.0)) {
      throw std::invalid_argument("sparre_andersen_survival: P(S_k>0) must lie in [0,1]");
    }
    p.coeffs[k + 1] = q / static_cast<double>(k + 1);
  }
  SeriesCoefficients e = exp_series(p);
  for (std::size_t n = 0; n < e.coeffs.size(); ++n) {
    if (e.coeffs[n] < -1e-12 || e.coeffs[n] > 1.0 + 1e-12) {
      throw std::logic_error("sparre_andersen_survival: coefficient outside [0,1]");
    }
    if (n > 0 && e.coeffs[n] > e.coeffs[n - 1] + 1e-12) {
      throw std::logic_error("sparre_andersen_survival: survival not non-increasing");
    }
  }
  return e;
}

DeltaSequence delta_sequence(const IncrementModel& model, const BoundarySpec& b, std::int64_t n_max,
                             DeltaMethod method, std::uint64_t seed, std::int64_t replicas,
                             const ScalingSequence* c_seq) {
  DeltaSequence out;
  if (method == DeltaMethod::kDpExact) {
    if (!model.is_integer_lattice()) {
      throw std::invalid_argument("delta_sequence: dp_exact method needs a lattice model");
    }
    const auto pos_g = dp_positive_prob_curve(model, b, n_max, c_seq);
    const auto pos_0 = dp_positive_prob_curve(model, BoundarySpec::constant(0.0), n_max);
    out.delta.resize(pos_g.size());
    out.ci_half_width.assign(pos_g.size(), 0.0);
    for (std::size_t i = 0; i < pos_g.size(); ++i) out.delta[i] = pos_g[i] - pos_0[i];
    return out;
  }
  if (replicas < 1) throw std::invalid_argument("delta_sequence: monte_carlo needs replicas >= 1");
  const auto g_vals = b.evaluate(n_max, c_seq);
  std::vector<std::int64_t> above_g(static_cast<std::size_t>(n_max), 0);
  std::vector<std::int64_t> above_0(static_cast<std::size_t>(n_max), 0);
  for (std::int64_t r = 0; r < replicas; ++r) {
    Stream stream = resolve_stream(seed, static_cast<std::uint64_t>(r));
    double s = 0.0;
    for (std::int64_t k = 0; k < n_max; ++k) {
      s += model.sample(stream);
      if (s > g_vals[static_cast<std::size_t>(k)]) ++above_g[static_cast<std::size_t>(k)];
      if (s > 0.0) ++above_0[static_cast<std::size_t>(k)];
    }
  }
  out.delta.resize(static_cast<std::size_t>(n_max));
  out.ci_half_width.resize(static_cast<std::size_t>(n_max));
  const double r = static_cast<double>(replicas);
  for (std::size_t i = 0; i < out.delta.size(); ++i) {
    const double pg = static_cast<double>(above_g[i]) / r;
    const double p0 = static_cast<double>(above_0[i]) / r;
    out.delta[i] = pg - p0;
    // conservative CI for a difference of correlated proportions
    out.ci_half_width[i] = 1.96 * std::sqrt((pg * (1 - pg) + p0 * (1 - p0)) / r);
  }
  return out;
}

SeriesCoefficients wh_upper_bound(const SeriesCoefficients& tau0_survival,
                                  const std::vector<double>& delta, std::size_t n_order) {
  if (n_order > kMaxOrder) throw std::invalid_argument("wh_upper_bound: order above 4096");
  if (tau0_survival.coeffs.size() < n_order + 1 || delta.size() < n_order) {
    throw std::invalid_argument("wh_upper_bound: inputs shorter than requested order");
  }
  SeriesCoefficients d;
  d.coeffs.assign(n_order + 1, 0.0);
  for (std::size_t n = 1; n <= n_order; ++n) d.coeffs[n] = delta[n - 1] / static_cast<double>(n);
  SeriesCoefficients tau;
  tau.coeffs.assign(tau0_survival.coeffs.begin(), tau0_survival.coeffs.begin() + static_cast<std::ptrdiff_t>(n_order + 1));
  return cauchy_product(tau, exp_series(d));
}

}  // namespace stable_passage

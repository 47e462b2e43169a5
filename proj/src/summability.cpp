#include "stable_passage/summability.hpp"

#include <cmath>
#include <stdexcept>

namespace stable_passage {

std::string to_string(Summability s) {
  switch (s) {
    case Summability::kSummable: return "summable";
    case Summability::kNotSummable: return "not_summable";
    case Summability::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

SummabilityReport classify_summand(const std::function<double(std::int64_t)>& summand,
                                   std::int64_t n_max, std::int64_t n_start) {
  if (n_max < (1 << 8)) throw std::invalid_argument("classify_summand: n_max must be >= 2^8");
  SummabilityReport rep;

  const int j_top = static_cast<int>(std::floor(std::log2(static_cast<double>(n_max))));
  const int blocks = std::min(8, j_top - 4);
  const int j_lo = j_top - blocks;

  // single pass; block sums over (2^j, 2^(j+1)] and dyadic partial sums
  std::vector<double> block_sum(static_cast<std::size_t>(blocks), 0.0);
  double run = 0.0, comp = 0.0;
  double max_a = 0.0;
  for (std::int64_t n = n_start; n < (std::int64_t{1} << (j_lo + blocks)) + 1; ++n) {
    const double a = summand(n);
    if (a < 0.0) throw std::invalid_argument("classify_summand: summand must be nonnegative");
    max_a = std::max(max_a, a);
    const double y = a - comp;
    const double t = run + y;
    comp = (t - run) - y;
    run = t;
    if ((n & (n - 1)) == 0 && n >= (1 << 4)) {
      rep.checkpoints.push_back(n);
      rep.partial_sums.push_back(run);
    }
    for (int j = 0; j < blocks; ++j) {
      const std::int64_t lo = std::int64_t{1} << (j_lo + j);
      const std::int64_t hi = std::int64_t{1} << (j_lo + j + 1);
      if (n > lo && n <= hi) block_sum[static_cast<std::size_t>(j)] += a;
    }
  }

  if (max_a == 0.0) {
    rep.verdict = Summability::kSummable;
    rep.exponent = -std::numeric_limits<double>::infinity();
    return rep;
  }

  std::vector<double> xs, ys, lj;
  for (int j = 0; j < blocks; ++j) {
    const double b = block_sum[static_cast<std::size_t>(j)];
    if (b <= 0.0) continue;
    xs.push_back(static_cast<double>(j_lo + j) * std::log(2.0));
    ys.push_back(std::log(b));
    lj.push_back(std::log(static_cast<double>(j_lo + j)));
  }
  if (xs.size() < 3) {
    // summand died out inside the window
    rep.verdict = Summability::kSummable;
    rep.exponent = -std::numeric_limits<double>::infinity();
    return rep;
  }
  const double slope = ols_slope(xs, ys);  // block sums ~ n^(theta+1)
  rep.exponent = slope - 1.0;
  if (slope < -0.1) {
    rep.verdict = Summability::kSummable;
    return rep;
  }
  if (slope > 0.1) {
    rep.verdict = Summability::kNotSummable;
    return rep;
  }
  // Near-harmonic regime: block sums ~ j^(-p) distinguish log corrections.
  const double p = -ols_slope(lj, ys);
  rep.log_power = p;
  rep.log_power_used = true;
  if (p > 1.1) {
    rep.verdict = Summability::kSummable;
  } else if (std::abs(p) <= 0.1) {
    rep.verdict = Summability::kInconclusive;  // genuinely at the p-series boundary
  } else {
    rep.verdict = Summability::kNotSummable;
  }
  return rep;
}

SummabilityReport check_summability_T21(const BoundarySpec& b, const ScalingSequence& c_seq,
                                        std::int64_t n_max) {
  // running max of |g| folded into the summand closure
  struct State {
    double g_max = 0.0;
    std::int64_t seen = 0;
  };
  auto state = std::make_shared<State>();
  const BoundarySpec* bp = &b;
  const ScalingSequence* cp = &c_seq;
  auto summand = [state, bp, cp](std::int64_t n) {
    if (n <= state->seen) {
      throw std::logic_error("check_summability_T21: summand must be evaluated in order");
    }
    for (std::int64_t k = state->seen + 1; k <= n; ++k) {
      state->g_max = std::max(state->g_max, std::abs(bp->value(k, cp)));
    }
    state->seen = n;
    return state->g_max / (static_cast<double>(n) * cp->value(n));
  };
  return classify_summand(summand, n_max, 1);
}

SummabilityReport check_int_test(const BoundarySpec& b, const RenewalEstimate& v_est,
                                 const ScalingSequence& c_seq, std::int64_t n_max) {
  const BoundarySpec* bp = &b;
  const ScalingSequence* cp = &c_seq;
  const RenewalEstimate* vp = &v_est;
  auto summand = [bp, cp, vp](std::int64_t n) {
    const double g = std::abs(bp->value(n, cp));
    const double denom_arg = cp->value(n) / std::log(static_cast<double>(n));
    const double denom = renewal_eval(*vp, denom_arg);
    if (denom <= 0.0) return 0.0;
    return renewal_eval(*vp, g) / (static_cast<double>(n) * denom);
  };
  return classify_summand(summand, n_max, 2);
}

}  // namespace stable_passage

#include "stable_passage/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace stable_passage {

namespace {

constexpr double kPi = 3.14159265358979323846;

double kahan_sum(const std::vector<double>& xs) {
  double s = 0.0, comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

bool validate_admissible(double alpha, double beta) {
  if (alpha > 0.0 && alpha < 1.0) return std::abs(beta) < 1.0;
  if (alpha > 1.0 && alpha < 2.0) return std::abs(beta) <= 1.0;
  if (alpha == 1.0 || alpha == 2.0) return beta == 0.0;
  return false;
}

StableParams make_stable_params(double alpha, double beta, double scale_c) {
  if (!validate_admissible(alpha, beta)) {
    std::ostringstream os;
    os << "(alpha, beta) = (" << alpha << ", " << beta
       << ") is not admissible: need 0<alpha<1 with |beta|<1, 1<alpha<2 with "
          "|beta|<=1, or alpha in {1,2} with beta=0";
    throw std::invalid_argument(os.str());
  }
  if (!(scale_c > 0.0)) throw std::invalid_argument("scale_c must be positive");
  return StableParams{alpha, beta, scale_c};
}

double positivity_index(const StableParams& p) {
  if (!validate_admissible(p.alpha, p.beta)) throw std::invalid_argument("inadmissible stable params");
  if (p.alpha == 1.0) return 0.5;
  return 0.5 + std::atan(p.beta * std::tan(kPi * p.alpha / 2.0)) / (kPi * p.alpha);
}

std::complex<double> char_function(const StableParams& p, double t) {
  if (t == 0.0) return {1.0, 0.0};
  const double zeta = (p.alpha == 1.0 || p.alpha == 2.0) ? 0.0 : p.beta * std::tan(kPi * p.alpha / 2.0);
  const double mag = p.scale_c * std::pow(std::abs(t), p.alpha);
  const double sgn = t > 0.0 ? 1.0 : -1.0;
  // exp{-mag (1 - i sgn zeta)} = exp(-mag) * exp(i mag sgn zeta)
  const double re = std::exp(-mag);
  return {re * std::cos(mag * sgn * zeta), re * std::sin(mag * sgn * zeta)};
}

double density_at_zero(const StableParams& p) {
  if (!validate_admissible(p.alpha, p.beta)) throw std::invalid_argument("inadmissible stable params");
  const double zeta = (p.alpha == 1.0 || p.alpha == 2.0) ? 0.0 : p.beta * std::tan(kPi * p.alpha / 2.0);
  return std::tgamma(1.0 + 1.0 / p.alpha) / kPi * std::pow(1.0 + zeta * zeta, -1.0 / (2.0 * p.alpha)) *
         std::cos(std::atan(zeta) / p.alpha) * std::pow(p.scale_c, -1.0 / p.alpha);
}

IncrementModel IncrementModel::lattice(std::vector<long long> offsets, std::vector<double> probs) {
  if (offsets.size() != probs.size() || offsets.empty()) {
    throw std::invalid_argument("lattice: offsets and probs must be non-empty and equal length");
  }
  double total = kahan_sum(probs);
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("lattice: probabilities must sum to 1");
  bool has_neg = false, has_pos = false;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (probs[i] < 0.0) throw std::invalid_argument("lattice: negative probability");
    if (probs[i] > 0.0 && offsets[i] < 0) has_neg = true;
    if (probs[i] > 0.0 && offsets[i] > 0) has_pos = true;
    mean += probs[i] * static_cast<double>(offsets[i]);
    m2 += probs[i] * static_cast<double>(offsets[i]) * static_cast<double>(offsets[i]);
  }
  if (!has_neg || !has_pos) {
    throw std::invalid_argument("lattice: need mass on both signs (oscillating walk)");
  }
  if (std::abs(mean) > 1e-12) {
    throw std::invalid_argument(
        "lattice: mean must be zero; a fractional shift would leave the integer grid");
  }
  (void)m2;

  IncrementModel m;
  m.family_ = Family::kLattice;
  m.offsets_ = std::move(offsets);
  m.probs_ = std::move(probs);
  m.cum_probs_.resize(m.probs_.size());
  std::partial_sum(m.probs_.begin(), m.probs_.end(), m.cum_probs_.begin());
  m.cum_probs_.back() = 1.0;
  m.centered_ = true;  // mean is exactly zero
  m.shift_ = 0.0;
  m.attracting_ = StableParams{2.0, 0.0, 1.0};
  std::ostringstream os;
  os << "lattice[";
  for (std::size_t i = 0; i < m.offsets_.size(); ++i) {
    if (i) os << ',';
    os << m.offsets_[i] << ':' << format_double(m.probs_[i]);
  }
  os << ']';
  m.id_ = os.str();
  return m;
}

IncrementModel IncrementModel::symmetric_pareto(double alpha) {
  return skewed_pareto(alpha, 0.5);
}

IncrementModel IncrementModel::skewed_pareto(double alpha, double p_right) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("pareto: alpha must be in (0,2]");
  if (!(p_right >= 0.0 && p_right <= 1.0)) throw std::invalid_argument("pareto: p_right in [0,1]");
  const double beta = (alpha == 2.0) ? 0.0 : 2.0 * p_right - 1.0;
  if (!validate_admissible(alpha == 2.0 ? 2.0 : alpha, beta)) {
    throw std::invalid_argument("pareto: implied (alpha, beta) is not admissible");
  }
  IncrementModel m;
  m.family_ = (p_right == 0.5) ? Family::kSymmetricPareto : Family::kSkewedPareto;
  m.pareto_alpha_ = alpha;
  m.p_right_ = p_right;
  if (alpha > 1.0) {
    m.shift_ = (2.0 * p_right - 1.0) * alpha / (alpha - 1.0);
    m.centered_ = true;
  }
  m.attracting_ = StableParams{alpha, beta, 1.0};
  std::ostringstream os;
  if (m.family_ == Family::kSymmetricPareto) {
    os << "sym_pareto[alpha=" << format_double(alpha) << ']';
  } else {
    os << "skew_pareto[alpha=" << format_double(alpha) << ",p=" << format_double(p_right) << ']';
  }
  m.id_ = os.str();
  return m;
}

IncrementModel IncrementModel::exact_stable(StableParams params) {
  params = make_stable_params(params.alpha, params.beta, params.scale_c);
  IncrementModel m;
  m.family_ = Family::kExactStable;
  m.attracting_ = params;
  m.centered_ = params.alpha > 1.0;  // strictly stable with zero location
  const double zeta = (params.alpha == 1.0 || params.alpha == 2.0)
                          ? 0.0
                          : params.beta * std::tan(kPi * params.alpha / 2.0);
  m.cms_b_ = std::atan(zeta) / params.alpha;
  m.cms_s_ = std::pow(1.0 + zeta * zeta, 1.0 / (2.0 * params.alpha));
  m.cms_sigma_ = std::pow(params.scale_c, 1.0 / params.alpha);
  std::ostringstream os;
  os << "exact_stable[alpha=" << format_double(params.alpha) << ",beta=" << format_double(params.beta)
     << ",c=" << format_double(params.scale_c) << ']';
  m.id_ = os.str();
  return m;
}

bool IncrementModel::is_integer_lattice() const {
  return family_ == Family::kLattice && shift_ == 0.0;
}

bool IncrementModel::is_simple_random_walk() const {
  if (family_ != Family::kLattice || offsets_.size() != 2) return false;
  const bool shape = (offsets_[0] == -1 && offsets_[1] == 1) || (offsets_[0] == 1 && offsets_[1] == -1);
  return shape && std::abs(probs_[0] - 0.5) < 1e-15 && std::abs(probs_[1] - 0.5) < 1e-15;
}

double IncrementModel::upper_support_bound() const {
  switch (family_) {
    case Family::kLattice: {
      long long hi = offsets_.front();
      for (std::size_t i = 0; i < offsets_.size(); ++i) {
        if (probs_[i] > 0.0) hi = std::max(hi, offsets_[i]);
      }
      return static_cast<double>(hi) - shift_;
    }
    case Family::kSymmetricPareto:
      return std::numeric_limits<double>::infinity();
    case Family::kSkewedPareto:
      if (p_right_ > 0.0) return std::numeric_limits<double>::infinity();
      return -1.0 - shift_;  // support is (-inf, -1] shifted
    case Family::kExactStable:
      return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

double IncrementModel::lower_support_edge() const {
  switch (family_) {
    case Family::kLattice: {
      double edge = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < offsets_.size(); ++i) {
        if (probs_[i] > 0.0 && offsets_[i] != 0) {
          edge = std::min(edge, std::abs(static_cast<double>(offsets_[i]) - shift_));
        }
      }
      return std::isfinite(edge) ? edge : 0.0;
    }
    case Family::kSymmetricPareto:
      return 1.0;
    case Family::kSkewedPareto: {
      // support: [1 - shift, inf) and/or (-inf, -1 - shift]
      if (shift_ == 0.0) return 1.0;
      const double lo_right = 1.0 - shift_;
      const double hi_left = -1.0 - shift_;
      if (p_right_ > 0.0 && p_right_ < 1.0) {
        if (lo_right <= 0.0 || hi_left >= 0.0) return 0.0;
        return std::min(std::abs(lo_right), std::abs(hi_left));
      }
      if (p_right_ == 1.0) return lo_right <= 0.0 ? 0.0 : lo_right;
      return hi_left >= 0.0 ? 0.0 : -hi_left;
    }
    case Family::kExactStable:
      return 0.0;  // full support
  }
  return 0.0;
}

double IncrementModel::sample(Stream& stream) const {
  switch (family_) {
    case Family::kLattice: {
      const double u = stream.uniform();
      std::size_t i = 0;
      while (i + 1 < cum_probs_.size() && u > cum_probs_[i]) ++i;
      return static_cast<double>(offsets_[i]) - shift_;
    }
    case Family::kSymmetricPareto:
    case Family::kSkewedPareto: {
      const double u = stream.uniform();
      const double v = stream.uniform();
      const double mag = std::pow(v, -1.0 / pareto_alpha_);
      return (u < p_right_ ? mag : -mag) - shift_;
    }
    case Family::kExactStable: {
      const double a = attracting_.alpha;
      if (a == 1.0) {
        // Cauchy: c * tan(U), U uniform on (-pi/2, pi/2)
        return attracting_.scale_c * std::tan(kPi * (stream.uniform() - 0.5));
      }
      const double v = kPi * (stream.uniform() - 0.5);
      const double w = stream.exponential();
      const double t1 = std::sin(a * (v + cms_b_)) / std::pow(std::cos(v), 1.0 / a);
      const double t2 = std::pow(std::cos(v - a * (v + cms_b_)) / w, (1.0 - a) / a);
      return cms_sigma_ * cms_s_ * t1 * t2;
    }
  }
  return 0.0;
}

namespace {

// Exact integral of (x - s)^2 * alpha * x^(-alpha-1) over [a, b] with 1 <= a <= b.
double pareto_piece(double alpha, double s, double a, double b) {
  if (b <= a) return 0.0;
  auto anti = [&](double x) {
    double t1, t2, t3;
    if (alpha == 2.0) {
      t1 = 2.0 * std::log(x);
    } else {
      t1 = alpha * std::pow(x, 2.0 - alpha) / (2.0 - alpha);
    }
    if (alpha == 1.0) {
      t2 = -2.0 * s * std::log(x);
    } else {
      t2 = -2.0 * s * alpha * std::pow(x, 1.0 - alpha) / (1.0 - alpha);
    }
    t3 = -s * s * std::pow(x, -alpha);
    return t1 + t2 + t3;
  };
  return anti(b) - anti(a);
}

}  // namespace

double IncrementModel::truncated_second_moment(double u) const {
  if (!(u > 0.0)) throw std::invalid_argument("truncated_second_moment: u must be positive");
  switch (family_) {
    case Family::kLattice: {
      double acc = 0.0, comp = 0.0;
      for (std::size_t i = 0; i < offsets_.size(); ++i) {
        const double x = static_cast<double>(offsets_[i]) - shift_;
        if (std::abs(x) <= u) {
          const double y = probs_[i] * x * x - comp;
          const double t = acc + y;
          comp = (t - acc) - y;
          acc = t;
        }
      }
      return acc / (u * u);
    }
    case Family::kSymmetricPareto:
    case Family::kSkewedPareto: {
      // raw density: p_right * alpha x^(-alpha-1) on [1,inf),
      //              (1-p_right) * alpha (-x)^(-alpha-1) on (-inf,-1];
      // increments are raw - shift, integrate (x-s)^2 over |x-s| <= u.
      const double s = shift_;
      double total = 0.0;
      if (p_right_ > 0.0) {
        const double a = std::max(1.0, s - u);
        const double b = s + u;
        total += p_right_ * pareto_piece(pareto_alpha_, s, a, b);
      }
      if (p_right_ < 1.0) {
        // left tail: substitute y = -x, density alpha y^(-alpha-1) on [1,inf),
        // constraint |(-y) - s| <= u  <=>  y in [max(1, -s-u), -s+u]
        const double a = std::max(1.0, -s - u);
        const double b = -s + u;
        total += (1.0 - p_right_) * pareto_piece(pareto_alpha_, -s, a, b);
      }
      return total / (u * u);
    }
    case Family::kExactStable: {
      const double a = attracting_.alpha;
      const double c = attracting_.scale_c;
      if (a == 2.0) {
        // N(0, 2c): E[X^2; |X|<=u] = sig2 (erf(v) - 2 v exp(-v^2)/sqrt(pi))
        const double sig2 = 2.0 * c;
        const double v = u / std::sqrt(2.0 * sig2);
        const double ex = std::erf(v) - 2.0 * v * std::exp(-v * v) / std::sqrt(kPi);
        return sig2 * ex / (u * u);
      }
      if (a == 1.0) {
        // Cauchy scale c: E[X^2; |X|<=u] = (2c/pi)(u - c arctan(u/c))
        return (2.0 * c / kPi) * (u - c * std::atan(u / c)) / (u * u);
      }
      // General case: E[X^2; |X|<=u] = (1/pi) int_0^inf Re phi(t) K(t,u) dt with
      // K(t,u) = 2[(u^2/t) sin(ut) + (2u/t^2) cos(ut) - (2/t^3) sin(ut)].
      // Summed over oscillation blocks of length pi/u with compensation.
      const double zeta = attracting_.beta * std::tan(kPi * a / 2.0);
      auto integrand = [&](double t) {
        const double re_phi = std::exp(-c * std::pow(t, a)) * std::cos(c * zeta * std::pow(t, a));
        const double ut = u * t;
        double K;
        if (ut < 1e-4) {
          K = 2.0 * u * u * u / 3.0 - u * u * u * u * u * t * t / 15.0;
        } else {
          K = 2.0 * ((u * u / t) * std::sin(ut) + (2.0 * u / (t * t)) * std::cos(ut) -
                     (2.0 / (t * t * t)) * std::sin(ut));
        }
        return re_phi * K;
      };
      // 20-point Gauss-Legendre nodes on [0,1]
      static const double gl_x[10] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                                      0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                                      0.5108670019508271, 0.3737060887154195, 0.2277858511416451,
                                      0.0765265211334973};
      static const double gl_w[10] = {0.0176140071391521, 0.0406014298003869, 0.0626720483341091,
                                      0.0832767415767048, 0.1019301198172404, 0.1181945319615184,
                                      0.1316886384491766, 0.1420961093183820, 0.1491729864726037,
                                      0.1527533871307258};
      const double t_max = std::pow(745.0 / c, 1.0 / a);
      const double h = kPi / u;
      double acc = 0.0, comp = 0.0;
      for (std::uint64_t k = 0;; ++k) {
        const double lo = static_cast<double>(k) * h;
        if (lo > t_max) break;
        const double hi = lo + h;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double block = 0.0;
        for (int i = 0; i < 10; ++i) {
          block += gl_w[i] * (integrand(mid - half * gl_x[i]) + integrand(mid + half * gl_x[i]));
        }
        block *= half;
        const double y = block - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        const double envelope = std::exp(-c * std::pow(hi, a)) * (u * u / std::max(hi, 1e-12));
        if (k > 8 && envelope < 1e-13 * std::abs(acc)) break;
      }
      return acc / (kPi * u * u);
    }
  }
  return 0.0;
}

ScalingSequence::ScalingSequence(IncrementModel model) : model_(std::move(model)) {}

namespace {

// Last crossing sup{u : mu(u) > target} on the eventually-decreasing branch.
// mu is continuous off lattice atoms and decays like u^(-alpha), so doubling
// from the peak brackets the crossing; bisection then resolves it.
double last_crossing_continuous(const IncrementModel& m, double target, double peak_guess) {
  double lo = peak_guess;
  if (!(m.truncated_second_moment(lo) > target)) {
    // search for a point above target between the support edge and peak
    bool found = false;
    double probe = peak_guess;
    for (int i = 0; i < 200 && !found; ++i) {
      probe *= 0.75;
      if (probe <= 0.0) break;
      if (m.truncated_second_moment(probe) > target) {
        lo = probe;
        found = true;
      }
    }
    if (!found) return -1.0;  // mu never exceeds target
  }
  double hi = std::max(lo * 2.0, 1.0);
  while (m.truncated_second_moment(hi) > target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (m.truncated_second_moment(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-9 * std::max(1.0, lo) * 1e-3) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double ScalingSequence::compute(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("scaling_sequence: n must be >= 1");
  const double target = 1.0 / static_cast<double>(n);

  if (model_.family() == Family::kLattice) {
    // mu is piecewise M_j / u^2 between the sorted |support| points; exact
    // last crossing without bisection.
    std::vector<std::pair<double, double>> pts;  // (|x|, p x^2)
    const auto& off = model_.lattice_offsets();
    const auto& pr = model_.lattice_probs();
    std::map<double, double> mass;
    double m2_total = 0.0;
    for (std::size_t i = 0; i < off.size(); ++i) {
      const double x = std::abs(static_cast<double>(off[i]) - model_.shift());
      const double w = pr[i] * x * x;
      if (w > 0.0) {
        mass[x] += w;
        m2_total += w;
      }
    }
    if (mass.empty()) throw std::domain_error("scaling_sequence: degenerate model, mu identically 0");
    // Candidate crossing in the tail beyond the largest support point.
    const double x_last = mass.rbegin()->first;
    if (m2_total / (x_last * x_last) > target) {
      return std::sqrt(m2_total / target);
    }
    // Otherwise scan support points from the top: on [x_j, x_{j+1}) we have
    // mu(u) = M_j / u^2 with M_j the mass up to x_j.
    double cum = m2_total;
    double next = x_last;
    for (auto it = mass.rbegin(); it != mass.rend(); ++it) {
      const double mu_at = cum / (it->first * it->first);
      if (mu_at > target) {
        // crossing inside [x_j, next): solve cum/u^2 = target
        const double u = std::sqrt(cum / target);
        return std::min(u, next);
      }
      next = it->first;
      cum -= it->second;
    }
    return model_.lower_support_edge();
  }

  if (model_.family() == Family::kExactStable) {
    const auto& p = model_.attracting_law();
    if (p.alpha != 1.0 && p.alpha != 2.0) {
      // Exact self-similarity: S_n / (c^{1/alpha} n^{1/alpha}) has the unit-scale law.
      return std::pow(p.scale_c, 1.0 / p.alpha) * std::pow(static_cast<double>(n), 1.0 / p.alpha);
    }
    const double guess = std::pow(p.scale_c, 1.0 / p.alpha) * std::pow(static_cast<double>(n), 1.0 / p.alpha);
    const double u = last_crossing_continuous(model_, target, std::max(guess, 1e-3));
    if (u < 0.0) return model_.lower_support_edge();
    return u;
  }

  // Pareto families: unimodal mu with peak near (2/alpha)^{1/(2-alpha)}.
  const double a = model_.pareto_alpha();
  double peak = a < 2.0 ? std::pow(2.0 / a, 1.0 / (2.0 - a)) : 2.0;
  peak = std::max(peak, model_.lower_support_edge() + 0.5) + std::abs(model_.shift());
  const double u = last_crossing_continuous(model_, target, peak);
  if (u < 0.0) return model_.lower_support_edge();
  return u;
}

double ScalingSequence::value(std::int64_t n) const {
  auto it = cache_.find(n);
  if (it != cache_.end()) return it->second;
  const double v = compute(n);
  cache_[n] = v;
  return v;
}

std::vector<double> ScalingSequence::values(const std::vector<std::int64_t>& n_list) const {
  std::vector<double> out;
  out.reserve(n_list.size());
  for (auto n : n_list) out.push_back(value(n));
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] > n_list[i - 1] && out[i] + 1e-9 * std::max(1.0, out[i - 1]) < out[i - 1]) {
      throw std::logic_error("scaling_sequence: c_n not non-decreasing");
    }
  }
  return out;
}

ScalingSequence scaling_sequence(const IncrementModel& model) { return ScalingSequence(model); }

}  // namespace stable_passage

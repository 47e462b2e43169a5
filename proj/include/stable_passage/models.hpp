#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "stable_passage/random.hpp"

namespace stable_passage {

// Parameters (alpha, beta, c) of the limiting stable law with
// characteristic function exp{-c|t|^alpha (1 - i beta sgn(t) tan(pi alpha/2))}.
struct StableParams {
  double alpha = 2.0;
  double beta = 0.0;
  double scale_c = 1.0;
};

// Admissible (alpha, beta) pairs: {0<a<1, |b|<1} u {1<a<2, |b|<=1}
// u {a=1, b=0} u {a=2, b=0}.
bool validate_admissible(double alpha, double beta);

// Throws std::invalid_argument on inadmissible or non-positive scale.
StableParams make_stable_params(double alpha, double beta, double scale_c = 1.0);

// Limit of P(S_n > 0): 1/2 for alpha = 1, else
// 1/2 + arctan(beta tan(pi alpha/2)) / (pi alpha).
double positivity_index(const StableParams& p);

// Characteristic function at t (1 at t = 0).
std::complex<double> char_function(const StableParams& p, double t);

// Density of the stable law at the origin, closed form.
double density_at_zero(const StableParams& p);

enum class Family { kLattice, kSymmetricPareto, kSkewedPareto, kExactStable };

// An increment distribution attracted to a stable law. Immutable after
// construction; safe to share across worker threads.
class IncrementModel {
 public:
  // Integer-lattice law given by offsets and probabilities. The mean must
  // vanish (within 1e-12): subtracting a nonzero mean would push the
  // support off the integer grid and disable the exact DP oracle.
  static IncrementModel lattice(std::vector<long long> offsets, std::vector<double> probs);

  // P(|X| > x) = x^(-alpha) for x >= 1, symmetric. alpha in (0, 2].
  static IncrementModel symmetric_pareto(double alpha);

  // Density alpha |x|^(-alpha-1) on |x| >= 1 with mass p_right on the right
  // tail; for alpha > 1 the exact mean is subtracted at construction.
  static IncrementModel skewed_pareto(double alpha, double p_right);

  // Exact stable increments (Chambers-Mallows-Stuck sampling).
  static IncrementModel exact_stable(StableParams params);

  Family family() const { return family_; }
  const StableParams& attracting_law() const { return attracting_; }
  bool centered() const { return centered_; }
  double shift() const { return shift_; }

  // True when increments live on the integer grid (exact DP applies).
  bool is_integer_lattice() const;
  // True for Lattice({-1,1}, {1/2,1/2}): enables batched-bit fast paths.
  bool is_simple_random_walk() const;

  const std::vector<long long>& lattice_offsets() const { return offsets_; }
  const std::vector<double>& lattice_probs() const { return probs_; }
  double pareto_alpha() const { return pareto_alpha_; }
  double pareto_p_right() const { return p_right_; }

  // Largest possible increment (+inf when the right tail is unbounded).
  double upper_support_bound() const;
  // inf{|x| : x in support, x != 0}; 0 when the support reaches the origin.
  double lower_support_edge() const;

  double sample(Stream& stream) const;

  // mu(u) = u^{-2} E[X^2; |X| <= u].
  double truncated_second_moment(double u) const;

  // Stable CLI/JSON identity string, also used to match estimates.
  const std::string& id() const { return id_; }

 private:
  IncrementModel() = default;

  Family family_ = Family::kLattice;
  StableParams attracting_;
  bool centered_ = false;
  double shift_ = 0.0;  // subtracted from raw draws

  std::vector<long long> offsets_;
  std::vector<double> probs_;
  std::vector<double> cum_probs_;

  double pareto_alpha_ = 0.0;
  double p_right_ = 0.5;

  // CMS precomputed terms
  double cms_b_ = 0.0;
  double cms_s_ = 1.0;
  double cms_sigma_ = 1.0;

  std::string id_;
};

// c_n = sup{u : mu(u) > 1/n} (last crossing), lazily extended and memoized.
// For ExactStable with alpha not in {1,2} the exact self-similarity
// c_n = c^{1/alpha} n^{1/alpha} is used instead of mu-bisection.
class ScalingSequence {
 public:
  explicit ScalingSequence(IncrementModel model);

  double value(std::int64_t n) const;
  const IncrementModel& model() const { return model_; }
  const std::string& model_id() const { return model_.id(); }

  // Values for an explicit grid; validates monotonicity.
  std::vector<double> values(const std::vector<std::int64_t>& n_list) const;

 private:
  double compute(std::int64_t n) const;

  IncrementModel model_;
  mutable std::map<std::int64_t, double> cache_;
};

ScalingSequence scaling_sequence(const IncrementModel& model);

}  // namespace stable_passage

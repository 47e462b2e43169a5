#pragma once

#include <cstdint>
#include <vector>

#include "stable_passage/boundary.hpp"
#include "stable_passage/exact_dp.hpp"
#include "stable_passage/models.hpp"

namespace stable_passage {

// Truncated power series sum_k coeffs[k] z^k.
struct SeriesCoefficients {
  std::vector<double> coeffs;

  std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

// Coefficients of exp(P) by the standard recursion
// E_0 = exp(p_0), n E_n = sum_{k=1..n} k p_k E_{n-k}.
SeriesCoefficients exp_series(const SeriesCoefficients& p);

// Cauchy product truncated to min order, compensated accumulation.
SeriesCoefficients cauchy_product(const SeriesCoefficients& a, const SeriesCoefficients& b);

// Survival P(tau_0 > n) from positivity probabilities P(S_k > 0), via
// sum z^n P(tau_0 > n) = exp{ sum z^k P(S_k > 0)/k }. Output index n holds
// P(tau_0 > n); entries are checked to be in [0,1] and non-increasing.
SeriesCoefficients sparre_andersen_survival(const std::vector<double>& positive_probs);

enum class DeltaMethod { kDpExact, kMonteCarlo };

struct DeltaSequence {
  std::vector<double> delta;          // Delta_n = P(S_n > g_n) - P(S_n > 0)
  std::vector<double> ci_half_width;  // zero for the DP method
};

DeltaSequence delta_sequence(const IncrementModel& model, const BoundarySpec& b, std::int64_t n_max,
                             DeltaMethod method, std::uint64_t seed = 0, std::int64_t replicas = 0,
                             const ScalingSequence* c_seq = nullptr);

// q_0..q_N of ( sum z^n P(tau_0 > n) ) * exp( sum z^n Delta_n / n ).
// P(T_g > n) <= q_n.
SeriesCoefficients wh_upper_bound(const SeriesCoefficients& tau0_survival,
                                  const std::vector<double>& delta, std::size_t n_order);

}  // namespace stable_passage

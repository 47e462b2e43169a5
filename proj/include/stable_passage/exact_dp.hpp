#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stable_passage/boundary.hpp"
#include "stable_passage/models.hpp"

namespace stable_passage {

// Sub-probability distribution of (S_n, T_g > n) on the integer grid.
struct DpState {
  std::int64_t n = 0;
  std::int64_t support_offset = 0;  // value of the first entry of probs
  std::vector<double> probs;        // P(S_n = support_offset + i, T_g > n)

  double total_mass() const;
};

// Exact survival P(T_g > n) for an integer-lattice model. Real boundary
// values are floored (S_n <= g <=> S_n <= floor(g) on the grid); the
// recursion uses compensated summation. Guarded to n <= 2^14.
double dp_survival(const IncrementModel& model, const BoundarySpec& b, std::int64_t n,
                   const ScalingSequence* c_seq = nullptr);

DpState dp_state_distribution(const IncrementModel& model, const BoundarySpec& b, std::int64_t n,
                              const ScalingSequence* c_seq = nullptr);

// E[V(S_n - g_n); T_g > n] for an evaluable V.
double dp_expectation_V(const IncrementModel& model, const BoundarySpec& b, std::int64_t n,
                        const std::function<double(double)>& V,
                        const ScalingSequence* c_seq = nullptr);

// Unconstrained P(S_n > g_n).
double dp_positive_prob(const IncrementModel& model, const BoundarySpec& b, std::int64_t n,
                        const ScalingSequence* c_seq = nullptr);

// Survival vector P(T_g > k) for k = 1..n from a single recursion pass.
std::vector<double> dp_survival_curve(const IncrementModel& model, const BoundarySpec& b,
                                      std::int64_t n, const ScalingSequence* c_seq = nullptr);

// P(S_k > g_k) for k = 1..n from a single free-walk pass.
std::vector<double> dp_positive_prob_curve(const IncrementModel& model, const BoundarySpec& b,
                                           std::int64_t n, const ScalingSequence* c_seq = nullptr);

// Survival of the first strictly-positive epoch: P(max_{k<=n} S_k <= 0),
// computed by running the DP on the sign-flipped model.
std::vector<double> dp_ascending_survival_curve(const IncrementModel& model, std::int64_t n);

}  // namespace stable_passage

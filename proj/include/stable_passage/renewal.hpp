#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stable_passage/models.hpp"
#include "stable_passage/walk.hpp"

namespace stable_passage {

// Monte Carlo estimate of a ladder-height renewal function on a grid.
// values[i] = average number of ladder points (the origin included) with
// cumulative height <= grid[i].
struct RenewalEstimate {
  LadderKind kind = LadderKind::kWeakDescending;
  std::vector<double> grid;     // increasing, starts at 0
  std::vector<double> values;   // non-decreasing, values[0] >= 1
  std::vector<double> stderrs;  // pointwise standard errors
  std::int64_t chains = 0;
  double censored_fraction = 0.0;
  std::string model_id;
};

// Unit grid on [0, x_max] for lattice models, 200 geometric points otherwise.
// Censored chains (a ladder search hit step_cap) are excluded from the counts
// and reported through censored_fraction.
RenewalEstimate estimate_renewal(const IncrementModel& model, LadderKind kind, double x_max,
                                 std::int64_t chains, std::int64_t step_cap, std::uint64_t seed,
                                 const WorkerOptions& opts = {});

// Linear interpolation on the grid; x beyond the grid extrapolates linearly
// from the last two points and sets *extrapolated. Negative x is rejected.
double renewal_eval(const RenewalEstimate& est, double x, bool* extrapolated = nullptr);

// sup over grid points in [x_min, x_max] of x (V(x+1)-V(x)) / V(x).
// Reported as a diagnostic; the underlying growth condition can fail.
double lrt_diagnostic(const RenewalEstimate& est, double x_min, double x_max);

struct LimitConstantPoint {
  std::int64_t n = 0;
  double a_hat = 0.0;        // V(c_n) P(tau_0 > n)
  double a_hat_ci = 0.0;
  double a_plus_hat = 0.0;   // H(c_n) P(tau^+ > n)
  double a_plus_hat_ci = 0.0;
  double vh_hat = 0.0;       // V(c_n) H(c_n) / n
  double vh_hat_ci = 0.0;
};

// Stability diagnostics for the limit products. Survival lists must come from
// the same model as the renewal estimates (matched by model id when set).
std::vector<LimitConstantPoint> limit_constants(const std::vector<SurvivalEstimate>& tau0_survival,
                                                const std::vector<SurvivalEstimate>& tau_plus_survival,
                                                const RenewalEstimate& v_est,
                                                const RenewalEstimate& h_est,
                                                const ScalingSequence& c_seq);

}  // namespace stable_passage

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stable_passage/boundary.hpp"
#include "stable_passage/exact_dp.hpp"
#include "stable_passage/models.hpp"
#include "stable_passage/renewal.hpp"
#include "stable_passage/summability.hpp"
#include "stable_passage/walk.hpp"

namespace stable_passage {

enum class EstimateMethod { kDpExact, kMonteCarlo };

// Source of the harmonic weight V used inside U_g. The SRW fixture is the
// exact harmonic function 2x of the +-1 walk killed at the boundary; the
// estimated source evaluates a renewal table.
struct VSource {
  std::function<double(double)> eval;
  std::string id;

  static VSource srw_harmonic();
  static VSource from_estimate(const RenewalEstimate& est);
  static VSource from_function(std::function<double(double)> f, std::string id);
};

struct UgPoint {
  std::int64_t n = 0;
  double value = 0.0;
  double ci_half_width = 0.0;  // zero when DP-backed
  bool exact = false;
};

struct UgCurve {
  std::vector<UgPoint> points;
  std::string model_id;
  std::string boundary_id;
  std::string v_source_id;
};

UgCurve estimate_ug(const IncrementModel& model, const BoundarySpec& b,
                    const std::vector<std::int64_t>& n_grid, const VSource& v_source,
                    EstimateMethod method, std::uint64_t seed = 0, std::int64_t replicas = 0,
                    const WorkerOptions& opts = {}, const ScalingSequence* c_seq = nullptr);

struct RatioPoint {
  std::int64_t n = 0;
  double p_moving = 0.0;   // P(T_g > n)
  double p_tau0 = 0.0;     // P(tau_0 > n)
  double ug = 0.0;         // U_g(n)
  std::optional<double> ratio;  // p_moving / (p_tau0 * ug); empty when guarded
};

// The tail-equivalence diagnostic r(n) = P(T_g>n) / (P(tau_0>n) U_g(n)) -> 1.
std::vector<RatioPoint> ratio_curve(const IncrementModel& model, const BoundarySpec& b,
                                    const std::vector<std::int64_t>& n_grid, const VSource& v_source,
                                    EstimateMethod method, std::uint64_t seed = 0,
                                    std::int64_t replicas = 0, const WorkerOptions& opts = {},
                                    const ScalingSequence* c_seq = nullptr);

struct TailFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  std::int64_t n_lo = 0;
  std::int64_t n_hi = 0;
};

// Least-squares slope of log p against log n; requires >= 4 points, all
// survival values positive.
TailFit tail_exponent(const std::vector<SurvivalEstimate>& survival);

enum class LimitClass { kConvergesPositive, kTendsToZero, kTendsToInfinity, kInconclusive };

std::string to_string(LimitClass c);

struct LimitClassification {
  LimitClass verdict = LimitClass::kInconclusive;
  Summability summability = Summability::kInconclusive;
  Monotonicity monotonicity = Monotonicity::kNone;
  double ug_trend = 0.0;  // Ug(last)/Ug(first) over the provided curve, 0 when unavailable
};

// Combines the summability test with the boundary's monotonicity tag;
// the U_g trend over the curve is reported alongside, never overriding.
LimitClassification classify_limit(const BoundarySpec& b, const ScalingSequence& c_seq,
                                   const UgCurve& ug, std::int64_t n_max_classify = 1 << 20);

struct UniformityPoint {
  double x = 0.0;
  double ratio = 0.0;        // P(tau_x>n) / (W(x) P(tau_0>n))
  double bound_ratio = 0.0;  // P(tau_x>n) / (W(min(x,c_n)) P(tau_0>n))
};

// Constant-boundary uniformity check. The normalizer W is the one-step
// harmonic smoothing of V for lattice models (W(x) = E[V(x + X - 1); x+X > 0]
// normalized to W(0) = 1) and V(x)/V(0) otherwise.
std::vector<UniformityPoint> constant_boundary_uniformity(const IncrementModel& model,
                                                          const std::vector<double>& x_list,
                                                          std::int64_t n, const VSource& v_source,
                                                          EstimateMethod method,
                                                          std::uint64_t seed = 0,
                                                          std::int64_t replicas = 0,
                                                          const WorkerOptions& opts = {});

// Two-sample Kolmogorov-Smirnov statistic.
double two_sample_ks(const std::vector<double>& sample_a, const std::vector<double>& sample_b);

// 99th percentile of the permutation null of the two-sample KS statistic.
double ks_permutation_band(const std::vector<double>& sample_a, const std::vector<double>& sample_b,
                           int permutations, std::uint64_t seed);

enum class PathFunctional { kEndpoint, kSupremum, kAverage };

struct MeanderComparison {
  double ks = 0.0;
  double null_band_99 = 0.0;
  std::int64_t count = 0;
  std::uint64_t attempts_a = 0;
  std::uint64_t attempts_b = 0;
};

// Conditioned-path functional under boundary b against the zero boundary,
// sampled on disjoint substreams, compared by KS with a permutation band.
MeanderComparison meander_compare(const IncrementModel& model, const BoundarySpec& b,
                                  std::int64_t n, std::int64_t count, PathFunctional functional,
                                  std::uint64_t seed, const WorkerOptions& opts = {},
                                  const ScalingSequence* c_seq = nullptr, int permutations = 200);

}  // namespace stable_passage

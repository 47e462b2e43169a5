#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stable_passage/boundary.hpp"
#include "stable_passage/models.hpp"

namespace stable_passage {

struct FirstPassageRecord {
  std::optional<std::int64_t> t;  // crossing time; empty when censored at the horizon
  double position_at_t = 0.0;     // S at crossing, or S at the horizon when censored
  std::int64_t survived_to = 0;   // last k with S_k > g_k

  bool censored() const { return !t.has_value(); }
};

struct SurvivalEstimate {
  std::int64_t n = 0;
  double p_hat = 0.0;
  std::int64_t replicas = 0;
  double ci_half_width = 0.0;  // 1.96 sqrt(p(1-p)/replicas)
  std::int64_t survivors = 0;
  std::uint64_t seed = 0;
  std::string model_id;
};

// Number of worker threads; 0 = hardware concurrency. Results are bitwise
// independent of this value: replicas are processed in fixed-size chunks and
// reduced in chunk order.
struct WorkerOptions {
  int workers = 0;
};

int resolve_worker_count(const WorkerOptions& opts);

// Simulates S_k from `start` until the first k with start + S_k <= g_k, or
// censors at n_max.
FirstPassageRecord first_passage(const IncrementModel& model, const BoundarySpec& b,
                                 std::int64_t n_max, Stream& stream,
                                 const ScalingSequence* c_seq = nullptr, double start = 0.0);

// Same walk against a precomputed boundary table g[0..n-1] (g[k-1] = g_k).
FirstPassageRecord first_passage_table(const IncrementModel& model, const std::vector<double>& g,
                                       Stream& stream, double start = 0.0);

SurvivalEstimate simulate_survival(const IncrementModel& model, const BoundarySpec& b,
                                   std::int64_t n, std::int64_t replicas, std::uint64_t seed,
                                   const WorkerOptions& opts = {},
                                   const ScalingSequence* c_seq = nullptr);

enum class LadderKind { kWeakDescending, kStrictAscending };

struct LadderChain {
  std::vector<double> heights;  // per-epoch increments (>= 0)
  bool censored = false;        // one search exceeded step_cap
};

// Simulates ladder epochs until the cumulative height exceeds x_max or a
// single search exceeds step_cap. Weak descending: epochs at S_n <= running
// min, heights = drop below the previous minimum. Strict ascending: epochs at
// S_n > running max, heights = overshoot above the previous maximum.
LadderChain ladder_chain(const IncrementModel& model, LadderKind kind, double x_max,
                         std::int64_t step_cap, Stream& stream);

struct ConditionedFunctionals {
  std::vector<double> endpoint;      // S_n / c_n
  std::vector<double> supremum;      // max_{0<=k<=n} S_k / c_n
  std::vector<double> time_average;  // (1/n) sum_{k=0}^{n-1} S_k / c_n
  std::uint64_t attempts = 0;
  std::uint64_t rejections = 0;
};

// Rejection sampling of paths with T_g > n; functionals of the rescaled path
// S_{[nt]}/c_n. `stream_base` partitions the stream index space so that
// independent runs can coexist under one master seed. Aborts with
// std::runtime_error when the pilot acceptance rate falls below 1e-4.
ConditionedFunctionals conditioned_functionals(const IncrementModel& model, const BoundarySpec& b,
                                               std::int64_t n, std::int64_t count,
                                               std::uint64_t seed, const WorkerOptions& opts = {},
                                               const ScalingSequence* c_seq = nullptr,
                                               std::uint64_t stream_base = 0);

}  // namespace stable_passage

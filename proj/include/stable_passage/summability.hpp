#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stable_passage/boundary.hpp"
#include "stable_passage/models.hpp"
#include "stable_passage/renewal.hpp"

namespace stable_passage {

enum class Summability { kSummable, kNotSummable, kInconclusive };

struct SummabilityReport {
  Summability verdict = Summability::kInconclusive;
  double exponent = 0.0;         // fitted regular-variation exponent of the summand
  double log_power = 0.0;        // fitted power of log in the near-harmonic regime
  bool log_power_used = false;
  std::vector<double> partial_sums;  // at dyadic checkpoints
  std::vector<std::int64_t> checkpoints;
};

std::string to_string(Summability s);

// Classifies sum a_n for a nonnegative summand by dyadic block sums: the
// slope of log(block sum) against log n gives the exponent + 1; a slope in
// the +-0.1 dead zone around zero falls back to the block-sum decay in log j
// (sums of 1/(n log^p n) type), still with a dead zone at the pure harmonic
// point. Deterministic boundary summands are cheap, so n_max defaults high.
SummabilityReport classify_summand(const std::function<double(std::int64_t)>& summand,
                                   std::int64_t n_max, std::int64_t n_start = 1);

// Summand max_{k<=n} |g_k| / (n c_n).
SummabilityReport check_summability_T21(const BoundarySpec& b, const ScalingSequence& c_seq,
                                        std::int64_t n_max);

// Summand V(|g_n|) / (n V(c_n / log n)), starting at n = 2.
SummabilityReport check_int_test(const BoundarySpec& b, const RenewalEstimate& v_est,
                                 const ScalingSequence& c_seq, std::int64_t n_max);

}  // namespace stable_passage

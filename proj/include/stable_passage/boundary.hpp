#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stable_passage/models.hpp"

namespace stable_passage {

enum class BoundaryVariant { kConstant, kPower, kScaledLog, kTable };
enum class Monotonicity { kIncreasing, kDecreasing, kNone };

// Deterministic boundary sequence {g_n}. Evaluation is total for n >= 1;
// Table boundaries extend by their final value. ScaledLog needs the model's
// scaling sequence: g_n = sign * c_n / log^a(n+1) + offset.
class BoundarySpec {
 public:
  static BoundarySpec constant(double level);
  static BoundarySpec power(double coef, double gamma, double offset = 0.0);
  static BoundarySpec scaled_log(double a, int sign, double offset = 0.0);
  static BoundarySpec table(std::vector<double> values);

  BoundaryVariant variant() const { return variant_; }

  double value(std::int64_t n, const ScalingSequence* c_seq = nullptr) const;

  // max_{k<=n} |g_k|
  double running_max_abs(std::int64_t n, const ScalingSequence* c_seq = nullptr) const;

  // Scans g_1..g_n; tags sequences that are non-decreasing or non-increasing.
  Monotonicity monotonicity(std::int64_t n, const ScalingSequence* c_seq = nullptr) const;

  // Sufficient first-step admissibility: g_1 below the largest increment.
  bool admissible_for(const IncrementModel& model, const ScalingSequence* c_seq = nullptr) const;

  bool needs_scaling() const { return variant_ == BoundaryVariant::kScaledLog; }

  // Evaluates g_1..g_n into a dense vector (index k-1 holds g_k).
  std::vector<double> evaluate(std::int64_t n, const ScalingSequence* c_seq = nullptr) const;

  const std::string& id() const { return id_; }

 private:
  BoundarySpec() = default;

  BoundaryVariant variant_ = BoundaryVariant::kConstant;
  double level_ = 0.0;
  double coef_ = 0.0;
  double gamma_ = 0.0;
  double offset_ = 0.0;
  double log_a_ = 1.0;
  int sign_ = 1;
  std::vector<double> table_;
  std::string id_;
};

}  // namespace stable_passage

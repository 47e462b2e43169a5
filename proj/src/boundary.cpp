#include "stable_passage/boundary.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace stable_passage {

namespace {
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}
}  // namespace

BoundarySpec BoundarySpec::constant(double level) {
  BoundarySpec b;
  b.variant_ = BoundaryVariant::kConstant;
  b.level_ = level;
  b.id_ = "constant[" + fmt(level) + "]";
  return b;
}

BoundarySpec BoundarySpec::power(double coef, double gamma, double offset) {
  BoundarySpec b;
  b.variant_ = BoundaryVariant::kPower;
  b.coef_ = coef;
  b.gamma_ = gamma;
  b.offset_ = offset;
  b.id_ = "power[" + fmt(coef) + ",g=" + fmt(gamma) + ",off=" + fmt(offset) + "]";
  return b;
}

BoundarySpec BoundarySpec::scaled_log(double a, int sign, double offset) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("scaled_log: sign must be +1 or -1");
  BoundarySpec b;
  b.variant_ = BoundaryVariant::kScaledLog;
  b.log_a_ = a;
  b.sign_ = sign;
  b.offset_ = offset;
  b.id_ = std::string("scaled_log[a=") + fmt(a) + (sign > 0 ? ",+" : ",-") + ",off=" + fmt(offset) + "]";
  return b;
}

BoundarySpec BoundarySpec::table(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("table boundary: need at least one value");
  BoundarySpec b;
  b.variant_ = BoundaryVariant::kTable;
  b.table_ = std::move(values);
  std::ostringstream os;
  os << "table[";
  for (std::size_t i = 0; i < b.table_.size(); ++i) {
    if (i) os << ',';
    os << fmt(b.table_[i]);
  }
  os << ']';
  b.id_ = os.str();
  return b;
}

double BoundarySpec::value(std::int64_t n, const ScalingSequence* c_seq) const {
  if (n < 1) throw std::invalid_argument("boundary_value: n must be >= 1");
  switch (variant_) {
    case BoundaryVariant::kConstant:
      return level_;
    case BoundaryVariant::kPower:
      return coef_ * std::pow(static_cast<double>(n), gamma_) + offset_;
    case BoundaryVariant::kScaledLog: {
      if (c_seq == nullptr) {
        throw std::invalid_argument("scaled_log boundary requires a scaling sequence");
      }
      const double cn = c_seq->value(n);
      return sign_ * cn / std::pow(std::log(static_cast<double>(n) + 1.0), log_a_) + offset_;
    }
    case BoundaryVariant::kTable: {
      const std::size_t i = static_cast<std::size_t>(n - 1);
      return i < table_.size() ? table_[i] : table_.back();
    }
  }
  return 0.0;
}

double BoundarySpec::running_max_abs(std::int64_t n, const ScalingSequence* c_seq) const {
  double g = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) g = std::max(g, std::abs(value(k, c_seq)));
  return g;
}

Monotonicity BoundarySpec::monotonicity(std::int64_t n, const ScalingSequence* c_seq) const {
  bool non_decreasing = true, non_increasing = true;
  double prev = value(1, c_seq);
  for (std::int64_t k = 2; k <= n && (non_decreasing || non_increasing); ++k) {
    const double cur = value(k, c_seq);
    if (cur < prev) non_decreasing = false;
    if (cur > prev) non_increasing = false;
    prev = cur;
  }
  if (non_decreasing) return Monotonicity::kIncreasing;
  if (non_increasing) return Monotonicity::kDecreasing;
  return Monotonicity::kNone;
}

bool BoundarySpec::admissible_for(const IncrementModel& model, const ScalingSequence* c_seq) const {
  return value(1, c_seq) < model.upper_support_bound();
}

std::vector<double> BoundarySpec::evaluate(std::int64_t n, const ScalingSequence* c_seq) const {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (std::int64_t k = 1; k <= n; ++k) g[static_cast<std::size_t>(k - 1)] = value(k, c_seq);
  return g;
}

}  // namespace stable_passage

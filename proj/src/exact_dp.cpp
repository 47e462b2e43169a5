#include "stable_passage/exact_dp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stable_passage {

namespace {

constexpr std::int64_t kMaxSteps = 1 << 14;  // O(n^2 * support) recursion guard

struct Grid {
  std::int64_t lo = 0;  // value of index 0
  std::vector<double> p;
};

void check_lattice(const IncrementModel& model, std::int64_t n) {
  if (!model.is_integer_lattice()) {
    throw std::invalid_argument("exact DP requires an integer-lattice increment model");
  }
  if (n < 1 || n > kMaxSteps) {
    throw std::invalid_argument("exact DP horizon must be in [1, 2^14]");
  }
}

// One convolution step with compensated per-target accumulation.
Grid convolve(const Grid& g, const std::vector<long long>& offsets, const std::vector<double>& probs) {
  long long min_off = offsets[0], max_off = offsets[0];
  for (auto o : offsets) {
    min_off = std::min(min_off, o);
    max_off = std::max(max_off, o);
  }
  Grid out;
  out.lo = g.lo + min_off;
  out.p.assign(g.p.size() + static_cast<std::size_t>(max_off - min_off), 0.0);
  std::vector<double> comp(out.p.size(), 0.0);
  for (std::size_t i = 0; i < g.p.size(); ++i) {
    const double mass = g.p[i];
    if (mass == 0.0) continue;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const std::size_t k = i + static_cast<std::size_t>(offsets[j] - min_off);
      const double y = mass * probs[j] - comp[k];
      const double t = out.p[k] + y;
      comp[k] = (t - out.p[k]) - y;
      out.p[k] = t;
    }
  }
  return out;
}

void truncate_at(Grid& g, double boundary) {
  const std::int64_t cut = static_cast<std::int64_t>(std::floor(boundary));  // kill S <= cut
  if (cut < g.lo) return;
  const std::size_t k = std::min(g.p.size(), static_cast<std::size_t>(cut - g.lo + 1));
  std::fill(g.p.begin(), g.p.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
}

void shrink(Grid& g) {
  std::size_t first = 0;
  while (first < g.p.size() && g.p[first] == 0.0) ++first;
  std::size_t last = g.p.size();
  while (last > first && g.p[last - 1] == 0.0) --last;
  if (first > 0 || last < g.p.size()) {
    g.p = std::vector<double>(g.p.begin() + static_cast<std::ptrdiff_t>(first),
                              g.p.begin() + static_cast<std::ptrdiff_t>(last));
    g.lo += static_cast<std::int64_t>(first);
  }
}

double mass(const Grid& g) {
  double s = 0.0, c = 0.0;
  for (double x : g.p) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

Grid run_killed(const IncrementModel& model, const std::vector<double>& g_vals, std::int64_t n,
                std::vector<double>* survival_curve) {
  Grid g;
  g.lo = 0;
  g.p = {1.0};
  for (std::int64_t k = 1; k <= n; ++k) {
    g = convolve(g, model.lattice_offsets(), model.lattice_probs());
    truncate_at(g, g_vals[static_cast<std::size_t>(k - 1)]);
    shrink(g);
    if (survival_curve) survival_curve->push_back(mass(g));
    if (g.p.empty()) {
      if (survival_curve) {
        survival_curve->resize(static_cast<std::size_t>(n), 0.0);
      }
      break;
    }
  }
  return g;
}

}  // namespace

double DpState::total_mass() const {
  double s = 0.0, c = 0.0;
  for (double x : probs) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

DpState dp_state_distribution(const IncrementModel& model, const BoundarySpec& b, std::int64_t n,
                              const ScalingSequence* c_seq) {
  check_lattice(model, n);
  const auto g_vals = b.evaluate(n, c_seq);
  Grid g = run_killed(model, g_vals, n, nullptr);
  DpState st;
  st.n = n;
  st.support_offset = g.lo;
  st.probs = std::move(g.p);
  return st;
}

double dp_survival(const IncrementModel& model, const BoundarySpec& b, std::int64_t n,
                   const ScalingSequence* c_seq) {
  return dp_state_distribution(model, b, n, c_seq).total_mass();
}

std::vector<double> dp_survival_curve(const IncrementModel& model, const BoundarySpec& b,
                                      std::int64_t n, const ScalingSequence* c_seq) {
  check_lattice(model, n);
  const auto g_vals = b.evaluate(n, c_seq);
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(n));
  run_killed(model, g_vals, n, &curve);
  return curve;
}

double dp_expectation_V(const IncrementModel& model, const BoundarySpec& b, std::int64_t n,
                        const std::function<double(double)>& V, const ScalingSequence* c_seq) {
  const DpState st = dp_state_distribution(model, b, n, c_seq);
  const double gn = b.value(n, c_seq);
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < st.probs.size(); ++i) {
    if (st.probs[i] == 0.0) continue;
    const double x = static_cast<double>(st.support_offset + static_cast<std::int64_t>(i));
    const double y = V(x - gn) * st.probs[i] - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double dp_positive_prob(const IncrementModel& model, const BoundarySpec& b, std::int64_t n,
                        const ScalingSequence* c_seq) {
  check_lattice(model, n);
  Grid g;
  g.lo = 0;
  g.p = {1.0};
  for (std::int64_t k = 1; k <= n; ++k) {
    g = convolve(g, model.lattice_offsets(), model.lattice_probs());
  }
  const std::int64_t cut = static_cast<std::int64_t>(std::floor(b.value(n, c_seq)));
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < g.p.size(); ++i) {
    if (g.lo + static_cast<std::int64_t>(i) > cut) {
      const double y = g.p[i] - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
  }
  return s;
}

std::vector<double> dp_positive_prob_curve(const IncrementModel& model, const BoundarySpec& b,
                                           std::int64_t n, const ScalingSequence* c_seq) {
  check_lattice(model, n);
  const auto g_vals = b.evaluate(n, c_seq);
  Grid g;
  g.lo = 0;
  g.p = {1.0};
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t k = 1; k <= n; ++k) {
    g = convolve(g, model.lattice_offsets(), model.lattice_probs());
    const std::int64_t cut = static_cast<std::int64_t>(std::floor(g_vals[static_cast<std::size_t>(k - 1)]));
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < g.p.size(); ++i) {
      if (g.lo + static_cast<std::int64_t>(i) > cut) {
        const double y = g.p[i] - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
      }
    }
    out.push_back(s);
  }
  return out;
}

std::vector<double> dp_ascending_survival_curve(const IncrementModel& model, std::int64_t n) {
  check_lattice(model, n);
  // P(max_{k<=n} S_k <= 0) = P(-S stays > -1) on the integer grid.
  std::vector<long long> neg = model.lattice_offsets();
  for (auto& o : neg) o = -o;
  auto mirrored = IncrementModel::lattice(neg, model.lattice_probs());
  return dp_survival_curve(mirrored, BoundarySpec::constant(-1.0), n);
}

}  // namespace stable_passage

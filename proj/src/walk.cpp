#include "stable_passage/walk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace stable_passage {

namespace {
constexpr std::int64_t kChunk = 8192;  // replica chunk; fixed so results never depend on workers
}

int resolve_worker_count(const WorkerOptions& opts) {
  if (opts.workers > 0) return opts.workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

FirstPassageRecord first_passage_table(const IncrementModel& model, const std::vector<double>& g,
                                       Stream& stream, double start) {
  double s = start;
  const std::int64_t n_max = static_cast<std::int64_t>(g.size());
  for (std::int64_t k = 1; k <= n_max; ++k) {
    s += model.sample(stream);
    if (s <= g[static_cast<std::size_t>(k - 1)]) {
      return FirstPassageRecord{k, s, k - 1};
    }
  }
  return FirstPassageRecord{std::nullopt, s, n_max};
}

FirstPassageRecord first_passage(const IncrementModel& model, const BoundarySpec& b,
                                 std::int64_t n_max, Stream& stream, const ScalingSequence* c_seq,
                                 double start) {
  if (n_max < 1) throw std::invalid_argument("first_passage: n_max must be >= 1");
  return first_passage_table(model, b.evaluate(n_max, c_seq), stream, start);
}

namespace {

// Runs fn(chunk_index) for chunk indices [0, n_chunks) across workers.
// Each chunk writes only its own slot, so scheduling cannot change results.
template <typename Fn>
void parallel_chunks(std::int64_t n_chunks, int workers, Fn&& fn) {
  if (workers <= 1 || n_chunks <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      fn(c);
    }
  };
  std::vector<std::thread> pool;
  const int k = static_cast<int>(std::min<std::int64_t>(workers, n_chunks));
  pool.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

SurvivalEstimate simulate_survival(const IncrementModel& model, const BoundarySpec& b,
                                   std::int64_t n, std::int64_t replicas, std::uint64_t seed,
                                   const WorkerOptions& opts, const ScalingSequence* c_seq) {
  if (n < 1) throw std::invalid_argument("simulate_survival: n must be >= 1");
  if (replicas < 1) throw std::invalid_argument("simulate_survival: replicas must be >= 1");
  const auto g = b.evaluate(n, c_seq);
  if (!b.admissible_for(model, c_seq)) {
    // Still a valid run; survival will be zero. The caller sees it in p_hat.
  }
  const std::int64_t n_chunks = (replicas + kChunk - 1) / kChunk;
  std::vector<std::int64_t> survivors(static_cast<std::size_t>(n_chunks), 0);
  parallel_chunks(n_chunks, resolve_worker_count(opts), [&](std::int64_t c) {
    const std::int64_t begin = c * kChunk;
    const std::int64_t end = std::min(replicas, begin + kChunk);
    std::int64_t count = 0;
    for (std::int64_t r = begin; r < end; ++r) {
      Stream stream = resolve_stream(seed, static_cast<std::uint64_t>(r));
      if (first_passage_table(model, g, stream).censored()) ++count;
    }
    survivors[static_cast<std::size_t>(c)] = count;
  });
  std::int64_t total = 0;
  for (auto s : survivors) total += s;
  SurvivalEstimate est;
  est.n = n;
  est.replicas = replicas;
  est.survivors = total;
  est.p_hat = static_cast<double>(total) / static_cast<double>(replicas);
  est.ci_half_width = 1.96 * std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(replicas));
  est.seed = seed;
  est.model_id = model.id();
  return est;
}

LadderChain ladder_chain(const IncrementModel& model, LadderKind kind, double x_max,
                         std::int64_t step_cap, Stream& stream) {
  if (step_cap < 1) throw std::invalid_argument("ladder_chain: step_cap must be >= 1");
  LadderChain chain;
  double cumulative = 0.0;
  // position relative to the current record (min or max)
  double rel = 0.0;
  for (;;) {
    std::int64_t steps = 0;
    // search for the next epoch
    for (;;) {
      if (steps >= step_cap) {
        chain.censored = true;
        return chain;
      }
      const double x = model.sample(stream);
      ++steps;
      rel += x;
      if (kind == LadderKind::kWeakDescending) {
        if (rel <= 0.0) break;  // new weak minimum
      } else {
        if (rel > 0.0) break;  // new strict maximum
      }
    }
    const double height = kind == LadderKind::kWeakDescending ? -rel : rel;
    chain.heights.push_back(height);
    cumulative += height;
    rel = 0.0;
    if (cumulative > x_max) return chain;
  }
}

ConditionedFunctionals conditioned_functionals(const IncrementModel& model, const BoundarySpec& b,
                                               std::int64_t n, std::int64_t count,
                                               std::uint64_t seed, const WorkerOptions& opts,
                                               const ScalingSequence* c_seq,
                                               std::uint64_t stream_base) {
  if (count < 1) throw std::invalid_argument("conditioned_functionals: count must be >= 1");
  if (n < 1) throw std::invalid_argument("conditioned_functionals: n must be >= 1");
  const auto g = b.evaluate(n, c_seq);
  ScalingSequence local_seq = c_seq ? *c_seq : scaling_sequence(model);
  const double cn = local_seq.value(n);

  struct Hit {
    std::uint64_t attempt;
    double endpoint, supremum, average;
  };

  auto run_attempt = [&](std::uint64_t attempt, Hit* hit) -> bool {
    Stream stream = resolve_stream(seed, stream_base + attempt);
    double s = 0.0;
    double sup = 0.0;     // includes S_0 = 0
    double sum = 0.0;     // S_0 + ... + S_{n-1}
    for (std::int64_t k = 1; k <= n; ++k) {
      sum += s;
      s += model.sample(stream);
      if (s <= g[static_cast<std::size_t>(k - 1)]) return false;
      sup = std::max(sup, s);
    }
    hit->attempt = attempt;
    hit->endpoint = s / cn;
    hit->supremum = sup / cn;
    hit->average = sum / (static_cast<double>(n) * cn);
    return true;
  };

  // Pilot: abort when acceptance is hopeless.
  constexpr std::int64_t kPilot = 65536;
  std::int64_t pilot_hits = 0;
  std::vector<Hit> accepted;
  for (std::uint64_t a = 0; a < static_cast<std::uint64_t>(kPilot); ++a) {
    Hit h;
    if (run_attempt(a, &h)) {
      ++pilot_hits;
      accepted.push_back(h);
    }
    if (pilot_hits >= count) break;
  }
  std::uint64_t consumed = std::min<std::uint64_t>(kPilot, accepted.empty() ? kPilot : accepted.back().attempt + 1);
  if (pilot_hits < count) {
    consumed = kPilot;
    const double rate = static_cast<double>(pilot_hits) / static_cast<double>(kPilot);
    if (rate < 1e-4) {
      throw std::runtime_error(
          "conditioned_functionals: pilot acceptance rate below 1e-4; "
          "survival at this horizon is too small for plain rejection");
    }
    // Process further blocks in parallel; keep acceptances in attempt order.
    const int workers = resolve_worker_count(opts);
    while (pilot_hits < count) {
      const double rate_now = std::max(rate, 1e-6);
      const std::int64_t need = count - pilot_hits;
      const std::int64_t block =
          std::max<std::int64_t>(kChunk, static_cast<std::int64_t>(1.5 * static_cast<double>(need) / rate_now));
      const std::int64_t n_chunks = (block + kChunk - 1) / kChunk;
      std::vector<std::vector<Hit>> per_chunk(static_cast<std::size_t>(n_chunks));
      parallel_chunks(n_chunks, workers, [&](std::int64_t c) {
        const std::uint64_t begin = consumed + static_cast<std::uint64_t>(c * kChunk);
        const std::uint64_t end = std::min<std::uint64_t>(consumed + static_cast<std::uint64_t>(block),
                                                          begin + kChunk);
        auto& out = per_chunk[static_cast<std::size_t>(c)];
        for (std::uint64_t a = begin; a < end; ++a) {
          Hit h;
          if (run_attempt(a, &h)) out.push_back(h);
        }
      });
      for (auto& v : per_chunk) {
        for (auto& h : v) {
          if (pilot_hits < count) {
            accepted.push_back(h);
            ++pilot_hits;
          }
        }
      }
      consumed += static_cast<std::uint64_t>(block);
    }
  }

  ConditionedFunctionals out;
  std::sort(accepted.begin(), accepted.end(), [](const Hit& a, const Hit& b) { return a.attempt < b.attempt; });
  accepted.resize(static_cast<std::size_t>(count));
  out.endpoint.reserve(accepted.size());
  for (const auto& h : accepted) {
    out.endpoint.push_back(h.endpoint);
    out.supremum.push_back(h.supremum);
    out.time_average.push_back(h.average);
  }
  out.attempts = accepted.back().attempt + 1;
  out.rejections = out.attempts - static_cast<std::uint64_t>(count);
  return out;
}

}  // namespace stable_passage

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "oti/sim.h"

namespace oti {

void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto count = std::min<std::int64_t>(threads, n);
  for (std::int64_t w = 0; w < count; ++w) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

AggregateResult aggregate(std::vector<EpisodeTrace> traces) {
  AggregateResult out;
  out.runs = static_cast<int>(traces.size());
  if (traces.empty()) return out;
  out.num_agents = traces.front().num_agents;
  out.num_arms = traces.front().num_arms;
  const size_t cells = static_cast<size_t>(out.num_agents) * out.num_arms;
  out.mean_c_pair.assign(cells, 0.0);
  out.mean_free_pulls.assign(cells, 0.0);

  double correct = 0.0, violated = 0.0, eliminated = 0.0, cost_sum = 0.0;
  for (const auto& tr : traces) {
    correct += tr.correct ? 1.0 : 0.0;
    violated += tr.confidence_violated ? 1.0 : 0.0;
    eliminated += tr.optimal_eliminated ? 1.0 : 0.0;
    cost_sum += static_cast<double>(tr.c_total);
    for (size_t c = 0; c < cells; ++c) {
      out.mean_c_pair[c] += static_cast<double>(tr.c_pair[c]);
      out.mean_free_pulls[c] += static_cast<double>(tr.free_pulls[c]);
    }
  }
  const double n = static_cast<double>(out.runs);
  out.accuracy = correct / n;
  out.violation_rate = violated / n;
  out.optimal_eliminated_rate = eliminated / n;
  out.mean_cost = cost_sum / n;
  for (size_t c = 0; c < cells; ++c) {
    out.mean_c_pair[c] /= n;
    out.mean_free_pulls[c] /= n;
  }
  if (out.runs > 1) {
    double ss = 0.0;
    for (const auto& tr : traces) {
      const double d = static_cast<double>(tr.c_total) - out.mean_cost;
      ss += d * d;
    }
    out.stddev_cost = std::sqrt(ss / (n - 1.0));
  }
  out.traces = std::move(traces);
  return out;
}

AggregateResult run_monte_carlo(const LocalInstanceSet& inst,
                                const SimConfig& cfg, PrincipalMode mode) {
  cfg.validate(inst.num_arms(), inst.num_agents());
  std::vector<EpisodeTrace> traces(cfg.runs);
  parallel_for(cfg.runs, cfg.threads, [&](std::int64_t i) {
    Episode ep(inst, cfg, episode_seed(cfg.master_seed, i), mode);
    ep.run();
    traces[i] = ep.trace();
  });
  return aggregate(std::move(traces));
}

}  // namespace oti

#include "oti/trace_io.h"

#include "oti/format.h"

namespace oti {

const char* to_string(CbVariant v) {
  return v == CbVariant::kFull ? "full" : "simplified";
}

const char* to_string(IncentiveBehavior::Kind k) {
  switch (k) {
    case IncentiveBehavior::Kind::kAlwaysFollow:
      return "always_follow";
    case IncentiveBehavior::Kind::kStochasticFollow:
      return "stochastic_follow";
    case IncentiveBehavior::Kind::kScriptedRefuser:
      return "scripted_refuser";
  }
  return "always_follow";
}

void write_episodes_csv(std::ostream& out,
                        std::span<const EpisodeTrace> traces) {
  out << "seed,k_hat,correct,C_total,S_final_size,confidence_violated\n";
  for (const auto& tr : traces) {
    out << tr.seed << ',' << tr.k_hat + 1 << ',' << (tr.correct ? 1 : 0) << ','
        << tr.c_total << ',' << tr.s_final_size << ','
        << (tr.confidence_violated ? 1 : 0) << '\n';
  }
}

void write_pair_matrix_csv(std::ostream& out,
                           std::span<const EpisodeTrace> traces,
                           PairMatrix which) {
  out << "run,m,k,value\n";
  for (size_t r = 0; r < traces.size(); ++r) {
    const auto& tr = traces[r];
    const auto& mat = which == PairMatrix::kIncentives ? tr.c_pair : tr.free_pulls;
    for (int m = 0; m < tr.num_agents; ++m) {
      for (int k = 0; k < tr.num_arms; ++k) {
        out << r + 1 << ',' << m + 1 << ',' << k + 1 << ',' << tr.pair(mat, m, k)
            << '\n';
      }
    }
  }
}

void write_step_header(std::ostream& out) {
  out << "t,m,arm,reward,offered,followed\n";
}

void write_step_record(std::ostream& out, const StepRecord& rec) {
  out << rec.t << ',' << rec.m + 1 << ',' << rec.arm + 1 << ','
      << format_double(rec.reward) << ',';
  if (rec.offered) out << *rec.offered + 1;
  out << ',' << (rec.followed ? 1 : 0) << '\n';
}

nlohmann::json to_json(const SimConfig& cfg) {
  nlohmann::json behaviors = nlohmann::json::array();
  for (const auto& b : cfg.behaviors) {
    nlohmann::json jb = {{"kind", to_string(b.kind)}};
    if (b.kind == IncentiveBehavior::Kind::kStochasticFollow) {
      jb["p_follow"] = b.p_follow;
    }
    if (!b.refuse_at.empty()) jb["refuse_at"] = b.refuse_at;
    if (b.refuse_first_offer_from) {
      jb["refuse_first_offer_from"] = *b.refuse_first_offer_from;
    }
    behaviors.push_back(std::move(jb));
  }
  return {
      {"T", cfg.horizon},
      {"delta", cfg.delta},
      {"alpha", cfg.alpha},
      {"kappa", cfg.kappa.to_string()},
      {"kappa_steps", cfg.kappa_steps()},
      {"cb_variant", to_string(cfg.cb_variant)},
      {"behaviors", behaviors},
      {"never_ban", cfg.never_ban},
      {"runs", cfg.runs},
      {"master_seed", cfg.master_seed},
      {"track_confidence", cfg.track_confidence},
  };
}

nlohmann::json to_json(const InstanceGenConfig& cfg) {
  return {
      {"K", cfg.num_arms},
      {"M", cfg.num_agents},
      {"base_low", cfg.base_low},
      {"base_high", cfg.base_high},
      {"local_variance", cfg.local_variance},
      {"dmin_low", cfg.dmin_low},
      {"dmin_high", cfg.dmin_high},
      {"max_attempts", cfg.max_attempts},
  };
}

nlohmann::json to_json(const GlobalView& view) {
  return {
      {"global_means", view.global_means},
      {"k_star", view.k_star + 1},
      {"gaps", view.gaps},
      {"delta_min", view.delta_min},
  };
}

nlohmann::json to_json(const AggregateResult& agg) {
  auto matrix = [&](const std::vector<double>& flat) {
    nlohmann::json rows = nlohmann::json::array();
    for (int m = 0; m < agg.num_agents; ++m) {
      rows.push_back(std::vector<double>(
          flat.begin() + static_cast<std::ptrdiff_t>(m) * agg.num_arms,
          flat.begin() + static_cast<std::ptrdiff_t>(m + 1) * agg.num_arms));
    }
    return rows;
  };
  return {
      {"runs", agg.runs},
      {"accuracy", agg.accuracy},
      {"mean_C_total", agg.mean_cost},
      {"stddev_C_total", agg.stddev_cost},
      {"mean_C_pair", matrix(agg.mean_c_pair)},
      {"mean_free_pulls", matrix(agg.mean_free_pulls)},
      {"violation_rate", agg.violation_rate},
      {"optimal_eliminated_rate", agg.optimal_eliminated_rate},
  };
}

}  // namespace oti

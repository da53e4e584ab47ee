#ifndef OTI_TRACE_IO_H_
#define OTI_TRACE_IO_H_

#include <ostream>
#include <span>

#include <nlohmann/json.hpp>

#include "oti/instance_gen.h"
#include "oti/sim.h"

namespace oti {

// One row per episode:
//   seed,k_hat,correct,C_total,S_final_size,confidence_violated
// k_hat is 1-based; flags are 0/1.
void write_episodes_csv(std::ostream& out, std::span<const EpisodeTrace> traces);

enum class PairMatrix { kIncentives, kFreePulls };

// Long form: run,m,k,value with 1-based run, m and k.
void write_pair_matrix_csv(std::ostream& out,
                           std::span<const EpisodeTrace> traces,
                           PairMatrix which);

// Optional per-step records: t,m,arm,reward,offered,followed (offered is
// empty when no offer was made).
void write_step_header(std::ostream& out);
void write_step_record(std::ostream& out, const StepRecord& rec);

nlohmann::json to_json(const SimConfig& cfg);
nlohmann::json to_json(const InstanceGenConfig& cfg);
nlohmann::json to_json(const GlobalView& view);
// Aggregates only; per-episode traces go to CSV.
nlohmann::json to_json(const AggregateResult& agg);

const char* to_string(CbVariant v);
const char* to_string(IncentiveBehavior::Kind k);

}  // namespace oti

#endif  // OTI_TRACE_IO_H_

#include "cli/config.h"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "oti/errors.h"
#include "oti/format.h"
#include "oti/ini.h"

namespace oti::cli {
namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&,
                                  const std::string&)>;

// section -> key -> setter. `what` passed to setters is "section.key".
const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const auto* table = new std::map<std::string, std::map<std::string, Setter>>{
      {"sim",
       {
           {"T", [](auto& c, auto& v, auto& w) { c.sim.horizon = parse_int(v, w); }},
           {"delta", [](auto& c, auto& v, auto& w) { c.sim.delta = parse_double(v, w); }},
           {"alpha", [](auto& c, auto& v, auto& w) { c.sim.alpha = parse_double(v, w); }},
           {"kappa", [](auto& c, auto& v, auto&) { c.sim.kappa = KappaRule::parse(v); }},
           {"cb_variant",
            [](auto& c, auto& v, auto& w) {
              if (v == "simplified") {
                c.sim.cb_variant = CbVariant::kSimplified;
              } else if (v == "full") {
                c.sim.cb_variant = CbVariant::kFull;
              } else {
                throw ConfigError(w + ": expected simplified or full, got '" + v + "'");
              }
            }},
           {"runs",
            [](auto& c, auto& v, auto& w) {
              c.sim.runs = static_cast<int>(parse_int(v, w));
            }},
           {"seed", [](auto& c, auto& v, auto& w) { c.sim.master_seed = parse_uint(v, w); }},
           {"never_ban", [](auto& c, auto& v, auto& w) { c.sim.never_ban = parse_bool(v, w); }},
           {"track_confidence",
            [](auto& c, auto& v, auto& w) { c.sim.track_confidence = parse_bool(v, w); }},
           {"threads",
            [](auto& c, auto& v, auto& w) {
              c.sim.threads = static_cast<int>(parse_int(v, w));
            }},
       }},
      {"agents",
       {
           {"behavior",
            [](auto& c, auto& v, auto& w) {
              auto& b = c.sim.behaviors.front();
              if (v == "always_follow") {
                b.kind = IncentiveBehavior::Kind::kAlwaysFollow;
              } else if (v == "stochastic_follow") {
                b.kind = IncentiveBehavior::Kind::kStochasticFollow;
              } else if (v == "scripted_refuser") {
                b.kind = IncentiveBehavior::Kind::kScriptedRefuser;
              } else {
                throw ConfigError(w +
                                  ": expected always_follow, stochastic_follow or "
                                  "scripted_refuser, got '" + v + "'");
              }
            }},
           {"p_follow",
            [](auto& c, auto& v, auto& w) {
              c.sim.behaviors.front().p_follow = parse_double(v, w);
            }},
           {"refuse_at",
            [](auto& c, auto& v, auto& w) {
              auto& b = c.sim.behaviors.front();
              b.refuse_at.clear();
              for (const auto& s : split_list(v)) b.refuse_at.insert(parse_int(s, w));
            }},
           {"refuse_first_offer_from",
            [](auto& c, auto& v, auto& w) {
              c.sim.behaviors.front().refuse_first_offer_from = parse_int(v, w);
            }},
       }},
      {"instance",
       {
           {"file", [](auto& c, auto& v, auto&) { c.instance_file = v; }},
       }},
      {"generator",
       {
           {"K",
            [](auto& c, auto& v, auto& w) {
              c.generator.num_arms = static_cast<int>(parse_int(v, w));
            }},
           {"M",
            [](auto& c, auto& v, auto& w) {
              c.generator.num_agents = static_cast<int>(parse_int(v, w));
            }},
           {"base_low", [](auto& c, auto& v, auto& w) { c.generator.base_low = parse_double(v, w); }},
           {"base_high", [](auto& c, auto& v, auto& w) { c.generator.base_high = parse_double(v, w); }},
           {"local_variance",
            [](auto& c, auto& v, auto& w) { c.generator.local_variance = parse_double(v, w); }},
           {"dmin_low", [](auto& c, auto& v, auto& w) { c.generator.dmin_low = parse_double(v, w); }},
           {"dmin_high", [](auto& c, auto& v, auto& w) { c.generator.dmin_high = parse_double(v, w); }},
           {"max_attempts",
            [](auto& c, auto& v, auto& w) { c.generator.max_attempts = parse_int(v, w); }},
           {"seed", [](auto& c, auto& v, auto& w) { c.generator_seed = parse_uint(v, w); }},
       }},
      {"sweep",
       {
           {"deltas",
            [](auto& c, auto& v, auto& w) {
              c.deltas.clear();
              for (const auto& s : split_list(v)) c.deltas.push_back(parse_double(s, w));
            }},
           {"m_values",
            [](auto& c, auto& v, auto& w) {
              c.m_values.clear();
              for (const auto& s : split_list(v)) {
                c.m_values.push_back(static_cast<int>(parse_int(s, w)));
              }
            }},
       }},
      {"ucb_bound",
       {
           {"lambda", [](auto& c, auto& v, auto& w) { c.ucb_lambda = parse_int(v, w); }},
           {"runs",
            [](auto& c, auto& v, auto& w) { c.ucb_runs = static_cast<int>(parse_int(v, w)); }},
           {"means",
            [](auto& c, auto& v, auto& w) {
              c.ucb_means.clear();
              for (const auto& s : split_list(v)) c.ucb_means.push_back(parse_double(s, w));
            }},
       }},
      {"lemma1",
       {
           {"agent",
            [](auto& c, auto& v, auto& w) {
              c.lemma1_agent = static_cast<int>(parse_int(v, w)) - 1;
            }},
           {"refuse_from", [](auto& c, auto& v, auto& w) { c.lemma1_refuse_from = parse_int(v, w); }},
       }},
  };
  return *table;
}

void apply_override(IniDocument& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("--set expects KEY=VALUE, got '" + spec + "'");
  }
  std::string key = trim(spec.substr(0, eq));
  const std::string value = trim(spec.substr(eq + 1));
  std::string section = "sim";
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  IniSection& s = doc.get_or_add(section);
  for (auto& e : s.entries) {
    if (e.key == key) {
      e.value = value;
      return;
    }
  }
  s.entries.push_back({key, value, 0});
}

void validate(ExperimentConfig& cfg) {
  const auto& b = cfg.sim.behaviors.front();
  if (!(b.p_follow >= 0.0 && b.p_follow <= 1.0)) {
    throw ConfigError("agents.p_follow must lie in [0, 1]");
  }
  if (b.kind != IncentiveBehavior::Kind::kStochasticFollow && b.p_follow != 1.0) {
    cfg.warnings.push_back("agents.p_follow is ignored unless behavior = stochastic_follow");
  }
  if (!(cfg.sim.delta > 0.0 && cfg.sim.delta < 1.0)) {
    throw ConfigError("sim.delta must lie in (0, 1)");
  }
  if (!(cfg.sim.alpha > 0.0)) throw ConfigError("sim.alpha must be positive");
  if (cfg.sim.alpha < 1.5) {
    cfg.warnings.push_back(
        "sim.alpha < 3/2: the high-probability incentive guarantee for alpha-UCB "
        "agents does not apply");
  }
  if (cfg.sim.horizon < 1) throw ConfigError("sim.T must be positive");
  if (cfg.sim.runs < 1) throw ConfigError("sim.runs must be at least 1");
  if (cfg.sim.threads < 1) throw ConfigError("sim.threads must be at least 1");
  const auto kappa = cfg.sim.kappa_steps();
  if (kappa < 0 || kappa > cfg.sim.horizon) {
    throw ConfigError("sim.kappa must resolve to a value in [0, T]");
  }
  for (double d : cfg.deltas) {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("sweep.deltas must lie in (0, 1)");
  }
  for (int m : cfg.m_values) {
    if (m < 1) throw ConfigError("sweep.m_values must be positive");
  }
  if (cfg.ucb_runs < 1) throw ConfigError("ucb_bound.runs must be at least 1");
  if (cfg.ucb_lambda <= 2) throw ConfigError("ucb_bound.lambda must exceed 2");
  for (double mu : cfg.ucb_means) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("ucb_bound.means must lie in [0, 1]");
  }
  if (cfg.ucb_means.size() < 2) throw ConfigError("ucb_bound.means needs at least two arms");
  if (cfg.lemma1_agent < 0) throw ConfigError("lemma1.agent is 1-based and must be >= 1");
  cfg.generator.validate();
}

ExperimentConfig from_document(IniDocument doc,
                               const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) apply_override(doc, o);
  ExperimentConfig cfg;
  const auto& table = schema();
  for (const auto& section : doc.sections) {
    if (!section.raw_lines.empty()) {
      throw ConfigError("config: unexpected line '" + section.raw_lines.front() +
                        "' (expected key = value)");
    }
    if (section.name.empty() && section.entries.empty()) continue;
    const std::string name = section.name.empty() ? "sim" : section.name;
    const auto sit = table.find(name);
    if (sit == table.end()) throw ConfigError("config: unknown section [" + name + "]");
    for (const auto& e : section.entries) {
      const auto kit = sit->second.find(e.key);
      if (kit == sit->second.end()) {
        throw ConfigError("config: unknown key '" + name + "." + e.key + "'");
      }
      kit->second(cfg, e.value, name + "." + e.key);
    }
  }
  validate(cfg);
  return cfg;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<std::string>& overrides) {
  std::istringstream in(text);
  return from_document(parse_ini(in), overrides);
}

ExperimentConfig parse_config(const std::optional<std::filesystem::path>& path,
                              const std::vector<std::string>& overrides) {
  if (!path) return from_document(IniDocument{}, overrides);
  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot open config file " + path->string());
  return from_document(parse_ini(in), overrides);
}

}  // namespace oti::cli

#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlcanon/experiment.hpp"

namespace wlcanon {

// Fixed CSV schema: one row per trial.
inline void emit_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  out << "trial,stream,success,value,wall_ms\n";
  for (const auto& r : records)
    out << r.trial << ',' << r.stream << ',' << (r.success ? 1 : 0) << ',' << r.value << ','
        << r.wall_ms << '\n';
}

inline nlohmann::json spec_to_json(const ExperimentSpec& spec) {
  return nlohmann::json{{"kind", kind_name(spec.kind)}, {"n", spec.n},
                        {"p", spec.p_expr},            {"g0", spec.g0},
                        {"trials", spec.trials},       {"seed", spec.master_seed},
                        {"threshold", spec.threshold}, {"cap", spec.cap},
                        {"workers", spec.workers},     {"mode", spec.mode}};
}

inline ExperimentSpec spec_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  spec.kind = kind_from_name(j.at("kind").get<std::string>());
  spec.n = j.value("n", 0u);
  spec.p_expr = j.value("p", std::string("0"));
  spec.g0 = j.value("g0", std::string("empty"));
  spec.trials = j.value("trials", 1u);
  spec.master_seed = j.value("seed", std::uint64_t{0});
  spec.threshold = j.value("threshold", -1.0);
  spec.cap = j.value("cap", 0u);
  spec.workers = j.value("workers", 0u);
  spec.mode = j.value("mode", std::string("direct"));
  return spec;
}

// JSON output carries the full spec for provenance; records round-trip.
inline nlohmann::json records_to_json(const ExperimentSpec& spec,
                                      const std::vector<TrialRecord>& records,
                                      const ExperimentSummary& sum) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json jr{{"trial", r.trial},
                      {"stream", r.stream},
                      {"success", r.success},
                      {"value", r.value},
                      {"wall_ms", r.wall_ms}};
    if (!r.extra.empty()) jr["extra"] = r.extra;
    recs.push_back(std::move(jr));
  }
  return nlohmann::json{{"spec", spec_to_json(spec)},
                        {"records", std::move(recs)},
                        {"summary",
                         {{"trials", sum.trials},
                          {"successes", sum.successes},
                          {"min_value", sum.min_value},
                          {"max_value", sum.max_value},
                          {"threshold_met", sum.threshold_met},
                          {"measure", sum.measure}}}};
}

inline std::vector<TrialRecord> records_from_json(const nlohmann::json& j) {
  std::vector<TrialRecord> records;
  for (const auto& jr : j.at("records")) {
    TrialRecord r;
    r.trial = jr.at("trial").get<std::uint32_t>();
    r.stream = jr.at("stream").get<std::uint64_t>();
    r.success = jr.at("success").get<bool>();
    r.value = jr.at("value").get<double>();
    r.wall_ms = jr.at("wall_ms").get<double>();
    if (jr.contains("extra"))
      r.extra = jr.at("extra").get<std::map<std::string, double>>();
    records.push_back(std::move(r));
  }
  return records;
}

// Plot-data mode: one (x, y) row per sweep point.
inline void emit_plot(const std::vector<std::pair<double, double>>& xy, std::ostream& out) {
  out << "p,success_fraction\n";
  for (const auto& [x, y] : xy) out << x << ',' << y << '\n';
}

}  // namespace wlcanon

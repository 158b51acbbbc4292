#pragma once
// JSON run reports. Counts and seeds are decimal strings (they exceed JSON's
// double-safe integer range), key order is fixed via ordered_json, and the
// volatile fields (timings, race winners) are separable so two runs of the
// same inputs compare byte-identical after strip_volatile.

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "vsl/core.hpp"
#include "vsl/dataset_io.hpp"
#include "vsl/search.hpp"

namespace vsl::report {

using json = nlohmann::ordered_json;

inline const char* engine_name(engine_kind e) {
  switch (e) {
    case engine_kind::bdd: return "bdd";
    case engine_kind::sat: return "sat";
    case engine_kind::race: return "race";
  }
  return "?";
}

// FNV-1a over the dataset's canonical CSV bytes; hex-encoded.
inline std::string dataset_digest(const dataset& d) {
  const std::string csv = io::write_csv(d);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : csv) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

inline json config_json(const learner_config& cfg) {
  json j;
  j["l_max"] = cfg.l_max;
  j["k_max"] = cfg.k_max;
  j["bound_b"] = cfg.bound_b;
  j["engine"] = engine_name(cfg.engine);
  j["overfit_policy"] = cfg.on_overfit == overfit_policy::fail ? "fail" : "continue";
  j["enum_cap"] = cfg.effective_enum_cap();
  j["seed"] = std::to_string(cfg.seed);
  j["external_solver_cmd"] = cfg.external_solver_cmd;
  j["max_conflicts"] = static_cast<std::int64_t>(cfg.max_conflicts);
  j["max_bdd_nodes"] = static_cast<std::uint64_t>(cfg.max_bdd_nodes);
  return j;
}

inline json to_json(const search::learn_report& rep, const dataset& d,
                    const learner_config& cfg) {
  json j;
  j["schema_version"] = 1;

  int positives = 0, negatives = 0;
  for (const sample& s : d.samples) (s.lab == label::positive ? positives : negatives)++;
  j["input"] = {
      {"digest", dataset_digest(d)},
      {"features", d.n},
      {"positives", positives},
      {"negatives", negatives},
  };
  j["config"] = config_json(cfg);

  j["visited"] = json::array();
  for (const search::subspace_result& sr : rep.visited) {
    json e;
    e["l"] = sr.spec.l;
    e["k"] = sr.spec.k;
    switch (sr.kind) {
      case search::count_kind::exact:
        e["outcome"] = "exact";
        e["cardinality"] = sr.cardinality.str();
        break;
      case search::count_kind::greater_than_bound:
        e["outcome"] = "greater_than_bound";
        e["threshold"] = sr.threshold;
        break;
      case search::count_kind::failed:
        e["outcome"] = "failed";
        e["failure"] = sr.failure;
        break;
    }
    if (!sr.members.empty()) {
      json ms = json::array();
      for (const hypothesis& h : sr.members) ms.push_back(to_string(h));
      e["members"] = std::move(ms);
    }
    e["engine_ran"] = sr.engine_ran;
    if (sr.engine_ran) e["winner"] = engine_name(sr.winner);
    e["elapsed_ms"] = sr.elapsed_ms;
    j["visited"].push_back(std::move(e));
  }

  json res;
  res["kind"] = search::to_string(rep.result);
  switch (rep.result) {
    case search::flow_result::solved: {
      res["l"] = rep.solved_spec->l;
      res["k"] = rep.solved_spec->k;
      res["cardinality"] = rep.cardinality.str();
      json hs = json::array();
      for (const hypothesis& h : rep.members) hs.push_back(to_string(h));
      res["hypotheses"] = std::move(hs);
      break;
    }
    case search::flow_result::overfit:
      res["l"] = rep.overfit_spec->l;
      res["k"] = rep.overfit_spec->k;
      break;
    case search::flow_result::conflict: {
      std::string bits;
      for (std::uint8_t b : rep.conflict_vector) bits += b ? '1' : '0';
      res["vector"] = bits;
      break;
    }
    case search::flow_result::failed:
      res["failure"] = rep.failure;
      break;
    case search::flow_result::no_fit:
      break;
  }
  j["result"] = std::move(res);
  j["elapsed_ms"] = rep.elapsed_ms;
  return j;
}

// Removes timing and race-order fields in place: total and per-sub-space
// elapsed_ms, and each entry's winner (a race's winner is scheduling noise).
inline void strip_volatile(json& j) {
  j.erase("elapsed_ms");
  if (auto it = j.find("visited"); it != j.end())
    for (json& e : *it) {
      e.erase("elapsed_ms");
      e.erase("winner");
    }
}

}  // namespace vsl::report

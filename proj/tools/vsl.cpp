// vsl: version-space learning runs, dataset generation, benchmark sweeps.
//
// learn  — run the sub-space flow on a CSV dataset, write a JSON report
// gen    — plant a target hypothesis and sample a labeled dataset
// bench  — timing/node-count sweeps emitted as CSV for plotting

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vsl/core.hpp"
#include "vsl/datagen.hpp"
#include "vsl/dataset_io.hpp"
#include "vsl/report_json.hpp"
#include "vsl/rng.hpp"
#include "vsl/search.hpp"

namespace {

using namespace vsl;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot write " + path);
  out << content;
}

// Accepts the core grammar plus '|' as a term separator, so shell users can
// avoid quoting plus signs: "x1&~x2 | x3" and "x1&~x2 + x3" both parse.
hypothesis parse_target(std::string text, int n) {
  for (char& c : text)
    if (c == '|') c = '+';
  return parse_hypothesis(text, n);
}

int exit_code_for(search::flow_result r) {
  switch (r) {
    case search::flow_result::solved: return 0;
    case search::flow_result::no_fit: return 2;
    case search::flow_result::overfit: return 3;
    case search::flow_result::conflict: return 4;
    case search::flow_result::failed: return 1;
  }
  return 1;
}

int cmd_learn(const std::string& data_path, learner_config cfg, const std::string& out_path) {
  dataset d;
  try {
    d = io::parse_csv(read_file(data_path));
  } catch (const error& e) {
    std::cerr << "vsl learn: " << data_path << ": " << e.what() << "\n";
    return 1;
  }

  search::learn_report rep;
  try {
    rep = search::learn(d, cfg);
  } catch (const error& e) {
    std::cerr << "vsl learn: " << e.what() << "\n";
    return 1;
  }

  const report::json j = report::to_json(rep, d, cfg);
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_file(out_path, j.dump(2) + "\n");
    std::cout << "result=" << search::to_string(rep.result) << " report=" << out_path << "\n";
  }
  return exit_code_for(rep.result);
}

int cmd_gen(int n, const std::string& target_text, int m_p, int m_n, std::uint64_t seed,
            bool witness, const std::string& out_path) {
  datagen::gen_spec g;
  g.n = n;
  g.target = parse_target(target_text, n);
  g.m_p = m_p;
  g.m_n = m_n;
  g.seed = seed;
  g.per_term_witness = witness;

  const datagen::gen_result r = datagen::generate(g);
  for (const std::string& w : r.warnings) std::cerr << "vsl gen: warning: " << w << "\n";

  const std::string csv = io::write_csv(r.data);
  if (out_path.empty())
    std::cout << csv;
  else
    write_file(out_path, csv);
  std::cerr << "target: " << to_string(g.target) << "\n";
  return 0;
}

// ---- bench sweeps ----

struct bench_input {
  dataset d;
  std::string origin;  // for the CSV comment line
};

bench_input bench_dataset(const std::string& data_path, int n, const std::string& target_text,
                          int m_p, int m_n, std::uint64_t seed) {
  if (!data_path.empty()) return {io::parse_csv(read_file(data_path)), data_path};
  if (target_text.empty())
    throw invalid_input("bench needs --data or a generated input (--n/--target/--mp/--mn)");
  datagen::gen_spec g;
  g.n = n;
  g.target = parse_target(target_text, n);
  g.m_p = m_p;
  g.m_n = m_n;
  g.seed = seed;
  return {datagen::generate(g).data, "planted:" + to_string(g.target)};
}

std::uint64_t now_ms_since(std::chrono::steady_clock::time_point t0) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
          .count());
}

// One row per (l, engine): cardinality/outcome plus runtime; the BDD column
// carries peak node counts, the SAT column conflict counts.
int bench_l_sweep(const bench_input& in, int l_from, int l_to, int k, const std::string& engine,
                  const learner_config& budget, std::ostream& os) {
  if (l_from < 1 || l_to < l_from) throw invalid_input("bench: empty l range");
  const bool run_bdd = engine == "bdd" || engine == "both";
  const bool run_sat = engine == "sat" || engine == "both";
  if (!run_bdd && !run_sat) throw invalid_input("bench: engine must be bdd, sat, or both");

  os << "l,k,engine,outcome,cardinality,elapsed_ms,peak_nodes,conflicts\n";
  for (int l = l_from; l <= l_to; ++l) {
    if (k > l || l > in.d.n * k) continue;
    if (run_bdd) {
      const auto t0 = std::chrono::steady_clock::now();
      std::string outcome;
      std::string card;
      std::size_t peak = 0;
      try {
        const bdd_learn::encoding_layout lay{in.d.n, k};
        bdd::manager m(lay.variable_count(), budget.max_bdd_nodes);
        bdd_learn::build_options bo;
        bo.trace = [&](const std::string&, std::size_t, std::size_t nodes) {
          if (nodes > peak) peak = nodes;
        };
        const auto built = bdd_learn::build_version_space(m, lay, in.d, {l, k}, bo);
        const auto sem = bdd_learn::semantic_cardinality(m, built.diagram, lay,
                                                         budget.effective_enum_cap(),
                                                         static_cast<std::size_t>(budget.bound_b));
        if (sem.outcome == bdd_learn::semantic_count::kind::exact) {
          outcome = "exact";
          card = sem.semantic_cardinality.str();
        } else {
          outcome = "greater_than_cap";
          card = "";
        }
      } catch (const error& e) {
        outcome = "failed";
        card = "";
      }
      os << l << ',' << k << ",bdd," << outcome << ',' << card << ',' << now_ms_since(t0) << ','
         << peak << ",\n";
    }
    if (run_sat) {
      const auto t0 = std::chrono::steady_clock::now();
      std::string outcome;
      std::string card;
      std::uint64_t conflicts = 0;
      try {
        sat_learn::engine_options so;
        so.enum_cap = budget.effective_enum_cap();
        so.bound_b = budget.bound_b;
        if (budget.max_conflicts > 0)
          so.limits.max_conflicts = static_cast<std::uint64_t>(budget.max_conflicts);
        const auto r = sat_learn::run_subspace(in.d, {l, k}, so);
        conflicts = r.conflicts;
        switch (r.outcome) {
          case sat_learn::engine_result::kind::exact:
            outcome = "exact";
            card = r.semantic_cardinality.str();
            break;
          case sat_learn::engine_result::kind::above_bound:
            outcome = "above_bound";
            break;
          case sat_learn::engine_result::kind::greater_than_cap:
            outcome = "greater_than_cap";
            break;
        }
      } catch (const error& e) {
        outcome = "failed";
      }
      os << l << ',' << k << ",sat," << outcome << ',' << card << ',' << now_ms_since(t0) << ",,"
         << conflicts << "\n";
    }
  }
  return 0;
}

// Node count of the growing version-space diagram after every conjunction
// step, in the configured sample order.
int bench_sample_trace(const bench_input& in, int l, int k, const std::string& order,
                       const learner_config& budget, std::ostream& os) {
  bdd_learn::build_options bo;
  if (order == "pos-first")
    bo.policy = bdd_learn::build_options::sample_policy::pos_first;
  else if (order == "neg-first")
    bo.policy = bdd_learn::build_options::sample_policy::neg_first;
  else if (order == "heuristic")
    bo.policy = bdd_learn::build_options::sample_policy::heuristic;
  else
    throw invalid_input("bench: order must be pos-first, neg-first, or heuristic");

  os << "samples_processed,nodes\n";
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  bo.trace = [&](const std::string& step, std::size_t done, std::size_t nodes) {
    if (step == "pos_sample" || step == "neg_sample") rows.emplace_back(done, nodes);
  };
  const bdd_learn::encoding_layout lay{in.d.n, k};
  bdd::manager m(lay.variable_count(), budget.max_bdd_nodes);
  bdd_learn::build_version_space(m, lay, in.d, {l, k}, bo);
  for (const auto& [done, nodes] : rows) os << done << ',' << nodes << "\n";
  return 0;
}

// Shuffles the dataset per run (seeded), builds the diagram under both
// orders, reports per-run times and the geometric means.
int bench_order_compare(const bench_input& in, int l, int k, int runs, std::uint64_t seed,
                        const learner_config& budget, std::ostream& os) {
  if (runs < 1) throw invalid_input("bench: runs must be >= 1");
  os << "run,pos_first_ms,neg_first_ms\n";
  double log_sum_pos = 0.0, log_sum_neg = 0.0;
  xoshiro256ss rng(seed);
  for (int r = 0; r < runs; ++r) {
    dataset shuffled = in.d;
    for (std::size_t i = shuffled.samples.size(); i > 1; --i)
      std::swap(shuffled.samples[i - 1], shuffled.samples[rng.below(i)]);

    std::uint64_t ms[2] = {0, 0};
    const bdd_learn::build_options::sample_policy pols[2] = {
        bdd_learn::build_options::sample_policy::pos_first,
        bdd_learn::build_options::sample_policy::neg_first};
    for (int p = 0; p < 2; ++p) {
      bdd_learn::build_options bo;
      bo.policy = pols[p];
      const bdd_learn::encoding_layout lay{shuffled.n, k};
      bdd::manager m(lay.variable_count(), budget.max_bdd_nodes);
      const auto t0 = std::chrono::steady_clock::now();
      bdd_learn::build_version_space(m, lay, shuffled, {l, k}, bo);
      ms[p] = now_ms_since(t0);
    }
    os << (r + 1) << ',' << ms[0] << ',' << ms[1] << "\n";
    log_sum_pos += std::log(static_cast<double>(ms[0]) + 1.0);
    log_sum_neg += std::log(static_cast<double>(ms[1]) + 1.0);
  }
  os << "geomean," << std::exp(log_sum_pos / runs) - 1.0 << ','
     << std::exp(log_sum_neg / runs) - 1.0 << "\n";
  return 0;
}

// Sub-space constraint conjoined before vs after the samples.
int bench_subspace_position(const bench_input& in, int l, int k, const learner_config& budget,
                            std::ostream& os) {
  os << "position,elapsed_ms,peak_nodes\n";
  const bdd_learn::build_options::constraint_position poss[2] = {
      bdd_learn::build_options::constraint_position::before_samples,
      bdd_learn::build_options::constraint_position::after_samples};
  const char* names[2] = {"before_samples", "after_samples"};
  for (int p = 0; p < 2; ++p) {
    bdd_learn::build_options bo;
    bo.subspace_position = poss[p];
    std::size_t peak = 0;
    bo.trace = [&](const std::string&, std::size_t, std::size_t nodes) {
      if (nodes > peak) peak = nodes;
    };
    const bdd_learn::encoding_layout lay{in.d.n, k};
    bdd::manager m(lay.variable_count(), budget.max_bdd_nodes);
    const auto t0 = std::chrono::steady_clock::now();
    bdd_learn::build_version_space(m, lay, in.d, {l, k}, bo);
    os << names[p] << ',' << now_ms_since(t0) << ',' << peak << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"version-space cardinality learning over k-term DNF"};
  app.require_subcommand(1);

  // learn
  auto* learn = app.add_subcommand("learn", "run the sub-space flow on a dataset");
  std::string data_path, out_path, engine_name = "race", overfit_name = "fail", solver_cmd;
  learner_config cfg;
  learn->add_option("--data", data_path, "dataset CSV")->required();
  learn->add_option("--lmax", cfg.l_max, "largest literal count")->required();
  learn->add_option("--kmax", cfg.k_max, "largest term count")->default_val(1);
  learn->add_option("--bound", cfg.bound_b, "version-space cardinality bound B")->default_val(10);
  learn->add_option("--engine", engine_name, "bdd | sat | race")->default_val("race");
  learn->add_option("--overfit", overfit_name, "fail | continue")->default_val("fail");
  learn->add_option("--enum-cap", cfg.enum_cap, "syntactic enumeration cap (0 = auto)");
  learn->add_option("--seed", cfg.seed, "seed echoed into the report");
  learn->add_option("--solver-cmd", solver_cmd,
                    "external DIMACS solver command (also VSL_SOLVER_CMD)");
  learn->add_option("--max-conflicts", cfg.max_conflicts, "SAT budget per sub-space (0 = off)");
  learn->add_option("--max-bdd-nodes", cfg.max_bdd_nodes, "diagram node budget per sub-space");
  learn->add_option("--out", out_path, "report path (default: stdout)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a planted-concept dataset");
  int g_n = 0, g_mp = 0, g_mn = 0;
  std::uint64_t g_seed = 0;
  std::string g_target, g_out;
  bool g_witness = false;
  gen->add_option("--n", g_n, "feature count")->required();
  gen->add_option("--target", g_target, "target hypothesis, e.g. \"x1&~x2 + x3\"")->required();
  gen->add_option("--mp", g_mp, "positive sample count")->required();
  gen->add_option("--mn", g_mn, "negative sample count")->required();
  gen->add_option("--seed", g_seed, "generator seed");
  gen->add_flag("--witness", g_witness, "plant a per-term witness positive");
  gen->add_option("--out", g_out, "CSV path (default: stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "emit timing/node-count CSV sweeps");
  std::string b_mode, b_data, b_target, b_engine = "both", b_order = "heuristic", b_out;
  int b_n = 0, b_mp = 0, b_mn = 0, b_lfrom = 1, b_lto = 0, b_l = 0, b_k = 1, b_runs = 10;
  std::uint64_t b_seed = 0;
  learner_config b_budget;
  bench->add_option("--mode", b_mode, "l-sweep | sample-trace | order-compare | subspace-position")
      ->required();
  bench->add_option("--data", b_data, "dataset CSV (alternative to --n/--target)");
  bench->add_option("--n", b_n, "feature count for a generated input");
  bench->add_option("--target", b_target, "planted target for a generated input");
  bench->add_option("--mp", b_mp, "positives for a generated input");
  bench->add_option("--mn", b_mn, "negatives for a generated input");
  bench->add_option("--seed", b_seed, "generation/shuffle seed");
  bench->add_option("--engine", b_engine, "l-sweep: bdd | sat | both");
  bench->add_option("--l-from", b_lfrom, "l-sweep: first l");
  bench->add_option("--l-to", b_lto, "l-sweep: last l");
  bench->add_option("--l", b_l, "literal count for the single-spec modes");
  bench->add_option("--k", b_k, "term count");
  bench->add_option("--order", b_order, "sample-trace: pos-first | neg-first | heuristic");
  bench->add_option("--runs", b_runs, "order-compare: sample size for the geometric mean");
  bench->add_option("--max-bdd-nodes", b_budget.max_bdd_nodes, "diagram node budget");
  bench->add_option("--max-conflicts", b_budget.max_conflicts, "SAT conflict budget");
  bench->add_option("--out", b_out, "CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (learn->parsed()) {
      if (engine_name == "bdd")
        cfg.engine = engine_kind::bdd;
      else if (engine_name == "sat")
        cfg.engine = engine_kind::sat;
      else if (engine_name == "race")
        cfg.engine = engine_kind::race;
      else
        throw invalid_input("--engine must be bdd, sat, or race");
      if (overfit_name == "fail")
        cfg.on_overfit = overfit_policy::fail;
      else if (overfit_name == "continue")
        cfg.on_overfit = overfit_policy::continue_search;
      else
        throw invalid_input("--overfit must be fail or continue");
      if (solver_cmd.empty())
        if (const char* env = std::getenv("VSL_SOLVER_CMD")) solver_cmd = env;
      cfg.external_solver_cmd = solver_cmd;
      return cmd_learn(data_path, cfg, out_path);
    }
    if (gen->parsed()) return cmd_gen(g_n, g_target, g_mp, g_mn, g_seed, g_witness, g_out);
    if (bench->parsed()) {
      const bench_input in = bench_dataset(b_data, b_n, b_target, b_mp, b_mn, b_seed);
      std::ofstream file;
      if (!b_out.empty()) {
        file.open(b_out, std::ios::binary);
        if (!file) throw invalid_input("cannot write " + b_out);
      }
      std::ostream& os = b_out.empty() ? std::cout : file;
      if (b_mode == "l-sweep")
        return bench_l_sweep(in, b_lfrom, b_lto, b_k, b_engine, b_budget, os);
      if (b_mode == "sample-trace")
        return bench_sample_trace(in, b_l, b_k, b_order, b_budget, os);
      if (b_mode == "order-compare")
        return bench_order_compare(in, b_l, b_k, b_runs, b_seed, b_budget, os);
      if (b_mode == "subspace-position")
        return bench_subspace_position(in, b_l, b_k, b_budget, os);
      throw invalid_input("unknown bench mode: " + b_mode);
    }
  } catch (const vsl::error& e) {
    std::cerr << "vsl: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "vsl: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

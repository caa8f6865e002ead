// Command-line front end: simulate | analyze | fpt | oracle | sweep | verify.
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vage/analytic.hpp"
#include "vage/engine.hpp"
#include "vage/experiment.hpp"
#include "vage/io.hpp"
#include "vage/metrics.hpp"
#include "vage/switching.hpp"
#include "vage/topology.hpp"

namespace {

std::vector<double> parse_time_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

int cmd_simulate(const std::string& topo1_spec, const std::string& topo2_spec,
                 const std::string& holding12, const std::string& holding21, int n,
                 double lambda_e, double lambda, double horizon, double warmup,
                 std::uint64_t seed, const std::string& snapshots, int initial_state,
                 const std::string& out_json, const std::string& out_csv) {
  vage::SimConfig cfg;
  cfg.lambda_e = lambda_e;
  cfg.lambda = lambda;
  cfg.horizon = horizon;
  cfg.warmup = warmup;
  cfg.seed = seed;
  cfg.initial_state = initial_state;
  if (!snapshots.empty()) cfg.snapshot_times = parse_time_list(snapshots);

  const auto f1 = vage::parse_topology_spec(topo1_spec, lambda);
  const auto t1 = vage::make_topology(f1, n);
  vage::SimResult result;
  if (topo2_spec.empty()) {
    result = vage::run_static(cfg, t1);
  } else {
    if (holding12.empty())
      throw std::runtime_error("simulate: --topology2 needs --holding");
    const auto f2 = vage::parse_topology_spec(topo2_spec, lambda);
    const auto t2 = vage::make_topology(f2, n);
    vage::SwitchConfig sw;
    sw.family_12 = vage::parse_holding_spec(holding12);
    sw.family_21 = holding21.empty() ? sw.family_12 : vage::parse_holding_spec(holding21);
    result = vage::run(cfg, t1, t2, sw);
  }
  if (out_json == "-") {
    std::cout << vage::to_json(result).dump(2) << "\n";
  } else {
    vage::write_result_json(result, out_json);
  }
  if (!out_csv.empty()) vage::write_per_node_csv(result, out_csv);
  std::cerr << "network_avg " << result.network_avg << ", n0 " << result.n0_count
            << ", switches " << result.occupancy.switch_count << "\n";
  return 0;
}

int cmd_analyze(const std::string& in_path, double typical_c) {
  const auto result = vage::load_result(in_path);
  const auto typical = vage::typical_set(result, typical_c);
  nlohmann::json j;
  j["network_avg"] = vage::network_average(result);
  j["typical_set"] = {{"fraction", typical.fraction},
                      {"threshold", typical.threshold_used},
                      {"criterion", typical.criterion},
                      {"member_count", typical.member_ids.size()},
                      {"members", typical.member_ids}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_fpt(const std::string& topo_spec, int n, int target, int samples, double lambda,
            double lambda_s, std::uint64_t seed, double cap, const std::string& out_path) {
  const auto family = vage::parse_topology_spec(topo_spec, lambda);
  const auto topo = vage::make_topology(family, n);
  vage::Rng rng(seed);
  std::string body = "sample,fpt\n";
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto s = vage::first_passage_sample(topo, 1.0, lambda, lambda_s, target, rng, cap);
    body += std::to_string(i) + "," + vage::detail::fmt_double(s.fpt) + "\n";
    sum += s.fpt;
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << body;
  } else {
    vage::write_text_file(out_path, body);
  }
  std::cerr << "mean fpt over " << samples << " samples: " << sum / samples << "\n";
  return 0;
}

int cmd_oracle(bool complete_age, int n, double lambda_e, double lambda, double lambda_s) {
  if (!complete_age) throw std::runtime_error("oracle: nothing requested (use --complete-age)");
  std::cout << vage::detail::fmt_double(vage::shs_complete_age(n, lambda_e, lambda, lambda_s))
            << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path) {
  auto spec = vage::parse_config(config_path);
  if (spec.output_dir.empty()) spec.output_dir = "out";
  const auto sweep = vage::run_sweep(spec);
  int failures = 0;
  for (const auto& row : sweep.rows)
    if (row.status != "ok") {
      ++failures;
      std::cerr << "cell failed: n=" << row.n << " regime=" << row.regime
                << " rep=" << row.replication << ": " << row.status << "\n";
    }
  std::cout << sweep.rows.size() << " rows -> " << spec.output_dir << "/rows.csv";
  if (failures) std::cout << " (" << failures << " failed)";
  std::cout << "\n";
  return failures == 0 ? 0 : 1;
}

int cmd_verify(int theorem, const std::string& config_path, const std::string& from_rows) {
  auto spec = vage::parse_config(config_path);
  if (spec.output_dir.empty()) spec.output_dir = "out";
  vage::VerifyReport report;
  if (!from_rows.empty()) {
    // re-analysis path: verdicts recomputed from persisted rows only
    const auto rows = vage::load_rows_csv(from_rows);
    const auto full = vage::detail::with_verify_regimes(spec, theorem);
    report = theorem == 1 ? vage::theorem1_verdicts(full, rows)
                          : vage::theorem2_verdicts(full, rows);
  } else {
    report = theorem == 1 ? vage::verify_theorem1(spec) : vage::verify_theorem2(spec);
  }
  std::cout << report.title << "\n";
  for (const auto& c : report.checks)
    std::cout << (c.pass ? "PASS" : "FAIL") << " - " << c.name << ": " << c.detail << "\n";
  std::cout << (report.passed() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "\n";
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"version-age gossip network simulation lab"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one simulation and write its result");
  std::string topo1, topo2, holding12, holding21, snapshots, out_json = "-", out_csv;
  int n = 64, initial_state = 1;
  double lambda_e = 1.0, lambda = 1.0, horizon = 10000.0, warmup = 100.0;
  std::uint64_t seed = 1;
  sim->add_option("--topology1", topo1, "first topology spec")->required();
  sim->add_option("--topology2", topo2, "second topology spec (omit for a static run)");
  sim->add_option("--holding", holding12, "holding family for state 1 (kind:params)");
  sim->add_option("--holding21", holding21, "holding family for state 2 (defaults to --holding)");
  sim->add_option("--n", n, "node count")->required();
  sim->add_option("--lambda-e", lambda_e, "source self-update rate");
  sim->add_option("--lambda", lambda, "per-node gossip budget (= total source rate)");
  sim->add_option("--horizon", horizon, "simulated time span")->required();
  sim->add_option("--warmup", warmup, "discarded initial window");
  sim->add_option("--seed", seed, "rng seed");
  sim->add_option("--snapshots", snapshots, "comma-separated snapshot times");
  sim->add_option("--initial-state", initial_state, "CTMC start state (1 or 2)");
  sim->add_option("--out", out_json, "result JSON path ('-' for stdout)");
  sim->add_option("--csv", out_csv, "optional per-node CSV path");

  // analyze
  auto* ana = app.add_subcommand("analyze", "typical-set analysis of a saved result");
  std::string in_path;
  double typical_c = 3.0;
  ana->add_option("--in", in_path, "result JSON path")->required();
  ana->add_option("--typical-c", typical_c, "typical-set multiplier (>= 1)");

  // fpt
  auto* fpt = app.add_subcommand("fpt", "sample source->node first passage times");
  std::string fpt_topo, fpt_out;
  int fpt_n = 64, fpt_target = 0, fpt_samples = 1000;
  double fpt_lambda = 1.0, fpt_lambda_s = 1.0, fpt_cap = 1e7;
  std::uint64_t fpt_seed = 1;
  fpt->add_option("--topology", fpt_topo, "topology spec")->required();
  fpt->add_option("--n", fpt_n, "node count")->required();
  fpt->add_option("--target", fpt_target, "target node id")->required();
  fpt->add_option("--samples", fpt_samples, "number of samples");
  fpt->add_option("--lambda", fpt_lambda, "per-node gossip budget");
  fpt->add_option("--lambda-s", fpt_lambda_s, "total source rate");
  fpt->add_option("--seed", fpt_seed, "rng seed");
  fpt->add_option("--cap", fpt_cap, "give up after this much simulated time");
  fpt->add_option("--out", fpt_out, "CSV output path ('-' for stdout)");

  // oracle
  auto* ora = app.add_subcommand("oracle", "closed-form values");
  bool complete_age = false;
  int ora_n = 64;
  double ora_le = 1.0, ora_l = 1.0, ora_ls = 1.0;
  ora->add_flag("--complete-age", complete_age, "expected age of the fully-connected network");
  ora->add_option("--n", ora_n, "node count")->required();
  ora->add_option("--lambda-e", ora_le, "source self-update rate");
  ora->add_option("--lambda", ora_l, "per-node gossip budget");
  ora->add_option("--lambda-s", ora_ls, "total source rate");

  // sweep
  auto* swp = app.add_subcommand("sweep", "run a config-driven sweep");
  std::string sweep_config;
  swp->add_option("--config", sweep_config, "sweep config JSON")->required();

  // verify
  auto* ver = app.add_subcommand("verify", "run a theorem verification harness");
  int theorem = 1;
  std::string verify_config, from_rows;
  ver->add_option("--theorem", theorem, "1 (fast switching) or 2 (slow switching)")
      ->check(CLI::IsMember({1, 2}))
      ->required();
  ver->add_option("--config", verify_config, "sweep config JSON")->required();
  ver->add_option("--from-rows", from_rows, "recompute verdicts from a saved rows.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(topo1, topo2, holding12, holding21, n, lambda_e, lambda, horizon,
                          warmup, seed, snapshots, initial_state, out_json, out_csv);
    if (ana->parsed()) return cmd_analyze(in_path, typical_c);
    if (fpt->parsed())
      return cmd_fpt(fpt_topo, fpt_n, fpt_target, fpt_samples, fpt_lambda, fpt_lambda_s,
                     fpt_seed, fpt_cap, fpt_out);
    if (ora->parsed()) return cmd_oracle(complete_age, ora_n, ora_le, ora_l, ora_ls);
    if (swp->parsed()) return cmd_sweep(sweep_config);
    if (ver->parsed()) return cmd_verify(theorem, verify_config, from_rows);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

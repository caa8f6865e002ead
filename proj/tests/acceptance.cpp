// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured numbers. Runs are seeded, so every figure here is
// reproducible bit for bit.
#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "vage/analytic.hpp"
#include "vage/engine.hpp"
#include "vage/experiment.hpp"
#include "vage/io.hpp"
#include "vage/metrics.hpp"
#include "vage/switching.hpp"
#include "vage/topology.hpp"

using namespace vage;

namespace {

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[criterion %2d] %s - %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

SimConfig cfg_for(double horizon, double warmup, std::uint64_t seed) {
  SimConfig cfg;
  cfg.horizon = horizon;
  cfg.warmup = warmup;
  cfg.seed = seed;
  return cfg;
}

ExperimentSpec fc_ring_spec(std::vector<int> grid, std::uint64_t base_seed) {
  ExperimentSpec spec;
  spec.topology1 = parse_topology_spec("complete");
  spec.topology2 = parse_topology_spec("ring");
  spec.n_grid = std::move(grid);
  spec.replications = 3;
  spec.base_seed = base_seed;
  spec.max_threads = 0;
  return spec;
}

}  // namespace

TEST_CASE("criterion 1: static complete graph keeps the logarithmic class", "[acceptance]") {
  Timer timer;
  std::vector<std::pair<double, double>> points;
  double worst_err = 0.0;
  std::int64_t violations = 0;
  for (int n : {64, 128, 256, 512, 1024, 2048, 4096}) {
    const auto res = run_static(cfg_for(n <= 512 ? 8000.0 : 3000.0, 200.0, 1000 + n),
                                make_complete(n, 1.0));
    violations += res.invariant_violations;
    points.emplace_back(n, res.network_avg);
    if (n <= 512) {
      const double err = std::abs(res.network_avg / shs_complete_age(n, 1.0, 1.0, 1.0) - 1.0);
      worst_err = std::max(worst_err, err);
    }
  }
  const auto fit = fit_scaling(points);
  const bool class_ok = fit.selected == FitModel::LogLinear;
  const bool oracle_ok = worst_err <= 0.05;
  report(1, class_ok && oracle_ok && violations == 0,
         "loglinear selected (r2 " + fmt(fit.loglinear.r2) + " vs power " + fmt(fit.power.r2) +
             "), worst oracle gap at n<=512 " + fmt(worst_err * 100, 2) + "% (<=5%), " +
             fmt(timer.secs(), 1) + "s");
  REQUIRE(class_ok);
  REQUIRE(oracle_ok);
  REQUIRE(violations == 0);
}

TEST_CASE("criterion 2: static ring scales as sqrt(n)", "[acceptance]") {
  Timer timer;
  std::vector<std::pair<double, double>> points;
  std::int64_t violations = 0;
  for (int n : {64, 128, 256, 512, 1024}) {
    double sum = 0.0;
    for (int rep = 0; rep < 3; ++rep) {
      const double horizon = std::max(200.0 * std::sqrt(static_cast<double>(n)), 2000.0);
      const auto res =
          run_static(cfg_for(horizon, horizon / 20.0, 2000 + n + rep), make_ring(n, 1.0));
      violations += res.invariant_violations;
      sum += res.network_avg;
    }
    points.emplace_back(n, sum / 3.0);
  }
  const auto fit = fit_scaling(points);
  const bool alpha_ok = std::abs(fit.power.alpha - 0.5) <= 0.07;
  const bool r2_ok = fit.power.r2 >= 0.98;
  report(2, alpha_ok && r2_ok && violations == 0,
         "alpha " + fmt(fit.power.alpha) + " (0.5 +- 0.07), r2 " + fmt(fit.power.r2) +
             " (>= 0.98), " + fmt(timer.secs(), 1) + "s");
  REQUIRE(alpha_ok);
  REQUIRE(r2_ok);
  REQUIRE(violations == 0);
}

TEST_CASE("criterion 3: clique+line part-wise scaling", "[acceptance]") {
  Timer timer;
  std::vector<std::pair<double, double>> net, line_end, clique;
  std::int64_t violations = 0;
  for (int n : {216, 512, 1000, 1728}) {
    double ns = 0.0, ls = 0.0, cs = 0.0;
    const int reps = 2;
    for (int rep = 0; rep < reps; ++rep) {
      const double horizon = 300.0 * std::pow(static_cast<double>(n), 2.0 / 3.0);
      const auto res = run_static(cfg_for(horizon, horizon / 20.0, 3000 + n + rep),
                                  make_clique_line(n, 1.0));
      violations += res.invariant_violations;
      ns += res.network_avg;
      ls += res.per_node_avg_age[n - 1];  // far end of the line
      cs += res.per_node_avg_age[1];      // plain clique node
    }
    net.emplace_back(n, ns / reps);
    line_end.emplace_back(n, ls / reps);
    clique.emplace_back(n, cs / reps);
  }
  const auto net_fit = fit_scaling(net);
  const auto line_fit = fit_scaling(line_end);
  const auto clique_fit = fit_scaling(clique);
  const bool net_ok = std::abs(net_fit.power.alpha - 1.0 / 3.0) <= 0.08;
  const bool line_ok = std::abs(line_fit.power.alpha - 2.0 / 3.0) <= 0.10;
  const bool clique_ok = clique_fit.loglinear.r2 >= 0.98;
  report(3, net_ok && line_ok && clique_ok && violations == 0,
         "network alpha " + fmt(net_fit.power.alpha) + " (want 1/3 +- 0.08), line-end alpha " +
             fmt(line_fit.power.alpha) + " (want 2/3 +- 0.10), clique loglinear r2 " +
             fmt(clique_fit.loglinear.r2) + " (>= 0.98; selection picks " +
             (clique_fit.selected == FitModel::LogLinear ? "loglinear" : "power") + "), " +
             fmt(timer.secs(), 1) + "s");
  CHECK(net_ok);
  CHECK(line_ok);
  REQUIRE(clique_ok);
  REQUIRE(violations == 0);
}

TEST_CASE("criterion 4: fast switching keeps the faster class", "[acceptance]") {
  Timer timer;
  auto spec = fc_ring_spec({64, 128, 256, 512}, 11);
  spec.regimes = {{"static1", RegimeMode::Static1, {}, {}},
                  {"h-const", RegimeMode::Switched, make_holding(HoldingKind::Constant, 1.0),
                   make_holding(HoldingKind::Constant, 1.0)},
                  {"h-logn", RegimeMode::Switched, make_holding(HoldingKind::LogN, 1.0),
                   make_holding(HoldingKind::LogN, 1.0)}};
  const auto sweep = run_sweep(spec);
  std::int64_t violations = 0;
  for (const auto& res : sweep.results) violations += res.invariant_violations;
  const auto rep = theorem1_verdicts(spec, sweep.rows);
  std::string detail;
  for (const auto& c : rep.checks) detail += (c.pass ? "" : "FAILED ") + c.name + "; ";
  report(4, rep.passed() && violations == 0, detail + fmt(timer.secs(), 1) + "s");
  for (const auto& c : rep.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }
  REQUIRE(rep.passed());
  REQUIRE(violations == 0);
}

TEST_CASE("criterion 5: slow switching hands the typical set to the slower class",
          "[acceptance]") {
  Timer timer;
  auto spec = fc_ring_spec({64, 128, 256, 512, 1024}, 1);
  spec.regimes = {{"static1", RegimeMode::Static1, {}, {}},
                  {"static2", RegimeMode::Static2, {}, {}},
                  {"h-nlogn", RegimeMode::Switched, make_holding(HoldingKind::NLogN, 2.0),
                   make_holding(HoldingKind::NLogN, 2.0)}};
  const auto sweep = run_sweep(spec);
  std::int64_t violations = 0;
  for (const auto& res : sweep.results) violations += res.invariant_violations;
  const auto rep = theorem2_verdicts(spec, sweep.rows);
  const auto& fit = rep.fits.at("h-nlogn typical");
  report(5, rep.passed() && violations == 0,
         "typical-set alpha " + fmt(fit.power.alpha) + " (0.5 +- 0.07), power r2 " +
             fmt(fit.power.r2) + ", " + fmt(timer.secs(), 1) + "s");
  for (const auto& c : rep.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }
  REQUIRE(rep.passed());
  REQUIRE(violations == 0);
}

TEST_CASE("criterion 6: occupancy matches the stationary chain", "[acceptance]") {
  Timer timer;
  const auto t1 = make_complete(8, 1.0);
  const auto t2 = make_ring(8, 1.0);

  const SwitchConfig even{make_holding(HoldingKind::Constant, 1.0),
                          make_holding(HoldingKind::Constant, 1.0)};
  const auto sym = run(cfg_for(22000.0, 0.0, 61), t1, t2, even);
  const bool sym_switches = sym.occupancy.switch_count >= 10000;
  const bool sym_ok = std::abs(sym.occupancy.frac_state1 - 0.5) <= 0.02;

  // q12 = 2, q21 = 1 via holding means 0.5 and 1
  const SwitchConfig skewed{make_holding(HoldingKind::Constant, 0.5),
                            make_holding(HoldingKind::Constant, 1.0)};
  const auto skew = run(cfg_for(12000.0, 0.0, 62), t1, t2, skewed);
  const bool skew_ok = std::abs(skew.occupancy.frac_state1 - 1.0 / 3.0) <= 0.02;

  report(6,
         sym_switches && sym_ok && skew_ok &&
             sym.invariant_violations + skew.invariant_violations == 0,
         "symmetric frac1 " + fmt(sym.occupancy.frac_state1) + " over " +
             std::to_string(sym.occupancy.switch_count) + " switches; (2,1) frac1 " +
             fmt(skew.occupancy.frac_state1) + " (1/3 +- 0.02), " + fmt(timer.secs(), 1) + "s");
  REQUIRE(sym_switches);
  REQUIRE(sym_ok);
  REQUIRE(skew_ok);
  REQUIRE(sym.invariant_violations == 0);
  REQUIRE(skew.invariant_violations == 0);
}

TEST_CASE("criterion 7: source counting stays in the Chebyshev band", "[acceptance]") {
  Timer timer;
  bool all_ok = true;
  std::string detail;
  struct Probe {
    double lambda_e, horizon;
    std::uint64_t seed;
  };
  for (const auto& p : {Probe{1.0, 22000.0, 71}, Probe{1.0, 50000.0, 72}, Probe{2.0, 6000.0, 73}}) {
    SimConfig cfg = cfg_for(p.horizon, 0.0, p.seed);
    cfg.lambda_e = p.lambda_e;
    const auto res = run_static(cfg, make_complete(16, 1.0));
    const double lam_t = p.lambda_e * p.horizon;
    const double gap = std::abs(static_cast<double>(res.n0_count) / lam_t - 1.0);
    const double band = 4.0 / std::sqrt(lam_t);
    all_ok = all_ok && gap <= band && lam_t >= 10000.0;
    detail += "gap " + fmt(gap, 5) + " <= " + fmt(band, 5) + "; ";
  }
  report(7, all_ok, detail + fmt(timer.secs(), 1) + "s");
  REQUIRE(all_ok);
}

TEST_CASE("criterion 8: coupon-collector moments and tail bound", "[acceptance]") {
  Timer timer;
  Rng rng(81);
  bool moments_ok = true;
  std::string detail;
  for (long long n : {10, 100, 1000}) {
    const auto m = coupon_collector_moments(n, 1.0);
    const int trials = 10000;
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      double maxv = 0.0;
      for (long long i = 0; i < n; ++i)
        maxv = std::max(maxv, rng.exponential(1.0 / static_cast<double>(n)));
      sum += maxv;
      sum_sq += maxv * maxv;
    }
    const double mean = sum / trials;
    const double var = sum_sq / trials - mean * mean;
    const bool mean_ok = std::abs(mean / m.mean - 1.0) <= 0.02;
    const bool var_ok = std::abs(var / m.variance - 1.0) <= 0.10;
    moments_ok = moments_ok && mean_ok && var_ok;
    detail += "n=" + std::to_string(n) + " mean gap " + fmt(std::abs(mean / m.mean - 1.0), 4) +
              " var gap " + fmt(std::abs(var / m.variance - 1.0), 4) + "; ";
  }
  const double tail = chebyshev_direct_update_tail(10000);
  const bool tail_ok = std::abs(tail - 0.0194) <= 1e-4;
  report(8, moments_ok && tail_ok,
         detail + "tail(1e4) " + fmt(tail, 6) + " (0.0194 +- 1e-4), " + fmt(timer.secs(), 1) +
             "s");
  REQUIRE(moments_ok);
  REQUIRE(tail_ok);
}

TEST_CASE("criterion 9: stationary ages match the first-passage composite", "[acceptance]") {
  Timer timer;
  const int n = 64, samples = 10000;
  const double spacing = 20.0, warm = 60.0;
  SimConfig cfg = cfg_for(warm + spacing * samples + 1.0, warm, 77);
  for (int k = 0; k < samples; ++k) cfg.snapshot_times.push_back(warm + spacing * (k + 1));
  const auto res = run_static(cfg, make_complete(n, 1.0));
  std::vector<double> snapshot_ages;
  for (const auto& s : res.snapshots)
    snapshot_ages.push_back(static_cast<double>(s.ages[0]));

  const auto topo = make_complete(n, 1.0);
  Rng rng(78);
  std::vector<double> composite;
  for (int k = 0; k < samples; ++k) {
    const double fpt = first_passage_sample(topo, 1.0, 1.0, 1.0, 0, rng).fpt;
    composite.push_back(static_cast<double>(rng.poisson(1.0 * fpt)));
  }
  const double d = ks_distance(snapshot_ages, composite);
  const bool ok = d <= 0.05 && snapshot_ages.size() == samples;
  report(9, ok && res.invariant_violations == 0,
         "ks " + fmt(d) + " (<= 0.05) over 1e4 samples each, " + fmt(timer.secs(), 1) + "s");
  REQUIRE(ok);
  REQUIRE(res.invariant_violations == 0);
}

TEST_CASE("criterion 10: determinism and runtime invariants", "[acceptance]") {
  Timer timer;
  const auto t1 = make_complete(64, 1.0);
  const auto t2 = make_ring(64, 1.0);
  const SwitchConfig sw{make_holding(HoldingKind::Constant, 1.0),
                        make_holding(HoldingKind::Constant, 1.0)};
  SimConfig cfg = cfg_for(2000.0, 50.0, 4242);
  cfg.snapshot_times = {500.0, 1500.0};
  const auto a = run(cfg, t1, t2, sw);
  const auto b = run(cfg, t1, t2, sw);
  const bool switched_identical = to_json(a).dump() == to_json(b).dump();

  const auto cl = make_clique_line(216, 1.0);
  const auto sa = run_static(cfg_for(5000.0, 100.0, 4243), cl);
  const auto sb = run_static(cfg_for(5000.0, 100.0, 4243), cl);
  const bool static_identical = to_json(sa).dump() == to_json(sb).dump();

  const auto sev = run(cfg_for(3000.0, 0.0, 4244), t1, make_disconnected(64, true),
                       SwitchRates{1.0, 1.0});
  const std::int64_t violations = a.invariant_violations + sa.invariant_violations +
                                  sev.invariant_violations;
  const bool conserved = a.events.total() == a.events.source_self + a.events.source_to_node +
                                                 a.events.gossip_state1 +
                                                 a.events.gossip_state2 + a.events.switches &&
                         a.occupancy.switch_count == a.events.switches;
  report(10, switched_identical && static_identical && violations == 0 && conserved,
         std::string("byte-identical reruns: switched ") +
             (switched_identical ? "yes" : "NO") + ", static " +
             (static_identical ? "yes" : "NO") + "; violations " + std::to_string(violations) +
             "; tallies conserved " + (conserved ? "yes" : "NO") + ", " + fmt(timer.secs(), 1) +
             "s");
  REQUIRE(switched_identical);
  REQUIRE(static_identical);
  REQUIRE(violations == 0);
  REQUIRE(conserved);
}

TEST_CASE("criterion 11: two-node simulation agrees with the recursion oracle",
          "[acceptance]") {
  Timer timer;
  const double oracle = shs_complete_age(2, 1.0, 1.0, 1.0);
  const auto res = run_static(cfg_for(2e5, 1e3, 2024), make_complete(2, 1.0));
  const double gap = std::abs(res.network_avg / oracle - 1.0);
  const bool ok = gap <= 0.03;
  report(11, ok && res.invariant_violations == 0,
         "sim " + fmt(res.network_avg) + " vs oracle " + fmt(oracle) + " (4/3), gap " +
             fmt(gap * 100, 2) + "% (<= 3%), " + fmt(timer.secs(), 1) + "s");
  REQUIRE(oracle == Catch::Approx(4.0 / 3.0).epsilon(1e-12));
  REQUIRE(ok);
  REQUIRE(res.invariant_violations == 0);
}

#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vage/analytic.hpp"
#include "vage/engine.hpp"
#include "vage/io.hpp"
#include "vage/metrics.hpp"
#include "vage/switching.hpp"
#include "vage/topology.hpp"

namespace vage {

// One sweep regime: either a static run of one of the pair's topologies or a
// switched run under a holding-family pair.
enum class RegimeMode { Static1, Static2, Switched };

struct Regime {
  std::string label;
  RegimeMode mode = RegimeMode::Switched;
  HoldingFamily family_12;
  HoldingFamily family_21;
};

// Declarative sweep: topology pair x n grid x regimes x replications.
// Replication seeds derive from base_seed as base_seed + run_index, where
// run_index enumerates cells in (n, regime, replication) order.
struct ExperimentSpec {
  TopologyFamily topology1;
  TopologyFamily topology2;
  std::vector<int> n_grid;
  std::vector<Regime> regimes;
  int replications = 3;
  std::uint64_t base_seed = 1;
  double lambda_e = 1.0;
  double lambda = 1.0;
  double horizon_override = 0.0;    // <= 0: auto schedule
  double warmup_override = -1.0;    // < 0: auto schedule
  double horizon_multiplier = 1.0;  // scales the auto schedule only
  double typical_c = 3.0;
  std::string output_dir;
  int max_threads = 0;  // 0: hardware concurrency
};

struct ResultRow {
  int n = 0;
  std::string regime;
  int replication = 0;
  std::uint64_t seed = 0;
  double network_avg = 0.0;
  double typical_fraction = 0.0;
  double typical_avg = 0.0;
  double occupancy_state1 = 0.0;
  std::int64_t n0_count = 0;
  double wall_time = 0.0;
  std::string status = "ok";
};

struct SweepOutput {
  std::vector<ResultRow> rows;
  std::vector<SimResult> results;  // parallel to rows; empty result on failure
};

namespace detail {

// Slowest age scale a family is expected to exhibit, used only to schedule
// horizons and warmups. Conservative for families without a known class.
inline double scale_estimate(const TopologyFamily& f, int n) {
  switch (f.kind) {
    case TopologyKind::Complete: return std::log(static_cast<double>(n));
    case TopologyKind::Ring:
    case TopologyKind::Line: return std::sqrt(static_cast<double>(n));
    case TopologyKind::CliqueLine: return std::pow(static_cast<double>(n), 2.0 / 3.0);
    case TopologyKind::Disconnected:
    case TopologyKind::EdgeListFile: return static_cast<double>(n);
  }
  return static_cast<double>(n);
}

template <class F>
inline void parallel_for(std::size_t count, int threads, F&& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads && t < static_cast<int>(count); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail

// Horizon rule: long enough to cover many cycles of the slowest age scale
// present and many CTMC holding times. Floors keep small-n runs from being
// starved.
inline double auto_horizon(const ExperimentSpec& spec, const Regime& regime, int n) {
  if (spec.horizon_override > 0.0) return spec.horizon_override;
  double fhat = 0.0, h = 0.0;
  switch (regime.mode) {
    case RegimeMode::Static1: fhat = detail::scale_estimate(spec.topology1, n); break;
    case RegimeMode::Static2: fhat = detail::scale_estimate(spec.topology2, n); break;
    case RegimeMode::Switched:
      fhat = std::max(detail::scale_estimate(spec.topology1, n),
                      detail::scale_estimate(spec.topology2, n));
      h = std::max(regime.family_12.eval(n), regime.family_21.eval(n));
      break;
  }
  return spec.horizon_multiplier * std::max({200.0 * fhat, 100.0 * h, 2000.0});
}

inline double auto_warmup(const ExperimentSpec& spec, const Regime& regime, int n) {
  if (spec.warmup_override >= 0.0) return spec.warmup_override;
  double fhat = 0.0, h = 0.0;
  switch (regime.mode) {
    case RegimeMode::Static1: fhat = detail::scale_estimate(spec.topology1, n); break;
    case RegimeMode::Static2: fhat = detail::scale_estimate(spec.topology2, n); break;
    case RegimeMode::Switched:
      fhat = std::max(detail::scale_estimate(spec.topology1, n),
                      detail::scale_estimate(spec.topology2, n));
      h = std::max(regime.family_12.eval(n), regime.family_21.eval(n));
      break;
  }
  return std::max({10.0 * fhat, 10.0 * h, 20.0});
}

// Parses the declarative sweep config (JSON). Unknown keys are rejected so a
// typo cannot silently fall back to a default.
inline ExperimentSpec parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("parse_config: " + path + ": " + e.what());
  }
  static const std::vector<std::string> known = {
      "topology1", "topology2", "n_grid", "regimes", "replications", "base_seed",
      "lambda_e", "lambda", "horizon", "warmup", "horizon_multiplier", "typical_c",
      "output_dir", "max_threads"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::runtime_error("parse_config: unknown key `" + key + "`");
  }
  ExperimentSpec spec;
  spec.lambda_e = j.value("lambda_e", 1.0);
  spec.lambda = j.value("lambda", 1.0);
  if (!(spec.lambda_e > 0.0) || !(spec.lambda > 0.0))
    throw std::runtime_error("parse_config: lambda_e and lambda must be positive");
  if (!j.contains("topology1")) throw std::runtime_error("parse_config: missing topology1");
  spec.topology1 = parse_topology_spec(j.at("topology1").get<std::string>(), spec.lambda);
  spec.topology2 = j.contains("topology2")
                       ? parse_topology_spec(j.at("topology2").get<std::string>(), spec.lambda)
                       : spec.topology1;
  if (!j.contains("n_grid")) throw std::runtime_error("parse_config: missing n_grid");
  spec.n_grid = j.at("n_grid").get<std::vector<int>>();
  if (spec.n_grid.empty()) throw std::runtime_error("parse_config: n_grid is empty");
  for (std::size_t i = 1; i < spec.n_grid.size(); ++i)
    if (spec.n_grid[i] <= spec.n_grid[i - 1])
      throw std::runtime_error("parse_config: n_grid must be increasing");
  if (j.contains("regimes")) {
    for (const auto& rj : j.at("regimes")) {
      static const std::vector<std::string> rknown = {"label", "mode", "holding12",
                                                      "holding21"};
      for (const auto& [key, _] : rj.items()) {
        if (std::find(rknown.begin(), rknown.end(), key) == rknown.end())
          throw std::runtime_error("parse_config: unknown regime key `" + key + "`");
      }
      Regime r;
      const std::string mode = rj.value("mode", "switched");
      if (mode == "static1") r.mode = RegimeMode::Static1;
      else if (mode == "static2") r.mode = RegimeMode::Static2;
      else if (mode == "switched") r.mode = RegimeMode::Switched;
      else throw std::runtime_error("parse_config: unknown regime mode `" + mode + "`");
      if (r.mode == RegimeMode::Switched) {
        if (!rj.contains("holding12"))
          throw std::runtime_error("parse_config: switched regime needs holding12");
        r.family_12 = parse_holding_spec(rj.at("holding12").get<std::string>());
        r.family_21 = rj.contains("holding21")
                          ? parse_holding_spec(rj.at("holding21").get<std::string>())
                          : r.family_12;
      }
      r.label = rj.value("label", std::string());
      if (r.label.empty()) {
        if (r.mode == RegimeMode::Static1) r.label = "static1";
        else if (r.mode == RegimeMode::Static2) r.label = "static2";
        else r.label = holding_spec_string(r.family_12);
      }
      spec.regimes.push_back(std::move(r));
    }
  } else {
    spec.regimes.push_back(Regime{"static1", RegimeMode::Static1, {}, {}});
  }
  for (std::size_t i = 0; i < spec.regimes.size(); ++i)
    for (std::size_t k = i + 1; k < spec.regimes.size(); ++k)
      if (spec.regimes[i].label == spec.regimes[k].label)
        throw std::runtime_error("parse_config: duplicate regime label `" +
                                 spec.regimes[i].label + "`");
  spec.replications = j.value("replications", 3);
  if (spec.replications < 1) throw std::runtime_error("parse_config: replications must be >= 1");
  spec.base_seed = j.value("base_seed", std::uint64_t{1});
  if (j.contains("horizon")) {
    if (j.at("horizon").is_string()) {
      if (j.at("horizon").get<std::string>() != "auto")
        throw std::runtime_error("parse_config: horizon must be a number or \"auto\"");
    } else {
      spec.horizon_override = j.at("horizon").get<double>();
      if (!(spec.horizon_override > 0.0))
        throw std::runtime_error("parse_config: horizon must be positive");
    }
  }
  if (j.contains("warmup")) {
    if (j.at("warmup").is_string()) {
      if (j.at("warmup").get<std::string>() != "auto")
        throw std::runtime_error("parse_config: warmup must be a number or \"auto\"");
    } else {
      spec.warmup_override = j.at("warmup").get<double>();
    }
  }
  spec.horizon_multiplier = j.value("horizon_multiplier", 1.0);
  if (!(spec.horizon_multiplier > 0.0))
    throw std::runtime_error("parse_config: horizon_multiplier must be positive");
  spec.typical_c = j.value("typical_c", 3.0);
  if (spec.typical_c < 1.0) throw std::runtime_error("parse_config: typical_c must be >= 1");
  spec.output_dir = j.value("output_dir", std::string());
  spec.max_threads = j.value("max_threads", 0);
  return spec;
}

namespace detail {

inline std::string csv_escape(std::string s) {
  for (auto& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return s;
}

inline std::string row_csv_header() {
  return "n,regime,replication,seed,network_avg,typical_fraction,typical_avg,"
         "occupancy_state1,n0_count,wall_time,status";
}

inline std::string row_to_csv(const ResultRow& r) {
  std::ostringstream os;
  os << r.n << ',' << csv_escape(r.regime) << ',' << r.replication << ',' << r.seed << ','
     << fmt_double(r.network_avg) << ',' << fmt_double(r.typical_fraction) << ','
     << fmt_double(r.typical_avg) << ',' << fmt_double(r.occupancy_state1) << ','
     << r.n0_count << ',' << fmt_double(r.wall_time) << ',' << csv_escape(r.status);
  return os.str();
}

}  // namespace detail

inline void write_rows_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::string body = detail::row_csv_header() + "\n";
  for (const auto& r : rows) body += detail::row_to_csv(r) + "\n";
  write_text_file(path, body);
}

inline std::vector<ResultRow> load_rows_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_rows_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_rows_csv: empty file");
  if (line != detail::row_csv_header())
    throw std::runtime_error("load_rows_csv: unexpected header in " + path);
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 11) throw std::runtime_error("load_rows_csv: malformed row: " + line);
    ResultRow r;
    r.n = std::stoi(f[0]);
    r.regime = f[1];
    r.replication = std::stoi(f[2]);
    r.seed = std::stoull(f[3]);
    r.network_avg = std::stod(f[4]);
    r.typical_fraction = std::stod(f[5]);
    r.typical_avg = std::stod(f[6]);
    r.occupancy_state1 = std::stod(f[7]);
    r.n0_count = std::stoll(f[8]);
    r.wall_time = std::stod(f[9]);
    r.status = f[10];
    rows.push_back(std::move(r));
  }
  return rows;
}

// Executes every (n, regime, replication) cell. Cells run concurrently;
// seeds are pre-derived from the cell index so the outcome is identical to
// sequential execution. A cell failure is recorded in its row's status and
// the sweep continues. Rows are appended to <output_dir>/rows.csv as they
// complete and the file is rewritten in canonical order at the end.
//
// Typical-set columns: static rows always use the run's own membership. When
// the sweep contains both a static1 and a static2 regime, switched rows are
// re-evaluated against the intersection of the two static typical sets
// (membership from per-node ages averaged across replications), which is the
// varying-topologies reading of the typical set.
inline SweepOutput run_sweep(const ExperimentSpec& spec) {
  if (spec.n_grid.empty()) throw std::invalid_argument("run_sweep: empty n_grid");
  if (spec.regimes.empty()) throw std::invalid_argument("run_sweep: no regimes");
  const std::size_t cells =
      spec.n_grid.size() * spec.regimes.size() * static_cast<std::size_t>(spec.replications);
  SweepOutput out;
  out.rows.resize(cells);
  out.results.resize(cells);

  std::string partial_path;
  std::ofstream partial;
  std::mutex io_mutex;
  if (!spec.output_dir.empty()) {
    std::filesystem::create_directories(spec.output_dir);
    partial_path = spec.output_dir + "/rows.csv";
    partial.open(partial_path, std::ios::trunc);
    partial << detail::row_csv_header() << "\n";
  }

  detail::parallel_for(cells, spec.max_threads, [&](std::size_t idx) {
    const std::size_t per_n = spec.regimes.size() * spec.replications;
    const std::size_t ni = idx / per_n;
    const std::size_t ri = (idx % per_n) / spec.replications;
    const int rep = static_cast<int>(idx % spec.replications);
    const int n = spec.n_grid[ni];
    const Regime& regime = spec.regimes[ri];

    ResultRow row;
    row.n = n;
    row.regime = regime.label;
    row.replication = rep;
    row.seed = spec.base_seed + idx;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      SimConfig cfg;
      cfg.lambda_e = spec.lambda_e;
      cfg.lambda = spec.lambda;
      cfg.horizon = auto_horizon(spec, regime, n);
      cfg.warmup = auto_warmup(spec, regime, n);
      cfg.seed = row.seed;
      SimResult res;
      switch (regime.mode) {
        case RegimeMode::Static1:
          res = run_static(cfg, make_topology(spec.topology1, n));
          break;
        case RegimeMode::Static2:
          res = run_static(cfg, make_topology(spec.topology2, n));
          break;
        case RegimeMode::Switched: {
          const SwitchConfig sw{regime.family_12, regime.family_21};
          res = run(cfg, make_topology(spec.topology1, n), make_topology(spec.topology2, n),
                    sw);
          break;
        }
      }
      const auto typical = typical_set(res, spec.typical_c);
      row.network_avg = res.network_avg;
      row.typical_fraction = typical.fraction;
      double tsum = 0.0;
      for (int id : typical.member_ids) tsum += res.per_node_avg_age[id];
      row.typical_avg = typical.member_ids.empty()
                            ? 0.0
                            : tsum / static_cast<double>(typical.member_ids.size());
      row.occupancy_state1 = res.occupancy.frac_state1;
      row.n0_count = res.n0_count;
      out.results[idx] = std::move(res);
    } catch (const std::exception& e) {
      row.status = e.what();
    }
    row.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (partial.is_open()) {
      std::lock_guard<std::mutex> lock(io_mutex);
      partial << detail::row_to_csv(row) << "\n";
      partial.flush();
    }
    out.rows[idx] = std::move(row);
  });
  if (partial.is_open()) partial.close();

  // Varying-topologies typical set for switched rows, when both static
  // regimes are present.
  std::size_t static1_ri = spec.regimes.size(), static2_ri = spec.regimes.size();
  for (std::size_t ri = 0; ri < spec.regimes.size(); ++ri) {
    if (spec.regimes[ri].mode == RegimeMode::Static1) static1_ri = ri;
    if (spec.regimes[ri].mode == RegimeMode::Static2) static2_ri = ri;
  }
  if (static1_ri < spec.regimes.size() && static2_ri < spec.regimes.size()) {
    const std::size_t per_n = spec.regimes.size() * spec.replications;
    for (std::size_t ni = 0; ni < spec.n_grid.size(); ++ni) {
      const int n = spec.n_grid[ni];
      auto mean_ages = [&](std::size_t ri) -> std::vector<double> {
        std::vector<double> acc(n, 0.0);
        int used = 0;
        for (int rep = 0; rep < spec.replications; ++rep) {
          const std::size_t idx = ni * per_n + ri * spec.replications + rep;
          if (out.rows[idx].status != "ok") continue;
          const auto& ages = out.results[idx].per_node_avg_age;
          for (int i = 0; i < n; ++i) acc[i] += ages[i];
          ++used;
        }
        if (used == 0) return {};
        for (auto& a : acc) a /= used;
        return acc;
      };
      const auto ages1 = mean_ages(static1_ri);
      const auto ages2 = mean_ages(static2_ri);
      if (ages1.empty() || ages2.empty()) continue;
      const auto members = intersect_members(typical_set(ages1, spec.typical_c).member_ids,
                                             typical_set(ages2, spec.typical_c).member_ids);
      for (std::size_t ri = 0; ri < spec.regimes.size(); ++ri) {
        if (spec.regimes[ri].mode != RegimeMode::Switched) continue;
        for (int rep = 0; rep < spec.replications; ++rep) {
          const std::size_t idx = ni * per_n + ri * spec.replications + rep;
          if (out.rows[idx].status != "ok") continue;
          const auto& ages = out.results[idx].per_node_avg_age;
          double sum = 0.0;
          for (int id : members) sum += ages[id];
          out.rows[idx].typical_fraction =
              static_cast<double>(members.size()) / static_cast<double>(n);
          out.rows[idx].typical_avg =
              members.empty() ? 0.0 : sum / static_cast<double>(members.size());
        }
      }
    }
  }

  if (!partial_path.empty()) write_rows_csv(out.rows, partial_path);
  return out;
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::string title;
  std::vector<Check> checks;
  std::map<std::string, ScalingFit> fits;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

// Mean value per grid point for one regime label; skips failed rows.
inline std::vector<std::pair<double, double>> series_by_n(
    const std::vector<ResultRow>& rows, const std::string& label, double ResultRow::*field) {
  std::map<int, std::vector<double>> byn;
  for (const auto& r : rows)
    if (r.regime == label && r.status == "ok") byn[r.n].push_back(r.*field);
  std::vector<std::pair<double, double>> out;
  for (const auto& [n, vals] : byn) out.emplace_back(n, mean_of(vals));
  return out;
}

inline std::vector<double> values_at(const std::vector<ResultRow>& rows,
                                     const std::string& label, int n,
                                     double ResultRow::*field) {
  std::vector<double> out;
  for (const auto& r : rows)
    if (r.regime == label && r.n == n && r.status == "ok") out.push_back(r.*field);
  return out;
}

inline std::string fit_summary(const ScalingFit& f) {
  std::ostringstream os;
  os << "power(alpha=" << f.power.alpha << ", r2=" << f.power.r2 << ") vs loglinear(a="
     << f.loglinear.a << ", r2=" << f.loglinear.r2 << ") -> "
     << (f.selected == FitModel::PowerLaw ? "power" : "loglinear");
  return os.str();
}

}  // namespace detail

namespace detail {
inline void require_log_power_pair(const ExperimentSpec& spec, const char* who) {
  const auto c1 = expected_scaling(spec.topology1.kind);
  const auto c2 = expected_scaling(spec.topology2.kind);
  const bool ok1 = !c1.empty() && c1.front().growth.kind == GrowthClass::Log;
  const bool ok2 = !c2.empty() && c2.front().growth.kind == GrowthClass::Power;
  if (!ok1 || !ok2)
    throw std::invalid_argument(std::string(who) +
                                ": needs a log-class topology1 and a power-class topology2");
}
}  // namespace detail

// Fast-switching verdicts, computed purely from persisted rows: for each
// switched regime the network average must grow log-linearly in n, and the
// switched/static-topology1 ratio must stay inside [1 - sigma, 4] at every
// grid point, sigma being the replication spread of the ratio.
inline VerifyReport theorem1_verdicts(const ExperimentSpec& spec,
                                      const std::vector<ResultRow>& rows) {
  if (spec.n_grid.size() < 4)
    throw std::invalid_argument("theorem1_verdicts: grid too small (need >= 4 points)");
  VerifyReport rep;
  rep.title = "fast switching: network average keeps the faster topology's class";
  std::string static_label;
  for (const auto& r : spec.regimes)
    if (r.mode == RegimeMode::Static1) static_label = r.label;
  if (static_label.empty())
    throw std::invalid_argument("theorem1_verdicts: needs a static1 baseline regime");
  const auto baseline = detail::series_by_n(rows, static_label, &ResultRow::network_avg);

  const auto base_fit = fit_scaling(baseline);
  rep.fits["baseline " + static_label] = base_fit;
  rep.checks.push_back({"baseline-class[" + static_label + "]",
                        base_fit.selected == FitModel::LogLinear,
                        detail::fit_summary(base_fit)});

  for (const auto& regime : spec.regimes) {
    if (regime.mode != RegimeMode::Switched) continue;
    if (regime.family_12.kind != regime.family_21.kind) {
      rep.checks.push_back({"regime-order[" + regime.label + "]", true,
                            "holding families of different kinds; exploratory, no verdict"});
      continue;
    }
    const auto series = detail::series_by_n(rows, regime.label, &ResultRow::network_avg);
    const auto fit = fit_scaling(series);
    rep.fits[regime.label] = fit;
    rep.checks.push_back({"scaling-class[" + regime.label + "]",
                          fit.selected == FitModel::LogLinear, detail::fit_summary(fit)});

    bool band_ok = true;
    std::ostringstream detail_os;
    for (const auto& [nd, base_val] : baseline) {
      const int n = static_cast<int>(nd);
      const auto reps = detail::values_at(rows, regime.label, n, &ResultRow::network_avg);
      if (reps.empty() || !(base_val > 0.0)) {
        band_ok = false;
        detail_os << " n=" << n << ": missing data;";
        continue;
      }
      std::vector<double> ratios;
      for (double v : reps) ratios.push_back(v / base_val);
      const double ratio = detail::mean_of(ratios);
      const double sigma = detail::stddev_of(ratios);
      const bool ok = ratio <= 4.0 && ratio >= 1.0 - sigma;
      band_ok = band_ok && ok;
      detail_os << " n=" << n << ": ratio=" << ratio << " sigma=" << sigma
                << (ok ? "" : " OUT-OF-BAND") << ";";
    }
    rep.checks.push_back(
        {"ratio-band[" + regime.label + "]", band_ok, "bounds [1-sigma, 4]:" + detail_os.str()});
  }
  return rep;
}

// Slow-switching verdicts for the typical set, computed purely from rows:
// an nlogn-or-slower regime must leave the typical set on the slower
// topology's power law (exponent within +-0.07), a constant/log regime must
// keep it log-linear, and an intermediate power regime is bounded by the
// static slower topology within a factor 1.5 with no class asserted.
inline VerifyReport theorem2_verdicts(const ExperimentSpec& spec,
                                      const std::vector<ResultRow>& rows) {
  if (spec.n_grid.size() < 4)
    throw std::invalid_argument("theorem2_verdicts: grid too small (need >= 4 points)");
  VerifyReport rep;
  rep.title = "slow switching: typical-set average follows the slower topology";
  std::string static1_label, static2_label;
  for (const auto& r : spec.regimes) {
    if (r.mode == RegimeMode::Static1) static1_label = r.label;
    if (r.mode == RegimeMode::Static2) static2_label = r.label;
  }
  if (static1_label.empty() || static2_label.empty())
    throw std::invalid_argument("theorem2_verdicts: needs static1 and static2 regimes");

  const auto c2 = expected_scaling(spec.topology2.kind);
  const double alpha2 = c2.front().growth.alpha;
  const auto static2_series = detail::series_by_n(rows, static2_label, &ResultRow::network_avg);

  for (const auto& regime : spec.regimes) {
    if (regime.mode != RegimeMode::Switched) continue;
    const auto series = detail::series_by_n(rows, regime.label, &ResultRow::typical_avg);
    switch (regime.family_12.kind) {
      case HoldingKind::NLogN: {
        const auto fit = fit_scaling(series);
        rep.fits[regime.label + " typical"] = fit;
        const bool class_ok = fit.selected == FitModel::PowerLaw;
        const bool alpha_ok = std::abs(fit.power.alpha - alpha2) <= 0.07;
        rep.checks.push_back({"typical-power-class[" + regime.label + "]", class_ok,
                              detail::fit_summary(fit)});
        std::ostringstream os;
        os << "alpha=" << fit.power.alpha << " expected " << alpha2 << " +- 0.07";
        rep.checks.push_back({"typical-exponent[" + regime.label + "]", alpha_ok, os.str()});
        break;
      }
      case HoldingKind::Constant:
      case HoldingKind::LogN: {
        const auto fit = fit_scaling(series);
        rep.fits[regime.label + " typical"] = fit;
        rep.checks.push_back({"typical-log-class[" + regime.label + "]",
                              fit.selected == FitModel::LogLinear, detail::fit_summary(fit)});
        break;
      }
      case HoldingKind::PowerN: {
        bool ok = true;
        std::ostringstream os;
        for (const auto& [nd, s2] : static2_series) {
          const int n = static_cast<int>(nd);
          const auto reps = detail::values_at(rows, regime.label, n, &ResultRow::typical_avg);
          if (reps.empty()) {
            ok = false;
            os << " n=" << n << ": missing;";
            continue;
          }
          const double v = detail::mean_of(reps);
          const bool point_ok = v <= 1.5 * s2;
          ok = ok && point_ok;
          os << " n=" << n << ": " << v << " vs 1.5*" << s2 << (point_ok ? "" : " OVER") << ";";
        }
        rep.checks.push_back({"intermediate-upper-bound[" + regime.label + "]", ok,
                              "typical avg <= 1.5 * static2 avg:" + os.str()});
        break;
      }
    }
  }
  return rep;
}

// Writes rows.csv, fits.json, summary.txt, and plot-ready per-regime CSVs.
// Returns true when every check passed.
inline bool emit_report(const std::vector<ResultRow>& rows, const VerifyReport& report,
                        const std::string& output_dir) {
  std::filesystem::create_directories(output_dir);
  write_rows_csv(rows, output_dir + "/rows.csv");

  nlohmann::json fits_json;
  for (const auto& [label, fit] : report.fits) {
    fits_json[label] = {
        {"power", {{"alpha", fit.power.alpha}, {"c", fit.power.c}, {"r2", fit.power.r2}}},
        {"loglinear",
         {{"a", fit.loglinear.a}, {"b", fit.loglinear.b}, {"r2", fit.loglinear.r2}}},
        {"selected", fit.selected == FitModel::PowerLaw ? "power" : "loglinear"}};
  }
  write_text_file(output_dir + "/fits.json", fits_json.dump(2) + "\n");

  std::set<std::string> labels;
  for (const auto& r : rows) labels.insert(r.regime);
  for (const auto& label : labels) {
    const auto net = detail::series_by_n(rows, label, &ResultRow::network_avg);
    const auto typ = detail::series_by_n(rows, label, &ResultRow::typical_avg);
    std::string body = "n,network_avg,typical_avg\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
      body += detail::fmt_double(net[i].first) + "," + detail::fmt_double(net[i].second) + "," +
              detail::fmt_double(i < typ.size() ? typ[i].second : 0.0) + "\n";
    }
    write_text_file(output_dir + "/plotdata/" + label + ".csv", body);
  }

  std::ostringstream summary;
  summary << report.title << "\n";
  for (const auto& c : report.checks)
    summary << (c.pass ? "PASS" : "FAIL") << " - " << c.name << ": " << c.detail << "\n";
  const bool all = report.passed();
  summary << (all ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "\n";
  write_text_file(output_dir + "/summary.txt", summary.str());
  return all;
}

namespace detail {
// Composes the regime list a theorem verification runs: the required static
// baselines plus the spec's switched regimes (defaults when none given).
inline ExperimentSpec with_verify_regimes(ExperimentSpec spec, int theorem) {
  std::vector<Regime> regimes;
  regimes.push_back({"static1", RegimeMode::Static1, {}, {}});
  if (theorem == 2) regimes.push_back({"static2", RegimeMode::Static2, {}, {}});
  bool have_switched = false;
  for (const auto& r : spec.regimes)
    if (r.mode == RegimeMode::Switched) {
      regimes.push_back(r);
      have_switched = true;
    }
  if (!have_switched) {
    if (theorem == 1) {
      regimes.push_back({"h-const", RegimeMode::Switched,
                         make_holding(HoldingKind::Constant, 1.0),
                         make_holding(HoldingKind::Constant, 1.0)});
      regimes.push_back({"h-logn", RegimeMode::Switched, make_holding(HoldingKind::LogN, 1.0),
                         make_holding(HoldingKind::LogN, 1.0)});
    } else {
      regimes.push_back({"h-nlogn", RegimeMode::Switched, make_holding(HoldingKind::NLogN, 2.0),
                         make_holding(HoldingKind::NLogN, 2.0)});
    }
  }
  spec.regimes = std::move(regimes);
  return spec;
}
}  // namespace detail

// Runs the fast-switching verification end to end: sweep, verdicts, report
// files under spec.output_dir (when set).
inline VerifyReport verify_theorem1(const ExperimentSpec& user_spec) {
  detail::require_log_power_pair(user_spec, "verify_theorem1");
  const ExperimentSpec spec = detail::with_verify_regimes(user_spec, 1);
  const auto sweep = run_sweep(spec);
  auto report = theorem1_verdicts(spec, sweep.rows);
  if (!spec.output_dir.empty()) emit_report(sweep.rows, report, spec.output_dir);
  return report;
}

// Runs the slow-switching (typical set) verification end to end.
inline VerifyReport verify_theorem2(const ExperimentSpec& user_spec) {
  detail::require_log_power_pair(user_spec, "verify_theorem2");
  const ExperimentSpec spec = detail::with_verify_regimes(user_spec, 2);
  const auto sweep = run_sweep(spec);
  auto report = theorem2_verdicts(spec, sweep.rows);
  if (!spec.output_dir.empty()) emit_report(sweep.rows, report, spec.output_dir);
  return report;
}

}  // namespace vage

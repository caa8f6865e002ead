#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vage/rng.hpp"

namespace vage {

enum class HoldingKind { Constant, LogN, PowerN, NLogN };

// A holding-time family h(n): the mean residence time of a CTMC state as a
// function of the network size.
//   Constant: c      LogN: c*ln n      PowerN: c*n^alpha      NLogN: c*n*ln n
struct HoldingFamily {
  HoldingKind kind = HoldingKind::Constant;
  double c = 1.0;
  double alpha = 1.0;  // PowerN only, in (0, 1]

  double eval(int n) const {
    switch (kind) {
      case HoldingKind::Constant: return c;
      case HoldingKind::LogN: return c * std::log(static_cast<double>(n));
      case HoldingKind::PowerN: return c * std::pow(static_cast<double>(n), alpha);
      case HoldingKind::NLogN: return c * n * std::log(static_cast<double>(n));
    }
    throw std::invalid_argument("holding family: unknown kind");
  }

  friend bool operator==(const HoldingFamily&, const HoldingFamily&) = default;
};

inline HoldingFamily make_holding(HoldingKind kind, double c, double alpha = 1.0) {
  if (!(c > 0.0)) throw std::invalid_argument("holding family: c must be positive");
  if (kind == HoldingKind::PowerN && !(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("holding family: alpha must be in (0, 1]");
  return HoldingFamily{kind, c, alpha};
}

// Transition rate out of a state whose holding family is f: q = 1/h(n).
inline double holding_rate(const HoldingFamily& f, int n) {
  if (n < 2) throw std::invalid_argument("holding_rate: n must be >= 2");
  return 1.0 / f.eval(n);
}

// The two-state CTMC description: one holding family per state. Rates are
// derived at a concrete n via resolve().
struct SwitchConfig {
  HoldingFamily family_12;
  HoldingFamily family_21;

  double q12(int n) const { return holding_rate(family_12, n); }
  double q21(int n) const { return holding_rate(family_21, n); }
};

// Rates resolved at a fixed n. q12 = q21 = 0 encodes a static (never
// switching) run inside the engine.
struct SwitchRates {
  double q12 = 0.0;
  double q21 = 0.0;
};

inline SwitchRates resolve(const SwitchConfig& cfg, int n) {
  return SwitchRates{cfg.q12(n), cfg.q21(n)};
}

// Exponential residence time for the given state. q_leave is q12 when in
// state 1, q21 when in state 2.
inline double sample_state_duration(int state, const SwitchRates& rates, Rng& rng) {
  if (state != 1 && state != 2)
    throw std::invalid_argument("sample_state_duration: state must be 1 or 2");
  return rng.exponential(state == 1 ? rates.q12 : rates.q21);
}

// Stationary fractions (pi_1, pi_2) of the two-state chain.
inline std::pair<double, double> stationary_occupancy(double q12, double q21) {
  if (!(q12 > 0.0) || !(q21 > 0.0))
    throw std::invalid_argument("stationary_occupancy: rates must be positive");
  const double s = q12 + q21;
  return {q21 / s, q12 / s};
}

struct OccupancyReport {
  double frac_state1 = 0.0;
  double frac_state2 = 0.0;
  std::int64_t switch_count = 0;
  double total_time = 0.0;
};

// Time-weighted occupancy of a sampled trajectory: a list of (state,
// duration) segments in order. switch_count counts state changes between
// consecutive segments.
inline OccupancyReport occupancy_report(const std::vector<std::pair<int, double>>& trajectory) {
  if (trajectory.empty())
    throw std::invalid_argument("occupancy_report: empty trajectory");
  OccupancyReport rep;
  double t1 = 0.0, t2 = 0.0;
  int prev_state = trajectory.front().first;
  for (const auto& [state, dur] : trajectory) {
    if (state != 1 && state != 2)
      throw std::invalid_argument("occupancy_report: state must be 1 or 2");
    if (!(dur > 0.0))
      throw std::invalid_argument("occupancy_report: durations must be positive");
    (state == 1 ? t1 : t2) += dur;
    if (state != prev_state) ++rep.switch_count;
    prev_state = state;
  }
  rep.total_time = t1 + t2;
  rep.frac_state1 = t1 / rep.total_time;
  rep.frac_state2 = t2 / rep.total_time;
  return rep;
}

// Parses the CLI/config spelling of a holding family:
//   constant:<c> | logn:<c> | powern:<c>,<alpha> | nlogn:<c>
inline HoldingFamily parse_holding_spec(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("holding spec needs kind:params, got " + s);
  const std::string kind = s.substr(0, colon);
  const std::string params = s.substr(colon + 1);
  std::istringstream ps(params);
  double c = 0.0;
  char comma = 0;
  double alpha = 1.0;
  if (kind == "constant" || kind == "logn" || kind == "nlogn") {
    if (!(ps >> c) || ps.peek() != EOF)
      throw std::invalid_argument("holding spec: bad parameter in " + s);
    if (kind == "constant") return make_holding(HoldingKind::Constant, c);
    if (kind == "logn") return make_holding(HoldingKind::LogN, c);
    return make_holding(HoldingKind::NLogN, c);
  }
  if (kind == "powern") {
    if (!(ps >> c >> comma >> alpha) || comma != ',' || ps.peek() != EOF)
      throw std::invalid_argument("holding spec: powern needs c,alpha in " + s);
    return make_holding(HoldingKind::PowerN, c, alpha);
  }
  throw std::invalid_argument("unknown holding kind: " + kind);
}

inline std::string holding_spec_string(const HoldingFamily& f) {
  std::ostringstream os;
  switch (f.kind) {
    case HoldingKind::Constant: os << "constant:" << f.c; break;
    case HoldingKind::LogN: os << "logn:" << f.c; break;
    case HoldingKind::PowerN: os << "powern:" << f.c << ',' << f.alpha; break;
    case HoldingKind::NLogN: os << "nlogn:" << f.c; break;
  }
  return os.str();
}

}  // namespace vage

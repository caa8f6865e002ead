#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "vage/rng.hpp"
#include "vage/switching.hpp"
#include "vage/topology.hpp"

namespace vage {

// Run parameters for one simulation. lambda doubles as the per-node gossip
// budget and the total source->network rate (lambda_s = lambda); each node
// receives direct source updates at lambda/n.
struct SimConfig {
  double lambda_e = 1.0;
  double lambda = 1.0;
  double horizon = 0.0;
  double warmup = 0.0;
  std::uint64_t seed = 1;
  std::vector<double> snapshot_times;
  int initial_state = 1;
  bool check_invariants = true;
};

enum class EventKind : std::uint8_t { SourceSelf, SourceToNode, Gossip, Switch };

struct Event {
  EventKind kind = EventKind::SourceSelf;
  std::int32_t node = -1;    // receiver for SourceToNode, sender for Gossip
  std::int32_t target = -1;  // receiver for Gossip
};

struct EventCounts {
  std::int64_t source_self = 0;
  std::int64_t source_to_node = 0;
  std::int64_t gossip_state1 = 0;
  std::int64_t gossip_state2 = 0;
  std::int64_t switches = 0;

  std::int64_t total() const {
    return source_self + source_to_node + gossip_state1 + gossip_state2 + switches;
  }
};

// Full age vector X = N0 - N_i captured at one instant (state just before any
// event at exactly that time).
struct AgeSnapshot {
  double t = 0.0;
  std::vector<std::int64_t> ages;
};

struct SimResult {
  int n = 0;
  double horizon = 0.0;
  double warmup = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> per_node_avg_age;
  double network_avg = 0.0;
  OccupancyReport occupancy;  // measured over the whole run [0, horizon]
  std::int64_t n0_count = 0;
  EventCounts events;
  std::vector<AgeSnapshot> snapshots;
  std::int64_t invariant_violations = 0;
};

// Precomputed sampling tables for one topology: total gossip rate, sender
// selection, and per-sender edge selection. The generated families all give
// every non-isolated node the same out-rate and every node equal-rate edges,
// which collapses both picks to O(1); the general weighted path stays
// available for loaded graphs.
struct GossipSampler {
  const Topology* topo = nullptr;
  double total_rate = 0.0;
  double source_rate = 0.0;  // lambda_s, or 0 while the topology severs the source
  bool uniform_senders = false;
  std::vector<std::int32_t> active_nodes;  // non-isolated
  std::vector<double> node_cum;            // prefix sums over active_nodes (general path)
  std::vector<std::uint8_t> edge_uniform;  // per node
  std::vector<std::vector<double>> edge_cum;

  void build(const Topology& t, double lambda_s) {
    topo = &t;
    source_rate = t.sever_source ? 0.0 : lambda_s;
    total_rate = 0.0;
    active_nodes.clear();
    node_cum.clear();
    edge_uniform.assign(t.n, 1);
    edge_cum.assign(t.n, {});
    double common_rate = -1.0;
    uniform_senders = true;
    for (int i = 0; i < t.n; ++i) {
      const auto& es = t.out[i];
      if (es.empty()) continue;
      double sum = 0.0;
      bool eq = true;
      for (const auto& e : es) {
        sum += e.rate;
        if (std::abs(e.rate - es.front().rate) > 1e-12 * es.front().rate) eq = false;
      }
      edge_uniform[i] = eq ? 1 : 0;
      if (!eq) {
        auto& cum = edge_cum[i];
        cum.reserve(es.size());
        double acc = 0.0;
        for (const auto& e : es) cum.push_back(acc += e.rate);
      }
      active_nodes.push_back(i);
      total_rate += sum;
      node_cum.push_back(total_rate);
      if (common_rate < 0.0) common_rate = sum;
      else if (std::abs(sum - common_rate) > 1e-12 * common_rate) uniform_senders = false;
    }
  }

  // Picks (sender, edge index) for a gossip event.
  std::pair<std::int32_t, std::int32_t> pick(Rng& rng) const {
    std::int32_t sender;
    if (uniform_senders) {
      sender = active_nodes[rng.below(active_nodes.size())];
    } else {
      const double u = rng.uniform(total_rate);
      const auto it = std::upper_bound(node_cum.begin(), node_cum.end(), u);
      sender = active_nodes[std::min<std::size_t>(it - node_cum.begin(),
                                                  active_nodes.size() - 1)];
    }
    const auto& es = topo->out[sender];
    std::int32_t edge;
    if (edge_uniform[sender]) {
      edge = static_cast<std::int32_t>(rng.below(es.size()));
    } else {
      const auto& cum = edge_cum[sender];
      const double u = rng.uniform(cum.back());
      edge = static_cast<std::int32_t>(
          std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(),
                                cum.size() - 1));
    }
    return {sender, edge};
  }
};

// Exact event-driven simulation of the superposed Poisson system: source
// self-updates, direct source->node updates, per-edge gossip under the active
// topology, and CTMC switches. One instance is single-threaded and owns its
// rng.
//
// Per-node age integrals over [warmup, horizon] are kept lazily: N0 and each
// N_i are piecewise constant, so their windowed integrals are accumulated
// only when a counter changes, and X_i integrals materialize as
// int(N0) - int(N_i). This keeps event application O(1) at any n.
class Simulation {
 public:
  Simulation(const SimConfig& cfg, const Topology& topo1, const Topology& topo2,
             const SwitchRates& rates)
      : cfg_(cfg), rates_(rates), rng_(cfg.seed) {
    if (topo1.n != topo2.n)
      throw std::invalid_argument("simulation: topologies disagree on n");
    if (topo1.n < 1) throw std::invalid_argument("simulation: n must be >= 1");
    if (!(cfg.lambda_e > 0.0) || !(cfg.lambda > 0.0))
      throw std::invalid_argument("simulation: lambda_e and lambda must be positive");
    if (!(cfg.horizon > 0.0) || cfg.warmup < 0.0 || cfg.warmup >= cfg.horizon)
      throw std::invalid_argument("simulation: need 0 <= warmup < horizon");
    if (cfg.initial_state != 1 && cfg.initial_state != 2)
      throw std::invalid_argument("simulation: initial_state must be 1 or 2");
    if (rates.q12 < 0.0 || rates.q21 < 0.0)
      throw std::invalid_argument("simulation: switch rates must be nonnegative");
    n_ = topo1.n;
    sampler_[0].build(topo1, cfg.lambda);
    sampler_[1].build(topo2, cfg.lambda);
    active_ = cfg.initial_state;
    versions_.assign(n_, 0);
    int_n_.assign(n_, 0.0);
    last_n_t_.assign(n_, 0.0);
    snap_times_ = cfg.snapshot_times;
    std::sort(snap_times_.begin(), snap_times_.end());
    while (!snap_times_.empty() && snap_times_.back() > cfg.horizon) snap_times_.pop_back();
  }

  // Samples the time gap to the next event and what it is. Mutates only the
  // rng; the caller decides whether to advance and apply.
  Event next_event(double& dt) {
    const GossipSampler& s = sampler_[active_ - 1];
    const double q_leave = active_ == 1 ? rates_.q12 : rates_.q21;
    const double total = cfg_.lambda_e + s.source_rate + s.total_rate + q_leave;
    if (!(total > 0.0)) throw std::runtime_error("next_event: zero total rate");
    dt = rng_.exponential(total);
    const double u = rng_.uniform(total);
    Event e;
    if (u < cfg_.lambda_e) {
      e.kind = EventKind::SourceSelf;
    } else if (u < cfg_.lambda_e + s.source_rate) {
      e.kind = EventKind::SourceToNode;
      e.node = static_cast<std::int32_t>(rng_.below(n_));
    } else if (u < cfg_.lambda_e + s.source_rate + s.total_rate) {
      e.kind = EventKind::Gossip;
      const auto [sender, edge] = s.pick(rng_);
      e.node = sender;
      e.target = s.topo->out[sender][edge].target;
    } else {
      e.kind = EventKind::Switch;
    }
    return e;
  }

  // Advances the clock by dt. Ages are piecewise constant over the interval,
  // so this only credits occupancy time, captures any snapshots that fall
  // inside, and moves the clock; windowed age crediting happens lazily when a
  // counter changes.
  void accumulate_age(double dt) {
    if (dt < 0.0) throw std::invalid_argument("accumulate_age: negative dt");
    const double t_next = t_ + dt;
    while (snap_idx_ < snap_times_.size() && snap_times_[snap_idx_] <= t_next) {
      AgeSnapshot snap;
      snap.t = snap_times_[snap_idx_];
      snap.ages.resize(n_);
      for (int i = 0; i < n_; ++i) snap.ages[i] = n0_ - versions_[i];
      if (cfg_.check_invariants) {
        for (int i = 0; i < n_; ++i)
          if (versions_[i] < 0 || versions_[i] > n0_) ++violations_;
      }
      snapshots_.push_back(std::move(snap));
      ++snap_idx_;
    }
    time_in_state_[active_ - 1] += dt;
    t_ = t_next;
  }

  // Applies one event at the current clock. SourceSelf bumps the source
  // counter; SourceToNode copies it to the receiver; Gossip applies the
  // keep-the-larger rule; Switch flips the active topology.
  void apply_event(const Event& e) {
    switch (e.kind) {
      case EventKind::SourceSelf:
        flush_source();
        ++n0_;
        ++counts_.source_self;
        break;
      case EventKind::SourceToNode:
        check_node(e.node);
        if (versions_[e.node] != n0_) {
          flush_node(e.node);
          versions_[e.node] = n0_;
        }
        ++counts_.source_to_node;
        if (cfg_.check_invariants && versions_[e.node] > n0_) ++violations_;
        break;
      case EventKind::Gossip: {
        check_node(e.node);
        check_node(e.target);
        const std::int64_t v = versions_[e.node];
        if (v > versions_[e.target]) {  // receiver keeps the larger version
          flush_node(e.target);
          versions_[e.target] = v;
        }
        ++(active_ == 1 ? counts_.gossip_state1 : counts_.gossip_state2);
        if (cfg_.check_invariants &&
            (versions_[e.target] > n0_ || versions_[e.node] > n0_))
          ++violations_;
        break;
      }
      case EventKind::Switch:
        active_ = active_ == 1 ? 2 : 1;
        ++counts_.switches;
        break;
    }
  }

  // Runs the event loop to the horizon and builds the result. The event that
  // would land past the horizon is discarded; the clock stops exactly at T.
  SimResult run() {
    while (true) {
      double dt = 0.0;
      const Event e = next_event(dt);
      if (t_ + dt >= cfg_.horizon) {
        accumulate_age(cfg_.horizon - t_);
        break;
      }
      accumulate_age(dt);
      apply_event(e);
    }
    return finalize();
  }

  // Materialized windowed age integrals up to the current clock (test and
  // inspection surface; run() uses finalize()).
  std::vector<double> age_integrals() const {
    std::vector<double> out(n_);
    const double base = int_n0_ + n0_ * window(last_n0_t_, t_);
    for (int i = 0; i < n_; ++i)
      out[i] = base - (int_n_[i] + versions_[i] * window(last_n_t_[i], t_));
    return out;
  }

  double clock() const { return t_; }
  int active_state() const { return active_; }
  std::int64_t source_version() const { return n0_; }
  std::int64_t version(int i) const { return versions_.at(i); }
  const EventCounts& counts() const { return counts_; }

 private:
  double window(double a, double b) const {
    const double lo = std::max(a, cfg_.warmup);
    const double hi = std::min(b, cfg_.horizon);
    return hi > lo ? hi - lo : 0.0;
  }

  void flush_source() {
    int_n0_ += n0_ * window(last_n0_t_, t_);
    last_n0_t_ = t_;
  }

  void flush_node(int i) {
    int_n_[i] += versions_[i] * window(last_n_t_[i], t_);
    last_n_t_[i] = t_;
  }

  void check_node(std::int32_t i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("event references node out of range");
  }

  SimResult finalize() {
    flush_source();
    for (int i = 0; i < n_; ++i) flush_node(i);
    if (cfg_.check_invariants) {
      for (int i = 0; i < n_; ++i)
        if (versions_[i] < 0 || versions_[i] > n0_) ++violations_;
    }
    SimResult r;
    r.n = n_;
    r.horizon = cfg_.horizon;
    r.warmup = cfg_.warmup;
    r.seed = cfg_.seed;
    r.per_node_avg_age.resize(n_);
    const double span = cfg_.horizon - cfg_.warmup;
    for (int i = 0; i < n_; ++i)
      r.per_node_avg_age[i] = (int_n0_ - int_n_[i]) / span;
    r.network_avg =
        std::accumulate(r.per_node_avg_age.begin(), r.per_node_avg_age.end(), 0.0) / n_;
    r.occupancy.frac_state1 = time_in_state_[0] / cfg_.horizon;
    r.occupancy.frac_state2 = time_in_state_[1] / cfg_.horizon;
    r.occupancy.switch_count = counts_.switches;
    r.occupancy.total_time = cfg_.horizon;
    r.n0_count = n0_;
    r.events = counts_;
    r.snapshots = std::move(snapshots_);
    r.invariant_violations = violations_;
    return r;
  }

  SimConfig cfg_;
  SwitchRates rates_;
  Rng rng_;
  int n_ = 0;
  GossipSampler sampler_[2];

  double t_ = 0.0;
  int active_ = 1;
  std::int64_t n0_ = 0;
  std::vector<std::int64_t> versions_;
  double int_n0_ = 0.0;
  double last_n0_t_ = 0.0;
  std::vector<double> int_n_;
  std::vector<double> last_n_t_;
  double time_in_state_[2] = {0.0, 0.0};
  std::vector<double> snap_times_;
  std::size_t snap_idx_ = 0;
  std::vector<AgeSnapshot> snapshots_;
  EventCounts counts_;
  std::int64_t violations_ = 0;
};

namespace detail {
inline void require_valid(const Topology& t, double lambda, const char* which) {
  const auto violations = validate_topology(t, lambda);
  if (!violations.empty())
    throw std::invalid_argument(std::string("run: ") + which + " fails validation: " +
                                violations.front().what);
}
}  // namespace detail

// Simulates the varying-topologies system. Topologies must be valid for
// cfg.lambda and agree on n.
inline SimResult run(const SimConfig& cfg, const Topology& topo1, const Topology& topo2,
                     const SwitchRates& rates) {
  detail::require_valid(topo1, cfg.lambda, "topology1");
  detail::require_valid(topo2, cfg.lambda, "topology2");
  Simulation sim(cfg, topo1, topo2, rates);
  return sim.run();
}

inline SimResult run(const SimConfig& cfg, const Topology& topo1, const Topology& topo2,
                     const SwitchConfig& switching) {
  return run(cfg, topo1, topo2, resolve(switching, topo1.n));
}

// Static (never switching) run: both CTMC states hold the same topology and
// the switch rates are zero.
inline SimResult run_static(const SimConfig& cfg, const Topology& topo) {
  return run(cfg, topo, topo, SwitchRates{0.0, 0.0});
}

}  // namespace vage

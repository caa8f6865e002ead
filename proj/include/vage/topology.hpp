#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace vage {

// One directed gossip link. The sender is implicit (index into Topology::out),
// `rate` is the Poisson intensity of transmissions along the link, in 1/time.
struct Edge {
  std::int32_t target;
  double rate;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// A rate-weighted directed graph over n nodes. Serves as one CTMC state.
// The source node lives outside [0, n); its links are handled by the engine
// and can be disabled while this topology is active via `sever_source`.
struct Topology {
  int n = 0;
  std::vector<std::vector<Edge>> out;  // out[i]: edges leaving node i
  std::string label;
  bool sever_source = false;
};

enum class TopologyKind { Complete, Ring, Line, CliqueLine, Disconnected, EdgeListFile };

// Declarative description of a topology generator. Building a Topology from a
// family is a pure function of (kind, n, lambda).
struct TopologyFamily {
  TopologyKind kind = TopologyKind::Complete;
  double lambda = 1.0;
  bool sever_source = false;  // Disconnected only
  std::string path;           // EdgeListFile only
};

namespace detail {
inline void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("topology: lambda must be positive");
}
}  // namespace detail

// Fully-connected graph: every node spreads its budget lambda evenly over the
// other n-1 nodes. n = 1 degenerates to a single node with no edges.
inline Topology make_complete(int n, double lambda) {
  if (n < 1) throw std::invalid_argument("make_complete: n must be >= 1");
  detail::require_positive_lambda(lambda);
  Topology t;
  t.n = n;
  t.label = "complete";
  t.out.resize(n);
  if (n == 1) return t;
  const double rate = lambda / (n - 1);
  for (int i = 0; i < n; ++i) {
    t.out[i].reserve(n - 1);
    for (int j = 0; j < n; ++j)
      if (j != i) t.out[i].push_back({j, rate});
  }
  return t;
}

// Cycle 0-1-...-(n-1)-0, each node sends lambda/2 to each ring neighbor.
inline Topology make_ring(int n, double lambda) {
  if (n < 3) throw std::invalid_argument("make_ring: n must be >= 3");
  detail::require_positive_lambda(lambda);
  Topology t;
  t.n = n;
  t.label = "ring";
  t.out.resize(n);
  const double rate = lambda / 2.0;
  for (int i = 0; i < n; ++i) {
    t.out[i].push_back({(i + 1) % n, rate});
    t.out[i].push_back({(i + n - 1) % n, rate});
  }
  return t;
}

// Path 0-1-...-(n-1). Interior nodes split lambda over both neighbors,
// endpoints send the full budget to their single neighbor.
inline Topology make_line(int n, double lambda) {
  if (n < 2) throw std::invalid_argument("make_line: n must be >= 2");
  detail::require_positive_lambda(lambda);
  Topology t;
  t.n = n;
  t.label = "line";
  t.out.resize(n);
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      t.out[i].push_back({1, lambda});
    } else if (i == n - 1) {
      t.out[i].push_back({n - 2, lambda});
    } else {
      t.out[i].push_back({i + 1, lambda / 2.0});
      t.out[i].push_back({i - 1, lambda / 2.0});
    }
  }
  return t;
}

namespace detail {
// Smallest integer s with s^3 >= n^2, i.e. ceil(n^(2/3)) computed exactly.
inline int ceil_n_two_thirds(int n) {
  const long long target = 1LL * n * n;
  long long s = static_cast<long long>(std::cbrt(static_cast<double>(target)));
  while (s > 1 && (s - 1) * (s - 1) * (s - 1) >= target) --s;
  while (s * s * s < target) ++s;
  return static_cast<int>(s);
}
}  // namespace detail

// Clique on the first n - ceil(n^(2/3)) nodes joined to a line on the
// remaining ceil(n^(2/3)) nodes. Clique node 0 carries the junction edge to
// the line's first node; every node splits lambda evenly over its incident
// out-edges, so the per-node budget invariant holds at the junction too.
inline Topology make_clique_line(int n, double lambda) {
  if (n < 8) throw std::invalid_argument("make_clique_line: n must be >= 8");
  detail::require_positive_lambda(lambda);
  const int line = detail::ceil_n_two_thirds(n);
  const int m = n - line;  // clique size; >= 4 for all n >= 8
  Topology t;
  t.n = n;
  t.label = "clique-line";
  t.out.resize(n);
  // clique part: node 0 has the extra junction edge, so degree m; others m-1
  for (int i = 0; i < m; ++i) {
    const int deg = (i == 0) ? m : m - 1;
    const double rate = lambda / deg;
    for (int j = 0; j < m; ++j)
      if (j != i) t.out[i].push_back({j, rate});
    if (i == 0) t.out[i].push_back({m, rate});
  }
  // line part: nodes m..n-1; node m also neighbors clique node 0
  for (int i = m; i < n; ++i) {
    std::vector<std::int32_t> nbrs;
    if (i == m) nbrs.push_back(0);
    if (i > m) nbrs.push_back(i - 1);
    if (i < n - 1) nbrs.push_back(i + 1);
    const double rate = lambda / static_cast<double>(nbrs.size());
    for (auto j : nbrs) t.out[i].push_back({j, rate});
  }
  return t;
}

// No gossip edges at all. With sever_source set, the engine also disables the
// source->node links while this topology is active.
inline Topology make_disconnected(int n, bool sever_source) {
  if (n < 1) throw std::invalid_argument("make_disconnected: n must be >= 1");
  Topology t;
  t.n = n;
  t.label = sever_source ? "disconnected-severed" : "disconnected";
  t.sever_source = sever_source;
  t.out.resize(n);
  return t;
}

// Reads a plain-text edge list, one `i j rate` triple per line, 0-based ids.
// Blank lines and lines starting with '#' are skipped. declared_n < 0 means
// infer n as max id + 1; otherwise ids must fall inside [0, declared_n).
// Invariant checking is deferred to validate_topology.
inline Topology load_edge_list(const std::string& path, int declared_n = -1) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_edge_list: cannot open " + path);
  Topology t;
  t.label = "file:" + path;
  std::set<std::pair<int, int>> seen;
  int max_id = -1;
  std::string line;
  int lineno = 0;
  std::vector<std::tuple<int, int, double>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    int i = 0, j = 0;
    double rate = 0.0;
    if (!(ls >> i >> j >> rate)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected `i j rate`");
    }
    std::string trail;
    if (ls >> trail) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": trailing tokens after `i j rate`");
    }
    if (i < 0 || j < 0) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": node ids must be nonnegative");
    }
    if (!seen.insert({i, j}).second) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": duplicate edge " + std::to_string(i) + "->" +
                               std::to_string(j));
    }
    max_id = std::max({max_id, i, j});
    edges.emplace_back(i, j, rate);
  }
  t.n = declared_n >= 0 ? declared_n : max_id + 1;
  if (max_id >= t.n) {
    throw std::runtime_error("load_edge_list: node id " + std::to_string(max_id) +
                             " outside declared n=" + std::to_string(t.n));
  }
  t.out.resize(t.n);
  for (auto& [i, j, rate] : edges) t.out[i].push_back({j, rate});
  return t;
}

// One broken invariant, reported as data.
struct TopologyViolation {
  int node;
  double out_rate_sum;
  std::string what;
};

// Checks the per-node budget normalization (sum of out-rates equals lambda
// within 1e-9 relative), strict edge positivity, no self-loops, and target
// bounds. Isolated nodes are exempt only when the whole graph is edgeless,
// which is how a disconnected topology presents.
inline std::vector<TopologyViolation> validate_topology(const Topology& t, double lambda) {
  std::vector<TopologyViolation> v;
  bool edgeless = true;
  for (const auto& es : t.out)
    if (!es.empty()) edgeless = false;
  for (int i = 0; i < t.n; ++i) {
    double sum = 0.0;
    for (const auto& e : t.out[i]) {
      sum += e.rate;
      if (e.target == i)
        v.push_back({i, sum, "self-loop at node " + std::to_string(i)});
      if (e.target < 0 || e.target >= t.n)
        v.push_back({i, sum, "edge target " + std::to_string(e.target) + " out of range"});
      if (!(e.rate > 0.0))
        v.push_back({i, sum, "nonpositive rate on edge " + std::to_string(i) + "->" +
                                 std::to_string(e.target)});
    }
    if (t.out[i].empty()) {
      if (!edgeless)
        v.push_back({i, 0.0, "node " + std::to_string(i) + " isolated in a non-empty graph"});
      continue;
    }
    if (std::abs(sum - lambda) > 1e-9 * lambda)
      v.push_back({i, sum, "node " + std::to_string(i) + " out-rate sum " +
                               std::to_string(sum) + " != lambda"});
  }
  return v;
}

// Builds the topology a family describes at size n.
inline Topology make_topology(const TopologyFamily& f, int n) {
  switch (f.kind) {
    case TopologyKind::Complete: return make_complete(n, f.lambda);
    case TopologyKind::Ring: return make_ring(n, f.lambda);
    case TopologyKind::Line: return make_line(n, f.lambda);
    case TopologyKind::CliqueLine: return make_clique_line(n, f.lambda);
    case TopologyKind::Disconnected: return make_disconnected(n, f.sever_source);
    case TopologyKind::EdgeListFile: return load_edge_list(f.path, n);
  }
  throw std::invalid_argument("make_topology: unknown kind");
}

// Parses the CLI/config spelling of a family: complete | ring | line |
// clique-line | disconnected | disconnected:severed | file:<path>.
inline TopologyFamily parse_topology_spec(const std::string& s, double lambda = 1.0) {
  TopologyFamily f;
  f.lambda = lambda;
  if (s == "complete") f.kind = TopologyKind::Complete;
  else if (s == "ring") f.kind = TopologyKind::Ring;
  else if (s == "line") f.kind = TopologyKind::Line;
  else if (s == "clique-line") f.kind = TopologyKind::CliqueLine;
  else if (s == "disconnected") f.kind = TopologyKind::Disconnected;
  else if (s == "disconnected:severed") {
    f.kind = TopologyKind::Disconnected;
    f.sever_source = true;
  } else if (s.rfind("file:", 0) == 0) {
    f.kind = TopologyKind::EdgeListFile;
    f.path = s.substr(5);
    if (f.path.empty()) throw std::invalid_argument("topology spec: empty file path");
  } else {
    throw std::invalid_argument("unknown topology spec: " + s);
  }
  return f;
}

inline std::string topology_kind_name(TopologyKind k) {
  switch (k) {
    case TopologyKind::Complete: return "complete";
    case TopologyKind::Ring: return "ring";
    case TopologyKind::Line: return "line";
    case TopologyKind::CliqueLine: return "clique-line";
    case TopologyKind::Disconnected: return "disconnected";
    case TopologyKind::EdgeListFile: return "file";
  }
  return "?";
}

}  // namespace vage

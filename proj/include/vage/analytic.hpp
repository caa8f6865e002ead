#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vage/topology.hpp"

namespace vage {

// Generalized harmonic number H^(k)(n) = sum_{j=1..n} 1/j^k for k in {1, 2}.
// Summed smallest term first.
inline double harmonic_number(long long n, int k) {
  if (n < 1) throw std::invalid_argument("harmonic_number: n must be >= 1");
  if (k != 1 && k != 2) throw std::invalid_argument("harmonic_number: k must be 1 or 2");
  double sum = 0.0;
  for (long long j = n; j >= 1; --j) {
    const double d = static_cast<double>(j);
    sum += (k == 1) ? 1.0 / d : 1.0 / (d * d);
  }
  return sum;
}

// Expected version-age recursion for the fully-connected gossip network,
// evaluated backward over coalition sizes j = n..1:
//   lambda0(j) = j*lambda_s/n
//   lambdai(j) = j*(n-j)*lambda/(n-1)        (0 when n == 1)
//   v_n        = lambda_e/lambda_s
//   v_j        = (lambda_e + lambdai(j)*v_{j+1}) / (lambda0(j) + lambdai(j))
// Returns the whole profile; v[j-1] holds v_j. v_1 is the per-node long-term
// average age. Independent of the event-driven simulator by construction.
inline std::vector<double> shs_complete_age_profile(int n, double lambda_e,
                                                    double lambda, double lambda_s) {
  if (n < 1) throw std::invalid_argument("shs_complete_age_profile: n must be >= 1");
  if (!(lambda_e > 0.0) || !(lambda > 0.0) || !(lambda_s > 0.0))
    throw std::invalid_argument("shs_complete_age_profile: rates must be positive");
  std::vector<double> v(n);
  v[n - 1] = lambda_e / lambda_s;
  for (int j = n - 1; j >= 1; --j) {
    const double l0 = j * lambda_s / n;
    const double li = (n == 1) ? 0.0 : static_cast<double>(j) * (n - j) * lambda / (n - 1);
    v[j - 1] = (lambda_e + li * v[j]) / (l0 + li);
  }
  return v;
}

inline double shs_complete_age(int n, double lambda_e, double lambda, double lambda_s) {
  return shs_complete_age_profile(n, lambda_e, lambda, lambda_s).front();
}

// Which slice of the network a scaling class describes.
enum class AgePart { Network, CliquePart, LinePart };

// Asymptotic growth family for a long-term average age: logarithmic or a
// power law n^alpha.
struct GrowthClass {
  enum Kind { Log, Power } kind = Log;
  double alpha = 0.0;

  double eval(int n) const {
    return kind == Log ? std::log(static_cast<double>(n))
                       : std::pow(static_cast<double>(n), alpha);
  }
};

struct ScalingClass {
  TopologyKind family;
  GrowthClass growth;
  AgePart applies_to = AgePart::Network;
};

// The scaling classes this laboratory expects per generated family. The
// clique-line entry carries separate classes for its two parts. Disconnected
// has no finite class (empty list). Edge-list graphs have no known class.
inline std::vector<ScalingClass> expected_scaling(TopologyKind kind) {
  using K = TopologyKind;
  switch (kind) {
    case K::Complete:
      return {{kind, {GrowthClass::Log, 0.0}, AgePart::Network}};
    case K::Ring:
      return {{kind, {GrowthClass::Power, 0.5}, AgePart::Network}};
    case K::Line:
      // bulk behaves like the ring; the cut only perturbs nodes near the ends
      return {{kind, {GrowthClass::Power, 0.5}, AgePart::Network}};
    case K::CliqueLine:
      return {{kind, {GrowthClass::Power, 1.0 / 3.0}, AgePart::Network},
              {kind, {GrowthClass::Log, 0.0}, AgePart::CliquePart},
              {kind, {GrowthClass::Power, 2.0 / 3.0}, AgePart::LinePart}};
    case K::Disconnected:
      return {};
    case K::EdgeListFile:
      break;
  }
  throw std::invalid_argument("expected_scaling: no known class for this family");
}

}  // namespace vage

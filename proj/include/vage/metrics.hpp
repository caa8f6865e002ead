#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vage/analytic.hpp"
#include "vage/engine.hpp"
#include "vage/rng.hpp"
#include "vage/topology.hpp"

namespace vage {

inline double network_average(const SimResult& r) {
  if (r.per_node_avg_age.empty())
    throw std::invalid_argument("network_average: empty result");
  double s = 0.0;
  for (double v : r.per_node_avg_age) s += v;
  return s / static_cast<double>(r.per_node_avg_age.size());
}

struct TypicalSetReport {
  std::vector<int> member_ids;
  double fraction = 0.0;
  double threshold_used = 0.0;
  std::string criterion;
};

namespace detail {
inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}
}  // namespace detail

// Nodes whose long-term average age stays within a multiplier of the median.
// The median stands in for the network's own scale; it is robust against the
// small heavy tail that can dominate the mean.
inline TypicalSetReport typical_set(const std::vector<double>& per_node_avg_age, double c) {
  if (c < 1.0) throw std::invalid_argument("typical_set: multiplier must be >= 1");
  if (per_node_avg_age.empty()) throw std::invalid_argument("typical_set: empty ages");
  TypicalSetReport rep;
  rep.threshold_used = c * detail::median(per_node_avg_age);
  rep.criterion = "avg_age <= " + std::to_string(c) + " * median";
  for (std::size_t i = 0; i < per_node_avg_age.size(); ++i)
    if (per_node_avg_age[i] <= rep.threshold_used)
      rep.member_ids.push_back(static_cast<int>(i));
  rep.fraction =
      static_cast<double>(rep.member_ids.size()) / static_cast<double>(per_node_avg_age.size());
  return rep;
}

inline TypicalSetReport typical_set(const SimResult& r, double c) {
  return typical_set(r.per_node_avg_age, c);
}

// Membership for a varying-topologies evaluation: the intersection of the two
// static topologies' typical sets. Inputs hold sorted ascending ids (as
// typical_set produces).
inline std::vector<int> intersect_members(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct PowerLawFit {
  double alpha = 0.0;  // exponent
  double c = 0.0;      // value = c * n^alpha
  double r2 = 0.0;
};

struct LogLinearFit {
  double a = 0.0;  // value = a * ln n + b
  double b = 0.0;
  double r2 = 0.0;
};

enum class FitModel { PowerLaw, LogLinear };

struct ScalingFit {
  PowerLawFit power;
  LogLinearFit loglinear;
  FitModel selected = FitModel::LogLinear;
  std::vector<std::pair<double, double>> points;
};

namespace detail {
struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
  return f;
}
}  // namespace detail

// Fits both candidate scaling models to (n, value) points and keeps the one
// with the larger r2:
//   PowerLaw:  least squares on (ln n, ln value)
//   LogLinear: least squares on (ln n, value)
// Needs >= 4 points with strictly increasing n and positive values.
inline ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw std::invalid_argument("fit_scaling: need at least 4 points");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i].first > points[i - 1].first))
      throw std::invalid_argument("fit_scaling: n must be strictly increasing");
  std::vector<double> ln_n, v, ln_v;
  for (const auto& [n, value] : points) {
    if (!(n > 0.0) || !(value > 0.0))
      throw std::invalid_argument("fit_scaling: points must be positive");
    ln_n.push_back(std::log(n));
    v.push_back(value);
    ln_v.push_back(std::log(value));
  }
  ScalingFit fit;
  fit.points = points;
  const auto p = detail::least_squares(ln_n, ln_v);
  fit.power = {p.slope, std::exp(p.intercept), p.r2};
  const auto l = detail::least_squares(ln_n, v);
  fit.loglinear = {l.slope, l.intercept, l.r2};
  fit.selected = fit.power.r2 > fit.loglinear.r2 ? FitModel::PowerLaw : FitModel::LogLinear;
  return fit;
}

struct FirstPassageSample {
  int node = -1;
  double fpt = 0.0;
};

// Time for one tagged update to travel from the source to `target` through a
// static topology: the same event races as the engine, with versions
// collapsed to a reached/not-reached marker. lambda_e plays no role in
// propagation and is accepted only to mirror the system's rate set.
inline FirstPassageSample first_passage_sample(const Topology& topo, double /*lambda_e_ignored*/,
                                               double lambda, double lambda_s, int target,
                                               Rng& rng, double time_cap = 1e7) {
  if (target < 0 || target >= topo.n)
    throw std::invalid_argument("first_passage_sample: target out of range");
  (void)lambda;
  GossipSampler sampler;
  sampler.build(topo, lambda_s);
  const double total = sampler.source_rate + sampler.total_rate;
  if (!(total > 0.0))
    throw std::runtime_error("first_passage_sample: target unreachable (no active links)");
  std::vector<std::uint8_t> reached(topo.n, 0);
  double t = 0.0;
  while (t < time_cap) {
    t += rng.exponential(total);
    const double u = rng.uniform(total);
    if (u < sampler.source_rate) {
      const auto j = static_cast<std::int32_t>(rng.below(topo.n));
      if (!reached[j]) {
        reached[j] = 1;
        if (j == target) return {target, t};
      }
    } else {
      const auto [sender, edge] = sampler.pick(rng);
      const auto j = topo.out[sender][edge].target;
      if (reached[sender] && !reached[j]) {
        reached[j] = 1;
        if (j == target) return {target, t};
      }
    }
  }
  throw std::runtime_error("first_passage_sample: target not reached within time cap");
}

// Two-sample Kolmogorov-Smirnov statistic: the largest gap between the two
// empirical CDFs.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

struct CouponMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Moments of B, the first time every node has received a direct source
// update: the max of n independent Exponential(lambda_s/n) clocks.
//   E[B] = (n/lambda_s) * H1(n)      Var[B] = (n/lambda_s)^2 * H2(n)
inline CouponMoments coupon_collector_moments(long long n, double lambda_s) {
  if (n < 1) throw std::invalid_argument("coupon_collector_moments: n must be >= 1");
  if (!(lambda_s > 0.0))
    throw std::invalid_argument("coupon_collector_moments: lambda_s must be positive");
  const double scale = static_cast<double>(n) / lambda_s;
  return {scale * harmonic_number(n, 1), scale * scale * harmonic_number(n, 2)};
}

// Chebyshev bound for the direct-update time deviating by more than n*ln n:
// H2(n) / ln^2 n. Vacuous (> 1) at small n, o(1) as n grows.
inline double chebyshev_direct_update_tail(long long n) {
  if (n < 3) throw std::invalid_argument("chebyshev_direct_update_tail: n must be >= 3");
  const double ln_n = std::log(static_cast<double>(n));
  return harmonic_number(n, 2) / (ln_n * ln_n);
}

}  // namespace vage

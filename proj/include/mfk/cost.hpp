#ifndef MFK_COST_HPP
#define MFK_COST_HPP

// Manipulation cost f = integral over t in [0, 1] of |dP| / (e3 + e2 t).
// The closed form drives the sampler; the adaptive quadrature is an
// independent route used to check it.

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "mfk/error.hpp"

namespace mfk {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct CostInput {
  double delta_norm = 0.0;  ///< |dP|, the commanded motion magnitude.
  double e3 = 0.0;          ///< displacement of the distal joint q3.
  double e2 = 0.0;          ///< displacement of the middle joint q2.
};

/// Exact value of the cost integral; +inf where the integral diverges.
inline double cost_closed_form(const CostInput& in) {
  const double d = in.delta_norm;
  if (d == 0.0) return 0.0;
  if (in.e3 > 0.0) {
    if (in.e2 > 0.0) return (d / in.e2) * std::log1p(in.e2 / in.e3);
    return d / in.e3;
  }
  // e3 == 0: the integrand behaves like 1/t at the origin.
  return kInfinity;
}

namespace detail {

// 15-point Gauss-Kronrod abscissae/weights on [-1, 1] (positive half) with
// the embedded 7-point Gauss weights.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
Segment gauss_kronrod15(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive G7-K15 quadrature of `f` over [a, b] to an absolute
/// error estimate `tolerance`. Stops after `max_segments` subdivisions.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double tolerance,
                          int max_segments = 2000) {
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gauss_kronrod15(f, a, b));
  double total = heap.top().value;
  double error = heap.top().error;
  int segments = 1;
  while (error > tolerance && segments < max_segments) {
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gauss_kronrod15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  // Re-sum to shed the drift of the running update.
  total = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    heap.pop();
  }
  return total;
}

/// Numerical evaluation of the cost integral. Only the convergent regime
/// (e3 > 0) is accepted.
inline double cost_quadrature(const CostInput& in, double tolerance) {
  if (in.delta_norm == 0.0) return 0.0;
  if (!(in.e3 > 0.0)) {
    throw Error(ErrorCode::DivergentIntegral, "cost integral diverges for e3 <= 0");
  }
  const auto integrand = [&](double t) { return in.delta_norm / (in.e3 + in.e2 * t); };
  return integrate_adaptive(integrand, 0.0, 1.0, tolerance);
}

/// Default half-width of the acceptance band around f = 1.
inline constexpr double kDefaultCostBand = 0.05;

/// Sample acceptance: |f - 1| <= epsilon_f. The zero-motion task with zero
/// displacements is accepted as the identity configuration.
inline bool accepts(const CostInput& in, double epsilon_f) {
  if (in.delta_norm == 0.0 && in.e2 == 0.0 && in.e3 == 0.0) return true;
  const double f = cost_closed_form(in);
  return std::isfinite(f) && std::abs(f - 1.0) <= epsilon_f;
}

}  // namespace mfk

#endif  // MFK_COST_HPP

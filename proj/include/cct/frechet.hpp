#ifndef CCT_FRECHET_HPP
#define CCT_FRECHET_HPP

#include <optional>

#include "cct/geometry.hpp"

namespace cct {

/// Closed interval; empty when lo > hi.
struct Interval {
  double lo = 1, hi = 0;
  bool empty() const { return lo > hi; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

/// Free-space decision: true iff the continuous Fréchet distance of P and Q
/// is at most eps. All comparisons are non-strict, so the predicate holds at
/// the exact distance.
bool decide(const Trajectory& p, const Trajectory& q, double eps);

struct ExactMode {
  enum Kind { CriticalValues, Bisection, Auto } kind = Auto;
  double tol = 1e-9;  // absolute width for Bisection
  static ExactMode critical() { return {CriticalValues, 0}; }
  static ExactMode bisection(double tol) { return {Bisection, tol}; }
  static ExactMode automatic() { return {Auto, 1e-9}; }
};

/// Continuous Fréchet distance. CriticalValues enumerates the classical
/// candidate values and binary-searches them with decide(); Bisection
/// brackets with cheap bounds and bisects to the given absolute width,
/// returning the certified upper end. Auto picks CriticalValues for
/// n*m <= 10^4 and Bisection(1e-9 * upper bound) otherwise.
double distance_exact(const Trajectory& p, const Trajectory& q,
                      ExactMode mode = ExactMode::automatic());

/// Exact discrete Fréchet distance (vertex couplings only).
double discrete_frechet(const Trajectory& p, const Trajectory& q);

/// Certified interval around delta_F(P, segment ab), width <= tol.
Interval segment_distance(const Trajectory& p, Point a, Point b, double tol);

/// Fréchet-bounded simplification: greedy forward shortcutting over a vertex
/// subsequence that keeps delta_F(P, result) <= eps_hat.
Trajectory simplify(const Trajectory& p, double eps_hat);

}  // namespace cct

#endif

#pragma once

// Planar champagne-bottle Hamiltonian H = |p|^2/2 + a*r^4 + b*r^2 with
// angular momentum J = x*py - y*px.  Provides the two commuting vector
// fields, exact rotation flow for J, torus seed points on the radial-cycle
// section, and the closed-form radii used to place them.

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "errors.hpp"

namespace maslov {

struct SystemSpec {
  double a = 1.0;  // quartic coefficient, must stay positive (confining)
  double b = -1.0; // quadratic coefficient, negative for the bottle shape
};

struct PhasePoint {
  double x = 0, y = 0, px = 0, py = 0;
};

inline double potential(const SystemSpec& sys, double r2) {
  return sys.a * r2 * r2 + sys.b * r2;
}

inline double energy(const SystemSpec& sys, const PhasePoint& p) {
  return 0.5 * (p.px * p.px + p.py * p.py) +
         potential(sys, p.x * p.x + p.y * p.y);
}

inline double angular_momentum(const PhasePoint& p) {
  return p.x * p.py - p.y * p.px;
}

// Hamiltonian field (dx, dy, dpx, dpy); dV/dq = (4*a*r^2 + 2*b) * q is
// polynomial in the Cartesian coordinates, no polar singularity.
inline PhasePoint hamiltonian_field(const SystemSpec& sys, const PhasePoint& p) {
  double r2 = p.x * p.x + p.y * p.y;
  double slope = 4.0 * sys.a * r2 + 2.0 * sys.b;
  return {p.px, p.py, -slope * p.x, -slope * p.y};
}

// Field of J: simultaneous rotation of position and momentum.
inline PhasePoint rotation_field(const PhasePoint& p) {
  return {-p.y, p.x, -p.py, p.px};
}

// Exact time-t flow of J.
inline PhasePoint rotate(const PhasePoint& p, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y,
          c * p.px - s * p.py, s * p.px + c * p.py};
}

inline double effective_potential(const SystemSpec& sys, double j, double r) {
  return 0.5 * j * j / (r * r) + potential(sys, r * r);
}

namespace detail {

// Unique positive root of 4*a*w^3 + 2*b*w^2 = j^2 in w = r^2 (a > 0).
inline double well_radius_squared(const SystemSpec& sys, double j) {
  if (sys.a <= 0) throw DomainError("well radius: quartic coefficient not positive");
  if (j == 0) {
    if (sys.b >= 0) return 0.0;
    return -sys.b / (2.0 * sys.a);
  }
  auto f = [&](double w) {
    return (4.0 * sys.a * w + 2.0 * sys.b) * w * w - j * j;
  };
  double hi = 1.0;
  while (f(hi) < 0) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Radius of the circular orbit (minimum of the effective potential).
inline double well_radius(const SystemSpec& sys, double j) {
  return std::sqrt(detail::well_radius_squared(sys, j));
}

// Smallest energy carrying a torus at this angular momentum.
inline double min_effective_energy(const SystemSpec& sys, double j) {
  double w = detail::well_radius_squared(sys, j);
  if (w == 0) return 0.0;
  return effective_potential(sys, j, std::sqrt(w));
}

// Outer turning radius for the j = 0 motion: largest root of V(r) = h.
inline double outer_turning_radius(const SystemSpec& sys, double h) {
  double disc = sys.b * sys.b + 4.0 * sys.a * h;
  if (disc < 0 || sys.a <= 0)
    throw DomainError("outer turning radius: no bounded motion at this energy");
  double w = (-sys.b + std::sqrt(disc)) / (2.0 * sys.a);
  if (w <= 0) throw DomainError("outer turning radius: energy below the well");
  return std::sqrt(w);
}

// True on the set of regular values of the energy-momentum map: above the
// circular-orbit energy curve and away from the isolated critical value at
// the origin of the (j, h) plane.
inline bool is_regular_value(const SystemSpec& sys, double j, double h) {
  if (j == 0 && h == 0) return false;
  return h > min_effective_energy(sys, j);
}

// Point on the torus T(j, h) chosen on the section where the radial cycle
// starts: at the circular-orbit radius moving outward when j != 0, at the
// outer turning point when j = 0.
inline PhasePoint seed_point(const SystemSpec& sys, double j, double h) {
  if (!is_regular_value(sys, j, h))
    throw DomainError("seed point: (" + std::to_string(j) + ", " +
                      std::to_string(h) + ") is not a regular value");
  if (j != 0) {
    double rs = well_radius(sys, j);
    double e = h - effective_potential(sys, j, rs);
    return {rs, 0.0, std::sqrt(2.0 * e), j / rs};
  }
  return {outer_turning_radius(sys, h), 0.0, 0.0, 0.0};
}

// Adaptive dense-output integration of the Hamiltonian flow.
inline PhasePoint flow(const SystemSpec& sys, const PhasePoint& start,
                       double t, double tol = 1e-12) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 4>;
  auto rhs = [&sys](const State& s, State& d, double) {
    PhasePoint f = hamiltonian_field(sys, {s[0], s[1], s[2], s[3]});
    d = {f.x, f.y, f.px, f.py};
  };
  State s{start.x, start.y, start.px, start.py};
  auto stepper = ode::make_dense_output(tol, tol,
                                        ode::runge_kutta_dopri5<State>());
  ode::integrate_adaptive(stepper, rhs, s, 0.0, t,
                          t > 0 ? 0.01 : -0.01);
  return {s[0], s[1], s[2], s[3]};
}

}  // namespace maslov

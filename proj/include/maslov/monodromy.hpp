#pragma once

// Radial-cycle tracing on champagne-bottle tori and continuation of the
// cycle data around loops in the (j, h) plane: per-sample periods, polar
// advance, action integrals, frame windings, branch-corrected continuation,
// and the resulting integer monodromy matrix with its invariant vector.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "dynamics.hpp"
#include "errors.hpp"
#include "normal_forms.hpp"

namespace maslov {

struct TraceOptions {
  double tol = 1e-10;      // integrator absolute and relative tolerance
  double time_cap = 1000;  // period search beyond this is near-critical
  double snap_j = 1e-13;   // relative half-width of the j = 0 snap window
};

struct CycleData {
  double j = 0, h = 0;
  double t_rad = 0;       // radial period
  double theta_raw = 0;   // polar-angle advance over one radial cycle
  double s_full = 0;      // integral of |p|^2 dt over the cycle
  double s_ang = 0;       // integral of j^2/r^2 dt (angular share)
  double s_pr2 = 0;       // integral of p_r^2 dt (radial share)
  double i1 = 0;          // first action = j
  double i2_raw = 0;      // radial action on the local angle branch
  double w1 = 0;          // frame winding along the rotation cycle
  double w2 = 0;          // frame winding along the radial cycle
  int caustic_count = 0;  // transversal zeros of q.p along the radial cycle
  double frame_floor = 0; // min |det Z| / max |det Z|, degeneracy margin
};

namespace detail {

using State7 = std::array<double, 7>;  // x, y, px, py, S_full, S_ang, S_pr2

// Determinant of the complex frame matrix Z = Q - iP built from the two
// commuting fields; nonvanishing on regular tori.  The momentum sign fixes
// the orientation so the radial cycle winds by +2.
constexpr double kFrameMomentumSign = -1.0;

inline std::complex<double> frame_det(const SystemSpec& sys, double x,
                                      double y, double px, double py) {
  PhasePoint f = hamiltonian_field(sys, {x, y, px, py});
  std::complex<double> i(0.0, kFrameMomentumSign);
  // columns (X_H, X_J); rows split into position and momentum pairs
  std::complex<double> z11 = px + i * f.px, z12 = -y + i * (-py);
  std::complex<double> z21 = py + i * f.py, z22 = x + i * px;
  return z11 * z22 - z12 * z21;
}

inline double wrap_pi(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

// Shared accumulator state for the angle and frame-phase sweeps.
struct SweepState {
  double theta = 0;   // t-unwrapped polar angle advance
  double phase = 0;   // t-unwrapped arg det(Z)^2 advance
  double min_z = 0, max_z = 0;
  int sign_j = 1;     // branch choice for exact half-turn steps
};

template <typename Eval>
void accumulate_angles(const SystemSpec& sys, const Eval& eval, double ta,
                       const State7& a, double tb, const State7& b,
                       SweepState& sw, int depth) {
  double tha = std::atan2(a[1], a[0]), thb = std::atan2(b[1], b[0]);
  double dth = wrap_pi(thb - tha);
  std::complex<double> za = frame_det(sys, a[0], a[1], a[2], a[3]);
  std::complex<double> zb = frame_det(sys, b[0], b[1], b[2], b[3]);
  double ma = std::abs(za), mb = std::abs(zb);
  if (sw.max_z == 0) {
    sw.min_z = std::min(ma, mb);
    sw.max_z = std::max(ma, mb);
  } else {
    sw.min_z = std::min(sw.min_z, std::min(ma, mb));
    sw.max_z = std::max(sw.max_z, std::max(ma, mb));
  }
  double dph = std::arg(zb / za);  // phase step of det Z itself
  bool theta_ok = std::abs(dth) < M_PI - 0.2;
  bool phase_ok = std::abs(dph) < M_PI / 4;
  if (theta_ok && phase_ok) {
    sw.theta += dth;
    sw.phase += 2.0 * dph;
    return;
  }
  if (depth <= 0) {
    if (!phase_ok)
      throw ResolutionError("frame phase advances too fast to track");
    // polar angle jump through the origin: half turn in the direction of
    // the angular drift, exactly pi for the snapped j = 0 samples
    double half = sw.sign_j >= 0 ? M_PI : -M_PI;
    sw.theta += half + wrap_pi(dth - half);
    sw.phase += 2.0 * dph;
    return;
  }
  double tm = 0.5 * (ta + tb);
  State7 m = eval(tm);
  accumulate_angles(sys, eval, ta, a, tm, m, sw, depth - 1);
  accumulate_angles(sys, eval, tm, m, tb, b, sw, depth - 1);
}

inline double phase_dist(const State7& s, const PhasePoint& p) {
  return std::max(std::max(std::abs(s[0] - p.x), std::abs(s[1] - p.y)),
                  std::max(std::abs(s[2] - p.px), std::abs(s[3] - p.py)));
}

}  // namespace detail

// One radial cycle on the torus over (j, h): integrates the Hamiltonian
// flow from the standard section to its first return, with the three action
// quadratures carried in the state and the polar angle and frame phase
// unwrapped in time.
inline CycleData trace_radial_cycle(const SystemSpec& sys, double j, double h,
                                    const TraceOptions& opts = {}) {
  namespace ode = boost::numeric::odeint;
  using detail::State7;

  PhasePoint seed = seed_point(sys, j, h);
  bool radial_line = (j == 0);
  double rs2 = 0;
  if (!radial_line) {
    double rs = well_radius(sys, j);
    rs2 = rs * rs;
  }

  auto rhs = [&sys, j, radial_line](const State7& s, State7& d, double) {
    PhasePoint f = hamiltonian_field(sys, {s[0], s[1], s[2], s[3]});
    double p2 = s[2] * s[2] + s[3] * s[3];
    double ang = 0;
    if (!radial_line) {
      double r2 = s[0] * s[0] + s[1] * s[1];
      ang = j * j / r2;
    }
    d = {f.x, f.y, f.px, f.py, p2, ang, p2 - ang};
  };

  // event function: outward crossing of r = r* when j != 0, next outer
  // turning point (downward crossing of q.p) when j = 0
  auto event = [&](const State7& s) {
    if (radial_line) return s[0] * s[2] + s[1] * s[3];
    return s[0] * s[0] + s[1] * s[1] - rs2;
  };
  int prev_ev = radial_line ? -1 : 1;
  auto triggers = [&](int prev, double cur) {
    if (radial_line) return prev > 0 && cur <= 0;
    return prev < 0 && cur >= 0;
  };

  State7 s0{seed.x, seed.y, seed.px, seed.py, 0, 0, 0};
  auto stepper =
      ode::make_dense_output(opts.tol, opts.tol,
                             ode::runge_kutta_dopri5<State7>());
  stepper.initialize(s0, 0.0, 1e-3);

  detail::SweepState sweep;
  sweep.sign_j = j < 0 ? -1 : 1;
  auto eval = [&stepper](double t) {
    State7 out;
    stepper.calc_state(t, out);
    return out;
  };

  double prev_t = 0;
  State7 prev_s = s0;
  int caustics = 0;
  int last_u_sign = 0;  // outstanding nonzero sign of q.p
  double t_end = -1;
  State7 end_state{};

  const int kSub = 8;
  for (long step = 0; t_end < 0; ++step) {
    if (step > 2000000)
      throw IntegrationError("radial cycle: step limit exhausted");
    auto interval = stepper.do_step(rhs);
    if (interval.second > opts.time_cap)
      throw NearCriticalError("radial cycle period exceeds the time cap", -1);
    for (int k = 1; k <= kSub && t_end < 0; ++k) {
      double tk = interval.first +
                  (interval.second - interval.first) * k / kSub;
      State7 sk = eval(tk);
      double ev = event(sk);
      if (triggers(prev_ev, ev)) {
        // refine the crossing by bisection on the dense output
        double lo = prev_t, hi = tk;
        for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, hi);
             ++it) {
          double mid = 0.5 * (lo + hi);
          double em = event(eval(mid));
          bool mid_after = radial_line ? (em <= 0) : (em >= 0);
          (mid_after ? hi : lo) = mid;
        }
        t_end = hi;
        sk = eval(t_end);
      }
      detail::accumulate_angles(sys, eval, prev_t, prev_s, t_end < 0 ? tk : t_end,
                                sk, sweep, 60);
      if (t_end >= 0) {
        // the endpoint of the j = 0 cycle sits on the caustic itself and is
        // accounted for below, not as an interior crossing
        end_state = sk;
        break;
      }
      double u = sk[0] * sk[2] + sk[1] * sk[3];
      int us = u > 0 ? 1 : (u < 0 ? -1 : 0);
      if (us != 0) {
        if (last_u_sign != 0 && us != last_u_sign) ++caustics;
        last_u_sign = us;
      }
      prev_t = tk;
      prev_s = sk;
      if (ev != 0) prev_ev = ev > 0 ? 1 : -1;
    }
  }

  // seed sits on the caustic for the j = 0 section (q.p = 0 at the turning
  // point), closing the count for the final transversal crossing
  if (radial_line) ++caustics;

  // the cycle closes through the J-rotation arc undoing the polar advance;
  // that arc contributes -j*theta to the action and nothing to the phases
  PhasePoint end_rot = rotate(
      {end_state[0], end_state[1], end_state[2], end_state[3]}, -sweep.theta);
  double clos = detail::phase_dist(
      State7{end_rot.x, end_rot.y, end_rot.px, end_rot.py, 0, 0, 0}, seed);
  if (clos > 1e-6)
    throw IntegrationError("radial cycle failed to close (defect " +
                           std::to_string(clos) + ")");

  CycleData out;
  out.j = j;
  out.h = h;
  out.t_rad = t_end;
  out.theta_raw = sweep.theta;
  out.s_full = end_state[4];
  out.s_ang = end_state[5];
  out.s_pr2 = end_state[6];
  out.i1 = j;
  out.i2_raw = (out.s_full - j * out.theta_raw) / (2.0 * M_PI);
  out.w2 = sweep.phase / (2.0 * M_PI);
  out.caustic_count = caustics;
  out.frame_floor = sweep.max_z > 0 ? sweep.min_z / sweep.max_z : 0;
  if (out.frame_floor < 1e-9)
    throw ResolutionError("frame degenerates along the radial cycle");

  // the angular share of the action integral must match j * theta exactly;
  // their residual measures quadrature consistency
  double cancel = std::abs(out.s_ang - j * out.theta_raw);
  if (cancel > 1e-6 * std::max(1.0, std::abs(out.s_ang)))
    throw IntegrationError("angular action share disagrees with j * theta");

  // rotation cycle: the frame transforms equivariantly, so the winding
  // vanishes; computed from sampled phases rather than assumed
  {
    std::complex<double> zp = detail::frame_det(sys, seed.x, seed.y, seed.px,
                                                seed.py);
    double acc = 0;
    const int kRot = 64;
    for (int i = 1; i <= kRot; ++i) {
      PhasePoint q = rotate(seed, 2.0 * M_PI * i / kRot);
      std::complex<double> zq = detail::frame_det(sys, q.x, q.y, q.px, q.py);
      acc += 2.0 * std::arg(zq / zp);
      zp = zq;
    }
    out.w1 = acc / (2.0 * M_PI);
  }
  return out;
}

struct LoopSpec {
  double j0 = 0, h0 = 0;   // loop center in the (j, h) plane
  double rj = 0.1, rh = 0.1;
  std::size_t samples = 64;
  bool clockwise = false;
};

struct LoopSample {
  double s = 0;            // loop parameter in [0, 1]
  CycleData cycle;
  long branch = 0;         // accumulated 2*pi branch correction count
  double theta_cont = 0;   // branch-corrected polar advance
  double i2_cont = 0;      // branch-corrected radial action
};

struct MonodromyReport {
  std::vector<LoopSample> samples;  // samples.size() == loop.samples + 1
  long k = 0;                       // net branch jump around the loop
  IntMat m = IntMat::identity(2);   // cycle monodromy [[1, 0], [-k, 1]]
  IntVec mu;                        // rounded frame windings (w1, w2)
  double action_residual = 0;       // |I(1) - M * I(0)|, max norm
  double max_winding_deviation = 0; // worst distance of w to its integer
  Verdict verdict = Verdict::Vacuous;
  ClassificationResult classification;
};

// Continue the radial-cycle data around a loop of regular values and read
// off the integer monodromy.  Loop parametrization: angle 2*pi*s, counter-
// clockwise by default, starting at (j0 + rj, h0).
inline MonodromyReport continue_loop(const SystemSpec& sys,
                                     const LoopSpec& loop,
                                     const TraceOptions& opts = {}) {
  if (loop.samples < 16)
    throw DomainError("loop continuation needs at least 16 samples");
  std::size_t n = loop.samples;
  double snap = opts.snap_j * std::max(1.0, std::abs(loop.j0) + loop.rj);

  MonodromyReport rep;
  rep.samples.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    double s = static_cast<double>(i) / static_cast<double>(n);
    double ang = 2.0 * M_PI * s * (loop.clockwise ? -1.0 : 1.0);
    double j = loop.j0 + loop.rj * std::cos(ang);
    double h = loop.h0 + loop.rh * std::sin(ang);
    if (std::abs(j) < snap) j = 0;
    if (!is_regular_value(sys, j, h))
      throw NearCriticalError("loop leaves the regular region", s);
    LoopSample ls;
    ls.s = s;
    try {
      ls.cycle = trace_radial_cycle(sys, j, h, opts);
    } catch (NearCriticalError& e) {
      throw NearCriticalError(e.what(), s);
    }
    rep.samples.push_back(std::move(ls));
  }

  // 2*pi branch corrections making theta continuous in the loop parameter
  long c = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i > 0) {
      double jump = rep.samples[i].cycle.theta_raw -
                    rep.samples[i - 1].cycle.theta_raw;
      c += std::lround(jump / (2.0 * M_PI));
    }
    LoopSample& ls = rep.samples[i];
    ls.branch = c;
    ls.theta_cont = ls.cycle.theta_raw - 2.0 * M_PI * static_cast<double>(c);
    ls.i2_cont = ls.cycle.i2_raw +
                 ls.cycle.j * static_cast<double>(c);
  }
  rep.k = std::lround((rep.samples[n].theta_cont - rep.samples[0].theta_cont) /
                      (2.0 * M_PI));

  // windings must agree sample to sample and sit on integers
  long m1 = std::lround(rep.samples[0].cycle.w1);
  long m2 = std::lround(rep.samples[0].cycle.w2);
  for (const LoopSample& ls : rep.samples) {
    double d1 = std::abs(ls.cycle.w1 - std::lround(ls.cycle.w1));
    double d2 = std::abs(ls.cycle.w2 - std::lround(ls.cycle.w2));
    rep.max_winding_deviation = std::max({rep.max_winding_deviation, d1, d2});
    if (std::lround(ls.cycle.w1) != m1 || std::lround(ls.cycle.w2) != m2)
      throw ResolutionError("frame windings disagree across loop samples");
  }
  rep.mu = IntVec{Int(m1), Int(m2)};

  rep.m = IntMat::identity(2);
  rep.m(1, 0) = Int(-rep.k);

  const LoopSample& first = rep.samples.front();
  const LoopSample& last = rep.samples.back();
  double r1 = std::abs(last.cycle.i1 - first.cycle.i1);
  double r2 = std::abs(last.i2_cont -
                       (static_cast<double>(-rep.k) * first.cycle.i1 +
                        first.i2_cont));
  rep.action_residual = std::max(r1, r2);

  rep.verdict = check_maslov_invariance(rep.m, rep.mu);
  rep.classification = classify(rep.m);
  return rep;
}

}  // namespace maslov

// Copyright 2026 The hopmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hopmap/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hopmap/model.hpp"
#include "hopmap/rk45.hpp"

namespace hopmap::sim {

namespace {

constexpr double kMaxHopDuration = 1e4;  // stance that never lifts off
constexpr double kMinStep = 1e-13;
// eps_surface sentinel for stances that can never lift off (the commanded
// extension force cannot carry the body past the unloaded leg length).
constexpr double kStallEnergy = -1e6;

using Vec4 = std::array<double, 4>;

HopperState to_state(const Vec4& y) { return {y[0], y[1], y[2], y[3]}; }
Vec4 to_vec(const HopperState& s) { return {s.xi_b, s.xi_f, s.v_b, s.v_f}; }

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Total force applied to the ground by the foot: actuator force plus foot
// weight. Reyielding and liftoff conditions compare it against the yield
// threshold -xi_f and against zero.
double ground_applied_force(const HopperState& s, const LegSpring& spring,
                            const ModelParams& p) {
  return actuator_force(s, spring) + p.mu / (1.0 + p.mu);
}

// Outcome of the analytic ballistic flight that follows the liftoff reset.
// With guiderail friction the deceleration is 1 + phi_fric on the way up and
// 1 - phi_fric on the way down.
struct FlightOutcome {
  bool failed = false;
  double t_apex = 0.0;
  double apex_xi_f = 0.0;
  double t_td = 0.0;  // time from liftoff to the next touchdown
  double v_td = 0.0;
  double eps_surface = 0.0;
  double friction_loss = 0.0;
};

FlightOutcome fly(const HopperState& post_lo, double phi_fric) {
  FlightOutcome out;
  const double xi0 = post_lo.xi_f;
  const double v0 = post_lo.v_b;  // rigid assembly
  if (v0 <= 0.0) {
    out.failed = true;
    out.apex_xi_f = xi0;
    out.eps_surface = xi0;
    return out;
  }
  const double up = 1.0 + phi_fric;
  const double down = 1.0 - phi_fric;
  out.t_apex = v0 / up;
  out.apex_xi_f = xi0 + 0.5 * v0 * v0 / up;
  out.eps_surface = down * out.apex_xi_f;
  out.friction_loss =
      phi_fric * (out.apex_xi_f - xi0 + std::max(out.apex_xi_f, 0.0));
  if (out.apex_xi_f < 0.0) {
    out.failed = true;
    return out;
  }
  const double t_fall = std::sqrt(2.0 * out.apex_xi_f / down);
  out.t_td = out.t_apex + t_fall;
  out.v_td = -down * t_fall;
  return out;
}

// State along the post-liftoff flight, t measured from liftoff.
HopperState flight_state(const HopperState& post_lo, const FlightOutcome& f,
                         double t, double phi_fric, double lambda_c) {
  const double up = 1.0 + phi_fric;
  const double down = 1.0 - phi_fric;
  double xi, v;
  if (t <= f.t_apex) {
    xi = post_lo.xi_f + post_lo.v_b * t - 0.5 * up * t * t;
    v = post_lo.v_b - up * t;
  } else {
    const double s = t - f.t_apex;
    xi = f.apex_xi_f - 0.5 * down * s * s;
    v = -down * s;
  }
  return HopperState{xi + lambda_c, xi, v, v};
}

enum class Action {
  kFootStop,     // v_f rises through zero
  kReyield,      // applied force crosses the yield threshold
  kCompression,  // relative velocity crosses zero: energy injection
  kLiftoff,      // applied force drops through zero (pinned foot)
  kBodyTurn,     // v_b sign change; integration restart for Coulomb friction
};

struct EventSpec {
  Action action;
  int priority;  // smaller wins ties
};

// The hop engine integrates one touchdown-to-touchdown interval at a time.
class HopEngine {
 public:
  HopEngine(const ModelParams& params, const SimConfig& config,
            Trajectory* traj)
      : p_(params), cfg_(config), traj_(traj) {}

  void init(const HopperState& s, double tau) {
    y_ = s;
    tau_ = tau;
    h_ = std::min(cfg_.max_step, 1e-2);
  }

  double tau() const { return tau_; }
  const HopperState& state() const { return y_; }

  // Runs one hop starting from the current (stance-entry) state. On success
  // the engine is left at the next touchdown state.
  HopRecord run_hop() {
    HopRecord rec;
    rec.eps_td_in = com_kinetic_energy(y_, p_.mu);
    hop_start_ = tau_;
    events_ = 0;
    spring_ = LegSpring{p_.kappa_c, p_.lambda_c, SpringMode::kCompression};
    min_xi_f_ = std::min(0.0, y_.xi_f);
    fric_loss_ = 0.0;
    last_xi_b_ = y_.xi_b;

    log_event(&rec, EventType::kTouchdown);
    domain_ = stance_entry_domain();
    sample();

    Outcome outcome = Outcome::kContinue;
    while (outcome == Outcome::kContinue) outcome = integrate_until_event(&rec);
    if (outcome == Outcome::kStalled) {
      rec.eps_ground_loss = 0.5 * min_xi_f_ * min_xi_f_;
      rec.eps_friction_loss = fric_loss_;
      rec.eps_surface = kStallEnergy;
      rec.failed = true;
      return rec;
    }

    // Liftoff reset, then analytic flight.
    const LiftoffResult reset = liftoff_reset(y_, p_, spring_);
    rec.eps_lo_loss = reset.energy_loss;
    y_ = reset.state;
    domain_ = HybridDomain::kFlight;
    sample();

    const FlightOutcome flight = fly(y_, p_.phi_fric);
    rec.eps_ground_loss = 0.5 * min_xi_f_ * min_xi_f_;
    rec.eps_friction_loss = fric_loss_ + flight.friction_loss;
    rec.eps_surface = flight.eps_surface;
    rec.failed = flight.failed;

    const HopperState post_lo = y_;
    const double t_end = flight.failed ? flight.t_apex : flight.t_td;
    record_flight_samples(post_lo, flight, t_end);
    tau_ += t_end;
    if (flight.failed) {
      y_ = flight_state(post_lo, flight, t_end, p_.phi_fric, p_.lambda_c);
      sample();
      return rec;
    }
    rec.eps_td_out = flight.eps_surface;
    y_ = HopperState{p_.lambda_c, 0.0, flight.v_td, flight.v_td};
    return rec;
  }

 private:
  HybridDomain stance_entry_domain() const {
    if (y_.v_f < 0.0) return HybridDomain::kYieldingCompression;
    const double thr = -y_.xi_f;
    const double f = ground_applied_force(y_, spring_, p_);
    if (f > thr) return HybridDomain::kYieldingCompression;
    return HybridDomain::kStaticCompression;
  }

  void log_event(HopRecord* rec, EventType type) {
    rec->events.push_back({type, tau_});
    if (++events_ > cfg_.max_events_per_hop) {
      throw NumericError("max_events_per_hop exceeded");
    }
  }

  void sample() {
    if (!traj_) return;
    if (!traj_->samples.empty() && tau_ <= traj_->samples.back().tau) return;
    traj_->samples.push_back({tau_, y_, domain_});
  }

  void record_flight_samples(const HopperState& post_lo,
                             const FlightOutcome& f, double t_end) {
    if (!traj_ || t_end <= 0.0) return;
    const double dt = std::max(cfg_.max_step, t_end / 4096.0);
    for (double t = dt; t < t_end; t += dt) {
      traj_->samples.push_back(
          {tau_ + t, flight_state(post_lo, f, t, p_.phi_fric, p_.lambda_c),
           HybridDomain::kFlight});
    }
  }

  enum class Outcome { kContinue, kLifted, kStalled };

  // Integrates the current domain until a transition fires.
  Outcome integrate_until_event(HopRecord* rec) {
    const LegSpring spring = spring_;
    const HybridDomain dom = domain_;
    auto rhs = [&](double, const Vec4& y, Vec4* dy) {
      *dy = domain_dynamics(dom, to_state(y), spring, p_);
    };

    Rk45<4>::Step step;
    while (true) {
      double h = std::min(h_, cfg_.max_step);
      double suggested = h;
      while (!Rk45<4>::try_step(rhs, tau_, to_vec(y_), h, cfg_.rel_tol,
                                cfg_.abs_tol, &step, &suggested)) {
        h = suggested;
        if (h < kMinStep) throw NumericError("integrator step underflow");
      }
      h_ = suggested;

      double t_event;
      Action act;
      if (find_earliest_event(step, &t_event, &act)) {
        y_ = to_state(Rk45<4>::dense(step, t_event));
        tau_ = t_event;
        accumulate_friction();
        min_xi_f_ = std::min(min_xi_f_, y_.xi_f);
        const Outcome out = handle_event(act, rec);
        sample();
        return out;
      }

      y_ = to_state(step.y1);
      tau_ = step.t1();
      accumulate_friction();
      min_xi_f_ = std::min(min_xi_f_, y_.xi_f);
      sample();
      if (tau_ - hop_start_ > kMaxHopDuration) {
        throw NumericError("hop exceeded maximum stance duration (no liftoff)");
      }
    }
  }

  void accumulate_friction() {
    if (p_.phi_fric > 0.0) {
      fric_loss_ += p_.phi_fric * std::fabs(y_.xi_b - last_xi_b_);
    }
    last_xi_b_ = y_.xi_b;
  }

  int active_events(EventSpec out[3]) const {
    int n = 0;
    switch (domain_) {
      case HybridDomain::kYieldingCompression:
        out[n++] = {Action::kCompression, 0};
        out[n++] = {Action::kFootStop, 2};
        break;
      case HybridDomain::kStaticCompression:
        out[n++] = {Action::kCompression, 0};
        out[n++] = {Action::kReyield, 1};
        break;
      case HybridDomain::kYieldingExtension:
        out[n++] = {Action::kFootStop, 2};
        break;
      case HybridDomain::kStaticExtension:
        out[n++] = {Action::kReyield, 1};
        out[n++] = {Action::kLiftoff, 3};
        break;
      case HybridDomain::kFlight:
        break;
    }
    if (p_.phi_fric > 0.0) out[n++] = {Action::kBodyTurn, 9};
    return n;
  }

  double eval_event(Action a, const HopperState& s) const {
    switch (a) {
      case Action::kFootStop:
        return s.v_f;
      case Action::kReyield:
        return ground_applied_force(s, spring_, p_) + s.xi_f;
      case Action::kCompression:
        return s.v_b - s.v_f;
      case Action::kLiftoff:
        return -ground_applied_force(s, spring_, p_);
      case Action::kBodyTurn:
        return body_turn_sign_ * s.v_b;
    }
    return 0.0;
  }

  // Scans an accepted step for the earliest rising (<= 0 to > 0) crossing
  // among the domain's event functions. Interior checkpoints catch crossings
  // that reverse within the step.
  bool find_earliest_event(const Rk45<4>::Step& step, double* t_event,
                           Action* act) {
    EventSpec events[3];
    const int n_events = active_events(events);
    if (n_events == 0) return false;
    body_turn_sign_ = -sgn(y_.v_b);

    constexpr int kChecks = 4;
    bool found = false;
    double best_t = 0.0;
    int best_priority = 0;
    for (int e = 0; e < n_events; ++e) {
      const EventSpec& ev = events[e];
      double prev_t = step.t0;
      double prev_v = eval_event(ev.action, y_);
      for (int i = 1; i <= kChecks; ++i) {
        const double t = step.t0 + step.h * i / kChecks;
        const HopperState s = to_state(Rk45<4>::dense(step, t));
        const double v = eval_event(ev.action, s);
        if (prev_v <= 0.0 && v > 0.0) {
          const double tc = bisect(step, ev.action, prev_t, t);
          if (!found || tc < best_t - cfg_.event_tol ||
              (tc < best_t + cfg_.event_tol && ev.priority < best_priority)) {
            found = true;
            best_t = tc;
            best_priority = ev.priority;
            *act = ev.action;
          }
          break;
        }
        prev_t = t;
        prev_v = v;
      }
    }
    if (found) *t_event = best_t;
    return found;
  }

  // Bisects to the first point where the event function is positive.
  double bisect(const Rk45<4>::Step& step, Action a, double lo,
                double hi) const {
    for (int i = 0; i < 80 && hi - lo > cfg_.event_tol; ++i) {
      const double mid = 0.5 * (lo + hi);
      const HopperState s = to_state(Rk45<4>::dense(step, mid));
      if (eval_event(a, s) > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }

  // Entering static extension can deadlock: the body's oscillation on the
  // extension spring may reach neither the liftoff force (zero) nor the
  // reyield threshold, and without friction that oscillation never decays.
  // The orbit is simple harmonic, so reachability is checked in closed form
  // on entry. With friction the amplitude only shrinks, so declaring a
  // stall here remains correct; reachable cases are left to the integrator.
  Outcome enter_static_extension() {
    domain_ = HybridDomain::kStaticExtension;
    const double one_plus = 1.0 + p_.mu;
    const double k = spring_.stiffness;
    const double deflection = spring_.unloaded_length - y_.xi_b + y_.xi_f;
    const double d_eq = 1.0 / (one_plus * k);
    const double omega2 = one_plus * k;
    const double amp = std::sqrt((deflection - d_eq) * (deflection - d_eq) +
                                 y_.v_b * y_.v_b / omega2);
    const double d_liftoff = -p_.mu / (one_plus * k);
    const bool liftoff_reachable = d_eq - amp <= d_liftoff;
    const bool reyield_reachable =
        k * (d_eq + amp) + p_.mu / one_plus >= -y_.xi_f;
    if (!liftoff_reachable && !reyield_reachable) return Outcome::kStalled;
    return Outcome::kContinue;
  }

  // Applies a fired event.
  Outcome handle_event(Action act, HopRecord* rec) {
    switch (act) {
      case Action::kFootStop: {
        y_.v_f = 0.0;
        const double f = ground_applied_force(y_, spring_, p_);
        const double thr = -y_.xi_f;
        if (f < 0.0) {
          // The stopped foot unloads immediately: its velocity becomes
          // positive, which is liftoff, not a foot stop.
          log_event(rec, EventType::kLiftoff);
          return Outcome::kLifted;
        }
        if (f <= thr) {
          log_event(rec, EventType::kFootStop);
          if (domain_ == HybridDomain::kYieldingCompression) {
            domain_ = HybridDomain::kStaticCompression;
            return Outcome::kContinue;
          }
          return enter_static_extension();
        }
        // Otherwise the force still exceeds the threshold: the foot grazed
        // v_f = 0 and keeps yielding; no transition.
        return Outcome::kContinue;
      }
      case Action::kReyield: {
        log_event(rec, EventType::kReyield);
        y_.v_f = 0.0;
        domain_ = domain_ == HybridDomain::kStaticCompression
                      ? HybridDomain::kYieldingCompression
                      : HybridDomain::kYieldingExtension;
        return Outcome::kContinue;
      }
      case Action::kCompression: {
        if (domain_ == HybridDomain::kStaticCompression) y_.v_b = 0.0;
        log_event(rec, EventType::kCompressionExtension);
        rec->depth_ce = y_.xi_f;
        spring_ = spring_update(y_, spring_, p_);
        if (y_.v_f < 0.0) {
          // Still intruding; the injection happened mid-yield.
          domain_ = HybridDomain::kYieldingExtension;
          return Outcome::kContinue;
        }
        y_.v_f = 0.0;
        const double f = ground_applied_force(y_, spring_, p_);
        const double thr = -y_.xi_f;
        if (f > thr) {
          log_event(rec, EventType::kReyield);
          domain_ = HybridDomain::kYieldingExtension;
          return Outcome::kContinue;
        }
        if (f < 0.0) {
          log_event(rec, EventType::kLiftoff);
          return Outcome::kLifted;
        }
        return enter_static_extension();
      }
      case Action::kLiftoff: {
        log_event(rec, EventType::kLiftoff);
        return Outcome::kLifted;
      }
      case Action::kBodyTurn: {
        y_.v_b = 0.0;  // restart on the friction discontinuity
        return Outcome::kContinue;
      }
    }
    return Outcome::kContinue;
  }

  const ModelParams& p_;
  const SimConfig& cfg_;
  Trajectory* traj_;

  HopperState y_{};
  double tau_ = 0.0;
  double h_ = 1e-2;
  double hop_start_ = 0.0;
  HybridDomain domain_ = HybridDomain::kFlight;
  LegSpring spring_{};
  int events_ = 0;
  double min_xi_f_ = 0.0;
  double fric_loss_ = 0.0;
  double last_xi_b_ = 0.0;
  double body_turn_sign_ = 0.0;
};

void check_sim_inputs(const ModelParams& params, const SimConfig& config) {
  params.validate();
  config.validate();
  if (!(params.mu > 0.0)) {
    throw std::invalid_argument(
        "the event-driven simulator requires mu > 0; use the closed-form map "
        "for the massless-foot limit");
  }
}

}  // namespace

void SimConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(event_tol > 0.0) ||
      !(max_step > 0.0)) {
    throw std::invalid_argument("tolerances and max_step must be positive");
  }
  if (max_events_per_hop < 1 || max_hops < 1) {
    throw std::invalid_argument("caps must be >= 1");
  }
}

std::array<double, 4> domain_dynamics(HybridDomain domain,
                                      const HopperState& state,
                                      const LegSpring& spring,
                                      const ModelParams& params) {
  const double mu = params.mu;
  const double one_plus = 1.0 + mu;
  const double fric =
      params.phi_fric > 0.0 ? params.phi_fric * sgn(state.v_b) : 0.0;
  switch (domain) {
    case HybridDomain::kFlight: {
      const double a = -1.0 - fric;
      return {state.v_b, state.v_f, a, a};
    }
    case HybridDomain::kYieldingCompression:
    case HybridDomain::kYieldingExtension: {
      if (!(mu > 0.0)) {
        throw std::invalid_argument(
            "yielding-domain dynamics are singular at mu = 0");
      }
      const double phi_a = actuator_force(state, spring);
      const double phi_g = -state.xi_f;
      const double a_b = -1.0 + one_plus * (phi_a - fric);
      const double a_f = -1.0 + (one_plus / mu) * (phi_g - phi_a);
      return {state.v_b, state.v_f, a_b, a_f};
    }
    case HybridDomain::kStaticCompression:
    case HybridDomain::kStaticExtension: {
      const double phi_a = actuator_force(state, spring);
      const double a_b = -1.0 + one_plus * (phi_a - fric);
      return {state.v_b, 0.0, a_b, 0.0};
    }
  }
  throw std::invalid_argument("unknown domain");
}

HopperState touchdown_state(double eps_td, const ModelParams& params) {
  if (!(eps_td >= 0.0)) throw std::invalid_argument("eps_td must be >= 0");
  const double v = -std::sqrt(2.0 * eps_td);
  return HopperState{params.lambda_c, 0.0, v, v};
}

HopRecord simulate_hop(double eps_td, const ModelParams& params,
                       const SimConfig& config) {
  check_sim_inputs(params, config);
  HopEngine engine(params, config, nullptr);
  engine.init(touchdown_state(eps_td, params), 0.0);
  return engine.run_hop();
}

Trajectory simulate_trajectory(const HopperState& initial,
                               const ModelParams& params,
                               const SimConfig& config, int n_hops) {
  check_sim_inputs(params, config);
  if (n_hops < 0) throw std::invalid_argument("n_hops must be >= 0");

  Trajectory traj;
  HopEngine engine(params, config, &traj);

  HopperState start = initial;
  double tau = 0.0;
  if (start.xi_f > 0.0 || start.v_f > 0.0) {
    // Mid-air start: apply the flight controller (rigid leg at lambda_c),
    // then fall to the first touchdown analytically.
    const LiftoffResult r = liftoff_reset(
        start, params,
        LegSpring{params.kappa_c, params.lambda_c, SpringMode::kExtension});
    const FlightOutcome f = fly(r.state, params.phi_fric);
    if (f.failed) return traj;
    start = HopperState{params.lambda_c, 0.0, f.v_td, f.v_td};
    tau = f.t_td;
  }

  engine.init(start, tau);
  const int limit = std::min(n_hops, config.max_hops);
  for (int k = 0; k < limit; ++k) {
    HopRecord rec = engine.run_hop();
    const bool failed = rec.failed;
    traj.hops.push_back(std::move(rec));
    if (failed) break;
  }
  return traj;
}

}  // namespace hopmap::sim

// Dormand-Prince 5(4) and exponential-midpoint propagation.

#include "salz/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "salz/errors.hpp"

namespace salz {

void PropagationConfig::validate() const {
    auto in_range = [](double v) { return v > 0.0 && v <= 1e-2; };
    if (!in_range(rel_tol) || !in_range(abs_tol))
        throw std::invalid_argument("PropagationConfig: rel_tol and abs_tol must lie in (0, 1e-2]");
    if (!in_range(conv_tol)) throw std::invalid_argument("PropagationConfig: conv_tol must lie in (0, 1e-2]");
    if (t0 && !(*t0 > 0.0 && std::isfinite(*t0)))
        throw std::invalid_argument("PropagationConfig: t0 must be positive");
    if (max_steps == 0) throw std::invalid_argument("PropagationConfig: max_steps must be positive");
    if (max_doublings < 1) throw std::invalid_argument("PropagationConfig: max_doublings must be >= 1");
    if (!(phase_step_fraction > 0.0)) throw std::invalid_argument("PropagationConfig: phase_step_fraction must be positive");
}

std::pair<cplx, cplx> overlap_amplitudes(const StateVector& state, const Eigensystem& basis) {
    if (basis.degenerate) throw DegenerateFieldError("overlap_amplitudes: degenerate eigenbasis");
    return {inner(basis.v_minus, state), inner(basis.v_plus, state)};
}

namespace {

using State = std::array<cplx, 2>;

// d psi / dt = -i H psi = i (r.sigma) psi
State rhs(const FieldVector& r, const State& s) {
    const cplx i{0.0, 1.0};
    const cplx lower{r.x, r.y}, upper{r.x, -r.y};
    return {i * (r.z * s[0] + upper * s[1]), i * (lower * s[0] - r.z * s[1])};
}

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [c, k] : terms) {
        out[0] += h * c * (*k)[0];
        out[1] += h * c * (*k)[1];
    }
    return out;
}

StateVector to_vector(const State& s) { return {s[0], s[1]}; }

Eigensystem endpoint_basis(const DriveModel& model, double t) {
    Eigensystem b = model.eigenbasis(t);
    if (b.degenerate)
        throw DegenerateFieldError("propagate: degenerate eigenbasis at t = " + std::to_string(t));
    return b;
}

TransitionResult finish(const DriveModel& model, const State& s, double t_end, double half_width, std::size_t steps) {
    const auto [a, b] = overlap_amplitudes(to_vector(s), endpoint_basis(model, t_end));
    TransitionResult res;
    res.amplitude_a = a;
    res.amplitude_b = b;
    res.p = std::norm(b);
    res.norm_drift = std::abs(std::norm(a) + std::norm(b) - 1.0);
    res.steps = steps;
    res.t0_used = half_width;
    res.converged = true;
    return res;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

double error_norm(const State& err, const State& y0, const State& y1, double rtol, double atol) {
    double acc = 0.0;
    for (int k = 0; k < 2; ++k) {
        const std::array<double, 2> e{err[k].real(), err[k].imag()};
        const std::array<double, 2> u{y0[k].real(), y0[k].imag()};
        const std::array<double, 2> v{y1[k].real(), y1[k].imag()};
        for (int j = 0; j < 2; ++j) {
            const double sc = atol + rtol * std::max(std::abs(u[j]), std::abs(v[j]));
            acc += (e[j] / sc) * (e[j] / sc);
        }
    }
    return std::sqrt(acc / 4.0);
}

}  // namespace

TransitionResult propagate_interval(const DriveModel& model, double t_begin, double t_end,
                                    const PropagationConfig& cfg, const TrajectoryObserver& observer) {
    cfg.validate();
    if (!(std::isfinite(t_begin) && std::isfinite(t_end)) || t_begin == t_end)
        throw std::invalid_argument("propagate_interval: need a non-empty finite interval");

    const Eigensystem start = endpoint_basis(model, t_begin);
    State y{start.v_minus.a0, start.v_minus.a1};
    const double dir = t_end > t_begin ? 1.0 : -1.0;
    const double span = std::abs(t_end - t_begin);

    auto report = [&](double t, const State& s) {
        if (!observer) return;
        const Eigensystem b = model.eigenbasis(t);
        const double pa = b.degenerate ? std::numeric_limits<double>::quiet_NaN() : std::norm(inner(b.v_plus, to_vector(s)));
        observer({t, to_vector(s), pa});
    };

    double t = t_begin;
    FieldVector r = model.field(t);
    State k1 = rhs(r, y);
    double h = std::min(span / 64.0, cfg.phase_step_fraction / std::max(r.gap(), 1e-300));
    std::size_t steps = 0;
    report(t, y);

    while (dir * (t_end - t) > 0.0) {
        if (steps >= cfg.max_steps) {
            const double partial = model.eigenbasis(t).degenerate ? std::numeric_limits<double>::quiet_NaN()
                                                                 : std::norm(inner(model.eigenbasis(t).v_plus, to_vector(y)));
            throw NonConvergenceError("propagate: exceeded max_steps = " + std::to_string(cfg.max_steps), partial);
        }
        const double cap = cfg.phase_step_fraction / std::max(r.gap(), 1e-300);
        h = std::min({h, cap, std::abs(t_end - t)});
        const double hs = dir * h;

        const State k2 = rhs(model.field(t + c2 * hs), axpy(y, hs, {{a21, &k1}}));
        const State k3 = rhs(model.field(t + c3 * hs), axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
        const State k4 = rhs(model.field(t + c4 * hs), axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 = rhs(model.field(t + c5 * hs), axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const FieldVector r6 = model.field(t + hs);
        const State k6 = rhs(r6, axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State y1 = axpy(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const FieldVector r7 = r6;
        const State k7 = rhs(r7, y1);
        const State err = axpy(State{}, hs, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});

        const double en = error_norm(err, y, y1, cfg.rel_tol, cfg.abs_tol);
        ++steps;
        if (en <= 1.0) {
            // Land exactly on the endpoint to avoid a sliver step.
            t = (std::abs(t_end - (t + hs)) <= 1e-14 * span) ? t_end : t + hs;
            y = y1;
            k1 = k7;
            r = r7;
            report(t, y);
            const double grow = en == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(en, -0.2));
            h *= grow;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
        if (!(h > 0.0) || h < 1e-15 * span)
            throw NonConvergenceError("propagate: step size underflow", std::numeric_limits<double>::quiet_NaN());
    }
    TransitionResult res = finish(model, y, t_end, 0.5 * span, steps);
    res.rel_tol_used = cfg.rel_tol;
    res.abs_tol_used = cfg.abs_tol;
    return res;
}

TransitionResult propagate(const DriveModel& model, const PropagationConfig& cfg, const TrajectoryObserver& observer) {
    cfg.validate();
    if (cfg.t0) {
        const double t0 = *cfg.t0;
        return cfg.reverse ? propagate_interval(model, t0, -t0, cfg, observer)
                           : propagate_interval(model, -t0, t0, cfg, observer);
    }
    if (const auto dom = model.domain()) {
        return cfg.reverse ? propagate_interval(model, dom->second, dom->first, cfg, observer)
                           : propagate_interval(model, dom->first, dom->second, cfg, observer);
    }
    PropagationConfig explicit_cfg = cfg;
    explicit_cfg.t0 = auto_half_window(model);
    return propagate(model, explicit_cfg, observer);
}

double edge_nonadiabaticity(const DriveModel& model, double t0) {
    double worst = 0.0;
    for (double t : {-t0, t0}) {
        const double dt = 1e-5 * std::max(std::abs(t), model.time_scale());
        const FieldVector r = model.field(t);
        const FieldVector rp = model.field(t + dt), rm = model.field(t - dt);
        const double dx = (rp.x - rm.x) / (2 * dt), dy = (rp.y - rm.y) / (2 * dt), dz = (rp.z - rm.z) / (2 * dt);
        const double cx = r.y * dz - r.z * dy, cy = r.z * dx - r.x * dz, cz = r.x * dy - r.y * dx;
        const double m2 = r.magnitude() * r.magnitude();
        if (m2 == 0.0) return std::numeric_limits<double>::infinity();
        const double rate = std::hypot(cx, cy, cz) / m2;
        worst = std::max(worst, rate / r.gap());
    }
    return worst;
}

double auto_half_window(const DriveModel& model, double threshold) {
    double t0 = 4.0 * model.time_scale();
    for (int k = 0; k < 60 && edge_nonadiabaticity(model, t0) > threshold; ++k) t0 *= 2.0;
    return t0;
}

TransitionResult propagate_autoconverge(const DriveModel& model, const PropagationConfig& cfg) {
    cfg.validate();
    const bool fixed_domain = !cfg.t0 && model.domain().has_value();
    double t0 = cfg.t0 ? *cfg.t0 : (fixed_domain ? 0.0 : auto_half_window(model));

    std::vector<double> seq;
    std::size_t total_steps = 0;
    PropagationConfig run = cfg;
    for (int k = 0; k <= cfg.max_doublings; ++k) {
        if (!fixed_domain) run.t0 = t0;
        TransitionResult res = propagate(model, run, {});
        total_steps += res.steps;
        seq.push_back(res.p);
        if (seq.size() >= 2 && std::abs(seq[seq.size() - 1] - seq[seq.size() - 2]) < cfg.conv_tol) {
            res.p_sequence = std::move(seq);
            res.steps = total_steps;
            res.converged = true;
            return res;
        }
        if (!fixed_domain) t0 *= 2.0;
        run.rel_tol = std::max(1e-13, run.rel_tol * 0.1);
        run.abs_tol = std::max(1e-13, run.abs_tol * 0.1);
    }
    const double last = seq.back();
    throw NonConvergenceError("propagate_autoconverge: P did not settle within " +
                                  std::to_string(cfg.max_doublings) + " doublings",
                              last, std::move(seq));
}

TransitionResult propagate_fixed_step(const DriveModel& model, double t_begin, double t_end, std::size_t n_steps) {
    if (n_steps == 0) throw std::invalid_argument("propagate_fixed_step: n_steps must be positive");
    const Eigensystem start = endpoint_basis(model, t_begin);
    StateVector psi = start.v_minus;
    const double h = (t_end - t_begin) / static_cast<double>(n_steps);
    const cplx i{0.0, 1.0};
    for (std::size_t k = 0; k < n_steps; ++k) {
        const FieldVector r = model.field(t_begin + (static_cast<double>(k) + 0.5) * h);
        const double m = r.magnitude();
        if (m == 0.0) continue;
        // exp(-i h H) = exp(i h r.sigma) = cos(h|r|) + i sin(h|r|) n.sigma
        const double c = std::cos(h * m), s = std::sin(h * m) / m;
        const cplx u00 = c + i * s * r.z, u11 = c - i * s * r.z;
        const cplx u01 = i * s * cplx{r.x, -r.y}, u10 = i * s * cplx{r.x, r.y};
        psi = {u00 * psi.a0 + u01 * psi.a1, u10 * psi.a0 + u11 * psi.a1};
    }
    return finish(model, {psi.a0, psi.a1}, t_end, 0.5 * std::abs(t_end - t_begin), n_steps);
}

TransitionResult propagate_fixed_step_converged(const DriveModel& model, double t_begin, double t_end, double tol,
                                                std::size_t start_steps, std::size_t max_steps) {
    std::size_t n = std::max<std::size_t>(start_steps, 1);
    TransitionResult prev = propagate_fixed_step(model, t_begin, t_end, n);
    std::vector<double> seq{prev.p};
    while (2 * n <= max_steps) {
        n *= 2;
        TransitionResult cur = propagate_fixed_step(model, t_begin, t_end, n);
        seq.push_back(cur.p);
        if (std::abs(cur.p - prev.p) < tol) {
            cur.p_sequence = std::move(seq);
            return cur;
        }
        prev = std::move(cur);
    }
    throw NonConvergenceError("propagate_fixed_step_converged: step doubling did not settle", prev.p, std::move(seq));
}

}  // namespace salz

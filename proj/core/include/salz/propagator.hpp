// Time-dependent Schroedinger propagation of a driven two-level
// system and extraction of the adiabatic-basis transition probability.
//
// hbar = 1. The state starts in the instantaneous ground state at the start
// of the window and is projected onto the instantaneous eigenbasis at the end;
// P = |<psi_+|Psi>|^2.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "salz/models.hpp"
#include "salz/tls.hpp"

namespace salz {

struct PropagationConfig {
    /// Half window: integrate over [-t0, t0]. nullopt selects the window
    /// automatically (propagate_autoconverge) or uses the model's domain.
    std::optional<double> t0{};
    double rel_tol{1e-10};
    double abs_tol{1e-10};
    /// Stopping threshold on successive P values in the continuation loop.
    double conv_tol{1e-4};
    std::size_t max_steps{50'000'000};
    /// Number of window doublings allowed before giving up.
    int max_doublings{8};
    /// Largest step as a fraction of hbar / gap(t).
    double phase_step_fraction{0.02};
    /// Integrate from +t0 down to -t0 instead.
    bool reverse{false};
    /// hbar is fixed to 1; kept for provenance in serialized configs.
    static constexpr double hbar = 1.0;

    /// Throws std::invalid_argument when tolerances or t0 are out of range.
    void validate() const;

    bool operator==(const PropagationConfig&) const = default;
};

struct TransitionResult {
    double p{0.0};
    cplx amplitude_a{};
    cplx amplitude_b{};
    double norm_drift{0.0};
    std::size_t steps{0};
    double t0_used{0.0};
    /// Tolerances of the run that produced p.
    double rel_tol_used{0.0};
    double abs_tol_used{0.0};
    bool converged{false};
    /// P after each window doubling (continuation loop only).
    std::vector<double> p_sequence{};
};

/// One sample of an integrated trajectory.
struct TrajectoryPoint {
    double t;
    StateVector state;
    /// Population of the instantaneous excited state.
    double p_adiabatic;
};

using TrajectoryObserver = std::function<void(const TrajectoryPoint&)>;

/// a = <v_minus|state>, b = <v_plus|state>. Throws DegenerateFieldError
/// for a degenerate basis.
std::pair<cplx, cplx> overlap_amplitudes(const StateVector& state, const Eigensystem& basis);

/// Adaptive Dormand-Prince 5(4) integration over [-t0, t0] (or the model's
/// domain when cfg.t0 is unset and the model has one). Norm is monitored,
/// never renormalized. Throws NonConvergenceError when max_steps is
/// exceeded, DegenerateFieldError if an endpoint basis is degenerate.
TransitionResult propagate(const DriveModel& model, const PropagationConfig& cfg,
                           const TrajectoryObserver& observer = {});

/// Integration over an explicit interval [t_begin, t_end] (either order).
TransitionResult propagate_interval(const DriveModel& model, double t_begin, double t_end,
                                    const PropagationConfig& cfg, const TrajectoryObserver& observer = {});

/// Largest ratio |d(field direction)/dt| / gap over the two window edges.
/// Small values mean the endpoint projections are close to their asymptotic
/// values.
double edge_nonadiabaticity(const DriveModel& model, double t0);

/// Initial half window: the smallest time_scale * 2^k for which
/// edge_nonadiabaticity drops below `threshold`.
double auto_half_window(const DriveModel& model, double threshold = 1e-3);

/// Window and tolerance continuation: doubles t0 and tightens tolerances by
/// 10x (floored at 1e-13) until successive P differ by less than conv_tol.
/// Models with a fixed domain are integrated once over it with tolerance
/// continuation only. Throws NonConvergenceError with the P sequence after
/// cfg.max_doublings attempts.
TransitionResult propagate_autoconverge(const DriveModel& model, const PropagationConfig& cfg);

/// Independent second-order route: exponential-midpoint steps of fixed size,
/// each step exact for the frozen midpoint field.
TransitionResult propagate_fixed_step(const DriveModel& model, double t_begin, double t_end, std::size_t n_steps);

/// Fixed-step route with step doubling until P changes by less than `tol`.
TransitionResult propagate_fixed_step_converged(const DriveModel& model, double t_begin, double t_end,
                                                double tol = 1e-5, std::size_t start_steps = 1024,
                                                std::size_t max_steps = std::size_t{1} << 26);

}  // namespace salz

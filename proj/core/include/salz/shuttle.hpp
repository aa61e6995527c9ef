// Valley-transition dynamics of a shuttled electron: the valley
// Hamiltonian along a coupling landscape, velocity schedules and fidelity.
//
// Units: nm, ueV, ns; velocities in m/s (= nm/ns).
//
// The valley Hamiltonian -(conj(Delta) s+ + Delta s-)/2 has field
// (Re Delta/2, Im Delta/2, 0); a fixed rotation about x maps it into the xz
// plane as (Re Delta/2, 0, Im Delta/2). The gap is |Delta| and the in-plane
// field angle is arg Delta.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "salz/landscape.hpp"
#include "salz/propagator.hpp"

namespace salz {

/// Reduced Planck constant in ueV * ns.
inline constexpr double kHbarUeVNs = 0.6582119569;

/// In-plane valley field at position d.
FieldVector valley_field(const Landscape& land, double d);
/// Unrotated valley field with y = Im Delta / 2.
FieldVector valley_field_raw(const Landscape& land, double d);

enum class ScheduleKind { constant, gap_adaptive, constant_angular };

std::string to_string(ScheduleKind kind);
/// Accepts "constant", "gap-adaptive", "constant-angular".
std::optional<ScheduleKind> parse_schedule_kind(const std::string& s);

struct SpeedCaps {
    double v_min{0.0};
    double v_max{0.0};

    bool operator==(const SpeedCaps&) const = default;
};

struct ScheduleOptions {
    /// gap-adaptive uses v ~ |Delta|^gap_exponent.
    double gap_exponent{2.0};
    /// constant-angular floors |phi'| at eps_rel * max|phi'|.
    double eps_rel{1e-6};

    bool operator==(const ScheduleOptions&) const = default;
};

/// Speed sampled at positions, linear in between.
struct VelocitySchedule {
    ScheduleKind kind{ScheduleKind::constant};
    std::vector<double> positions;
    std::vector<double> speeds;
    /// Samples pinned at v_min or v_max.
    std::vector<bool> clipped;
    double avg_velocity{0.0};
    double d_start{0.0};
    double d_end{0.0};

    double speed_at(double d) const;
    /// Integral of 1/v over [d_start, d_end] (exact for linear segments), ns.
    double traversal_time() const;
};

/// Builds a schedule on the landscape samples and rescales it so that
/// extent / traversal_time equals avg_velocity. Throws std::invalid_argument
/// when the caps cannot meet avg_velocity.
VelocitySchedule make_schedule(const Landscape& land, ScheduleKind kind, double avg_velocity, SpeedCaps caps,
                               const ScheduleOptions& opts = {});

/// Schedule from explicit samples (CSV input); avg_velocity is computed.
VelocitySchedule schedule_from_samples(std::vector<double> positions, std::vector<double> speeds,
                                       ScheduleKind kind = ScheduleKind::constant);

inline constexpr const char* kScheduleCsvHeader = "d_nm,v_m_per_s";
std::string schedule_to_csv(const VelocitySchedule& sched);
VelocitySchedule schedule_from_csv(const std::string& text);

struct AnticrossingEntry {
    double d_min{0.0};              // nm
    double gap_min{0.0};            // ueV
    double theta_rate{0.0};         // v * phi'(d), rad/ns
    double local_adiabaticity{0.0}; // gap^2 / (hbar v |Delta'|)
};

/// Strict local minima of the interpolated |Delta| whose prominence is at
/// least min_prominence (ueV). Evaluated on the samples refined `refine`
/// times.
std::vector<AnticrossingEntry> find_anticrossings(const Landscape& land, const VelocitySchedule& sched,
                                                  double min_prominence, int refine = 8);

enum class ValleyFrame { rotated, raw };

struct ShuttleOptions {
    /// Report threshold relative to max |Delta| over the landscape.
    double prominence_rel{0.05};
    int report_refine{8};
    ValleyFrame frame{ValleyFrame::rotated};
};

struct ShuttleResult {
    double p_excite{0.0};
    double fidelity{1.0};
    double duration{0.0};     // ns
    double avg_velocity{0.0}; // m/s
    ScheduleKind schedule_kind{ScheduleKind::constant};
    std::vector<AnticrossingEntry> anticrossings;
    double norm_drift{0.0};
    std::size_t steps{0};
};

/// Valley drive in the position variable: i dpsi/dd = H(d) / (hbar v(d)) psi.
class LandscapeDrive final : public DriveModel {
public:
    LandscapeDrive(const Landscape& land, const VelocitySchedule& sched, ValleyFrame frame = ValleyFrame::rotated);

    FieldVector field(double d) const override;
    DriveKind kind() const noexcept override { return DriveKind::landscape; }
    double time_scale() const noexcept override;
    std::optional<std::pair<double, double>> domain() const override {
        return std::make_pair(land_->d_start(), land_->d_end());
    }

private:
    const Landscape* land_;
    const VelocitySchedule* sched_;
    ValleyFrame frame_;
};

/// Starts in the local ground state at d_start and projects at d_end.
/// Propagation failures surface as NonConvergenceError.
ShuttleResult shuttle_simulate(const Landscape& land, const VelocitySchedule& sched, const PropagationConfig& cfg,
                               const ShuttleOptions& opts = {});

/// JSON document with every ShuttleResult field and the anticrossing report.
std::string shuttle_result_json(const ShuttleResult& res);

}  // namespace salz

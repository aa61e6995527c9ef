// Resolved parameter sets of the salz command-line jobs and
// their JSON form. Config files use the same layout as the "config" block
// embedded in every JSON result.

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "salz/analytics.hpp"
#include "salz/landscape.hpp"
#include "salz/propagator.hpp"
#include "salz/shuttle.hpp"

namespace salz::cli {

/// Axis "lo:hi:n".
struct RangeSpec {
    double lo{0.0};
    double hi{0.0};
    std::size_t n{1};

    bool operator==(const RangeSpec&) const = default;
};

/// Throws std::invalid_argument on malformed input.
RangeSpec parse_range(const std::string& text);
std::string format_range(const RangeSpec& r);

/// Comma list of lz, dk, sl; "none" or "" selects no comparison.
std::set<Formula> parse_formulas(const std::string& text);

struct SimulateJob {
    std::optional<double> delta0;
    std::optional<double> alpha;
    std::optional<double> beta;
    PropagationConfig prop{};
    std::string json_path;
    std::string trajectory_path;

    bool operator==(const SimulateJob&) const = default;
};

struct SweepJob {
    std::optional<RangeSpec> alpha_range;
    std::optional<RangeSpec> beta_range;
    double delta0{1.0};
    PropagationConfig prop{};
    std::set<Formula> compare{Formula::lz, Formula::dk, Formula::sl};
    std::string out_dir;
    /// Unset: SALZ_WORKERS, then the hardware thread count.
    std::optional<unsigned> workers;
    bool timing{false};

    bool operator==(const SweepJob&) const = default;
};

struct LandscapeJob {
    SynthParams synth{};
    std::string out;

    bool operator==(const LandscapeJob&) const = default;
};

struct ShuttleJob {
    /// Landscape CSV; empty means synthesize from `synth`.
    std::string landscape_path;
    SynthParams synth{};
    Interpolation interpolation{Interpolation::monotone_cubic};
    ScheduleKind schedule{ScheduleKind::constant};
    std::optional<double> velocity;
    /// Unset caps default to velocity / 100 and velocity * 100.
    std::optional<double> v_min;
    std::optional<double> v_max;
    ScheduleOptions schedule_opts{};
    double prominence_rel{0.05};
    PropagationConfig prop{};
    std::string schedule_in;
    std::string schedule_out;
    std::string json_path;

    bool operator==(const ShuttleJob&) const = default;
};

struct JobConfig {
    std::string command;
    SimulateJob simulate{};
    SweepJob sweep{};
    LandscapeJob landscape{};
    ShuttleJob shuttle{};

    bool operator==(const JobConfig&) const = default;
};

nlohmann::ordered_json to_json(const PropagationConfig& c);
nlohmann::ordered_json to_json(const JobConfig& job);

/// Overlays the keys present in `j` on `base`. Unknown keys and wrongly
/// typed values throw std::invalid_argument.
PropagationConfig propagation_from_json(const nlohmann::json& j, PropagationConfig base = {});
JobConfig job_from_json(const nlohmann::json& j, JobConfig base = {});

}  // namespace salz::cli

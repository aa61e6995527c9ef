// Parallel (alpha, beta) grid engine and the superadiabatic
// boundary search.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "salz/analytics.hpp"
#include "salz/propagator.hpp"

namespace salz {

struct SweepGrid {
    std::vector<double> alpha_axis;
    std::vector<double> beta_axis;
    double delta0{1.0};
    PropagationConfig cfg{};
    std::set<Formula> comparisons{Formula::lz, Formula::dk, Formula::sl};
    std::size_t max_points{1'000'000};

    /// Axes non-empty and strictly increasing, alpha >= 0, delta0 > 0, size
    /// within max_points. Throws std::invalid_argument otherwise.
    void validate() const;
    std::size_t size() const noexcept { return alpha_axis.size() * beta_axis.size(); }
};

/// Evenly spaced axis of n points from lo to hi inclusive (n == 1 gives lo).
std::vector<double> linear_axis(double lo, double hi, std::size_t n);

struct SweepRecord {
    double alpha{0.0};
    double beta{0.0};
    std::optional<double> p_numeric;
    std::optional<double> p_lz;
    std::optional<double> p_dk;
    std::optional<double> p_sl;
    bool converged{false};
    double norm_drift{0.0};
    double wall_time_s{0.0};
    /// Failure message for non-converged points.
    std::string error;
};

struct SweepOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers{0};
};

/// Evaluates every (alpha, beta) pair with propagate_autoconverge. Records are
/// returned alpha-major (row = alpha) regardless of scheduling. Point failures
/// are recorded in the row and never abort the sweep.
std::vector<SweepRecord> run_sweep(const SweepGrid& grid, const SweepOptions& opts = {});

/// Single grid point, as used by run_sweep.
SweepRecord evaluate_point(double alpha, double beta, double delta0, const PropagationConfig& cfg,
                           const std::set<Formula>& comparisons);

struct CsvOptions {
    /// Wall-clock time is the one non-reproducible column; it is left empty
    /// unless requested.
    bool include_timing{false};
};

inline constexpr const char* kSweepCsvHeader = "alpha,beta,p_numeric,p_lz,p_dk,p_sl,converged,norm_drift,wall_time_s";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records, const CsvOptions& opts = {});

/// JSON summary: grid specification, totals and the failing points.
std::string sweep_summary_json(const SweepGrid& grid, const std::vector<SweepRecord>& records);

struct BoundaryResult {
    double beta{0.0};
    /// Final bracket [lo, hi] around the root.
    double lo{0.0};
    double hi{0.0};
    double p_numeric{0.0};
    double p_lz{0.0};
    int evaluations{0};
};

/// Root beta* > alpha of P(alpha, beta) - P_LZ(delta0, alpha), bracketed on
/// (alpha, 4 alpha] and bisected to relative width rel_width. Throws
/// std::domain_error("not found") when no sign change is bracketed.
BoundaryResult superadiabatic_boundary(double alpha, double delta0, const PropagationConfig& cfg,
                                       double rel_width = 1e-3);

}  // namespace salz

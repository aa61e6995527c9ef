// Valley drive, velocity schedules and shuttling simulation.

#include "salz/shuttle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "salz/errors.hpp"
#include "salz/io.hpp"

namespace salz {

FieldVector valley_field(const Landscape& land, double d) {
    const cplx c = land.coupling(d);
    return {0.5 * c.real(), 0.0, 0.5 * c.imag()};
}

FieldVector valley_field_raw(const Landscape& land, double d) {
    const cplx c = land.coupling(d);
    return {0.5 * c.real(), 0.5 * c.imag(), 0.0};
}

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::constant: return "constant";
        case ScheduleKind::gap_adaptive: return "gap-adaptive";
        case ScheduleKind::constant_angular: return "constant-angular";
    }
    return "unknown";
}

std::optional<ScheduleKind> parse_schedule_kind(const std::string& s) {
    if (s == "constant") return ScheduleKind::constant;
    if (s == "gap-adaptive") return ScheduleKind::gap_adaptive;
    if (s == "constant-angular") return ScheduleKind::constant_angular;
    return std::nullopt;
}

namespace {

double segment_time(double h, double v0, double v1) {
    const double dv = v1 - v0;
    if (std::abs(dv) <= 1e-9 * std::min(v0, v1)) return 2.0 * h / (v0 + v1);
    return h * std::log(v1 / v0) / dv;
}

double total_time(const std::vector<double>& x, const std::vector<double>& v) {
    double t = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) t += segment_time(x[i + 1] - x[i], v[i], v[i + 1]);
    return t;
}

}  // namespace

double VelocitySchedule::speed_at(double d) const {
    if (!(d >= d_start && d <= d_end)) throw std::out_of_range("VelocitySchedule: position outside the schedule");
    const auto it = std::upper_bound(positions.begin(), positions.end(), d);
    std::size_t k = static_cast<std::size_t>(it - positions.begin());
    k = std::min(k == 0 ? 0 : k - 1, positions.size() - 2);
    const double s = (d - positions[k]) / (positions[k + 1] - positions[k]);
    return speeds[k] + s * (speeds[k + 1] - speeds[k]);
}

double VelocitySchedule::traversal_time() const { return total_time(positions, speeds); }

VelocitySchedule make_schedule(const Landscape& land, ScheduleKind kind, double avg_velocity, SpeedCaps caps,
                               const ScheduleOptions& opts) {
    if (!(avg_velocity > 0.0) || !std::isfinite(avg_velocity))
        throw std::invalid_argument("make_schedule: avg_velocity must be positive");
    if (!(caps.v_min > 0.0) || !(caps.v_max >= caps.v_min) || !std::isfinite(caps.v_max))
        throw std::invalid_argument("make_schedule: caps need 0 < v_min <= v_max");
    if (avg_velocity < caps.v_min || avg_velocity > caps.v_max)
        throw std::invalid_argument("make_schedule: avg_velocity outside [v_min, v_max]");

    const auto& x = land.positions();
    const std::size_t n = x.size();
    VelocitySchedule s;
    s.kind = kind;
    s.positions = x;
    s.d_start = land.d_start();
    s.d_end = land.d_end();
    s.clipped.assign(n, false);

    if (kind == ScheduleKind::constant) {
        s.speeds.assign(n, avg_velocity);
        s.avg_velocity = avg_velocity;
        return s;
    }

    std::vector<double> w(n);
    if (kind == ScheduleKind::gap_adaptive) {
        for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(std::abs(land.couplings()[i]), opts.gap_exponent);
    } else {
        std::vector<double> rate(n);
        double max_rate = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rate[i] = std::abs(land.phase_rate(x[i]));
            if (std::isfinite(rate[i])) max_rate = std::max(max_rate, rate[i]);
        }
        const double eps = opts.eps_rel * max_rate;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::max(rate[i], eps);
            w[i] = r > 0.0 && std::isfinite(r) ? 1.0 / r : (std::isfinite(r) ? 1.0 : 0.0);
        }
    }

    const double extent = land.extent();
    std::vector<double> v(n);
    auto avg_for = [&](double lambda) {
        for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(lambda * w[i], caps.v_min, caps.v_max);
        return extent / total_time(x, v);
    };

    double wsum = 0.0;
    for (double wi : w) wsum += wi;
    if (!(wsum > 0.0)) throw std::invalid_argument("make_schedule: weights vanish everywhere");
    double lo = avg_velocity * static_cast<double>(n) / wsum, hi = lo;
    int guard = 0;
    while (avg_for(lo) > avg_velocity && guard++ < 4000) lo *= 0.5;
    guard = 0;
    while (avg_for(hi) < avg_velocity && guard++ < 4000) hi *= 2.0;
    if (avg_for(lo) > avg_velocity || avg_for(hi) < avg_velocity)
        throw std::invalid_argument("make_schedule: caps cannot meet avg_velocity");
    for (int it = 0; it < 400 && hi > lo * (1.0 + 1e-15); ++it) {
        const double mid = std::sqrt(lo * hi);
        (avg_for(mid) < avg_velocity ? lo : hi) = mid;
    }
    const double a_lo = avg_for(lo), a_hi = avg_for(hi);
    const double lambda = std::abs(a_lo - avg_velocity) <= std::abs(a_hi - avg_velocity) ? lo : hi;
    s.speeds.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double raw = lambda * w[i];
        s.speeds[i] = std::clamp(raw, caps.v_min, caps.v_max);
        s.clipped[i] = raw <= caps.v_min || raw >= caps.v_max;
    }
    s.avg_velocity = extent / s.traversal_time();
    return s;
}

VelocitySchedule schedule_from_samples(std::vector<double> positions, std::vector<double> speeds, ScheduleKind kind) {
    if (positions.size() < 2 || positions.size() != speeds.size())
        throw std::invalid_argument("schedule: need >= 2 samples of matching length");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!(speeds[i] > 0.0) || !std::isfinite(speeds[i]))
            throw std::invalid_argument("schedule: speeds must be positive");
        if (i > 0 && !(positions[i] > positions[i - 1]))
            throw std::invalid_argument("schedule: positions must be strictly increasing");
    }
    VelocitySchedule s;
    s.kind = kind;
    s.d_start = positions.front();
    s.d_end = positions.back();
    s.clipped.assign(positions.size(), false);
    s.positions = std::move(positions);
    s.speeds = std::move(speeds);
    s.avg_velocity = (s.d_end - s.d_start) / s.traversal_time();
    return s;
}

std::string schedule_to_csv(const VelocitySchedule& sched) {
    std::string out = std::string(kScheduleCsvHeader) + "\n";
    for (std::size_t i = 0; i < sched.positions.size(); ++i)
        out += format_double(sched.positions[i]) + "," + format_double(sched.speeds[i]) + "\n";
    return out;
}

VelocitySchedule schedule_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<double> pos, vel;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!header) {
            if (line != kScheduleCsvHeader)
                throw ParseError(std::string("expected header '") + kScheduleCsvHeader + "'", lineno);
            header = true;
            continue;
        }
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 2) throw ParseError("expected 2 fields, got " + std::to_string(f.size()), lineno);
        const auto d = parse_double(f[0]), v = parse_double(f[1]);
        if (!d || !v) throw ParseError("malformed number", lineno);
        if (!(*v > 0.0)) throw ParseError("speed must be positive", lineno);
        if (!pos.empty() && !(*d > pos.back())) throw ParseError("positions must be strictly increasing", lineno);
        pos.push_back(*d);
        vel.push_back(*v);
    }
    if (!header) throw ParseError("empty schedule file", 0);
    if (pos.size() < 2) throw ParseError("need at least two samples", lineno);
    return schedule_from_samples(std::move(pos), std::move(vel));
}

std::vector<AnticrossingEntry> find_anticrossings(const Landscape& land, const VelocitySchedule& sched,
                                                  double min_prominence, int refine) {
    refine = std::max(refine, 1);
    const auto& x = land.positions();
    std::vector<double> grid;
    grid.reserve((x.size() - 1) * refine + 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        for (int r = 0; r < refine; ++r) grid.push_back(x[i] + (x[i + 1] - x[i]) * r / refine);
    grid.push_back(x.back());

    std::vector<double> m(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) m[j] = land.splitting(grid[j]);

    std::vector<AnticrossingEntry> out;
    for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
        if (!(m[j] < m[j - 1] && m[j] < m[j + 1])) continue;
        double left = m[j], right = m[j];
        for (std::size_t k = j; k-- > 0;) {
            if (m[k] < m[j]) break;
            left = std::max(left, m[k]);
        }
        for (std::size_t k = j + 1; k < grid.size(); ++k) {
            if (m[k] < m[j]) break;
            right = std::max(right, m[k]);
        }
        if (std::min(left, right) - m[j] < min_prominence) continue;

        const double d = grid[j];
        const double v = sched.speed_at(d);
        const double slope = std::abs(land.derivative(d));
        AnticrossingEntry e;
        e.d_min = d;
        e.gap_min = m[j];
        e.theta_rate = v * land.phase_rate(d);
        e.local_adiabaticity =
            slope > 0.0 ? m[j] * m[j] / (kHbarUeVNs * v * slope) : std::numeric_limits<double>::infinity();
        out.push_back(e);
    }
    return out;
}

LandscapeDrive::LandscapeDrive(const Landscape& land, const VelocitySchedule& sched, ValleyFrame frame)
    : land_(&land), sched_(&sched), frame_(frame) {
    const double tol = 1e-9 * std::max(1.0, land.extent());
    if (sched.d_start > land.d_start() + tol || sched.d_end < land.d_end() - tol)
        throw std::invalid_argument("LandscapeDrive: schedule does not span the landscape");
}

FieldVector LandscapeDrive::field(double d) const {
    const FieldVector f = frame_ == ValleyFrame::rotated ? valley_field(*land_, d) : valley_field_raw(*land_, d);
    return f * (1.0 / (kHbarUeVNs * sched_->speed_at(d)));
}

double LandscapeDrive::time_scale() const noexcept {
    return land_->extent() / static_cast<double>(land_->positions().size() - 1);
}

ShuttleResult shuttle_simulate(const Landscape& land, const VelocitySchedule& sched, const PropagationConfig& cfg,
                               const ShuttleOptions& opts) {
    const LandscapeDrive drive(land, sched, opts.frame);
    PropagationConfig run = cfg;
    run.t0.reset();
    const TransitionResult tr = propagate_autoconverge(drive, run);

    ShuttleResult res;
    res.p_excite = tr.p;
    res.fidelity = 1.0 - tr.p;
    res.duration = sched.traversal_time();
    res.avg_velocity = land.extent() / res.duration;
    res.schedule_kind = sched.kind;
    res.norm_drift = tr.norm_drift;
    res.steps = tr.steps;
    double max_gap = 0.0;
    for (const cplx& c : land.couplings()) max_gap = std::max(max_gap, std::abs(c));
    res.anticrossings = find_anticrossings(land, sched, opts.prominence_rel * max_gap, opts.report_refine);
    return res;
}

std::string shuttle_result_json(const ShuttleResult& res) {
    nlohmann::ordered_json j;
    j["p_excite"] = res.p_excite;
    j["fidelity"] = res.fidelity;
    j["duration_ns"] = res.duration;
    j["avg_velocity_m_per_s"] = res.avg_velocity;
    j["schedule_kind"] = to_string(res.schedule_kind);
    j["norm_drift"] = res.norm_drift;
    j["steps"] = res.steps;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : res.anticrossings)
        arr.push_back({{"d_min_nm", e.d_min},
                       {"gap_min_ueV", e.gap_min},
                       {"theta_rate_rad_per_ns", e.theta_rate},
                       {"local_adiabaticity", e.local_adiabaticity}});
    j["anticrossing_report"] = arr;
    return j.dump(2) + "\n";
}

}  // namespace salz

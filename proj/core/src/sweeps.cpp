// Grid engine over a fixed worker pool.

#include "salz/sweeps.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "salz/errors.hpp"
#include "salz/io.hpp"

namespace salz {

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw std::invalid_argument(std::string("SweepGrid: empty ") + name);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!std::isfinite(axis[i])) throw std::invalid_argument(std::string("SweepGrid: non-finite ") + name);
        if (i > 0 && !(axis[i] > axis[i - 1]))
            throw std::invalid_argument(std::string("SweepGrid: ") + name + " must be strictly increasing");
    }
}

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

}  // namespace

void SweepGrid::validate() const {
    check_axis(alpha_axis, "alpha_axis");
    check_axis(beta_axis, "beta_axis");
    if (alpha_axis.front() < 0.0) throw std::invalid_argument("SweepGrid: alpha must be >= 0");
    if (!(delta0 > 0.0)) throw std::invalid_argument("SweepGrid: delta0 must be positive");
    if (size() > max_points) throw std::invalid_argument("SweepGrid: grid exceeds max_points");
    cfg.validate();
}

std::vector<double> linear_axis(double lo, double hi, std::size_t n) {
    if (n == 0) throw std::invalid_argument("linear_axis: n must be positive");
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i)
        axis[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n > 1) axis.back() = hi;
    return axis;
}

SweepRecord evaluate_point(double alpha, double beta, double delta0, const PropagationConfig& cfg,
                           const std::set<Formula>& comparisons) {
    SweepRecord rec;
    rec.alpha = alpha;
    rec.beta = beta;
    const auto start = std::chrono::steady_clock::now();
    const GenLZParams p{delta0, alpha, beta};
    try {
        const TransitionResult res = propagate_autoconverge(GenLZModel(p), cfg);
        rec.p_numeric = res.p;
        rec.converged = res.converged;
        rec.norm_drift = res.norm_drift;
    } catch (const NonConvergenceError& e) {
        if (std::isfinite(e.partial_p())) rec.p_numeric = e.partial_p();
        rec.error = e.what();
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    if (comparisons.contains(Formula::lz) && alpha > 0.0) rec.p_lz = lz_probability(delta0, alpha);
    if (comparisons.contains(Formula::dk) && alpha > 0.0 && beta > 0.0) rec.p_dk = dk_probability(p).p;
    if (comparisons.contains(Formula::sl) && beta <= 0.0 && alpha - beta > 0.0) rec.p_sl = sl_probability(p).p;
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<SweepRecord> run_sweep(const SweepGrid& grid, const SweepOptions& opts) {
    grid.validate();
    const std::size_t n_beta = grid.beta_axis.size();
    const std::size_t total = grid.size();
    std::vector<SweepRecord> out(total);

    unsigned workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
            out[idx] = evaluate_point(grid.alpha_axis[idx / n_beta], grid.beta_axis[idx % n_beta], grid.delta0,
                                      grid.cfg, grid.comparisons);
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records, const CsvOptions& opts) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : records) {
        out << format_double(r.alpha) << ',' << format_double(r.beta) << ',' << opt_field(r.p_numeric) << ','
            << opt_field(r.p_lz) << ',' << opt_field(r.p_dk) << ',' << opt_field(r.p_sl) << ','
            << (r.converged ? "true" : "false") << ',' << format_double(r.norm_drift) << ','
            << (opts.include_timing ? format_double(r.wall_time_s) : std::string{}) << '\n';
    }
}

std::string sweep_summary_json(const SweepGrid& grid, const std::vector<SweepRecord>& records) {
    nlohmann::ordered_json j;
    j["grid"] = {
        {"alpha_axis", grid.alpha_axis},
        {"beta_axis", grid.beta_axis},
        {"delta0", grid.delta0},
        {"rel_tol", grid.cfg.rel_tol},
        {"abs_tol", grid.cfg.abs_tol},
        {"conv_tol", grid.cfg.conv_tol},
    };
    std::vector<std::string> cmp;
    for (Formula f : grid.comparisons) cmp.emplace_back(to_string(f));
    j["grid"]["comparisons"] = cmp;

    std::size_t ok = 0;
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    double max_drift = 0.0;
    for (const auto& r : records) {
        if (r.converged) {
            ++ok;
            max_drift = std::max(max_drift, r.norm_drift);
        } else {
            failures.push_back({{"alpha", r.alpha}, {"beta", r.beta}, {"error", r.error}});
        }
    }
    j["totals"] = {{"points", records.size()}, {"converged", ok}, {"failed", records.size() - ok},
                   {"max_norm_drift", max_drift}};
    j["failures"] = failures;
    return j.dump(2) + "\n";
}

BoundaryResult superadiabatic_boundary(double alpha, double delta0, const PropagationConfig& cfg, double rel_width) {
    if (!(alpha > 0.0)) throw std::invalid_argument("superadiabatic_boundary: alpha must be positive");
    if (!(delta0 > 0.0)) throw std::invalid_argument("superadiabatic_boundary: delta0 must be positive");
    const double p_lz = lz_probability(delta0, alpha);
    BoundaryResult out;
    out.p_lz = p_lz;
    auto excess = [&](double beta) {
        ++out.evaluations;
        return propagate_autoconverge(GenLZModel({delta0, alpha, beta}), cfg).p - p_lz;
    };

    // At beta = alpha, P = 0 < P_LZ. Scan (alpha, 4 alpha] for the first upward crossing.
    constexpr int kScan = 12;
    double lo = alpha, hi = 0.0;
    bool found = false;
    for (int k = 1; k <= kScan; ++k) {
        const double beta = alpha * (1.0 + 3.0 * k / kScan);
        if (excess(beta) >= 0.0) {
            hi = beta;
            found = true;
            break;
        }
        lo = beta;
    }
    if (!found) throw std::domain_error("superadiabatic_boundary: not found in (alpha, 4 alpha]");

    while ((hi - lo) > rel_width * 0.5 * (hi + lo)) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    out.lo = lo;
    out.hi = hi;
    out.beta = 0.5 * (lo + hi);
    out.p_numeric = propagate_autoconverge(GenLZModel({delta0, alpha, out.beta}), cfg).p;
    ++out.evaluations;
    return out;
}

}  // namespace salz

// Closed-form probabilities.

#include "salz/analytics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace salz {

namespace {
constexpr double kPi = std::numbers::pi;
// Above this sinh argument the ratio is evaluated in log space.
constexpr double kLogSpaceThreshold = 300.0;
}  // namespace

std::string_view to_string(Formula f) noexcept {
    switch (f) {
        case Formula::lz: return "lz";
        case Formula::dk: return "dk";
        case Formula::sl: return "sl";
    }
    return "unknown";
}

double lz_probability(double delta0, double rate) {
    if (!(delta0 >= 0.0) || !std::isfinite(delta0)) throw std::domain_error("lz_probability: delta0 must be >= 0");
    if (!(rate >= 0.0)) throw std::domain_error("lz_probability: rate must be >= 0");
    if (rate == 0.0) {
        if (delta0 == 0.0) throw std::domain_error("lz_probability: delta0 = 0 and rate = 0 is undefined");
        return 0.0;
    }
    return std::exp(-kPi * delta0 * delta0 / (2.0 * rate));
}

FormulaResult lz_formula(double delta0, double rate) {
    return {lz_probability(delta0, rate), Formula::lz,
            "exp(-pi*delta0^2/(2*rate)), off-diagonal delta0/2; printed variant exp(-2*pi*delta0^2/rate) "
            "assumes off-diagonal delta0"};
}

double log_sinh(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_sinh: requires x > 0");
    if (x < 20.0) return std::log(std::sinh(x));
    return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
}

FormulaResult dk_probability(const GenLZParams& p) {
    const DkFit fit = dk_fit_from_gen_lz(p);  // throws outside alpha, beta > 0
    const double num_arg = kPi * std::abs(fit.a) / fit.b;
    const double den_arg = kPi * std::hypot(fit.a, p.delta0) / fit.b;
    double prob = 0.0;
    if (num_arg > 0.0) {
        if (den_arg > kLogSpaceThreshold) {
            double log_ratio = log_sinh(num_arg) - log_sinh(den_arg);
            if (num_arg > 20.0) {
                // Both arguments large: subtract them without cancellation.
                const double gap = -kPi * p.delta0 * p.delta0 / (fit.b * (std::abs(fit.a) + std::hypot(fit.a, p.delta0)));
                log_ratio = gap + std::log1p(-std::exp(-2.0 * num_arg)) - std::log1p(-std::exp(-2.0 * den_arg));
            }
            prob = std::exp(2.0 * log_ratio);
        } else {
            const double ratio = std::sinh(num_arg) / std::sinh(den_arg);
            prob = ratio * ratio;
        }
    }
    const double ratio = p.beta / p.alpha;
    std::string note = "fitted Demkov-Kunike model; good for beta > 0";
    if (ratio < 1e-4) note += "; beta/alpha < 1e-4, fit breaks down";
    return {prob, Formula::dk, std::move(note)};
}

FormulaResult sl_probability(const GenLZParams& p) {
    p.validate();
    if (p.beta > 0.0) throw std::domain_error("sl_probability: requires beta <= 0");
    const double rate = p.alpha - p.beta;
    if (!(rate > 0.0)) throw std::domain_error("sl_probability: requires alpha - beta > 0");
    std::string note = "superlinear-sweep DDP estimate; fair for moderate |beta|, beta <= 0";
    if (-p.beta > p.alpha) note += "; |beta| > alpha, expect degraded accuracy";
    return {std::exp(-kPi * p.delta0 * p.delta0 / (2.0 * rate)), Formula::sl, std::move(note)};
}

double adiabaticity_parameter(const GenLZParams& p) {
    p.validate();
    const double diff = std::abs(p.alpha - p.beta);
    if (diff == 0.0) return std::numeric_limits<double>::infinity();
    return p.delta0 * p.delta0 / diff;
}

std::complex<double> ddp_gap_function(const GenLZParams& p, std::complex<double> t) {
    p.validate();
    const std::complex<double> at = p.alpha * t;
    return 0.5 * std::sqrt(p.delta0 * p.delta0 + at * at);
}

}  // namespace salz

// Generalized LZ field, eigenvectors and comparison drives.

#include "salz/models.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace salz {

void GenLZParams::validate() const {
    if (!(delta0 > 0.0) || !std::isfinite(delta0))
        throw std::invalid_argument("GenLZParams: delta0 must be positive and finite");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("GenLZParams: alpha must be non-negative and finite");
    if (!std::isfinite(beta)) throw std::invalid_argument("GenLZParams: beta must be finite");
}

namespace {

struct Terms {
    double om_a;  // sqrt(delta0^2 + alpha^2 t^2)
    double om_b;  // sqrt(delta0^2 + beta^2 t^2)
    double n;     // alpha*om_b - beta*om_a
    double d;     // om_a*om_b - alpha*beta*t^2, strictly positive
};

// For alpha*beta > 0 both differences cancel at large |t|; use their
// rationalized forms there.
Terms terms(const GenLZParams& p, double t) {
    const double d2 = p.delta0 * p.delta0;
    const double at = p.alpha * t, bt = p.beta * t;
    Terms r{};
    r.om_a = std::hypot(p.delta0, at);
    r.om_b = std::hypot(p.delta0, bt);
    if (p.alpha * p.beta > 0.0) {
        r.n = d2 * (p.alpha - p.beta) * (p.alpha + p.beta) / (p.alpha * r.om_b + p.beta * r.om_a);
        r.d = d2 * (d2 + at * at + bt * bt) / (r.om_a * r.om_b + at * bt);
    } else {
        r.n = p.alpha * r.om_b - p.beta * r.om_a;
        r.d = r.om_a * r.om_b - at * bt;
    }
    assert(r.d > 0.0);
    return r;
}

// u + sqrt(delta0^2 + u^2) and u - sqrt(delta0^2 + u^2) without cancellation.
double add_root(double u, double om, double d2) { return u >= 0.0 ? u + om : d2 / (om - u); }
double sub_root(double u, double om, double d2) { return u <= 0.0 ? u - om : -d2 / (u + om); }

}  // namespace

FieldVector gen_lz_field(const GenLZParams& p, double t) {
    p.validate();
    const Terms r = terms(p, t);
    const double scale = 0.5 * r.om_a / r.d;
    return {scale * p.delta0 * p.delta0, 0.0, scale * r.n * t};
}

StateVector gen_lz_eigvec(const GenLZParams& p, double t, Branch branch) {
    p.validate();
    const double d2 = p.delta0 * p.delta0;
    const double at = p.alpha * t, bt = p.beta * t;
    const double om_a = std::hypot(p.delta0, at), om_b = std::hypot(p.delta0, bt);
    StateVector v;
    if (branch == Branch::minus)
        v = {{add_root(at, om_a, d2), 0.0}, {add_root(bt, om_b, d2), 0.0}};
    else
        v = {{sub_root(at, om_a, d2), 0.0}, {-sub_root(bt, om_b, d2), 0.0}};
    return fix_gauge(v.normalized());
}

double theta(const GenLZParams& p, double t) {
    p.validate();
    const Terms r = terms(p, t);
    return std::atan(r.n * t / (p.delta0 * p.delta0));
}

double theta_limit(const GenLZParams& p) {
    p.validate();
    if (p.beta > 0.0) return std::atan2(p.alpha * p.alpha - p.beta * p.beta, 2.0 * p.alpha * p.beta);
    if (p.alpha == 0.0 && p.beta == 0.0) return 0.0;
    return std::numbers::pi / 2.0;
}

double theta_rate_at_crossing(const GenLZParams& p) {
    p.validate();
    return std::abs(p.alpha - p.beta) / p.delta0;
}

FieldVector standard_lz_field(double delta0, double rate, double t) {
    return {0.5 * delta0, 0.0, 0.5 * rate * t};
}

FieldVector dk_field(double a, double b, double delta0, double t) {
    if (!(b > 0.0)) throw std::invalid_argument("dk_field: b must be positive");
    return {delta0, 0.0, a * std::tanh(b * t)};
}

DkFit dk_fit_from_gen_lz(const GenLZParams& p) {
    p.validate();
    if (!(p.alpha * p.beta > 0.0))
        throw std::domain_error("dk_fit_from_gen_lz: requires alpha > 0 and beta > 0");
    const double ab = p.alpha * p.beta;
    return {(p.alpha - p.beta) * (p.alpha + p.beta) * p.delta0 / (2.0 * ab), 2.0 * ab / (p.alpha + p.beta)};
}

FieldVector sl_field(const GenLZParams& p, double t) {
    p.validate();
    if (p.beta > 0.0) throw std::domain_error("sl_field: requires beta <= 0");
    return {p.delta0, 0.0, (p.alpha - p.beta) * t * std::sqrt(1.0 - p.beta * t * t)};
}

std::string_view to_string(DriveKind kind) noexcept {
    switch (kind) {
        case DriveKind::generalized_lz: return "generalized-lz";
        case DriveKind::standard_lz: return "standard-lz";
        case DriveKind::demkov_kunike: return "demkov-kunike";
        case DriveKind::superlinear: return "superlinear";
        case DriveKind::landscape: return "landscape";
    }
    return "unknown";
}

GenLZModel::GenLZModel(const GenLZParams& p) : params_(p) { params_.validate(); }

Eigensystem GenLZModel::eigenbasis(double t) const {
    const double e = 0.5 * std::hypot(params_.delta0, params_.alpha * t);
    return {-e, e, gen_lz_eigvec(params_, t, Branch::minus), gen_lz_eigvec(params_, t, Branch::plus), false};
}

double GenLZModel::time_scale() const noexcept {
    const double rate = std::max(params_.alpha, std::abs(params_.beta));
    return rate > 0.0 ? params_.delta0 / rate : 1.0 / params_.delta0;
}

StandardLZModel::StandardLZModel(double delta0, double rate) : delta0_(delta0), rate_(rate) {
    if (!(delta0 > 0.0) || !(rate >= 0.0)) throw std::invalid_argument("StandardLZModel: need delta0 > 0, rate >= 0");
}

double StandardLZModel::time_scale() const noexcept { return rate_ > 0.0 ? delta0_ / rate_ : 1.0 / delta0_; }

DemkovKunikeModel::DemkovKunikeModel(double a, double b, double delta0) : a_(a), b_(b), delta0_(delta0) {
    if (!(b > 0.0) || !(delta0 > 0.0)) throw std::invalid_argument("DemkovKunikeModel: need b > 0, delta0 > 0");
}

SuperlinearModel::SuperlinearModel(const GenLZParams& p) : params_(p) {
    params_.validate();
    if (p.beta > 0.0) throw std::domain_error("SuperlinearModel: requires beta <= 0");
}

double SuperlinearModel::time_scale() const noexcept {
    const double rate = params_.alpha - params_.beta;
    return rate > 0.0 ? params_.delta0 / rate : 1.0 / params_.delta0;
}

}  // namespace salz

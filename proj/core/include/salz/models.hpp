// Drive models: generalized Landau-Zener family, standard LZ,
// Demkov-Kunike and superlinear sweeps, with their field-angle geometry.
//
// Units: hbar = 1. delta0 is an energy, alpha and beta are sweep rates such
// that delta0^2 / alpha is dimensionless.

#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "salz/tls.hpp"

namespace salz {

/// Parameters (delta0, alpha, beta) of the generalized model.
/// Requires delta0 > 0, alpha >= 0 and a finite beta.
struct GenLZParams {
    double delta0{1.0};
    double alpha{0.0};
    double beta{0.0};

    /// Throws std::invalid_argument when the invariants fail.
    void validate() const;
    bool operator==(const GenLZParams&) const = default;
};

enum class Branch { minus, plus };

/// Field of the generalized model at time t. y = 0 and x > 0 for all t.
/// x^2 + z^2 = (delta0^2 + alpha^2 t^2) / 4 independent of beta.
FieldVector gen_lz_field(const GenLZParams& p, double t);

/// Normalized, gauge-fixed instantaneous eigenvector. Branch::minus is the
/// ground state with energy -sqrt(delta0^2 + alpha^2 t^2) / 2.
StateVector gen_lz_eigvec(const GenLZParams& p, double t, Branch branch);

/// Field angle theta(t) = arctan(N t / delta0^2), N = alpha*Om_b - beta*Om_a.
double theta(const GenLZParams& p, double t);

/// lim_{t -> +inf} theta(t); the t -> -inf limit is its negative.
double theta_limit(const GenLZParams& p);

/// |alpha - beta| / delta0.
double theta_rate_at_crossing(const GenLZParams& p);

/// The linear sweep x = delta0/2, z = rate*t/2 (the beta = 0 member).
FieldVector standard_lz_field(double delta0, double rate, double t);

/// Demkov-Kunike drive x = delta0, z = a tanh(b t). Requires b > 0.
FieldVector dk_field(double a, double b, double delta0, double t);

struct DkFit {
    double a{0.0};
    double b{0.0};
};

/// Demkov-Kunike parameters matching the asymptotic angle and the crossing
/// angular velocity: a = (alpha^2 - beta^2) delta0 / (2 alpha beta),
/// b = 2 alpha beta / (alpha + beta). Requires alpha > 0 and beta > 0.
DkFit dk_fit_from_gen_lz(const GenLZParams& p);

/// Superlinear sweep x = delta0, z = (alpha - beta) t sqrt(1 - beta t^2).
/// Requires beta <= 0.
FieldVector sl_field(const GenLZParams& p, double t);

enum class DriveKind { generalized_lz, standard_lz, demkov_kunike, superlinear, landscape };

std::string_view to_string(DriveKind kind) noexcept;

/// A time-parameterized field source the propagator can integrate.
class DriveModel {
public:
    virtual ~DriveModel() = default;

    virtual FieldVector field(double t) const = 0;
    virtual Eigensystem eigenbasis(double t) const { return eigensystem(field(t)); }
    virtual DriveKind kind() const noexcept = 0;

    /// Width of the non-adiabatic region around the crossing. Seeds the
    /// automatic choice of integration window.
    virtual double time_scale() const noexcept { return 1.0; }

    /// Fixed parameter interval for drives that are only defined on a
    /// finite range (sampled landscapes). Analytic drives return nullopt.
    virtual std::optional<std::pair<double, double>> domain() const { return std::nullopt; }
};

class GenLZModel final : public DriveModel {
public:
    explicit GenLZModel(const GenLZParams& p);

    FieldVector field(double t) const override { return gen_lz_field(params_, t); }
    Eigensystem eigenbasis(double t) const override;
    DriveKind kind() const noexcept override { return DriveKind::generalized_lz; }
    double time_scale() const noexcept override;

    const GenLZParams& params() const noexcept { return params_; }

private:
    GenLZParams params_;
};

class StandardLZModel final : public DriveModel {
public:
    StandardLZModel(double delta0, double rate);

    FieldVector field(double t) const override { return standard_lz_field(delta0_, rate_, t); }
    DriveKind kind() const noexcept override { return DriveKind::standard_lz; }
    double time_scale() const noexcept override;

private:
    double delta0_;
    double rate_;
};

class DemkovKunikeModel final : public DriveModel {
public:
    DemkovKunikeModel(double a, double b, double delta0);

    FieldVector field(double t) const override { return dk_field(a_, b_, delta0_, t); }
    DriveKind kind() const noexcept override { return DriveKind::demkov_kunike; }
    double time_scale() const noexcept override { return 1.0 / b_; }

private:
    double a_;
    double b_;
    double delta0_;
};

class SuperlinearModel final : public DriveModel {
public:
    explicit SuperlinearModel(const GenLZParams& p);

    FieldVector field(double t) const override { return sl_field(params_, t); }
    DriveKind kind() const noexcept override { return DriveKind::superlinear; }
    double time_scale() const noexcept override;

private:
    GenLZParams params_;
};

}  // namespace salz

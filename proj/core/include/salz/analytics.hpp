// Closed-form transition probabilities and adiabaticity
// diagnostics for the generalized LZ family.
//
// Convention: the LZ member has off-diagonal element delta0/2 and diagonal
// splitting alpha*t, so P_LZ = exp(-pi delta0^2 / (2 hbar alpha)). The often
// quoted exp(-2 pi delta0^2 / (hbar alpha)) corresponds to an off-diagonal
// element delta0 and is kept only as the validity note of lz results.

#pragma once

#include <complex>
#include <string>
#include <string_view>

#include "salz/models.hpp"

namespace salz {

enum class Formula { lz, dk, sl };

std::string_view to_string(Formula f) noexcept;

struct FormulaResult {
    double p{0.0};
    Formula formula{Formula::lz};
    std::string validity_note;
};

/// exp(-pi delta0^2 / (2 rate)). rate = +0 with delta0 > 0 returns 0 (the
/// adiabatic limit); negative or NaN rates and the 0/0 case throw
/// std::domain_error.
double lz_probability(double delta0, double rate);

/// The same value wrapped with its validity annotation.
FormulaResult lz_formula(double delta0, double rate);

/// Demkov-Kunike estimate sinh^2(pi a / b) / sinh^2(pi sqrt(a^2 + delta0^2) / b)
/// with (a, b) from dk_fit_from_gen_lz. Requires alpha > 0, beta > 0.
FormulaResult dk_probability(const GenLZParams& p);

/// Superlinear estimate exp(-pi delta0^2 / (2 (alpha - beta))). Requires
/// beta <= 0 and alpha - beta > 0.
FormulaResult sl_probability(const GenLZParams& p);

/// delta0^2 / (hbar |alpha - beta|); +infinity when alpha == beta.
double adiabaticity_parameter(const GenLZParams& p);

/// Analytic continuation of the half-gap sqrt(z^2 + x^2) = sqrt(delta0^2 +
/// alpha^2 t^2) / 2 to complex t (principal branch). It does not depend on
/// beta, which is why a DDP estimate cannot distinguish the family members.
std::complex<double> ddp_gap_function(const GenLZParams& p, std::complex<double> t);

/// ln sinh(x) for x > 0, accurate for large x.
double log_sinh(double x);

}  // namespace salz

// Closed-form two-level algebra.

#include "salz/tls.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "salz/errors.hpp"

namespace salz {

double FieldVector::magnitude() const noexcept { return std::hypot(x, y, z); }

bool FieldVector::finite() const noexcept {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

double StateVector::norm() const noexcept { return std::sqrt(norm_squared()); }

StateVector StateVector::normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a null state");
    return {a0 / n, a1 / n};
}

cplx inner(const StateVector& u, const StateVector& v) noexcept {
    return std::conj(u.a0) * v.a0 + std::conj(u.a1) * v.a1;
}

StateVector fix_gauge(const StateVector& v) noexcept {
    const cplx lead = v.a0 != cplx{} ? v.a0 : v.a1;
    if (lead == cplx{}) return v;
    const cplx phase = std::conj(lead) / std::abs(lead);
    StateVector out{v.a0 * phase, v.a1 * phase};
    // The leading component is real by construction; drop rounding residue.
    if (v.a0 != cplx{})
        out.a0 = {std::abs(v.a0), 0.0};
    else
        out.a1 = {std::abs(v.a1), 0.0};
    return out;
}

Eigen::Matrix2cd hamiltonian_matrix(const FieldVector& f) {
    if (!f.finite()) throw std::invalid_argument("hamiltonian_matrix: non-finite field");
    Eigen::Matrix2cd h;
    h << cplx{-f.z, 0.0}, cplx{-f.x, f.y},
         cplx{-f.x, -f.y}, cplx{f.z, 0.0};
    return h;
}

Eigensystem eigensystem(const FieldVector& f) {
    if (!f.finite()) throw std::invalid_argument("eigensystem: non-finite field");
    const double m = f.magnitude();
    Eigensystem es;
    if (m == 0.0) {
        es.degenerate = true;
        es.v_minus = {{1.0, 0.0}, {}};
        es.v_plus = {{}, {1.0, 0.0}};
        return es;
    }
    es.e_minus = -m;
    es.e_plus = m;

    // The ground state of -r.sigma is the +1 eigenvector of n.sigma. Pick the
    // representation whose leading entry cannot cancel.
    const double nx = f.x / m, ny = f.y / m, nz = f.z / m;
    StateVector g = nz >= 0.0 ? StateVector{{1.0 + nz, 0.0}, {nx, ny}}
                              : StateVector{{nx, -ny}, {1.0 - nz, 0.0}};
    g = fix_gauge(g.normalized());
    es.v_minus = g;
    es.v_plus = fix_gauge(StateVector{-std::conj(g.a1), std::conj(g.a0)});
    return es;
}

double bloch_angle(const FieldVector& f, double tol) {
    if (!f.finite()) throw std::invalid_argument("bloch_angle: non-finite field");
    if (std::abs(f.y) > tol * std::max(1.0, f.magnitude()))
        throw OutOfPlaneError("bloch_angle: field has an out-of-plane y component");
    const double th = std::atan2(f.z, f.x);
    // atan2 can return -pi for (x<0, z=-0); fold into (-pi, pi].
    return th == -std::numbers::pi ? std::numbers::pi : th;
}

double bloch_polar_angle(const FieldVector& f, double tol) {
    return std::numbers::pi / 2.0 - bloch_angle(f, tol);
}

}  // namespace salz

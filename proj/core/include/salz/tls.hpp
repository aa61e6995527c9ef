// Field vectors, state vectors and instantaneous eigensystems of a driven two-level system.
//
// Sign convention throughout the library: H = -x*sx - y*sy - z*sz = -r.sigma.

#pragma once

#include <complex>

#include <Eigen/Core>

namespace salz {

using cplx = std::complex<double>;

/// Instantaneous Hamiltonian field r = (x, y, z), H = -r.sigma.
struct FieldVector {
    double x{0.0};
    double y{0.0};
    double z{0.0};

    double magnitude() const noexcept;
    /// Splitting between the two eigenvalues, 2|r|.
    double gap() const noexcept { return 2.0 * magnitude(); }
    bool finite() const noexcept;

    FieldVector operator*(double s) const noexcept { return {x * s, y * s, z * s}; }
    bool operator==(const FieldVector&) const = default;
};

/// Two complex amplitudes in the computational basis.
struct StateVector {
    cplx a0{};
    cplx a1{};

    double norm_squared() const noexcept { return std::norm(a0) + std::norm(a1); }
    double norm() const noexcept;
    StateVector normalized() const;

    StateVector operator+(const StateVector& o) const noexcept { return {a0 + o.a0, a1 + o.a1}; }
    StateVector operator*(cplx s) const noexcept { return {a0 * s, a1 * s}; }
    bool operator==(const StateVector&) const = default;
};

/// <u|v>
cplx inner(const StateVector& u, const StateVector& v) noexcept;

/// Fixes the phase so the first nonzero component is real and positive.
StateVector fix_gauge(const StateVector& v) noexcept;

struct Eigensystem {
    double e_minus{0.0};
    double e_plus{0.0};
    StateVector v_minus{};
    StateVector v_plus{};
    /// Set when the field vanishes; eigenvectors are then an arbitrary basis.
    bool degenerate{false};
};

/// Assembles -x*sx - y*sy - z*sz. Throws std::invalid_argument on non-finite input.
Eigen::Matrix2cd hamiltonian_matrix(const FieldVector& f);

/// Closed-form diagonalization. A zero field is reported through
/// Eigensystem::degenerate rather than an exception; the returned vectors are
/// then the computational basis.
Eigensystem eigensystem(const FieldVector& f);

/// Default absolute tolerance on |y| for the in-plane angle.
inline constexpr double kInPlaneTolerance = 1e-12;

/// theta = atan2(z, x) in (-pi, pi] for fields in the xz plane.
/// Throws salz::OutOfPlaneError if |y| exceeds tol * max(1, |r|).
double bloch_angle(const FieldVector& f, double tol = kInPlaneTolerance);

/// Angle between the eigenvectors and the Bloch-sphere z axis, pi/2 - theta.
double bloch_polar_angle(const FieldVector& f, double tol = kInPlaneTolerance);

}  // namespace salz

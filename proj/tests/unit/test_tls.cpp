#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "salz/errors.hpp"
#include "salz/tls.hpp"

using namespace salz;

namespace {

Eigen::Vector2cd as_eigen(const StateVector& v) { return {v.a0, v.a1}; }

FieldVector random_field(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {scale * u(rng), scale * u(rng), scale * u(rng)};
}

}  // namespace

TEST_CASE("hamiltonian matrix is Hermitian and traceless") {
    const FieldVector f{0.3, -1.2, 0.7};
    const Eigen::Matrix2cd h = hamiltonian_matrix(f);
    CHECK((h - h.adjoint()).norm() == 0.0);
    CHECK(std::abs(h.trace()) == 0.0);
    CHECK(h(0, 0).real() == doctest::Approx(-0.7));
    CHECK(h(0, 1) == cplx{-0.3, -1.2});
    CHECK_THROWS_AS(hamiltonian_matrix({NAN, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("closed-form eigensystem agrees with a numerical eigensolver") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const double scale = std::pow(10.0, -6.0 + 12.0 * (i % 13) / 12.0);
        const FieldVector f = random_field(rng, scale);
        const Eigensystem es = eigensystem(f);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(hamiltonian_matrix(f));
        const double mag = std::sqrt(f.x * f.x + f.y * f.y + f.z * f.z);
        CHECK(std::abs(es.e_minus - solver.eigenvalues()(0)) <= 1e-12 * mag);
        CHECK(std::abs(es.e_plus - solver.eigenvalues()(1)) <= 1e-12 * mag);
        // Eigenvectors agree up to phase.
        CHECK(std::abs(std::abs(as_eigen(es.v_minus).dot(solver.eigenvectors().col(0))) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(as_eigen(es.v_plus).dot(solver.eigenvectors().col(1))) - 1.0) < 1e-12);
    }
}

TEST_CASE("eigenpairs: sum zero, difference gap, small residual, orthonormal") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const FieldVector f = random_field(rng, 3.0);
        const Eigensystem es = eigensystem(f);
        CHECK(std::abs(es.e_minus + es.e_plus) <= 1e-12 * f.gap());
        CHECK(std::abs((es.e_plus - es.e_minus) - f.gap()) <= 1e-12 * f.gap());
        const Eigen::Matrix2cd h = hamiltonian_matrix(f);
        CHECK((h * as_eigen(es.v_minus) - es.e_minus * as_eigen(es.v_minus)).norm() <= 1e-12 * f.gap());
        CHECK((h * as_eigen(es.v_plus) - es.e_plus * as_eigen(es.v_plus)).norm() <= 1e-12 * f.gap());
        CHECK(std::abs(inner(es.v_minus, es.v_plus)) < 1e-14);
        CHECK(es.v_minus.norm() == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("gauge: first nonzero component real positive, bit-identical on repeat") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        const FieldVector f = random_field(rng, 1.0);
        const Eigensystem a = eigensystem(f), b = eigensystem(f);
        CHECK(a.v_minus == b.v_minus);
        CHECK(a.v_plus == b.v_plus);
        for (const StateVector& v : {a.v_minus, a.v_plus}) {
            const cplx first = v.a0 != cplx{} ? v.a0 : v.a1;
            CHECK(first.imag() == 0.0);
            CHECK(first.real() > 0.0);
        }
    }
    const StateVector g = fix_gauge({cplx{0.0, 0.0}, cplx{0.0, -2.0}});
    CHECK(g.a1 == cplx{2.0, 0.0});
}

TEST_CASE("simple fields") {
    SUBCASE("x field") {
        const Eigensystem es = eigensystem({0.5, 0.0, 0.0});
        CHECK(es.e_minus == doctest::Approx(-0.5));
        CHECK(es.e_plus == doctest::Approx(0.5));
        CHECK(std::abs(es.v_minus.a0 - es.v_minus.a1) < 1e-15);
        CHECK(std::abs(es.v_plus.a0 + es.v_plus.a1) < 1e-15);
    }
    SUBCASE("z field") {
        const Eigensystem es = eigensystem({0.0, 0.0, 1.0});
        CHECK(es.e_minus == -1.0);
        CHECK(es.v_minus == StateVector{1.0, 0.0});
        CHECK(es.v_plus == StateVector{0.0, 1.0});
    }
    SUBCASE("negative z field") {
        const Eigensystem es = eigensystem({0.0, 0.0, -1.0});
        CHECK(es.v_minus == StateVector{0.0, 1.0});
        CHECK(es.v_plus == StateVector{1.0, 0.0});
    }
    SUBCASE("zero field is flagged") {
        const Eigensystem es = eigensystem({0.0, 0.0, 0.0});
        CHECK(es.degenerate);
        CHECK(es.e_minus == 0.0);
    }
}

TEST_CASE("magnitude does not overflow or underflow") {
    CHECK(FieldVector{1e200, 1e200, 0.0}.magnitude() == doctest::Approx(std::sqrt(2.0) * 1e200));
    CHECK(FieldVector{1e-200, 0.0, 1e-200}.magnitude() == doctest::Approx(std::sqrt(2.0) * 1e-200));
    CHECK_FALSE(FieldVector{INFINITY, 0.0, 0.0}.finite());
}

TEST_CASE("in-plane angles") {
    constexpr double pi = std::numbers::pi;
    CHECK(bloch_angle({1.0, 0.0, 0.0}) == 0.0);
    CHECK(bloch_angle({0.0, 0.0, 2.0}) == doctest::Approx(pi / 2));
    CHECK(bloch_angle({-1.0, 0.0, 0.0}) == doctest::Approx(pi));
    CHECK(bloch_angle({-1.0, 0.0, -0.0}) == doctest::Approx(pi));
    CHECK(bloch_angle({1.0, 0.0, -1.0}) == doctest::Approx(-pi / 4));
    CHECK(bloch_polar_angle({0.0, 0.0, 1.0}) == doctest::Approx(0.0));
    CHECK(bloch_polar_angle({1.0, 0.0, 0.0}) == doctest::Approx(pi / 2));
    CHECK_THROWS_AS(bloch_angle({1.0, 1e-6, 0.0}), OutOfPlaneError);
    CHECK_NOTHROW(bloch_angle({1.0, 1e-13, 0.0}));
    CHECK_NOTHROW(bloch_angle({1.0, 1e-6, 0.0}, 1e-5));
}

#include <doctest.h>

#include <random>

#include "lanfa/xlinalg.hpp"

using namespace lanfa;
namespace mp = boost::multiprecision;

namespace {

Real tol() { return working_precision().tol; }

bool close(const Real& a, const Real& b, const Real& eps) { return mp::abs(a - b) <= eps * (1 + mp::abs(b)); }

Tridiagonal random_tridiag(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Real> a(n), b(n - 1);
    for (auto& x : a) x = Real(u(rng));
    for (auto& x : b) x = Real(0.1 + std::abs(u(rng)));
    return Tridiagonal(a, b);
}

}  // namespace

TEST_CASE("precision defaults and scope") {
    CHECK(working_precision().bits == 256);
    CHECK(working_precision().tol == mp::pow(Real(2), -128));
    {
        PrecisionScope s(128);
        CHECK(working_precision().bits == 128);
        CHECK(effective_precision_bits() >= 128);
    }
    CHECK(working_precision().bits == 256);
    CHECK_THROWS_AS(set_working_precision(32), ParameterError);
}

TEST_CASE("weighted dot") {
    XVector one{Real(1), Real(1)};
    CHECK(weighted_dot(one, one, one) == 2);
    CHECK(weighted_dot(XVector{Real(1), Real(0)}, XVector{Real(0), Real(1)}, XVector{Real(5), Real(5)}) == 0);
    CHECK(weighted_dot(one, XVector{Real(1), Real(-1)}, XVector{Real(2), Real(1)}) == 1);
    CHECK_THROWS_AS(weighted_dot(one, XVector{Real(1)}, one), DimensionError);
    CHECK_THROWS_AS(weighted_dot(one, one, XVector{Real(1), Real(0)}), DomainError);
}

TEST_CASE("tridiagonal eigenvalues, closed forms") {
    auto e1 = tridiag_eig(Tridiagonal({Real(2)}, {}));
    CHECK(e1.theta[0] == 2);
    CHECK(mp::abs(e1.vectors(0, 0)) == 1);

    auto e2 = tridiag_eigenvalues(Tridiagonal({Real(0), Real(0)}, {Real(1)}));
    CHECK(close(e2[0], Real(-1), tol()));
    CHECK(close(e2[1], Real(1), tol()));

    auto e3 = tridiag_eigenvalues(Tridiagonal({Real(2), Real(2), Real(2)}, {Real(1), Real(1)}));
    CHECK(close(e3[0], 2 - mp::sqrt(Real(2)), tol()));
    CHECK(close(e3[1], Real(2), tol()));
    CHECK(close(e3[2], 2 + mp::sqrt(Real(2)), tol()));

    // 1-2-1 Toeplitz of order n: 2 - 2 cos(j pi / (n + 1)).
    const std::size_t n = 12;
    auto toe = tridiag_eigenvalues(Tridiagonal(std::vector<Real>(n, Real(2)), std::vector<Real>(n - 1, Real(1))));
    for (std::size_t j = 1; j <= n; ++j) CHECK(close(toe[j - 1], 2 - 2 * mp::cos(Real(j) * pi() / (n + 1)), tol()));
}

TEST_CASE("tridiagonal eigenpairs: residual, orthogonality, Sturm counts") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 3 + trial * 4;
        auto t = random_tridiag(rng, n);
        auto e = tridiag_eig(t);
        for (std::size_t i = 0; i < n; ++i) {
            auto tv = t.multiply(e.vectors.column(i));
            auto r = axpy(-e.theta[i], e.vectors.column(i), tv);
            CHECK(norm2(r) <= 10 * tol() * t.norm());
            for (std::size_t j = 0; j <= i; ++j) {
                const Real ip = dot(e.vectors.column(i), e.vectors.column(j));
                CHECK(mp::abs(ip - (i == j ? 1 : 0)) <= 10 * tol());
            }
            if (i > 0) CHECK(e.theta[i - 1] < e.theta[i]);
            CHECK(sturm_count(t, e.theta[i] + Real("1e-30")) == i + 1);
        }
    }
}

TEST_CASE("shifted tridiagonal solves") {
    auto y = solve_shifted_tridiag(Tridiagonal({Real(2)}, {}), Real(0), XVector{Real(1)});
    CHECK(close(y[0], Real("0.5"), tol()));

    auto y2 = solve_shifted_tridiag(Tridiagonal({Real(3), Real(3)}, {Real(1)}), Real(1), XVector{Real(1), Real(1)});
    CHECK(close(y2[0], Real(1) / 3, tol()));
    CHECK(close(y2[1], Real(1) / 3, tol()));

    // T = [0] is singular at z = 0; the error carries the distance.
    try {
        solve_shifted_tridiag(Tridiagonal({Real(0)}, {}), Real(0), XVector{Real(1)});
        FAIL("expected SingularShiftError");
    } catch (const SingularShiftError& e) {
        CHECK(e.distance() == 0);
        CHECK(e.shift() == 0);
    }
    // A tiny Ritz value counts as singular relative to the supplied scale.
    CHECK_THROWS_AS(solve_shifted_tridiag(Tridiagonal({Real("1e-79")}, {}), Real(0), XVector{Real(1)}, Real(100)),
                    SingularShiftError);
    CHECK_NOTHROW(solve_shifted_tridiag(Tridiagonal({Real("1e-10")}, {}), Real(0), XVector{Real(1)}, Real(100)));
}

TEST_CASE("shifted solves agree with dense elimination") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {2u, 5u, 9u}) {
        auto t = random_tridiag(rng, n);
        XVector rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = Real(1 + i);
        const Real z("0.123");
        Matrix dense(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            dense(i, i) = t.alpha[i] - z;
            if (i + 1 < n) dense(i, i + 1) = dense(i + 1, i) = t.beta[i];
        }
        auto ref = solve_dense(dense, rhs);
        auto y = solve_shifted_tridiag(t, z, rhs);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(y[i], ref[i], 1000 * tol()));

        // Complex shift: (T - zI)(yr + i yi) = rhs checked directly.
        const Complex zc(Real("0.5"), Real("0.25"));
        auto yc = solve_shifted_tridiag(t, zc, rhs);
        auto tr = t.multiply(yc.re);
        auto ti = t.multiply(yc.im);
        for (std::size_t i = 0; i < n; ++i) {
            const Real re = tr[i] - zc.re * yc.re[i] + zc.im * yc.im[i];
            const Real im = ti[i] - zc.re * yc.im[i] - zc.im * yc.re[i];
            CHECK(close(re, rhs[i], 1000 * tol()));
            CHECK(mp::abs(im) <= 1000 * tol() * (1 + rhs[i]));
        }
    }
}

TEST_CASE("vector helpers and complex arithmetic") {
    XVector x{Real(3), Real(4)};
    CHECK(norm2(x) == 5);
    CHECK(axpy(Real(2), x, x)[1] == 12);
    CHECK(subtract(x, x)[0] == 0);
    CHECK_THROWS_AS(dot(x, XVector{Real(1)}), DimensionError);
    const Complex a(Real(1), Real(2)), b(Real(3), Real(-1));
    const Complex q = a / b;
    const Complex back = q * b;
    CHECK(close(back.re, a.re, tol()));
    CHECK(close(back.im, a.im, tol()));
    CHECK(abs(Complex(Real(3), Real(4))) == 5);
    CHECK(to_string(Real(2), 3) == "2.000e+00");
    CHECK_THROWS_AS(real_from_string("abc"), ParameterError);
}

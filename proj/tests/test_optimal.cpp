#include <doctest.h>

#include <random>

#include "lanfa/optimal.hpp"

using namespace lanfa;
namespace mp = boost::multiprecision;

namespace {

Real tol() { return working_precision().tol; }

// Brute-force weighted least squares over span{b, Ab, ..., A^{k-1} b}
// via normal equations in a Chebyshev-scaled monomial basis. Only used at
// small k where the conditioning is harmless at this precision.
XVector brute_optimum(const ProblemInstance& inst, const XVector& target, const XVector& g, std::size_t k) {
    const std::size_t d = inst.dim();
    const Real mid = (inst.lambda_max() + inst.lambda_min()) / 2;
    const Real half = (inst.lambda_max() - inst.lambda_min()) / 2;
    std::vector<XVector> basis(k, XVector(d));
    for (std::size_t i = 0; i < d; ++i) {
        Real p = inst.w[i];
        for (std::size_t j = 0; j < k; ++j) {
            basis[j][i] = p;
            p *= (inst.lambda[i] - mid) / half;
        }
    }
    Matrix m(k, k);
    XVector rhs(k);
    for (std::size_t a = 0; a < k; ++a) {
        rhs[a] = weighted_dot(basis[a], target, g);
        for (std::size_t b = 0; b < k; ++b) m(a, b) = weighted_dot(basis[a], basis[b], g);
    }
    auto c = solve_dense(m, rhs);
    XVector x(d, Real(0));
    for (std::size_t j = 0; j < k; ++j) x = axpy(c[j], basis[j], x);
    return x;
}

ProblemInstance uniform10() {
    XVector w(10);
    for (std::size_t i = 0; i < 10; ++i) w[i] = Real(1) / (i + 1);
    return ProblemInstance(spectrum(spectra::Uniform{10, Real(1), Real(10)}), w);
}

}  // namespace

TEST_CASE("hand examples") {
    ProblemInstance a({Real(1), Real(2)}, ones_b(2));
    const auto inv = ScalarFunction::inv_power(1);
    auto x = krylov_optimal(a, inv, 1);
    CHECK(mp::abs(x[0] - Real("0.75")) <= tol());
    CHECK(mp::abs(x[1] - Real("0.75")) <= tol());
    auto y = krylov_optimal(a, inv, 1, weights::ShiftedA{Real(0), 1});
    CHECK(mp::abs(y[0] - Real(2) / 3) <= tol());
    CHECK(mp::abs(y[1] - Real(2) / 3) <= tol());

    auto r = optimality_ratio(a, inv, 1, Method::LanczosFA);
    CHECK(mp::abs(r.value - mp::sqrt(Real(10)) / 3) <= tol());

    // Lanczos-OR for 1/x^2 at k = 2 searches K_1 in the A^{-2} norm:
    // c = sum w^2 lambda^-4 / sum w^2 lambda^-2.
    RationalFunction r2({Real(1)}, {Real(0), Real(0)});
    auto o = lanczos_or(a, r2, 2);
    const Real c = (1 + Real(1) / 16) / (1 + Real(1) / 4);
    CHECK(mp::abs(o[0] - c) <= tol());
    CHECK(mp::abs(o[1] - c) <= tol());
    CHECK(lanczos_or_dimension(r2, 2) == 1);
    CHECK_THROWS_AS(lanczos_or(a, r2, 1), ParameterError);
}

TEST_CASE("weights") {
    ProblemInstance a({Real(1), Real(2)}, ones_b(2));
    CHECK(weight_values(a, weights::PowerOfA{2}) == XVector{Real(1), Real(4)});
    CHECK_THROWS_AS(weight_values(a, weights::ShiftedA{Real("1.5"), 1}), DomainError);
    CHECK(weight_values(a, weights::ShiftedA{Real(3), -1}) == XVector{Real(2), Real(1)});
    CHECK(shift_sign(a, Real(3)) == -1);
    CHECK(shift_sign(a, Real(0)) == 1);
    CHECK_THROWS_AS(shift_sign(a, Real("1.5")), DomainError);
    ProblemInstance b({Real(-1), Real(1)}, ones_b(2));
    CHECK_THROWS_AS(weight_values(b, weights::PowerOfA{1}), DomainError);
    CHECK_THROWS_AS(weight_values(a, weights::AbsRational{RationalFunction({Real(-1), Real(1)}, {Real(-5)})}),
                    DomainError);
}

TEST_CASE("weighted optima match brute-force least squares") {
    auto inst = uniform10();
    const auto f = ScalarFunction::sqrt();
    const XVector target = exact_apply(inst, f);
    for (const WeightSpec& wspec : {WeightSpec{weights::TwoNorm{}}, WeightSpec{weights::ShiftedA{Real(-1), 1}},
                                    WeightSpec{weights::PowerOfA{2}}}) {
        const XVector g = std::holds_alternative<weights::TwoNorm>(wspec) ? XVector(10, Real(1)) : weight_values(inst, wspec);
        for (std::size_t k = 1; k <= 5; ++k) {
            auto ours = krylov_optimal(inst, f, k, wspec);
            auto ref = brute_optimum(inst, target, g, k);
            CHECK(norm2(subtract(ours, ref)) <= Real("1e-40") * norm2(target));
        }
    }
}

TEST_CASE("full grade reproduces f(A)b") {
    auto inst = uniform10();
    const auto f = ScalarFunction::exp_scaled(Real(1), -1);
    const XVector t = exact_apply(inst, f);
    for (const WeightSpec& w : {WeightSpec{weights::TwoNorm{}}, WeightSpec{weights::PowerOfA{-1}}}) {
        CHECK(norm2(subtract(t, krylov_optimal(inst, f, 10, w))) <= 100 * tol() * norm2(t));
    }
}

TEST_CASE("optimal errors are nonincreasing and ratios are at least one") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.05, 1);
    XVector w(30);
    for (auto& x : w) x = Real(u(rng));
    ProblemInstance inst(spectrum(spectra::Geometric{30, Real(1), Real(1000)}), w);
    for (const auto& f : {ScalarFunction::sqrt(), ScalarFunction::inv_power(1), ScalarFunction::inv_power(3)}) {
        auto e = optimal_errors(inst, f, 30);
        for (std::size_t k = 1; k < e.size(); ++k) CHECK(e[k] <= e[k - 1] * (1 + tol()));
        for (const auto& row : optimality_ratio_series(inst, f, 30, Method::LanczosFA)) {
            if (row.ratio.is_ok()) CHECK(row.ratio.value >= 1 - tol());
        }
    }
    // CG: 2-norm ratio at most sqrt(kappa).
    for (const auto& row : optimality_ratio_series(inst, ScalarFunction::inv_power(1), 30, Method::LanczosFA)) {
        if (row.ratio.is_ok()) CHECK(row.ratio.value <= mp::sqrt(Real(1000)) * (1 + tol()));
    }
    // Polynomial of degree < k: EXACT.
    CHECK(optimality_ratio(inst, ScalarFunction::polynomial({Real(1), Real(1)}), 3, Method::LanczosFA).status ==
          Status::Exact);
}

TEST_CASE("lanczos-or with q = 1 is the |r|-weighted optimum") {
    auto inst = uniform10();
    RationalFunction r({Real(1)}, {Real(0)});
    for (std::size_t k = 1; k <= 6; ++k) {
        auto a = lanczos_or(inst, r, k);
        auto b = krylov_optimal(inst, ScalarFunction::rational(r), k, weights::AbsRational{r});
        CHECK(norm2(subtract(a, b)) <= 100 * tol() * norm2(a));
    }
}

TEST_CASE("proof identities") {
    ProblemInstance a({Real(1), Real(2)}, ones_b(2));
    RationalFunction inv({Real(1)}, {Real(0)});
    CHECK(verify_lemma_opt_formula(a, inv, 1, 1) <= tol());
    CHECK(verify_telescoping(a, inv, 1) <= tol());

    auto inst = uniform10();
    RationalFunction r({Real(1)}, {Real(-1), Real(-2)});
    const Real scale = norm2(exact_apply(inst, ScalarFunction::rational(r)));
    CHECK(verify_telescoping(inst, r, 3) <= 20 * tol() * scale);
    CHECK(verify_lemma_opt_formula(inst, r, 2, 4) <= 10 * tol() * scale);
    CHECK(verify_telescoping(inst, r, 10) <= tol() * scale);
    CHECK(verify_lemma_opt_formula(inst, r, 1, 10) <= tol() * scale);

    // Lemma formula against the brute-force oracle: j = q, the opt over K_4
    // of r_2 in the (A + 2I)-norm is Q (T + 2)^{-1} Q^T r_1(A) b.
    const XVector t = exact_apply(inst, ScalarFunction::rational(r));
    XVector g(10);
    for (std::size_t i = 0; i < 10; ++i) g[i] = inst.lambda[i] + 2;
    auto ref = brute_optimum(inst, t, g, 4);
    auto ours = krylov_optimal(inst, ScalarFunction::rational(r), 4, weights::ShiftedA{Real(-2), 1});
    CHECK(norm2(subtract(ref, ours)) <= Real("1e-40") * scale);

    for (std::size_t j = 1; j <= 2; ++j) {
        auto c = verify_rj_optimality(inst, r, j, 4);
        CHECK(c.lhs <= c.rhs * (1 + tol()));
    }
}

#include <doctest.h>

#include <random>

#include "lanfa/matfunc.hpp"

using namespace lanfa;
namespace mp = boost::multiprecision;

namespace {

Real tol() { return working_precision().tol; }

ProblemInstance random_pd(std::mt19937_64& rng, std::size_t d) {
    std::uniform_real_distribution<double> u(0, 1);
    XVector lambda;
    while (lambda.size() < d) {
        Real x = mp::pow(Real(10), Real(2 * u(rng)));
        if (std::find(lambda.begin(), lambda.end(), x) == lambda.end()) lambda.push_back(x);
    }
    std::sort(lambda.begin(), lambda.end());
    XVector w(d);
    for (auto& x : w) x = Real(u(rng) - 0.5);
    return ProblemInstance(lambda, w);
}

}  // namespace

TEST_CASE("exact apply") {
    ProblemInstance a({Real(1), Real(2), Real(3)}, ones_b(3));
    CHECK(exact_apply(a, ScalarFunction::polynomial({Real(0), Real(0), Real(1)})) == XVector{Real(1), Real(4), Real(9)});
    ProblemInstance b({Real(1), Real(2)}, ones_b(2));
    CHECK(exact_apply(b, ScalarFunction::inv_power(1)) == XVector{Real(1), Real("0.5")});
    ProblemInstance c({Real(-1), Real(1)}, ones_b(2));
    CHECK(exact_apply(c, ScalarFunction::sign()) == XVector{Real(-1), Real(1)});
    CHECK_THROWS_AS(exact_apply(c, ScalarFunction::sqrt()), DomainError);
    CHECK_THROWS_AS(exact_apply(b, ScalarFunction::rational(RationalFunction({Real(1)}, {Real(2)}))), DomainError);
}

TEST_CASE("lanczos-fa hand example") {
    ProblemInstance b({Real(1), Real(2)}, ones_b(2));
    auto x = lanczos_fa(b, ScalarFunction::inv_power(1), 1);
    CHECK(mp::abs(x[0] - Real(2) / 3) <= tol());
    CHECK(mp::abs(x[1] - Real(2) / 3) <= tol());

    auto errs = lanczos_fa_series(b, ScalarFunction::inv_power(1), 2);
    REQUIRE(errs.size() == 2);
    CHECK(mp::abs(errs[0].value - mp::sqrt(Real(1) / 9 + Real(1) / 36)) <= tol());
    CHECK(errs[1].value <= tol());

    ProblemInstance c({Real(-1), Real(1)}, ones_b(2));
    auto ce = lanczos_fa_series(c, ScalarFunction::inv_power(1), 2);
    CHECK(ce[0].status == Status::Failed);
    CHECK(ce[1].is_ok());
    CHECK(ce[1].value <= tol());
    CHECK_THROWS_AS(lanczos_fa(c, ScalarFunction::inv_power(1), 1), SingularShiftError);
}

TEST_CASE("polynomial exactness") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        auto inst = random_pd(rng, 12);
        auto p = ScalarFunction::polynomial({Real(1), Real(-2), Real(3)});
        auto errs = lanczos_fa_series(inst, p, 5);
        const Real fn = norm2(exact_apply(inst, p));
        CHECK(errs[0].value > 100 * tol() * fn);
        CHECK(errs[1].value > 100 * tol() * fn);
        for (std::size_t k = 3; k <= 5; ++k) CHECK(errs[k - 1].value <= tol() * fn);
    }
}

TEST_CASE("full grade is exact for any f") {
    std::mt19937_64 rng(10);
    auto inst = random_pd(rng, 15);
    for (const auto& f : {ScalarFunction::sqrt(), ScalarFunction::exp_scaled(Real("0.1"), -1),
                          ScalarFunction::inv_power(2)}) {
        const XVector ref = exact_apply(inst, f);
        auto x = lanczos_fa(inst, f, 15);
        CHECK(norm2(subtract(ref, x)) <= 100 * tol() * norm2(ref));
        auto y = lanczos_fa(inst, f, 40);
        CHECK(norm2(subtract(ref, y)) <= 100 * tol() * norm2(ref));
    }
}

TEST_CASE("solve and eigen paths agree for rational f") {
    std::mt19937_64 rng(12);
    auto inst = random_pd(rng, 20);
    RationalFunction r({Real(1), Real(2)}, {Real(-1), Real("-0.5")}, {Complex(Real(-2), Real(3))});
    auto f = ScalarFunction::rational(r);
    auto kd = lanczos(inst, 10);
    for (std::size_t k : {1u, 4u, 10u}) {
        auto a = fa_coefficients(kd.T.leading(k), inst.norm_b(), f, FaPath::Solve);
        auto b = fa_coefficients(kd.T.leading(k), inst.norm_b(), f, FaPath::Eigen);
        CHECK(norm2(subtract(a, b)) <= 1000 * tol() * norm2(a));
    }
    CHECK_THROWS_AS(fa_coefficients(kd.T, inst.norm_b(), ScalarFunction::sqrt(), FaPath::Solve), ParameterError);
}

TEST_CASE("series reuse matches per-k evaluation") {
    std::mt19937_64 rng(13);
    auto inst = random_pd(rng, 12);
    auto f = ScalarFunction::sqrt();
    auto s = lanczos_fa_series(inst, f, 8);
    const XVector ref = exact_apply(inst, f);
    for (std::size_t k = 1; k <= 8; ++k) {
        const Real e = norm2(subtract(ref, lanczos_fa(inst, f, k)));
        CHECK(mp::abs(e - s[k - 1].value) <= 100 * tol() * norm2(ref));
    }
}

#include <doctest.h>

#include "lanfa/instances.hpp"
#include "lanfa/optimal.hpp"

using namespace lanfa;
namespace mp = boost::multiprecision;

namespace {
Real tol() { return working_precision().tol; }
}  // namespace

TEST_CASE("spectra") {
    auto u = spectrum(spectra::Uniform{3, Real(1), Real(3)});
    CHECK(u == XVector{Real(1), Real(2), Real(3)});

    auto s = spectrum(spectra::IndefiniteSymmetric{4, Real(1), Real(100)});
    CHECK(s == XVector{Real(-100), Real(-1), Real(1), Real(100)});

    auto q = spectrum(spectra::Sec41{100, Real(10000)});
    REQUIRE(q.size() == 100);
    CHECK(q[0] == 1);
    CHECK(q[1] == Real("9999.5"));
    CHECK(q[99] == 10000);
    for (std::size_t i = 2; i < 100; ++i) CHECK(mp::abs((q[i] - q[i - 1]) - Real("0.5") / 98) <= tol());

    auto g = spectrum(spectra::Geometric{5, Real(1), Real(16)});
    for (std::size_t i = 0; i < 5; ++i) CHECK(mp::abs(g[i] - mp::pow(Real(2), Real(i))) <= tol());

    auto c = spectrum(spectra::ClusterOutlier{4, Real(1), Real(90), Real(100)});
    CHECK(c.size() == 4);
    CHECK(c[0] == 1);
    CHECK(c[3] == 100);

    auto t = spectrum(spectra::TwoClusters{2, Real(1), Real("0.5"), 3, Real(10), Real(1)});
    CHECK(t.size() == 5);
    CHECK(t[0] == Real("0.5"));
    CHECK(t[4] == 11);

    CHECK(spectrum_name(spectra::Sec41{2, Real(10)}) == "sec41");
    CHECK_THROWS_AS(spectrum(spectra::Uniform{0, Real(1), Real(2)}), ParameterError);
    CHECK_THROWS_AS(spectrum(spectra::Uniform{3, Real(2), Real(1)}), ParameterError);
    CHECK_THROWS_AS(spectrum(spectra::IndefiniteSymmetric{3, Real(1), Real(2)}), ParameterError);
    CHECK_THROWS_AS(spectrum(spectra::TwoClusters{3, Real(1), Real(1), 3, Real(2), Real(1)}), ParameterError);
}

TEST_CASE("ones b and instance validation") {
    CHECK(ones_b(1) == XVector{Real(1)});
    CHECK(ones_b(3) == XVector(3, Real(1)));
    CHECK(norm2(ones_b(100)) == 10);
    CHECK_THROWS_AS(ones_b(0), ParameterError);
    CHECK_THROWS_AS(ProblemInstance({Real(2), Real(1)}, {Real(1), Real(1)}), ParameterError);
    CHECK_THROWS_AS(ProblemInstance({Real(1), Real(2)}, {Real(1)}), DimensionError);
    CHECK_THROWS_AS(ProblemInstance({Real(1), Real(2)}, {Real(0), Real(0)}), ParameterError);
    ProblemInstance inst({Real(-5), Real(2)}, {Real(3), Real(4)});
    CHECK(inst.norm_a() == 5);
    CHECK(inst.norm_b() == 5);
}

TEST_CASE("hard instance, hand example") {
    auto h = hard_instance(ScalarFunction::inv_power(1), Real(1), Real(2), 1);
    CHECK(mp::abs(h.epsilon - Real("0.25")) <= tol());
    REQUIRE(h.instance.dim() == 2);
    CHECK(mp::abs(h.instance.lambda[0] - 1) <= tol());
    CHECK(mp::abs(h.instance.lambda[1] - 2) <= tol());
    CHECK(mp::abs(h.instance.w[0] - 1 / mp::sqrt(Real(2))) <= tol());
    CHECK(mp::abs(h.instance.w[1] - 1 / mp::sqrt(Real(2))) <= tol());
    CHECK(mp::abs(h.best_poly(Real(1)) - Real("0.75")) <= tol());
    CHECK(!h.degenerate);

    auto d = discrete_hard_instance(ScalarFunction::inv_power(1), {Real(1), Real(2)}, 1);
    CHECK(mp::abs(d.epsilon - h.epsilon) <= tol());
    CHECK(mp::abs(d.instance.w[0] - h.instance.w[0]) <= tol());
}

TEST_CASE("hard instance, degenerate") {
    auto h = hard_instance(ScalarFunction::polynomial({Real(2), Real(3)}), Real(-1), Real(4), 2);
    CHECK(h.degenerate);
    CHECK(h.epsilon <= tol());
}

TEST_CASE("hard instance: optimal Krylov error equals the minimax error") {
    const auto inv = ScalarFunction::inv_power(1);
    for (std::size_t k : {2u, 5u}) {
        auto h = hard_instance(inv, Real(1), Real(100), k);
        const Real opt = optimal_errors(h.instance, inv, k).back();
        CHECK(mp::abs(opt / h.instance.norm_b() - h.epsilon) <= Real("1e-10") * h.epsilon);
    }
    auto d = discrete_hard_instance(inv, spectrum(spectra::Uniform{10, Real(1), Real(10)}), 3);
    const Real opt = optimal_errors(d.instance, inv, 3).back();
    CHECK(mp::abs(opt / d.instance.norm_b() - d.epsilon) <= 10 * tol() * d.epsilon);
}

TEST_CASE("cramer weights annihilate low-degree polynomials") {
    // sum_l b_l^2 (-1)^l p(x_l) = 0 for deg p <= n - 2 (divided difference).
    XVector x{Real(1), Real(2), Real(5), Real(7), Real(11)};
    auto b2 = cramer_weights_squared(x);
    Real total(0);
    for (const auto& v : b2) total += v;
    CHECK(mp::abs(total - 1) <= tol());
    for (int p = 0; p <= 3; ++p) {
        Real s(0);
        for (std::size_t l = 0; l < x.size(); ++l) s += b2[l] * (l % 2 ? -1 : 1) * mp::pow(x[l], Real(p));
        CHECK(mp::abs(s) <= 100 * tol() * mp::pow(Real(11), Real(p)));
    }
}

TEST_CASE("adversarial search") {
    const XVector lambda = spectrum(spectra::Sec41{100, Real(10000)});
    auto a = adversarial_b(lambda, ScalarFunction::inv_power(1), 100, 4, 7);
    CHECK(a.worst_ratio >= 1);
    CHECK(a.worst_ratio <= 100 * (1 + tol()));
    CHECK(a.evaluations == 4);
    CHECK(mp::abs(norm2(a.w) - 1) <= tol());

    auto again = adversarial_b(lambda, ScalarFunction::inv_power(1), 100, 4, 7);
    CHECK(again.worst_ratio == a.worst_ratio);
    CHECK(again.w == a.w);

    auto q4 = adversarial_b(lambda, ScalarFunction::inv_power(4), 100, 4, 7);
    CHECK(q4.worst_ratio > a.worst_ratio);

    CHECK_THROWS_AS(adversarial_b(lambda, ScalarFunction::inv_power(1), 100, 0, 7), ParameterError);
    CHECK_THROWS_AS(adversarial_b(spectrum(spectra::IndefiniteSymmetric{4, Real(1), Real(2)}), ScalarFunction::sqrt(),
                                  4, 2, 0),
                    DomainError);
    CHECK(method_name(Method::LanczosOR) == "lanczos_or");
}

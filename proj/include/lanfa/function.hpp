#pragma once

// Scalar functions f applied to symmetric matrices: polynomials, rationals
// n(x)/m(x) with m monic, square roots, inverse powers, scaled exponentials
// and the sign function.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lanfa/xlinalg.hpp"

namespace lanfa {

// Ascending monomial coefficients c0 + c1 x + ...
struct Polynomial {
    std::vector<Real> coeffs;

    Real operator()(const Real& x) const;
    // Degree of the highest nonzero coefficient; 0 for the zero polynomial.
    std::size_t degree() const;
};

// r(x) = n(x) / m(x), m(x) = prod_j (x - z_j) monic.
// Real poles are ordered z_1..z_q as given. Complex poles come in conjugate
// pairs and are stored once each by their upper-half-plane member.
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(std::vector<Real> numer, std::vector<Real> poles, std::vector<Complex> conjugate_pairs = {});

    const Polynomial& numer() const noexcept { return numer_; }
    const std::vector<Real>& poles() const noexcept { return poles_; }
    const std::vector<Complex>& conjugate_pairs() const noexcept { return pairs_; }

    std::size_t numerator_degree() const { return numer_.degree(); }
    // q: real poles plus two per conjugate pair.
    std::size_t denominator_degree() const { return poles_.size() + 2 * pairs_.size(); }
    bool has_complex_poles() const noexcept { return !pairs_.empty(); }
    // Every pole, conjugates expanded.
    std::vector<Complex> all_poles() const;

    // Throws DomainError at a pole.
    Real operator()(const Real& x) const;
    // m(x).
    Real denominator(const Real& x) const;

    // m_{i,j}(x) = prod_{l=i..j} (x - z_l), 1-based, m_{j+1,j} = 1. Real poles only.
    Real partial_denominator(std::size_t i, std::size_t j, const Real& x) const;
    // r_j = n / m_{1,j}. Real poles only; j in [0, q].
    RationalFunction leading(std::size_t j) const;
    // x -> r(s x), still with a monic denominator.
    RationalFunction scaled_argument(const Real& s) const;

private:
    void require_real_poles(const char* what) const;

    Polynomial numer_;
    std::vector<Real> poles_;
    std::vector<Complex> pairs_;
};

namespace fn {
struct Poly {
    Polynomial p;
};
struct Rational {
    RationalFunction r;
};
struct Sqrt {};
struct InvSqrt {};
struct InvPower {
    unsigned q = 1;
};
// exp(sign * t * x)
struct ExpScaled {
    Real t{1};
    int sign = 1;
};
struct Sign {};
}  // namespace fn

class ScalarFunction {
public:
    using Variant = std::variant<fn::Poly, fn::Rational, fn::Sqrt, fn::InvSqrt, fn::InvPower, fn::ExpScaled, fn::Sign>;

    ScalarFunction(Variant v);

    static ScalarFunction polynomial(std::vector<Real> coeffs) { return {fn::Poly{Polynomial{std::move(coeffs)}}}; }
    static ScalarFunction rational(RationalFunction r) { return {fn::Rational{std::move(r)}}; }
    static ScalarFunction sqrt() { return {fn::Sqrt{}}; }
    static ScalarFunction inv_sqrt() { return {fn::InvSqrt{}}; }
    static ScalarFunction inv_power(unsigned q) { return {fn::InvPower{q}}; }
    static ScalarFunction exp_scaled(Real t, int sign) { return {fn::ExpScaled{std::move(t), sign}}; }
    static ScalarFunction sign() { return {fn::Sign{}}; }

    const Variant& variant() const noexcept { return v_; }

    // Rational view when f is exactly rational (polynomials, inverse powers,
    // explicit rationals).
    std::optional<RationalFunction> as_rational() const;
    bool is_polynomial() const;

    // Canonical config text, e.g. "inv_power:4", "exp:t=1,sign=-1".
    std::string text() const;

private:
    Variant v_;
};

// f(x) at working precision; DomainError names the offending value.
Real eval_scalar(const ScalarFunction& f, const Real& x);

// Parses the basic textual forms: poly:coeffs=[...], rational:numer=[...];poles=[...],
// sqrt, inv_sqrt, inv_power:q, exp:t=..,sign=..., sign. Throws ConfigError.
ScalarFunction parse_scalar_function(const std::string& text);

// Parses "[a,b,c]" into Reals.
std::vector<Real> parse_real_list(const std::string& text);

}  // namespace lanfa

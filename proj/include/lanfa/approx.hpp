#pragma once

// Classical approximation constructions: Chebyshev interpolation, Remez
// best polynomial approximation (interval and discrete), diagonal Pade to exp
// and Zolotarev's best rational approximation to sqrt.

#include <functional>
#include <vector>

#include "lanfa/function.hpp"
#include "lanfa/xlinalg.hpp"

namespace lanfa {

using RealFn = std::function<Real(const Real&)>;

RealFn as_fn(const ScalarFunction& f);

// p(x) = sum_i coeffs[i] T_i(t), t = (2x - lo - hi) / (hi - lo).
struct ChebPoly {
    Real lo;
    Real hi;
    std::vector<Real> coeffs;

    Real operator()(const Real& x) const;
    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    // Ascending monomial coefficients in x. Display only; badly conditioned
    // at high degree.
    std::vector<Real> monomial() const;
};

struct BestApprox {
    ChebPoly poly;
    Real error;
    std::vector<Real> alt_points;
};

// degree+1 Chebyshev nodes of the first kind on [lo, hi], ascending.
std::vector<Real> chebyshev_nodes(const Real& lo, const Real& hi, std::size_t n);
// n Chebyshev extrema (endpoints included) on [lo, hi], ascending.
std::vector<Real> chebyshev_grid(const Real& lo, const Real& hi, std::size_t n);

ChebPoly chebyshev_interpolant(const RealFn& f, const Real& lo, const Real& hi, std::size_t degree);

// Best uniform approximation of the given degree on [lo, hi] by the exchange
// algorithm. Throws SolverError if the reference stalls.
BestApprox remez_best_poly(const RealFn& f, const Real& lo, const Real& hi, std::size_t degree);

// Discrete minimax over a finite point set; alt_points are drawn from it.
BestApprox discrete_best_poly(const RealFn& f, std::vector<Real> points, std::size_t degree);

// Diagonal [m/m] Pade approximant of exp(x) about 0, monic denominator.
RationalFunction pade_exp(unsigned m);

// Type (degree, degree) best relative approximation to sqrt(x) on [1, kappa].
// All poles are real and negative.
RationalFunction zolotarev_sqrt(const Real& kappa, unsigned degree);
// Same on [lo, hi] with lo > 0, by rescaling.
RationalFunction zolotarev_sqrt_interval(const Real& lo, const Real& hi, unsigned degree);

// max |f - g| over a Chebyshev grid with `grid` points.
Real sup_error(const RealFn& f, const RealFn& g, const Real& lo, const Real& hi, std::size_t grid);

// Complete elliptic integral K(k) given the modulus and its complement
// k' = sqrt(1 - k^2) (passed separately to avoid cancellation).
Real ellipk(const Real& k, const Real& kc);

struct JacobiSnCn {
    Real sn;
    Real cn;
};
// Jacobi sn, cn by the descending Landen (AGM) scheme.
JacobiSnCn jacobi_sncn(const Real& u, const Real& k, const Real& kc);

// Multiplies ascending-coefficient polynomials.
std::vector<Real> poly_multiply(const std::vector<Real>& a, const std::vector<Real>& b);

}  // namespace lanfa

#pragma once

// A-priori and near-optimality bounds: the rational-function prefactor
// bound, the uniform (Chebyshev) bound, the triangle-inequality bound for
// non-rational f, the closed-form 1/x minimax error, and the MINRES/CG
// relations for indefinite systems.

#include <optional>
#include <vector>

#include "lanfa/approx.hpp"
#include "lanfa/function.hpp"
#include "lanfa/instances.hpp"
#include "lanfa/krylov.hpp"
#include "lanfa/matfunc.hpp"
#include "lanfa/optimal.hpp"

namespace lanfa {

// lambda_max(A_j) / lambda_min(A_j) for A_j = +-(A - zI). DomainError if z
// lies in [lambda_min, lambda_max].
Real kappa_shift(const ProblemInstance& inst, const Real& z);
// Complex shift: max over the interval of |x - z| divided by the min.
Real kappa_shift(const ProblemInstance& inst, const Complex& z);

struct Thm1Report {
    std::size_t k = 0;
    std::vector<Real> kappas;  // one per pole, conjugates counted separately
    Real prefactor;            // q * prod kappas
    Real opt_err_shifted;      // 2-norm optimum over K_{k-q+1}
    Real bound;                // prefactor * opt_err_shifted
    Real gamma;
    Real eta;
    bool product_within_gamma = true;  // prod kappas <= gamma^q
};

// Shares one Lanczos decomposition across k.
class Thm1Evaluator {
public:
    Thm1Evaluator(const ProblemInstance& inst, RationalFunction r, std::size_t k_max);
    Thm1Evaluator(const ProblemInstance& inst, RationalFunction r, const KrylovDecomposition& kd);

    // Smallest k the bound covers: max(deg n + 1, q).
    std::size_t k_min() const;
    Thm1Report report(std::size_t k) const;
    const Real& prefactor() const noexcept { return prefactor_; }

private:
    void setup(const ProblemInstance& inst);

    RationalFunction r_;
    std::vector<Real> kappas_;
    Real prefactor_, gamma_, eta_;
    bool within_gamma_ = true;
    std::optional<OptimalSeries> opt_;
    std::size_t basis_size_ = 0;
    bool grade_reached_ = false;
};

Thm1Report thm1_bound(const ProblemInstance& inst, const RationalFunction& r, std::size_t k);

// 2 * max |f - p_{k-1}| over a Chebyshev grid on [lambda_min, lambda_max],
// p_{k-1} the Chebyshev interpolant. Relative to ||b||.
Real uniform_bound(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k, std::size_t grid = 10000);

// DomainError when f has a pole or jump on [lo, hi].
void require_continuous(const ScalarFunction& f, const Real& lo, const Real& hi);

// Closed-form best uniform error of 1/x on [lo, hi] by polynomials of
// degree k-1: 8 t^{k+1} / ((t^2 - 1)^2 (hi - lo)).
Real inv_minimax_exact(const Real& lo, const Real& hi, std::size_t k);

struct TriangleResult {
    Real bound;
    std::size_t argmin_index = 0;
};

// min over candidates r of (C_r + 2) ||b|| ||r - f|| + C_r opt_2(f, k - q_r + 1).
// Sup norms and optimal errors are computed once and reused across k.
class TriangleEvaluator {
public:
    TriangleEvaluator(const ProblemInstance& inst, const ScalarFunction& f, std::vector<RationalFunction> candidates,
                      std::size_t k_max, std::size_t grid = 10000);
    TriangleEvaluator(const ProblemInstance& inst, const ScalarFunction& f, std::vector<RationalFunction> candidates,
                      const KrylovDecomposition& kd, std::size_t grid = 10000);

    // Empty when every candidate is skipped at this k.
    std::optional<TriangleResult> at(std::size_t k) const;
    // Value for one candidate, or empty when it is skipped.
    std::optional<Real> candidate_value(std::size_t index, std::size_t k) const;
    const std::vector<Real>& sup_errors() const noexcept { return sup_; }

private:
    void setup(const ProblemInstance& inst, const ScalarFunction& f, std::size_t grid);

    std::vector<RationalFunction> cands_;
    std::vector<Real> sup_;
    std::vector<Real> prefactor_;
    Real norm_b_;
    std::optional<OptimalSeries> opt_;
    std::size_t basis_size_ = 0;
    bool grade_reached_ = false;
};

TriangleResult triangle_bound(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k,
                              const std::vector<RationalFunction>& candidates, std::size_t grid = 10000);

// ||b - A y_k|| for the MINRES iterates, k = 0..k_max.
std::vector<Real> minres_residuals(const ProblemInstance& inst, std::size_t k_max);

// ||b - A lan_k(1/x)||, k = 0..k_max; k = 0 is ||b||. FAILED where T_k is singular.
std::vector<SeriesValue> cg_residuals(const ProblemInstance& inst, std::size_t k_max);

struct CgMinresCheck {
    Real max_deviation;         // relative, over compared iterations
    std::size_t compared = 0;
    std::size_t sentinels = 0;  // CG failed, MINRES stagnated
    std::size_t below_floor = 0;  // MINRES residual under tol * ||b||; not compared
    bool sentinels_consistent = true;  // every CG failure sits on a stagnation
};

CgMinresCheck verify_cg_minres_relation(const ProblemInstance& inst, std::size_t k_max);

struct IndefiniteReport {
    std::size_t k = 0;
    std::size_t k_star = 0;
    std::vector<Real> minres_residuals;        // 0..k
    std::vector<SeriesValue> cg_residuals;     // 0..k
    Real factor;  // e sqrt(k) + 1/sqrt(k)
    Real lhs;     // ||b - A lan_{k*}(1/x)||
    Real rhs;     // factor * MINRES residual at k
    bool holds = false;  // lhs <= rhs + tol ||b||
};

IndefiniteReport indefinite_theorem_check(const ProblemInstance& inst, std::size_t k);
// One report per k = 1..k_max from a single pair of residual sequences.
std::vector<IndefiniteReport> indefinite_theorem_scan(const ProblemInstance& inst, std::size_t k_max);

}  // namespace lanfa

#pragma once

// Weighted-norm Krylov-optimal approximations, Lanczos-OR, optimality
// ratios, and runtime checks of the identities behind Theorem 1.

#include <variant>

#include "lanfa/function.hpp"
#include "lanfa/instances.hpp"
#include "lanfa/krylov.hpp"
#include "lanfa/matfunc.hpp"

namespace lanfa {

namespace weights {
struct TwoNorm {};
// sign * (A - z I); must be positive definite on the spectrum.
struct ShiftedA {
    Real z;
    int sign = 1;
};
// |r(A)|
struct AbsRational {
    RationalFunction r;
};
// A^p
struct PowerOfA {
    int p = 1;
};
}  // namespace weights

using WeightSpec = std::variant<weights::TwoNorm, weights::ShiftedA, weights::AbsRational, weights::PowerOfA>;

// g(lambda_i) for the weight; DomainError unless all are strictly positive.
XVector weight_values(const ProblemInstance& inst, const WeightSpec& weight);

// Weighted least-squares optima over K_1..K_kmax sharing one decomposition.
// Normal equations through a nested Cholesky factorisation of the Gram
// matrix Q^T G Q; once its estimated condition exceeds 2^(bits/4) the
// remaining dimensions switch to Householder QR with rows sorted by
// decreasing weight.
class OptimalSeries {
public:
    OptimalSeries(const KrylovDecomposition& kd, XVector target, const XVector& g);
    // Plain 2-norm projection.
    OptimalSeries(const KrylovDecomposition& kd, XVector target);

    std::size_t max_dim() const noexcept { return q_.cols(); }
    // Minimiser over K_k, as a d-vector.
    XVector solution(std::size_t k) const;
    XVector coefficients(std::size_t k) const;
    // ||target - solution(k)||_2
    Real error2(std::size_t k) const;
    // Whether dimension k was solved by the QR fallback.
    bool used_qr(std::size_t k) const { return k >= qr_from_; }

private:
    void build_cholesky();
    void build_qr();

    Matrix q_;
    XVector target_;
    XVector g_;
    bool two_norm_ = false;
    std::vector<XVector> proj_coeffs_;  // two-norm: c_1..c_k
    Matrix chol_;                       // lower factor of Q^T G Q
    XVector rhs_;                       // Q^T G t
    std::size_t qr_from_ = static_cast<std::size_t>(-1);
    Matrix qr_r_;    // R factor (k_max x k_max, upper)
    XVector qr_qtb_; // H^T sqrt(g) t
};

XVector krylov_optimal(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k,
                       const WeightSpec& weight = weights::TwoNorm{});

// 2-norm errors of the weighted optimum for k = 1..k_max (one decomposition).
std::vector<Real> optimal_errors(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k_max,
                                 const WeightSpec& weight = weights::TwoNorm{});

// Optimum over K_{k - floor(q/2)} in the |r(A)|-norm.
XVector lanczos_or(const ProblemInstance& inst, const RationalFunction& r, std::size_t k);
std::size_t lanczos_or_dimension(const RationalFunction& r, std::size_t k);

// ||f(A)b - method_k|| / ||f(A)b - opt_k||. Lanczos-OR is compared with the
// 2-norm optimum over the same reduced subspace it searches. EXACT when the
// optimal error is below tol * ||f(A)b||, FAILED when the method fails.
SeriesValue optimality_ratio(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k, Method method);

struct RatioRow {
    std::size_t k;
    SeriesValue err_method;
    Real err_opt;  // 2-norm optimum the ratio is taken against
    SeriesValue ratio;
};

// Ratios for k = 1..k_max from one factorisation. If stop_at_exact, the
// series ends at the first EXACT row.
std::vector<RatioRow> optimality_ratio_series(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k_max,
                                              Method method, bool stop_at_exact = false);

// ||opt_k(r_j)_{A_j} - Q (T - z_j)^{-1} Q^T r_{j-1}(A) b||_2.
Real verify_lemma_opt_formula(const ProblemInstance& inst, const RationalFunction& r, std::size_t j, std::size_t k);

// 2-norm deviation between the Lanczos-FA error and its telescoping sum.
Real verify_telescoping(const ProblemInstance& inst, const RationalFunction& r, std::size_t k);

struct RjOptCheck {
    Real lhs;  // ||r_j(A)b - opt_k(r_j)_{A_j}||_2
    Real rhs;  // kappa(A_j)^{1/2} ||m_{j+1,q}(A)|| min_{deg p < k-(q-j)} ||r(A)b - p(A)b||
};
RjOptCheck verify_rj_optimality(const ProblemInstance& inst, const RationalFunction& r, std::size_t j, std::size_t k);

// Sign making sign*(A - zI) positive definite; DomainError if z is inside
// the spectral interval.
int shift_sign(const ProblemInstance& inst, const Real& z);

}  // namespace lanfa

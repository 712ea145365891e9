#pragma once

// Lanczos with full reorthogonalisation.

#include "lanfa/instances.hpp"
#include "lanfa/xlinalg.hpp"

namespace lanfa {

enum class Reorth { Full, None };

struct KrylovDecomposition {
    Matrix Q;  // d x k, orthonormal columns
    Tridiagonal T;
    bool grade_reached = false;
    Real beta_next;  // residual norm that would start column k+1

    std::size_t size() const noexcept { return T.size(); }
};

// Stops early (grade_reached) when beta_j <= tol * max|lambda|.
KrylovDecomposition lanczos(const ProblemInstance& inst, std::size_t k, Reorth reorth = Reorth::Full);

// Number of nonzero coefficients of b.
std::size_t krylov_grade(const ProblemInstance& inst);

// Q y for the leading columns of Q (y.size() columns).
XVector basis_combination(const KrylovDecomposition& kd, std::span<const Real> y);

}  // namespace lanfa

#pragma once

// Exact f(A)b and the Lanczos-FA iterate Q f(T) Q^T b.

#include <string>
#include <vector>

#include "lanfa/function.hpp"
#include "lanfa/instances.hpp"
#include "lanfa/krylov.hpp"

namespace lanfa {

// A per-iteration number that may instead be a FAILED or EXACT marker.
enum class Status { Ok, Failed, Exact };

struct SeriesValue {
    Status status = Status::Ok;
    Real value;
    std::string note;  // reason for FAILED

    static SeriesValue ok(Real v) { return {Status::Ok, std::move(v), {}}; }
    static SeriesValue failed(std::string why) { return {Status::Failed, Real(0), std::move(why)}; }
    static SeriesValue exact() { return {Status::Exact, Real(0), {}}; }
    bool is_ok() const noexcept { return status == Status::Ok; }
};

// f(lambda_i) w_i.
XVector exact_apply(const ProblemInstance& inst, const ScalarFunction& f);

enum class FaPath {
    Auto,   // shifted solves for rational f, eigendecomposition otherwise
    Eigen,  // V f(Theta) V^T e_1
    Solve,  // n(T) prod_j (T - z_j)^{-1} e_1; rational f only
};

// Coefficients c = ||b|| f(T_k) e_1 of the iterate in the Lanczos basis.
// Throws SingularShiftError when a Ritz value sits within
// tol * max(scale, ||T||) of a pole (or of 0 for inverse powers and sign).
XVector fa_coefficients(const Tridiagonal& t, const Real& norm_b, const ScalarFunction& f, FaPath path = FaPath::Auto,
                        const Real& scale = Real(0));

// Lanczos-FA iterate. k larger than the Krylov grade uses the full-grade
// decomposition, where the iterate is exact.
XVector lanczos_fa(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k, FaPath path = FaPath::Auto);

// ||f(A)b - lan_k(f)||_2 for k = 1..k_max from a single factorisation.
// Failures are recorded per k and do not abort the series.
std::vector<SeriesValue> lanczos_fa_series(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k_max,
                                           FaPath path = FaPath::Auto);
// Same, reusing an existing decomposition (k_max <= its size is not required).
std::vector<SeriesValue> lanczos_fa_series(const ProblemInstance& inst, const KrylovDecomposition& kd,
                                           const ScalarFunction& f, std::size_t k_max, FaPath path = FaPath::Auto);

}  // namespace lanfa

#include "lanfa/krylov.hpp"

namespace lanfa {

KrylovDecomposition lanczos(const ProblemInstance& inst, std::size_t k, Reorth reorth) {
    if (k < 1) throw ParameterError("lanczos: k must be at least 1");
    const Real nb = inst.norm_b();
    if (nb == 0) throw ParameterError("lanczos: b is zero");
    const std::size_t d = inst.dim();
    const Real thresh = working_precision().tol * inst.norm_a();
    k = std::min(k, d);

    std::vector<XVector> q;
    std::vector<Real> alpha, beta;
    q.push_back(scale(1 / nb, inst.w));
    KrylovDecomposition out;
    for (std::size_t j = 0;; ++j) {
        XVector v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = inst.lambda[i] * q[j][i];
        Real a = dot(q[j], v);
        alpha.push_back(a);
        for (std::size_t i = 0; i < d; ++i) {
            v[i] -= a * q[j][i];
            if (j > 0) v[i] -= beta[j - 1] * q[j - 1][i];
        }
        if (reorth == Reorth::Full) {
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t l = 0; l <= j; ++l) {
                    Real h = dot(q[l], v);
                    for (std::size_t i = 0; i < d; ++i) v[i] -= h * q[l][i];
                }
            }
        }
        Real b = norm2(v);
        if (b <= thresh) {
            out.grade_reached = true;
            out.beta_next = b;
            break;
        }
        if (j + 1 == k) {
            out.beta_next = b;
            break;
        }
        beta.push_back(b);
        q.push_back(scale(1 / b, v));
    }

    const std::size_t m = alpha.size();
    out.T = Tridiagonal(std::move(alpha), std::move(beta));
    out.Q = Matrix(d, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < d; ++i) out.Q(i, j) = q[j][i];
    }
    if (m == d) out.grade_reached = true;
    return out;
}

std::size_t krylov_grade(const ProblemInstance& inst) {
    std::size_t g = 0;
    for (const auto& x : inst.w) g += (x != 0);
    return g;
}

XVector basis_combination(const KrylovDecomposition& kd, std::span<const Real> y) {
    if (y.size() > kd.Q.cols()) throw DimensionError("basis_combination: more coefficients than columns");
    const std::size_t d = kd.Q.rows();
    XVector out(d, Real(0));
    for (std::size_t j = 0; j < y.size(); ++j) {
        auto col = kd.Q.column(j);
        for (std::size_t i = 0; i < d; ++i) out[i] += y[j] * col[i];
    }
    return out;
}

}  // namespace lanfa

#include "lanfa/matfunc.hpp"

#include <algorithm>

namespace lanfa {

namespace mp = boost::multiprecision;

namespace {

[[noreturn]] void singular(const std::string& what, const Real& ritz, const Real& shift) {
    const Real dist = mp::abs(ritz - shift);
    throw SingularShiftError(what + ": Ritz value " + to_string(ritz, 17) + " within tolerance of " +
                                 to_string(shift, 17) + " (distance " + to_string(dist, 6) + ")",
                             dist.convert_to<double>(), ritz.convert_to<double>(), shift.convert_to<double>());
}

// Points (real) where f is singular or undefined for the eigen path.
std::vector<Real> singular_points(const ScalarFunction& f) {
    if (auto r = f.as_rational()) return r->poles();
    if (std::holds_alternative<fn::Sign>(f.variant()) || std::holds_alternative<fn::InvSqrt>(f.variant())) {
        return {Real(0)};
    }
    return {};
}

XVector coefficients_eigen(const Tridiagonal& t, const Real& nb, const ScalarFunction& f, const Real& scale) {
    const Real radius = working_precision().tol * std::max(scale, t.norm());
    auto eig = tridiag_eig(t);
    const std::size_t k = t.size();
    const auto bad = singular_points(f);
    std::vector<Real> fv(k);
    for (std::size_t l = 0; l < k; ++l) {
        for (const auto& z : bad) {
            if (mp::abs(eig.theta[l] - z) <= radius) singular("lanczos_fa", eig.theta[l], z);
        }
        Real th = eig.theta[l];
        // Ritz values lie in [lambda_min, lambda_max]; clip rounding below 0 for sqrt.
        if (std::holds_alternative<fn::Sqrt>(f.variant()) && th < 0 && -th <= radius) th = 0;
        fv[l] = eval_scalar(f, th);
    }
    XVector c(k, Real(0));
    for (std::size_t l = 0; l < k; ++l) {
        const Real s = nb * fv[l] * eig.vectors(0, l);
        for (std::size_t i = 0; i < k; ++i) c[i] += eig.vectors(i, l) * s;
    }
    return c;
}

XVector coefficients_solve(const Tridiagonal& t, const Real& nb, const RationalFunction& r, const Real& scale) {
    const std::size_t k = t.size();
    XVector y(k, Real(0));
    y[0] = nb;
    for (const auto& z : r.poles()) y = solve_shifted_tridiag(t, z, y, scale);
    for (const auto& z : r.conjugate_pairs()) {
        // (T - zI)^{-1}(T - conj(z) I)^{-1} y = Im((T - zI)^{-1} y) / Im z for real y.
        auto c = solve_shifted_tridiag(t, z, y, scale);
        for (std::size_t i = 0; i < k; ++i) y[i] = c.im[i] / z.im;
    }
    const auto& nc = r.numer().coeffs;
    XVector acc(k, Real(0));
    for (std::size_t i = nc.size(); i-- > 0;) {
        acc = t.multiply(acc);
        for (std::size_t j = 0; j < k; ++j) acc[j] += nc[i] * y[j];
    }
    return acc;
}

}  // namespace

XVector exact_apply(const ProblemInstance& inst, const ScalarFunction& f) {
    XVector out(inst.dim());
    for (std::size_t i = 0; i < inst.dim(); ++i) out[i] = eval_scalar(f, inst.lambda[i]) * inst.w[i];
    return out;
}

XVector fa_coefficients(const Tridiagonal& t, const Real& norm_b, const ScalarFunction& f, FaPath path,
                        const Real& scale) {
    auto rat = f.as_rational();
    if (path == FaPath::Solve && !rat) throw ParameterError("solve path needs a rational function");
    if (path == FaPath::Solve || (path == FaPath::Auto && rat)) {
        try {
            return coefficients_solve(t, norm_b, *rat, scale);
        } catch (const SingularShiftError& e) {
            throw SingularShiftError(std::string("lanczos_fa: ") + e.what(), e.distance(), e.ritz_value(), e.shift());
        }
    }
    return coefficients_eigen(t, norm_b, f, scale);
}

XVector lanczos_fa(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k, FaPath path) {
    if (k < 1) throw ParameterError("lanczos_fa: k must be at least 1");
    auto kd = lanczos(inst, k);
    auto c = fa_coefficients(kd.T, inst.norm_b(), f, path, inst.norm_a());
    return basis_combination(kd, c);
}

std::vector<SeriesValue> lanczos_fa_series(const ProblemInstance& inst, const KrylovDecomposition& kd,
                                           const ScalarFunction& f, std::size_t k_max, FaPath path) {
    const XVector target = exact_apply(inst, f);
    const Real nb = inst.norm_b();
    std::vector<SeriesValue> out;
    for (std::size_t k = 1; k <= k_max; ++k) {
        if (k > kd.size()) {
            if (!kd.grade_reached) throw ParameterError("lanczos_fa_series: decomposition shorter than k_max");
            // Past the grade the iterate no longer changes.
            out.push_back(out.back());
            continue;
        }
        try {
            auto c = fa_coefficients(kd.T.leading(k), nb, f, path, inst.norm_a());
            out.push_back(SeriesValue::ok(norm2(subtract(target, basis_combination(kd, c)))));
        } catch (const SingularShiftError& e) {
            out.push_back(SeriesValue::failed(e.what()));
        } catch (const DomainError& e) {
            out.push_back(SeriesValue::failed(e.what()));
        }
    }
    return out;
}

std::vector<SeriesValue> lanczos_fa_series(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k_max,
                                           FaPath path) {
    if (k_max < 1) throw ParameterError("lanczos_fa_series: k_max must be at least 1");
    auto kd = lanczos(inst, k_max);
    return lanczos_fa_series(inst, kd, f, k_max, path);
}

}  // namespace lanfa

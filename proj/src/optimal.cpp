#include "lanfa/optimal.hpp"

#include <algorithm>
#include <numeric>

namespace lanfa {

namespace mp = boost::multiprecision;

int shift_sign(const ProblemInstance& inst, const Real& z) {
    if (z < inst.lambda_min()) return 1;
    if (z > inst.lambda_max()) return -1;
    throw DomainError("shift " + to_string(z, 17) + " lies inside the spectral interval");
}

XVector weight_values(const ProblemInstance& inst, const WeightSpec& weight) {
    const std::size_t d = inst.dim();
    XVector g(d);
    for (std::size_t i = 0; i < d; ++i) {
        const Real& x = inst.lambda[i];
        if (std::holds_alternative<weights::TwoNorm>(weight)) {
            g[i] = 1;
        } else if (auto* s = std::get_if<weights::ShiftedA>(&weight)) {
            g[i] = s->sign * (x - s->z);
        } else if (auto* r = std::get_if<weights::AbsRational>(&weight)) {
            g[i] = mp::abs(r->r(x));
        } else {
            g[i] = mp::pow(x, Real(std::get<weights::PowerOfA>(weight).p));
        }
        if (!(g[i] > 0)) {
            throw DomainError("weight is not positive at lambda = " + to_string(x, 17));
        }
    }
    return g;
}

OptimalSeries::OptimalSeries(const KrylovDecomposition& kd, XVector target)
    : q_(kd.Q), target_(std::move(target)), two_norm_(true) {
    const std::size_t d = q_.rows();
    if (target_.size() != d) throw DimensionError("OptimalSeries: target length does not match the basis");
    XVector r = target_;
    XVector c;
    for (std::size_t j = 0; j < q_.cols(); ++j) {
        auto col = q_.column(j);
        Real cj = dot(col, r);
        for (std::size_t i = 0; i < d; ++i) r[i] -= cj * col[i];
        c.push_back(cj);
        proj_coeffs_.push_back(c);
    }
}

OptimalSeries::OptimalSeries(const KrylovDecomposition& kd, XVector target, const XVector& g)
    : q_(kd.Q), target_(std::move(target)), g_(g) {
    if (target_.size() != q_.rows() || g_.size() != q_.rows()) {
        throw DimensionError("OptimalSeries: target/weight length does not match the basis");
    }
    for (const auto& x : g_) {
        if (!(x > 0)) throw DomainError("OptimalSeries: weights must be positive");
    }
    build_cholesky();
    if (qr_from_ <= q_.cols()) build_qr();
}

void OptimalSeries::build_cholesky() {
    const std::size_t d = q_.rows();
    const std::size_t n = q_.cols();
    Matrix gram(n, n);
    rhs_.assign(n, Real(0));
    for (std::size_t j = 0; j < n; ++j) {
        auto cj = q_.column(j);
        for (std::size_t l = 0; l <= j; ++l) {
            auto cl = q_.column(l);
            Real s(0);
            for (std::size_t i = 0; i < d; ++i) s += g_[i] * cj[i] * cl[i];
            gram(j, l) = s;
        }
        Real s(0);
        for (std::size_t i = 0; i < d; ++i) s += g_[i] * cj[i] * target_[i];
        rhs_[j] = s;
    }
    const Real cond_cap = mp::ldexp(Real(1), static_cast<int>(working_precision().bits / 4));
    chol_ = Matrix(n, n);
    Real dmax(0), dmin(0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            Real s = gram(j, i);
            for (std::size_t l = 0; l < i; ++l) s -= chol_(j, l) * chol_(i, l);
            chol_(j, i) = s / chol_(i, i);
        }
        Real s = gram(j, j);
        for (std::size_t l = 0; l < j; ++l) s -= chol_(j, l) * chol_(j, l);
        if (!(s > 0)) {
            qr_from_ = j + 1;
            return;
        }
        chol_(j, j) = mp::sqrt(s);
        if (j == 0) {
            dmax = dmin = chol_(0, 0);
        } else {
            dmax = std::max(dmax, chol_(j, j));
            dmin = std::min(dmin, chol_(j, j));
        }
        if ((dmax / dmin) * (dmax / dmin) > cond_cap) {
            qr_from_ = j + 1;
            return;
        }
    }
}

void OptimalSeries::build_qr() {
    const std::size_t d = q_.rows();
    const std::size_t n = q_.cols();
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g_[a] > g_[b]; });
    Matrix b(d, n);
    XVector s(d);
    for (std::size_t i = 0; i < d; ++i) {
        const Real sg = mp::sqrt(g_[order[i]]);
        for (std::size_t j = 0; j < n; ++j) b(i, j) = sg * q_(order[i], j);
        s[i] = sg * target_[order[i]];
    }
    for (std::size_t j = 0; j < n && j < d; ++j) {
        Real norm(0);
        for (std::size_t i = j; i < d; ++i) norm += b(i, j) * b(i, j);
        norm = mp::sqrt(norm);
        if (norm == 0) continue;
        const Real alpha = b(j, j) > 0 ? -norm : norm;
        XVector v(d - j);
        for (std::size_t i = j; i < d; ++i) v[i - j] = b(i, j);
        v[0] -= alpha;
        Real vv(0);
        for (const auto& x : v) vv += x * x;
        if (vv == 0) continue;
        auto reflect = [&](auto&& get) {
            Real p(0);
            for (std::size_t i = j; i < d; ++i) p += v[i - j] * get(i);
            return 2 * p / vv;
        };
        for (std::size_t c = j; c < n; ++c) {
            Real t = reflect([&](std::size_t i) -> const Real& { return b(i, c); });
            for (std::size_t i = j; i < d; ++i) b(i, c) -= t * v[i - j];
        }
        Real t = reflect([&](std::size_t i) -> const Real& { return s[i]; });
        for (std::size_t i = j; i < d; ++i) s[i] -= t * v[i - j];
    }
    qr_r_ = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i <= j && i < d; ++i) qr_r_(i, j) = b(i, j);
    }
    qr_qtb_.assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(std::min(n, d)));
}

XVector OptimalSeries::coefficients(std::size_t k) const {
    if (k < 1 || k > q_.cols()) throw ParameterError("OptimalSeries: dimension out of range");
    if (two_norm_) return proj_coeffs_[k - 1];
    XVector c(k);
    if (k >= qr_from_) {
        for (std::size_t i = k; i-- > 0;) {
            Real s = qr_qtb_[i];
            for (std::size_t j = i + 1; j < k; ++j) s -= qr_r_(i, j) * c[j];
            if (qr_r_(i, i) == 0) throw SolverError("OptimalSeries: rank-deficient weighted basis");
            c[i] = s / qr_r_(i, i);
        }
        return c;
    }
    XVector y(k);
    for (std::size_t i = 0; i < k; ++i) {
        Real s = rhs_[i];
        for (std::size_t l = 0; l < i; ++l) s -= chol_(i, l) * y[l];
        y[i] = s / chol_(i, i);
    }
    for (std::size_t i = k; i-- > 0;) {
        Real s = y[i];
        for (std::size_t l = i + 1; l < k; ++l) s -= chol_(l, i) * c[l];
        c[i] = s / chol_(i, i);
    }
    return c;
}

XVector OptimalSeries::solution(std::size_t k) const {
    auto c = coefficients(k);
    const std::size_t d = q_.rows();
    XVector x(d, Real(0));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < d; ++i) x[i] += c[j] * q_(i, j);
    }
    return x;
}

Real OptimalSeries::error2(std::size_t k) const { return norm2(subtract(target_, solution(k))); }

XVector krylov_optimal(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k, const WeightSpec& weight) {
    if (k < 1) throw ParameterError("krylov_optimal: k must be at least 1");
    const XVector g = weight_values(inst, weight);
    auto kd = lanczos(inst, k);
    XVector t = exact_apply(inst, f);
    if (std::holds_alternative<weights::TwoNorm>(weight)) return OptimalSeries(kd, t).solution(kd.size());
    return OptimalSeries(kd, t, g).solution(kd.size());
}

std::vector<Real> optimal_errors(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k_max,
                                 const WeightSpec& weight) {
    if (k_max < 1) throw ParameterError("optimal_errors: k_max must be at least 1");
    const XVector g = weight_values(inst, weight);
    auto kd = lanczos(inst, k_max);
    XVector t = exact_apply(inst, f);
    OptimalSeries s = std::holds_alternative<weights::TwoNorm>(weight) ? OptimalSeries(kd, t) : OptimalSeries(kd, t, g);
    std::vector<Real> out;
    for (std::size_t k = 1; k <= k_max; ++k) out.push_back(s.error2(std::min(k, kd.size())));
    return out;
}

std::size_t lanczos_or_dimension(const RationalFunction& r, std::size_t k) {
    const std::size_t half = r.denominator_degree() / 2;
    if (k <= half) throw ParameterError("lanczos_or: k - floor(q/2) must be at least 1");
    if (k <= r.numerator_degree()) throw ParameterError("lanczos_or: need k > deg(n)");
    return k - half;
}

XVector lanczos_or(const ProblemInstance& inst, const RationalFunction& r, std::size_t k) {
    const std::size_t kr = lanczos_or_dimension(r, k);
    return krylov_optimal(inst, ScalarFunction::rational(r), kr, weights::AbsRational{r});
}

std::vector<RatioRow> optimality_ratio_series(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k_max,
                                              Method method, bool stop_at_exact) {
    if (k_max < 1) throw ParameterError("optimality_ratio_series: k_max must be at least 1");
    auto kd = lanczos(inst, k_max);
    const XVector t = exact_apply(inst, f);
    const Real floor = working_precision().tol * norm2(t);
    OptimalSeries opt2(kd, t);
    const std::size_t kmax = std::min(k_max, kd.size());
    std::vector<RatioRow> rows;

    auto ratio_of = [&](const SeriesValue& err, const Real& opt) {
        if (opt <= floor) return SeriesValue::exact();
        if (!err.is_ok()) return err;
        return SeriesValue::ok(err.value / opt);
    };

    if (method == Method::LanczosFA) {
        const Real nb = inst.norm_b();
        for (std::size_t k = 1; k <= kmax; ++k) {
            RatioRow row{k, {}, opt2.error2(k), {}};
            if (row.err_opt <= floor) {
                row.err_method = SeriesValue::exact();
                row.ratio = SeriesValue::exact();
                rows.push_back(row);
                if (stop_at_exact) break;
                continue;
            }
            try {
                auto c = fa_coefficients(kd.T.leading(k), nb, f, FaPath::Auto, inst.norm_a());
                row.err_method = SeriesValue::ok(norm2(subtract(t, basis_combination(kd, c))));
            } catch (const SingularShiftError& e) {
                row.err_method = SeriesValue::failed(e.what());
            } catch (const DomainError& e) {
                row.err_method = SeriesValue::failed(e.what());
            }
            row.ratio = ratio_of(row.err_method, row.err_opt);
            rows.push_back(row);
        }
        return rows;
    }

    auto r = f.as_rational();
    if (!r) throw ParameterError("Lanczos-OR needs a rational function");
    const XVector g = weight_values(inst, weights::AbsRational{*r});
    OptimalSeries optw(kd, t, g);
    const std::size_t half = r->denominator_degree() / 2;
    for (std::size_t k = 1; k <= kmax; ++k) {
        if (k <= half || k <= r->numerator_degree()) continue;
        const std::size_t kr = k - half;
        RatioRow row{k, {}, opt2.error2(kr), {}};
        if (row.err_opt <= floor) {
            row.err_method = SeriesValue::exact();
            row.ratio = SeriesValue::exact();
            rows.push_back(row);
            if (stop_at_exact) break;
            continue;
        }
        row.err_method = SeriesValue::ok(optw.error2(kr));
        row.ratio = ratio_of(row.err_method, row.err_opt);
        rows.push_back(row);
    }
    return rows;
}

SeriesValue optimality_ratio(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k, Method method) {
    auto rows = optimality_ratio_series(inst, f, k, method);
    for (const auto& row : rows) {
        if (row.k == k) return row.ratio;
    }
    // k beyond the grade: the optimum is exact.
    if (!rows.empty() && k > rows.back().k) return SeriesValue::exact();
    throw ParameterError("optimality_ratio: method undefined at this k");
}

namespace {

XVector rational_apply(const ProblemInstance& inst, const RationalFunction& r) {
    return exact_apply(inst, ScalarFunction::rational(r));
}

// Q (T - z)^{-1} ... Q^T v for the listed poles.
XVector projected_resolvents(const KrylovDecomposition& kd, const XVector& v, const std::vector<Real>& poles) {
    const std::size_t k = kd.size();
    XVector c(k);
    for (std::size_t j = 0; j < k; ++j) c[j] = dot(kd.Q.column(j), v);
    for (const auto& z : poles) c = solve_shifted_tridiag(kd.T, z, c);
    return basis_combination(kd, c);
}

void require_real_outside(const ProblemInstance& inst, const RationalFunction& r) {
    if (r.has_complex_poles()) throw DomainError("identity checks need real poles");
    for (const auto& z : r.poles()) shift_sign(inst, z);
}

XVector shifted_weights(const ProblemInstance& inst, const Real& z) {
    return weight_values(inst, weights::ShiftedA{z, shift_sign(inst, z)});
}

}  // namespace

Real verify_lemma_opt_formula(const ProblemInstance& inst, const RationalFunction& r, std::size_t j, std::size_t k) {
    require_real_outside(inst, r);
    if (j < 1 || j > r.poles().size()) throw ParameterError("verify_lemma_opt_formula: j out of range");
    if (k < 1) throw ParameterError("verify_lemma_opt_formula: k must be at least 1");
    const Real& z = r.poles()[j - 1];
    auto kd = lanczos(inst, k);
    OptimalSeries opt(kd, rational_apply(inst, r.leading(j)), shifted_weights(inst, z));
    XVector lhs = opt.solution(kd.size());
    XVector rhs = projected_resolvents(kd, rational_apply(inst, r.leading(j - 1)), {z});
    return norm2(subtract(lhs, rhs));
}

Real verify_telescoping(const ProblemInstance& inst, const RationalFunction& r, std::size_t k) {
    require_real_outside(inst, r);
    if (k <= r.numerator_degree()) throw ParameterError("verify_telescoping: need k > deg(n)");
    const auto& poles = r.poles();
    const std::size_t q = poles.size();
    auto kd = lanczos(inst, k);
    const XVector target = rational_apply(inst, r);
    XVector err = subtract(target, basis_combination(kd, fa_coefficients(kd.T, inst.norm_b(),
                                                                         ScalarFunction::rational(r), FaPath::Solve,
                                                                         inst.norm_a())));
    XVector sum(inst.dim(), Real(0));
    for (std::size_t j = 1; j <= q; ++j) {
        XVector rj = rational_apply(inst, r.leading(j));
        OptimalSeries opt(kd, rj, shifted_weights(inst, poles[j - 1]));
        XVector term = subtract(rj, opt.solution(kd.size()));
        if (j < q) term = projected_resolvents(kd, term, std::vector<Real>(poles.begin() + static_cast<std::ptrdiff_t>(j), poles.end()));
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
    }
    return norm2(subtract(err, sum));
}

RjOptCheck verify_rj_optimality(const ProblemInstance& inst, const RationalFunction& r, std::size_t j, std::size_t k) {
    require_real_outside(inst, r);
    const auto& poles = r.poles();
    const std::size_t q = poles.size();
    if (j < 1 || j > q) throw ParameterError("verify_rj_optimality: j out of range");
    if (k <= q - j) throw ParameterError("verify_rj_optimality: need k > q - j");
    auto kd = lanczos(inst, k);
    const Real& z = poles[j - 1];
    XVector gj = shifted_weights(inst, z);
    XVector rj = rational_apply(inst, r.leading(j));
    OptimalSeries opt(kd, rj, gj);
    RjOptCheck out;
    out.lhs = norm2(subtract(rj, opt.solution(kd.size())));

    Real gmax = *std::max_element(gj.begin(), gj.end());
    Real gmin = *std::min_element(gj.begin(), gj.end());
    // kappa(A_j) over the interval endpoints, which are eigenvalues.
    Real kappa = gmax / gmin;
    Real mnorm(0);
    for (const auto& x : inst.lambda) mnorm = std::max(mnorm, mp::abs(r.partial_denominator(j + 1, q, x)));
    OptimalSeries opt2(kd, rational_apply(inst, r));
    const std::size_t kk = std::min(k - (q - j), kd.size());
    out.rhs = mp::sqrt(kappa) * mnorm * opt2.error2(kk);
    return out;
}

}  // namespace lanfa

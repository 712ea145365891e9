#include "lanfa/bounds.hpp"

#include <algorithm>

namespace lanfa {

namespace mp = boost::multiprecision;

Real kappa_shift(const ProblemInstance& inst, const Real& z) {
    const Real& lo = inst.lambda_min();
    const Real& hi = inst.lambda_max();
    if (z < lo) return (hi - z) / (lo - z);
    if (z > hi) return (z - lo) / (z - hi);
    throw DomainError("kappa_shift: shift " + to_string(z, 17) + " lies inside [lambda_min, lambda_max]");
}

Real kappa_shift(const ProblemInstance& inst, const Complex& z) {
    if (z.im == 0) return kappa_shift(inst, z.re);
    const Real& lo = inst.lambda_min();
    const Real& hi = inst.lambda_max();
    const Real far = std::max(abs(Complex{lo - z.re, z.im}), abs(Complex{hi - z.re, z.im}));
    const Real nearest = std::clamp(z.re, lo, hi);
    const Real near = abs(Complex{nearest - z.re, z.im});
    return far / near;
}

namespace {

// Distance from z to the interval [lo, hi].
Real interval_distance(const Complex& z, const Real& lo, const Real& hi) {
    return abs(Complex{std::clamp(z.re, lo, hi) - z.re, z.im});
}

struct PoleFactors {
    std::vector<Real> kappas;
    Real prefactor;
};

PoleFactors pole_factors(const ProblemInstance& inst, const RationalFunction& r) {
    PoleFactors out;
    for (const auto& z : r.poles()) out.kappas.push_back(kappa_shift(inst, z));
    for (const auto& z : r.conjugate_pairs()) {
        const Real k = kappa_shift(inst, z);
        out.kappas.push_back(k);
        out.kappas.push_back(k);
    }
    out.prefactor = Real(out.kappas.size());
    for (const auto& k : out.kappas) out.prefactor *= k;
    return out;
}

// Dimension the optimum is read at; past the grade the optimum is exact.
std::size_t capped_dimension(std::size_t dim, std::size_t basis_size, bool grade_reached, const char* who) {
    if (dim <= basis_size) return dim;
    if (!grade_reached) throw ParameterError(std::string(who) + ": k exceeds the decomposition it was built with");
    return basis_size;
}

}  // namespace

Thm1Evaluator::Thm1Evaluator(const ProblemInstance& inst, RationalFunction r, std::size_t k_max) : r_(std::move(r)) {
    if (k_max < 1) throw ParameterError("thm1: k_max must be at least 1");
    setup(inst);
    auto kd = lanczos(inst, k_max);
    opt_.emplace(kd, exact_apply(inst, ScalarFunction::rational(r_)));
    basis_size_ = kd.size();
    grade_reached_ = kd.grade_reached;
}

Thm1Evaluator::Thm1Evaluator(const ProblemInstance& inst, RationalFunction r, const KrylovDecomposition& kd)
    : r_(std::move(r)) {
    setup(inst);
    opt_.emplace(kd, exact_apply(inst, ScalarFunction::rational(r_)));
    basis_size_ = kd.size();
    grade_reached_ = kd.grade_reached;
}

void Thm1Evaluator::setup(const ProblemInstance& inst) {
    auto pf = pole_factors(inst, r_);
    kappas_ = std::move(pf.kappas);
    prefactor_ = pf.prefactor;
    const Real& lo = inst.lambda_min();
    const Real& hi = inst.lambda_max();
    const auto poles = r_.all_poles();
    if (poles.empty()) {
        eta_ = 0;
        gamma_ = 1;
        return;
    }
    eta_ = interval_distance(poles.front(), lo, hi);
    for (const auto& z : poles) eta_ = std::min(eta_, interval_distance(z, lo, hi));
    gamma_ = 1 + (hi - lo) / eta_;
    Real prod(1);
    for (const auto& k : kappas_) prod *= k;
    const Real q(kappas_.size());
    within_gamma_ = prod <= mp::pow(gamma_, q) * (1 + q * working_precision().tol);
}

std::size_t Thm1Evaluator::k_min() const {
    return std::max<std::size_t>({r_.numerator_degree() + 1, r_.denominator_degree(), 1});
}

Thm1Report Thm1Evaluator::report(std::size_t k) const {
    if (k <= r_.numerator_degree()) throw ParameterError("thm1_bound: need k > deg(n)");
    const std::size_t q = r_.denominator_degree();
    if (k + 1 <= q) throw ParameterError("thm1_bound: need k - q + 1 >= 1");
    Thm1Report rep;
    rep.k = k;
    rep.kappas = kappas_;
    rep.prefactor = prefactor_;
    const std::size_t dim = capped_dimension(k + 1 - q, basis_size_, grade_reached_, "thm1_bound");
    rep.opt_err_shifted = opt_->error2(dim);
    rep.bound = prefactor_ * rep.opt_err_shifted;
    rep.gamma = gamma_;
    rep.eta = eta_;
    rep.product_within_gamma = within_gamma_;
    return rep;
}

Thm1Report thm1_bound(const ProblemInstance& inst, const RationalFunction& r, std::size_t k) {
    if (k <= r.numerator_degree()) throw ParameterError("thm1_bound: need k > deg(n)");
    return Thm1Evaluator(inst, r, k).report(k);
}

void require_continuous(const ScalarFunction& f, const Real& lo, const Real& hi) {
    const bool straddles_zero = lo <= 0 && hi >= 0;
    const auto& v = f.variant();
    if (auto* r = std::get_if<fn::Rational>(&v)) {
        for (const auto& z : r->r.poles()) {
            if (z >= lo && z <= hi) throw DomainError("pole " + to_string(z, 17) + " lies in the spectral interval");
        }
    } else if (std::holds_alternative<fn::InvPower>(v) || std::holds_alternative<fn::Sign>(v)) {
        if (straddles_zero) throw DomainError(f.text() + " is not continuous on an interval containing 0");
    } else if (std::holds_alternative<fn::InvSqrt>(v)) {
        if (lo <= 0) throw DomainError("inv_sqrt needs a positive interval");
    } else if (std::holds_alternative<fn::Sqrt>(v)) {
        if (lo < 0) throw DomainError("sqrt needs a nonnegative interval");
    }
}

Real uniform_bound(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k, std::size_t grid) {
    if (k < 1) throw ParameterError("uniform_bound: k must be at least 1");
    if (grid < 10 * k) throw ParameterError("uniform_bound: grid must have at least 10 k points");
    const Real& lo = inst.lambda_min();
    const Real& hi = inst.lambda_max();
    require_continuous(f, lo, hi);
    if (lo == hi) return Real(0);
    auto fx = as_fn(f);
    const ChebPoly p = chebyshev_interpolant(fx, lo, hi, k - 1);
    return 2 * sup_error(fx, [&p](const Real& x) { return p(x); }, lo, hi, grid);
}

Real inv_minimax_exact(const Real& lo, const Real& hi, std::size_t k) {
    if (!(lo > 0)) throw DomainError("inv_minimax_exact: need lo > 0");
    if (!(hi > lo)) throw ParameterError("inv_minimax_exact: need hi > lo");
    if (k < 1) throw ParameterError("inv_minimax_exact: k must be at least 1");
    const Real t = 1 - 2 / (1 + mp::sqrt(hi / lo));
    const Real t2m1 = t * t - 1;
    return 8 * mp::pow(t, Real(k + 1)) / (t2m1 * t2m1 * (hi - lo));
}

TriangleEvaluator::TriangleEvaluator(const ProblemInstance& inst, const ScalarFunction& f,
                                     std::vector<RationalFunction> candidates, std::size_t k_max, std::size_t grid)
    : cands_(std::move(candidates)) {
    if (k_max < 1) throw ParameterError("triangle_bound: k_max must be at least 1");
    setup(inst, f, grid);
    auto kd = lanczos(inst, k_max);
    opt_.emplace(kd, exact_apply(inst, f));
    basis_size_ = kd.size();
    grade_reached_ = kd.grade_reached;
}

TriangleEvaluator::TriangleEvaluator(const ProblemInstance& inst, const ScalarFunction& f,
                                     std::vector<RationalFunction> candidates, const KrylovDecomposition& kd,
                                     std::size_t grid)
    : cands_(std::move(candidates)) {
    setup(inst, f, grid);
    opt_.emplace(kd, exact_apply(inst, f));
    basis_size_ = kd.size();
    grade_reached_ = kd.grade_reached;
}

void TriangleEvaluator::setup(const ProblemInstance& inst, const ScalarFunction& f, std::size_t grid) {
    if (cands_.empty()) throw ParameterError("triangle_bound: no candidates");
    const Real& lo = inst.lambda_min();
    const Real& hi = inst.lambda_max();
    require_continuous(f, lo, hi);
    auto fx = as_fn(f);
    norm_b_ = inst.norm_b();
    for (const auto& r : cands_) {
        prefactor_.push_back(pole_factors(inst, r).prefactor);
        sup_.push_back(lo == hi ? mp::abs(fx(lo) - r(lo)) : sup_error(fx, [&r](const Real& x) { return r(x); }, lo, hi, grid));
    }
}

std::optional<Real> TriangleEvaluator::candidate_value(std::size_t index, std::size_t k) const {
    const auto& r = cands_.at(index);
    const std::size_t q = r.denominator_degree();
    if (k <= r.numerator_degree() || k + 1 <= q) return std::nullopt;
    const std::size_t dim = capped_dimension(k + 1 - q, basis_size_, grade_reached_, "triangle_bound");
    const Real& c = prefactor_[index];
    return (c + 2) * norm_b_ * sup_[index] + c * opt_->error2(dim);
}

std::optional<TriangleResult> TriangleEvaluator::at(std::size_t k) const {
    std::optional<TriangleResult> best;
    for (std::size_t i = 0; i < cands_.size(); ++i) {
        auto v = candidate_value(i, k);
        if (v && (!best || *v < best->bound)) best = TriangleResult{*v, i};
    }
    return best;
}

TriangleResult triangle_bound(const ProblemInstance& inst, const ScalarFunction& f, std::size_t k,
                              const std::vector<RationalFunction>& candidates, std::size_t grid) {
    auto res = TriangleEvaluator(inst, f, candidates, k, grid).at(k);
    if (!res) throw ParameterError("triangle_bound: every candidate needs more iterations than k");
    return *res;
}

namespace {

void require_nonsingular(const ProblemInstance& inst) {
    for (const auto& x : inst.lambda) {
        if (x == 0) throw DomainError("A is singular (0 is an eigenvalue)");
    }
}

XVector residual(const ProblemInstance& inst, const XVector& x) {
    XVector r(inst.dim());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = inst.w[i] - inst.lambda[i] * x[i];
    return r;
}

}  // namespace

std::vector<Real> minres_residuals(const ProblemInstance& inst, std::size_t k_max) {
    require_nonsingular(inst);
    std::vector<Real> out{inst.norm_b()};
    if (k_max == 0) return out;
    auto kd = lanczos(inst, k_max);
    // min ||b - A x|| over x in K_k is the A^2-weighted optimum for A^{-1} b.
    const ScalarFunction inv = ScalarFunction::inv_power(1);
    OptimalSeries s(kd, exact_apply(inst, inv), weight_values(inst, weights::PowerOfA{2}));
    for (std::size_t k = 1; k <= k_max; ++k) {
        if (k > kd.size()) {
            out.push_back(out.back());
            continue;
        }
        out.push_back(norm2(residual(inst, s.solution(k))));
    }
    return out;
}

std::vector<SeriesValue> cg_residuals(const ProblemInstance& inst, std::size_t k_max) {
    require_nonsingular(inst);
    std::vector<SeriesValue> out{SeriesValue::ok(inst.norm_b())};
    if (k_max == 0) return out;
    auto kd = lanczos(inst, k_max);
    const ScalarFunction inv = ScalarFunction::inv_power(1);
    const Real nb = inst.norm_b();
    for (std::size_t k = 1; k <= k_max; ++k) {
        if (k > kd.size()) {
            out.push_back(out.back());
            continue;
        }
        try {
            auto c = fa_coefficients(kd.T.leading(k), nb, inv, FaPath::Solve, inst.norm_a());
            out.push_back(SeriesValue::ok(norm2(residual(inst, basis_combination(kd, c)))));
        } catch (const SingularShiftError& e) {
            out.push_back(SeriesValue::failed(e.what()));
        }
    }
    return out;
}

CgMinresCheck verify_cg_minres_relation(const ProblemInstance& inst, std::size_t k_max) {
    const auto m = minres_residuals(inst, k_max);
    const auto c = cg_residuals(inst, k_max);
    const Real tol = working_precision().tol;
    const Real floor = tol * inst.norm_b();
    CgMinresCheck out;
    out.max_deviation = 0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        if (m[k - 1] <= floor) {
            ++out.below_floor;
            continue;
        }
        const Real rho = m[k] / m[k - 1];
        const Real den = 1 - rho * rho;
        const bool stagnated = den <= tol;
        if (!c[k].is_ok()) {
            ++out.sentinels;
            if (!stagnated) out.sentinels_consistent = false;
            continue;
        }
        if (m[k] <= floor) {
            ++out.below_floor;
            continue;
        }
        if (stagnated) {
            // Stagnation means T_k is singular; CG should have failed here.
            out.sentinels_consistent = false;
            continue;
        }
        const Real formula = m[k] / mp::sqrt(den);
        out.max_deviation = std::max(out.max_deviation, mp::abs(c[k].value - formula) / formula);
        ++out.compared;
    }
    return out;
}

std::vector<IndefiniteReport> indefinite_theorem_scan(const ProblemInstance& inst, std::size_t k_max) {
    if (k_max < 1) throw ParameterError("indefinite_theorem_check: k must be at least 1");
    const auto m = minres_residuals(inst, k_max);
    const auto c = cg_residuals(inst, k_max);
    const Real e = mp::exp(Real(1));
    const Real slack = working_precision().tol * inst.norm_b();
    std::vector<IndefiniteReport> out;
    std::size_t best = 0;  // c[0] = ||b|| is always a valid iterate
    for (std::size_t k = 1; k <= k_max; ++k) {
        if (c[k].is_ok() && c[k].value < c[best].value) best = k;
        IndefiniteReport rep;
        rep.k = k;
        rep.k_star = best;
        rep.minres_residuals.assign(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(k + 1));
        rep.cg_residuals.assign(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(k + 1));
        const Real sk = mp::sqrt(Real(k));
        rep.factor = e * sk + 1 / sk;
        rep.lhs = c[best].value;
        rep.rhs = rep.factor * m[k];
        rep.holds = rep.lhs <= rep.rhs + slack;
        out.push_back(std::move(rep));
    }
    return out;
}

IndefiniteReport indefinite_theorem_check(const ProblemInstance& inst, std::size_t k) {
    return indefinite_theorem_scan(inst, k).back();
}

}  // namespace lanfa

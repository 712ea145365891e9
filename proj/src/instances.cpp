#include "lanfa/instances.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lanfa/optimal.hpp"

namespace lanfa {

namespace mp = boost::multiprecision;

ProblemInstance::ProblemInstance(XVector l, XVector b) : lambda(std::move(l)), w(std::move(b)) {
    precision = working_precision();
    if (lambda.empty()) throw DimensionError("instance needs at least one eigenvalue");
    if (lambda.size() != w.size()) throw DimensionError("instance: lambda and w lengths differ");
    for (std::size_t i = 1; i < lambda.size(); ++i) {
        if (!(lambda[i - 1] < lambda[i])) throw ParameterError("instance: eigenvalues must be strictly ascending");
    }
    if (norm2(w) == 0) throw ParameterError("instance: b is zero");
}

Real ProblemInstance::norm_a() const { return std::max(mp::abs(lambda.front()), mp::abs(lambda.back())); }

namespace {

XVector evenly(std::size_t d, const Real& lo, const Real& hi) {
    if (d < 1) throw ParameterError("spectrum: d must be at least 1");
    if (d == 1) return {lo};
    if (!(lo < hi)) throw ParameterError("spectrum: need lo < hi");
    XVector x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = lo + (hi - lo) * Real(i) / Real(d - 1);
    x.back() = hi;
    return x;
}

XVector geometric(std::size_t d, const Real& lo, const Real& hi) {
    if (d < 1) throw ParameterError("spectrum: d must be at least 1");
    if (!(lo > 0)) throw ParameterError("geometric spectrum needs lo > 0");
    if (d == 1) return {lo};
    if (!(lo < hi)) throw ParameterError("spectrum: need lo < hi");
    XVector x(d);
    const Real ratio = hi / lo;
    for (std::size_t i = 0; i < d; ++i) x[i] = lo * mp::pow(ratio, Real(i) / Real(d - 1));
    x.front() = lo;
    x.back() = hi;
    return x;
}

void check_distinct(const XVector& x) {
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i - 1] < x[i])) throw ParameterError("spectrum: construction produced non-distinct or unordered values");
    }
}

}  // namespace

XVector spectrum(const SpectrumSpec& spec) {
    XVector out;
    if (auto* u = std::get_if<spectra::Uniform>(&spec)) {
        out = evenly(u->d, u->lo, u->hi);
    } else if (auto* g = std::get_if<spectra::Geometric>(&spec)) {
        out = geometric(g->d, g->lo, g->hi);
    } else if (auto* c = std::get_if<spectra::ClusterOutlier>(&spec)) {
        if (c->d < 2) throw ParameterError("cluster_outlier needs d >= 2");
        out = evenly(c->d - 1, c->cluster_lo, c->cluster_hi);
        out.insert(out.begin(), c->outlier);
        std::sort(out.begin(), out.end());
    } else if (auto* s = std::get_if<spectra::IndefiniteSymmetric>(&spec)) {
        if (s->d < 2 || s->d % 2 != 0) throw ParameterError("indefinite_symmetric needs an even d >= 2");
        auto pos = geometric(s->d / 2, s->inner, s->outer);
        for (std::size_t i = pos.size(); i-- > 0;) out.push_back(-pos[i]);
        out.insert(out.end(), pos.begin(), pos.end());
    } else if (auto* t = std::get_if<spectra::TwoClusters>(&spec)) {
        out = evenly(t->d1, t->c1 - t->h1, t->c1 + t->h1);
        auto second = evenly(t->d2, t->c2 - t->h2, t->c2 + t->h2);
        out.insert(out.end(), second.begin(), second.end());
        std::sort(out.begin(), out.end());
    } else {
        const auto& q = std::get<spectra::Sec41>(spec);
        if (q.d < 2) throw ParameterError("sec41 needs d >= 2");
        if (!(q.kappa > 1)) throw ParameterError("sec41 needs kappa > 1");
        out = evenly(q.d - 1, Real("0.99995") * q.kappa, q.kappa);
        out.insert(out.begin(), Real(1));
    }
    check_distinct(out);
    return out;
}

std::string spectrum_name(const SpectrumSpec& spec) {
    static const char* names[] = {"uniform", "geometric", "cluster_outlier", "indefinite_symmetric", "two_clusters",
                                  "sec41"};
    return names[spec.index()];
}

XVector ones_b(std::size_t d) {
    if (d < 1) throw ParameterError("ones_b: d must be at least 1");
    return XVector(d, Real(1));
}

XVector cramer_weights_squared(const XVector& x) {
    const std::size_t n = x.size();
    XVector out(n);
    Real total(0);
    for (std::size_t l = 0; l < n; ++l) {
        Real p(1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == l) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (j != l) p *= x[j] - x[i];
            }
        }
        out[l] = p;
        total += p;
    }
    for (auto& v : out) {
        v /= total;
        if (!(v > 0)) throw SolverError("cramer_weights_squared: nonpositive weight (points not ascending?)");
    }
    return out;
}

namespace {

HardInstance from_best(const ScalarFunction& f, const BestApprox& best) {
    HardInstance h;
    h.epsilon = best.error;
    h.equioscillation_points = best.alt_points;
    h.best_poly = best.poly;
    Real scale(1);
    for (const auto& x : best.alt_points) scale = std::max(scale, mp::abs(eval_scalar(f, x)));
    h.degenerate = best.error <= working_precision().tol * scale;
    XVector w2 = h.degenerate ? XVector(best.alt_points.size(), Real(1) / Real(best.alt_points.size()))
                              : cramer_weights_squared(best.alt_points);
    XVector w(w2.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = mp::sqrt(w2[i]);
    h.instance = ProblemInstance(best.alt_points, std::move(w));
    return h;
}

}  // namespace

HardInstance hard_instance(const ScalarFunction& f, const Real& lo, const Real& hi, std::size_t k) {
    if (k < 1) throw ParameterError("hard_instance: k must be at least 1");
    return from_best(f, remez_best_poly(as_fn(f), lo, hi, k - 1));
}

HardInstance discrete_hard_instance(const ScalarFunction& f, const XVector& points, std::size_t k) {
    if (k < 1) throw ParameterError("discrete_hard_instance: k must be at least 1");
    return from_best(f, discrete_best_poly(as_fn(f), points, k - 1));
}

std::string method_name(Method m) { return m == Method::LanczosFA ? "lanczos_fa" : "lanczos_or"; }

namespace {

struct Scored {
    Real ratio;
    std::size_t k = 0;
};

Scored worst_ratio(const XVector& lambda, const XVector& w, const ScalarFunction& f, std::size_t k_max, Method method) {
    ProblemInstance inst(lambda, w);
    Scored s{Real(0), 0};
    // The optimum usually hits EXACT long before k_max, so grow the
    // decomposition geometrically instead of paying for k_max up front. The
    // leading columns do not depend on the requested length.
    const std::size_t q = f.as_rational() ? f.as_rational()->denominator_degree() : 0;
    std::vector<RatioRow> rows;
    for (std::size_t k = std::min(k_max, 16 + q / 2);; k = std::min(k_max, 2 * k)) {
        rows = optimality_ratio_series(inst, f, k, method, true);
        if (k == k_max || (!rows.empty() && rows.back().ratio.status == Status::Exact)) break;
    }
    for (const auto& row : rows) {
        if (row.ratio.is_ok() && row.ratio.value > s.ratio) s = {row.ratio.value, row.k};
    }
    return s;
}

XVector normalized_from_log(const std::vector<double>& x) {
    XVector w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = mp::exp(Real(x[i]));
    return scale(1 / norm2(w), w);
}

}  // namespace

AdversarialResult adversarial_b(const XVector& lambda, const ScalarFunction& f, std::size_t k_max, std::size_t budget,
                                std::uint64_t seed, Method method) {
    if (budget < 1) throw ParameterError("adversarial_b: budget must be at least 1");
    const std::size_t d = lambda.size();
    for (const auto& x : lambda) eval_scalar(f, x);  // domain check up front

    AdversarialResult best;
    best.w = scale(1 / mp::sqrt(Real(d)), ones_b(d));
    auto s0 = worst_ratio(lambda, best.w, f, k_max, method);
    best.worst_ratio = s0.ratio;
    best.worst_k = s0.k;
    std::vector<double> best_log(d, 0.0);

    std::mt19937_64 rng(seed);
    // Portable uniform in [0, 1): top 53 bits of the engine output.
    auto uniform = [&rng] { return std::ldexp(static_cast<double>(rng() >> 11), -53); };
    constexpr double kLogRange = 8.0 * 2.302585092994046;  // magnitudes over eight decades

    std::size_t used = 0;
    auto consider = [&](const std::vector<double>& x) {
        ++used;
        XVector w = normalized_from_log(x);
        auto s = worst_ratio(lambda, w, f, k_max, method);
        if (s.ratio > best.worst_ratio) {
            best.worst_ratio = s.ratio;
            best.worst_k = s.k;
            best.w = std::move(w);
            best_log = x;
            return true;
        }
        return false;
    };

    const std::size_t starts = std::max<std::size_t>(1, budget / 4);
    for (std::size_t s = 0; s < starts && used < budget; ++s) {
        std::vector<double> x(d);
        for (auto& v : x) v = -kLogRange * uniform();
        consider(x);
    }

    // Coordinate-wise multiplicative pattern search in log space. Each
    // coordinate's step doubles after a success and halves after a failure.
    std::vector<double> step(d, std::log(2.0));
    for (std::size_t i = 0; used < budget; i = (i + 1) % d) {
        bool improved = false;
        for (double dir : {1.0, -1.0}) {
            if (used >= budget) break;
            auto x = best_log;
            x[i] += dir * step[i];
            if (consider(x)) {
                improved = true;
                break;
            }
        }
        step[i] = improved ? step[i] * 2 : step[i] / 2;
    }
    best.evaluations = used;
    return best;
}

}  // namespace lanfa

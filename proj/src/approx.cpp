#include "lanfa/approx.hpp"

#include <algorithm>
#include <cmath>

namespace lanfa {

namespace mp = boost::multiprecision;

namespace {

Real to_unit(const Real& x, const Real& lo, const Real& hi) { return (2 * x - lo - hi) / (hi - lo); }

Real from_unit(const Real& t, const Real& lo, const Real& hi) { return (lo + hi) / 2 + (hi - lo) / 2 * t; }

// T_0..T_n at t.
std::vector<Real> cheb_row(const Real& t, std::size_t n) {
    std::vector<Real> row(n + 1);
    row[0] = 1;
    if (n >= 1) row[1] = t;
    for (std::size_t j = 2; j <= n; ++j) row[j] = 2 * t * row[j - 1] - row[j - 2];
    return row;
}

struct Level {
    ChebPoly poly;
    Real E;
};

// Solves sum_j c_j T_j(x_i) + (-1)^i E = f(x_i) on the reference.
Level levelled_solve(const std::vector<Real>& ref, const std::vector<Real>& fref, const Real& lo, const Real& hi,
                     std::size_t degree) {
    const std::size_t m = degree + 2;
    Matrix a(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        auto row = cheb_row(to_unit(ref[i], lo, hi), degree);
        for (std::size_t j = 0; j <= degree; ++j) a(i, j) = row[j];
        a(i, degree + 1) = (i % 2 == 0) ? 1 : -1;
    }
    auto sol = solve_dense(a, fref);
    Level out;
    out.poly.lo = lo;
    out.poly.hi = hi;
    out.poly.coeffs.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(degree + 1));
    out.E = sol[degree + 1];
    return out;
}

struct Extremum {
    Real x;
    Real e;  // signed error f - p
};

// Keeps the largest |e| within each run of equal sign, then trims from the
// ends (smaller end first) down to m points.
std::vector<Extremum> alternating_subset(std::vector<Extremum> c, std::size_t m) {
    std::vector<Extremum> alt;
    for (auto& x : c) {
        if (x.e == 0) continue;
        if (!alt.empty() && (alt.back().e > 0) == (x.e > 0)) {
            if (mp::abs(x.e) > mp::abs(alt.back().e)) alt.back() = std::move(x);
        } else {
            alt.push_back(std::move(x));
        }
    }
    while (alt.size() > m) {
        if (mp::abs(alt.front().e) < mp::abs(alt.back().e)) {
            alt.erase(alt.begin());
        } else {
            alt.pop_back();
        }
    }
    return alt;
}

// Golden-section maximisation of s*e on [a, b].
Extremum refine_extremum(const RealFn& err, Real a, Real b, int s, const Real& width_tol) {
    const Real g = (mp::sqrt(Real(5)) - 1) / 2;
    Real c = b - g * (b - a);
    Real d = a + g * (b - a);
    Real fc = s * err(c);
    Real fd = s * err(d);
    for (int it = 0; it < 400 && (b - a) > width_tol; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = s * err(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = s * err(d);
        }
    }
    Extremum best{c, s * fc};
    if (fd > fc) best = {d, s * fd};
    return best;
}

}  // namespace

RealFn as_fn(const ScalarFunction& f) {
    return [f](const Real& x) { return eval_scalar(f, x); };
}

Real ChebPoly::operator()(const Real& x) const {
    // Clenshaw recurrence.
    const Real t = to_unit(x, lo, hi);
    Real b1(0), b2(0);
    for (std::size_t j = coeffs.size(); j-- > 1;) {
        Real b0 = 2 * t * b1 - b2 + coeffs[j];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + (coeffs.empty() ? Real(0) : coeffs[0]);
}

std::vector<Real> ChebPoly::monomial() const {
    // T_j in x as polynomials, built by the three-term recurrence.
    const Real s = 2 / (hi - lo);
    const Real o = -(lo + hi) / (hi - lo);
    const std::vector<Real> tx{o, s};
    std::vector<Real> out(coeffs.size(), Real(0));
    std::vector<Real> tm2{Real(1)}, tm1 = tx;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        std::vector<Real> tj;
        if (j == 0) {
            tj = {Real(1)};
        } else if (j == 1) {
            tj = tx;
        } else {
            tj = poly_multiply(tx, tm1);
            for (auto& c : tj) c *= 2;
            for (std::size_t i = 0; i < tm2.size(); ++i) tj[i] -= tm2[i];
            tm2 = tm1;
            tm1 = tj;
        }
        for (std::size_t i = 0; i < tj.size(); ++i) out[i] += coeffs[j] * tj[i];
    }
    return out;
}

std::vector<Real> poly_multiply(const std::vector<Real>& a, const std::vector<Real>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Real> out(a.size() + b.size() - 1, Real(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<Real> chebyshev_nodes(const Real& lo, const Real& hi, std::size_t n) {
    if (n == 0) throw ParameterError("chebyshev_nodes: need at least one node");
    std::vector<Real> x(n);
    const Real p = pi();
    for (std::size_t j = 0; j < n; ++j) {
        // cos of decreasing angle gives ascending order
        x[j] = from_unit(-mp::cos((Real(j) + Real(0.5)) * p / n), lo, hi);
    }
    return x;
}

std::vector<Real> chebyshev_grid(const Real& lo, const Real& hi, std::size_t n) {
    if (n < 2) throw ParameterError("chebyshev_grid: need at least two points");
    std::vector<Real> x(n);
    const Real p = pi();
    for (std::size_t j = 0; j < n; ++j) x[j] = from_unit(-mp::cos(Real(j) * p / (n - 1)), lo, hi);
    x.front() = lo;
    x.back() = hi;
    return x;
}

ChebPoly chebyshev_interpolant(const RealFn& f, const Real& lo, const Real& hi, std::size_t degree) {
    if (!(lo < hi)) throw ParameterError("chebyshev_interpolant: need lo < hi");
    const std::size_t n = degree + 1;
    auto nodes = chebyshev_nodes(lo, hi, n);
    std::vector<Real> fv(n);
    for (std::size_t j = 0; j < n; ++j) fv[j] = f(nodes[j]);
    ChebPoly p{lo, hi, std::vector<Real>(n, Real(0))};
    for (std::size_t j = 0; j < n; ++j) {
        auto row = cheb_row(to_unit(nodes[j], lo, hi), degree);
        for (std::size_t i = 0; i < n; ++i) p.coeffs[i] += fv[j] * row[i];
    }
    for (std::size_t i = 0; i < n; ++i) p.coeffs[i] *= Real(i == 0 ? 1 : 2) / n;
    return p;
}

BestApprox remez_best_poly(const RealFn& f, const Real& lo, const Real& hi, std::size_t degree) {
    if (!(lo < hi)) throw ParameterError("remez_best_poly: need lo < hi");
    const Precision& prec = working_precision();
    const std::size_t m = degree + 2;
    const std::size_t grid_n = std::max<std::size_t>(50 * (degree + 1), 200) + 1;
    const auto grid = chebyshev_grid(lo, hi, grid_n);
    std::vector<Real> fgrid(grid_n);
    Real fscale(0);
    for (std::size_t i = 0; i < grid_n; ++i) {
        fgrid[i] = f(grid[i]);
        fscale = std::max(fscale, mp::abs(fgrid[i]));
    }
    // Extrema of T_{degree+1} as the starting reference.
    std::vector<Real> ref = chebyshev_grid(lo, hi, m);
    const Real width_tol = (hi - lo) * mp::sqrt(prec.tol) * Real(1e-3);

    for (int iter = 0; iter < 80; ++iter) {
        std::vector<Real> fref(m);
        for (std::size_t i = 0; i < m; ++i) fref[i] = f(ref[i]);
        Level lev = levelled_solve(ref, fref, lo, hi, degree);
        const ChebPoly& p = lev.poly;
        auto err = [&](const Real& x) { return f(x) - p(x); };

        std::vector<Real> eg(grid_n);
        Real emax(0);
        for (std::size_t i = 0; i < grid_n; ++i) {
            eg[i] = fgrid[i] - p(grid[i]);
            emax = std::max(emax, mp::abs(eg[i]));
        }
        if (emax <= prec.tol * prec.tol * (fscale + 1)) {
            // f is (numerically) in the polynomial space.
            return {p, emax, ref};
        }

        std::vector<Extremum> cand;
        cand.push_back({grid[0], eg[0]});
        for (std::size_t i = 1; i + 1 < grid_n; ++i) {
            const bool peak = eg[i] >= eg[i - 1] && eg[i] >= eg[i + 1] && eg[i] > 0;
            const bool dip = eg[i] <= eg[i - 1] && eg[i] <= eg[i + 1] && eg[i] < 0;
            if (!peak && !dip) continue;
            Extremum r = refine_extremum(err, grid[i - 1], grid[i + 1], peak ? 1 : -1, width_tol);
            if (mp::abs(r.e) < mp::abs(eg[i])) r = {grid[i], eg[i]};
            cand.push_back(std::move(r));
        }
        cand.push_back({grid[grid_n - 1], eg[grid_n - 1]});

        auto alt = alternating_subset(std::move(cand), m);
        if (alt.size() < m) {
            std::string msg = "remez_best_poly: lost alternation at iteration " + std::to_string(iter) +
                              "; last reference:";
            for (const auto& x : ref) msg += " " + to_string(x, 10);
            throw SolverError(msg);
        }
        Real amax(0), amin = mp::abs(alt[0].e);
        for (const auto& x : alt) {
            amax = std::max(amax, mp::abs(x.e));
            amin = std::min(amin, mp::abs(x.e));
        }
        for (std::size_t i = 0; i < m; ++i) ref[i] = alt[i].x;
        if (amax - amin <= prec.tol * amax) {
            // One more levelled solve on the converged reference.
            for (std::size_t i = 0; i < m; ++i) fref[i] = f(ref[i]);
            Level fin = levelled_solve(ref, fref, lo, hi, degree);
            Real e = std::max(amax, mp::abs(fin.E));
            return {fin.poly, e, ref};
        }
    }
    std::string msg = "remez_best_poly: no convergence; last reference:";
    for (const auto& x : ref) msg += " " + to_string(x, 10);
    throw SolverError(msg);
}

BestApprox discrete_best_poly(const RealFn& f, std::vector<Real> points, std::size_t degree) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const std::size_t n = points.size();
    const std::size_t m = degree + 2;
    if (n < m) throw ParameterError("discrete_best_poly: need more than degree+1 distinct points");
    const Precision& prec = working_precision();
    const Real lo = points.front();
    const Real hi = points.back();
    std::vector<Real> fv(n);
    Real fscale(0);
    for (std::size_t i = 0; i < n; ++i) {
        fv[i] = f(points[i]);
        fscale = std::max(fscale, mp::abs(fv[i]));
    }

    std::vector<std::size_t> ref(m);
    for (std::size_t j = 0; j < m; ++j) {
        ref[j] = static_cast<std::size_t>(std::llround(static_cast<double>(j) * (n - 1) / (m - 1)));
    }

    for (int iter = 0; iter < 500; ++iter) {
        std::vector<Real> rx(m), rf(m);
        for (std::size_t j = 0; j < m; ++j) {
            rx[j] = points[ref[j]];
            rf[j] = fv[ref[j]];
        }
        // A degenerate reference (lo == hi) cannot occur: n >= m >= 2 distinct points.
        Level lev = levelled_solve(rx, rf, lo, hi, degree);
        std::vector<Extremum> cand(n);
        Real emax(0);
        std::size_t imax = 0;
        for (std::size_t i = 0; i < n; ++i) {
            cand[i] = {Real(i), fv[i] - lev.poly(points[i])};
            if (mp::abs(cand[i].e) > emax) {
                emax = mp::abs(cand[i].e);
                imax = i;
            }
        }
        const Real E = mp::abs(lev.E);
        if (emax <= prec.tol * prec.tol * (fscale + 1) || emax <= E * (1 + prec.tol)) {
            return {lev.poly, std::max(E, emax), rx};
        }
        auto alt = alternating_subset(std::move(cand), m);
        if (alt.size() < m) throw SolverError("discrete_best_poly: lost alternation");
        std::vector<std::size_t> next(m);
        bool has_max = false;
        for (std::size_t j = 0; j < m; ++j) {
            next[j] = alt[j].x.convert_to<std::size_t>();
            has_max = has_max || next[j] == imax;
        }
        if (!has_max || next == ref) throw SolverError("discrete_best_poly: exchange stalled");
        ref = next;
    }
    throw SolverError("discrete_best_poly: no convergence");
}

namespace {

// Roots of a polynomial (ascending coefficients) by Durand-Kerner with a
// final Newton polish.
std::vector<Complex> poly_roots(const std::vector<Real>& c) {
    const std::size_t n = c.size() - 1;
    std::vector<Complex> a(n + 1);
    for (std::size_t i = 0; i <= n; ++i) a[i] = Complex(c[i] / c[n]);
    auto eval = [&](const Complex& z) {
        Complex acc(a[n]);
        for (std::size_t i = n; i-- > 0;) acc = acc * z + a[i];
        return acc;
    };
    Real radius(1);
    for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, 1 + abs(a[i]));
    std::vector<Complex> z(n);
    const Real p = pi();
    for (std::size_t i = 0; i < n; ++i) {
        Real ang = 2 * p * i / n + Real(0.4);
        z[i] = Complex(radius * mp::cos(ang), radius * mp::sin(ang));
    }
    const Real& tol = working_precision().tol;
    // Quadratic convergence: once steps fall below tol a few more sweeps
    // reach the rounding floor, which tol^2 itself may sit under.
    int polish = -1;
    for (int it = 0; it < 2000; ++it) {
        Real worst(0);
        for (std::size_t i = 0; i < n; ++i) {
            Complex den(Real(1));
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) den = den * (z[i] - z[j]);
            }
            Complex step = eval(z[i]) / den;
            z[i] = z[i] - step;
            worst = std::max(worst, abs(step) / (1 + abs(z[i])));
        }
        if (polish == 0 || worst <= tol * tol) return z;
        if (polish > 0) --polish;
        if (polish < 0 && worst <= tol) polish = 3;
    }
    throw SolverError("poly_roots: Durand-Kerner did not converge");
}

}  // namespace

RationalFunction pade_exp(unsigned m) {
    if (m < 1) throw ParameterError("pade_exp: m must be at least 1");
    // c_j = (2m-j)! m! / ((2m)! j! (m-j)!) via the ratio c_{j+1}/c_j.
    std::vector<Real> c(m + 1);
    c[0] = 1;
    for (unsigned j = 0; j < m; ++j) c[j + 1] = c[j] * Real(m - j) / (Real(2 * m - j) * Real(j + 1));
    std::vector<Real> den(m + 1);
    for (unsigned j = 0; j <= m; ++j) den[j] = (j % 2 == 0) ? c[j] : -c[j];
    const Real lead = den[m];
    std::vector<Real> numer(m + 1);
    for (unsigned j = 0; j <= m; ++j) numer[j] = c[j] / lead;

    auto roots = poly_roots(den);
    const Real& tol = working_precision().tol;
    std::vector<Real> real_poles;
    std::vector<Complex> pairs;
    for (const auto& z : roots) {
        if (mp::abs(z.im) <= tol * abs(z)) {
            real_poles.push_back(z.re);
        } else if (z.im > 0) {
            pairs.push_back(z);
        }
    }
    std::sort(real_poles.begin(), real_poles.end());
    std::sort(pairs.begin(), pairs.end(), [](const Complex& a, const Complex& b) { return a.re < b.re; });
    if (real_poles.size() + 2 * pairs.size() != m) throw SolverError("pade_exp: conjugate pole pairing failed");
    return RationalFunction(std::move(numer), std::move(real_poles), std::move(pairs));
}

Real ellipk(const Real& k, const Real& kc) {
    if (!(kc > 0)) throw DomainError("ellipk: complementary modulus must be positive");
    Real a(1), b = kc;
    const Real eps = working_precision().tol * working_precision().tol;
    for (int it = 0; it < 200; ++it) {
        if (mp::abs(a - b) <= eps * a) return pi() / (a + b);
        Real an = (a + b) / 2;
        b = mp::sqrt(a * b);
        a = an;
    }
    (void)k;
    throw SolverError("ellipk: AGM did not converge");
}

JacobiSnCn jacobi_sncn(const Real& u, const Real& k, const Real& kc) {
    const Real eps = working_precision().tol * working_precision().tol;
    std::vector<Real> a{Real(1)}, c{k};
    Real b = kc;
    for (int it = 0; it < 200; ++it) {
        if (mp::abs(c.back()) <= eps * a.back()) break;
        Real an = (a.back() + b) / 2;
        Real cn = (a.back() - b) / 2;
        b = mp::sqrt(a.back() * b);
        a.push_back(an);
        c.push_back(cn);
        if (it == 199) throw SolverError("jacobi_sncn: AGM did not converge");
    }
    const std::size_t N = a.size() - 1;
    Real phi = mp::ldexp(a[N] * u, static_cast<int>(N));
    for (std::size_t n = N; n >= 1; --n) phi = (phi + mp::asin(c[n] / a[n] * mp::sin(phi))) / 2;
    return {mp::sin(phi), mp::cos(phi)};
}

RationalFunction zolotarev_sqrt(const Real& kappa, unsigned degree) {
    if (!(kappa > 1)) throw ParameterError("zolotarev_sqrt: kappa must exceed 1");
    if (degree < 1) throw ParameterError("zolotarev_sqrt: degree must be at least 1");
    // Best relative approximation R(y) ~ 1/sqrt(y) on [l^2, 1], l^2 = 1/kappa:
    // R(y) = M prod_j (y + c_{2j}) / (y + c_{2j-1}),
    // c_i = l^2 sn^2(i K'/(2r+1); l') / cn^2(i K'/(2r+1); l').
    const unsigned r = degree;
    const Real l2 = 1 / kappa;
    const Real lp = mp::sqrt(1 - l2);  // modulus l'
    const Real lc = mp::sqrt(l2);      // its complement l
    const Real Kp = ellipk(lp, lc);
    std::vector<Real> c(2 * r + 1);
    for (unsigned i = 1; i <= 2 * r; ++i) {
        auto sc = jacobi_sncn(Real(i) * Kp / (2 * r + 1), lp, lc);
        c[i] = l2 * (sc.sn * sc.sn) / (sc.cn * sc.cn);
    }
    auto g = [&](const Real& y) {
        Real v = mp::sqrt(y);
        for (unsigned j = 1; j <= r; ++j) v *= (y + c[2 * j]) / (y + c[2 * j - 1]);
        return v;
    };
    const Real g0 = g(l2), g1 = g(Real(1));
    const Real gmin = std::min(g0, g1), gmax = std::max(g0, g1);
    const Real M = 2 / (gmin + gmax);
    const Real E = (gmax - gmin) / (gmax + gmin);

    // sqrt(y) ~ (1 - E^2) / R(y); on x = kappa y the constant picks up sqrt(kappa)
    // and the roots/poles scale by kappa.
    const Real C = mp::sqrt(kappa) * (1 - E * E) / M;
    std::vector<Real> numer{C};
    std::vector<Real> poles;
    for (unsigned j = 1; j <= r; ++j) {
        numer = poly_multiply(numer, {kappa * c[2 * j - 1], Real(1)});
        poles.push_back(-kappa * c[2 * j]);
    }
    std::sort(poles.begin(), poles.end());
    return RationalFunction(std::move(numer), std::move(poles));
}

RationalFunction zolotarev_sqrt_interval(const Real& lo, const Real& hi, unsigned degree) {
    if (!(lo > 0) || !(lo < hi)) throw ParameterError("zolotarev_sqrt_interval: need 0 < lo < hi");
    // sqrt(x) = sqrt(lo) sqrt(x/lo), x/lo in [1, hi/lo].
    RationalFunction base = zolotarev_sqrt(hi / lo, degree).scaled_argument(1 / lo);
    std::vector<Real> numer = base.numer().coeffs;
    const Real s = mp::sqrt(lo);
    for (auto& x : numer) x *= s;
    return RationalFunction(std::move(numer), base.poles());
}

Real sup_error(const RealFn& f, const RealFn& g, const Real& lo, const Real& hi, std::size_t grid) {
    Real worst(0);
    for (const auto& x : chebyshev_grid(lo, hi, grid)) worst = std::max(worst, mp::abs(f(x) - g(x)));
    return worst;
}

}  // namespace lanfa

// Acceptance suite: one PASS/FAIL line per headline criterion, at the
// tolerances the criteria state. Exit status is the number of failures.
//
// Writes the sweep artifacts to ./acceptance_sweep (relative to the working
// directory) so the plots can be rendered from them.

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "lanfa/harness.hpp"

using namespace lanfa;
namespace mp = boost::multiprecision;

namespace {

Real tol() { return working_precision().tol; }

std::string sci(const Real& x) { return to_string(x, 3); }

struct Line {
    std::string name;
    bool pass;
    std::string detail;
    double seconds;
};

std::vector<Line> lines;

template <typename F>
void criterion(const std::string& name, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    lines.push_back({name, pass, detail, s});
    std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << " [" << std::fixed << std::setprecision(1)
              << s << " s]" << std::endl;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    double uniform() { return std::ldexp(static_cast<double>(g_() >> 11), -53); }
    std::size_t integer(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(g_() % (hi - lo + 1)); }

    XVector distinct(std::size_t d, bool indefinite) {
        XVector out;
        const double decades = 0.5 + 2.5 * uniform();
        while (out.size() < d) {
            Real x = mp::pow(Real(10), Real(decades * uniform()));
            if (indefinite && uniform() < 0.5) x = -x;
            if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    ProblemInstance instance(std::size_t d, bool indefinite) {
        XVector w(d);
        for (auto& x : w) x = Real(0.05 + uniform()) * (uniform() < 0.5 ? -1 : 1);
        return ProblemInstance(distinct(d, indefinite), w);
    }

private:
    std::mt19937_64 g_;
};

ExperimentConfig without_uniform(ExperimentConfig cfg) {
    for (auto& s : cfg.series) s.uniform = false;
    return cfg;
}

}  // namespace

int main() {
    PrecisionScope scope(resolve_precision(kDefaultPrecisionBits));
    std::cout << "precision " << working_precision().bits << " bits, tol = " << sci(tol()) << "\n";

    criterion("polynomial_exactness", [](std::string& detail) {
        Rng rng(101);
        Real worst(0);
        for (int i = 0; i < 50; ++i) {
            const std::size_t d = rng.integer(2, 50);
            auto inst = rng.instance(d, i % 2 == 1);
            const std::size_t deg = rng.integer(0, std::min<std::size_t>(d - 1, 12));
            std::vector<Real> c(deg + 1);
            for (auto& x : c) x = Real(2 * rng.uniform() - 1);
            c.back() = 1;
            const auto p = ScalarFunction::polynomial(c);
            const std::size_t k = rng.integer(deg + 1, d);
            const XVector exact = exact_apply(inst, p);
            worst = std::max(worst, norm2(subtract(exact, lanczos_fa(inst, p, k))) / norm2(exact));
        }
        detail = "max relative error " + sci(worst) + " over 50 instances (limit tol)";
        return worst <= tol();
    });

    criterion("cg_optimality", [](std::string& detail) {
        Rng rng(202);
        Real worst_a(0), worst_ratio(0);
        const auto inv = ScalarFunction::inv_power(1);
        for (int i = 0; i < 20; ++i) {
            auto inst = rng.instance(rng.integer(5, 40), false);
            const Real sk = mp::sqrt(inst.lambda_max() / inst.lambda_min());
            const XVector t = exact_apply(inst, inv);
            const Real tn = norm2(t);
            auto opt2 = optimal_errors(inst, inv, inst.dim());
            for (std::size_t k = 1; k <= inst.dim(); ++k) {
                const XVector fa = lanczos_fa(inst, inv, k);
                const XVector oa = krylov_optimal(inst, inv, k, weights::PowerOfA{1});
                worst_a = std::max(worst_a, norm2(subtract(fa, oa)) / (10 * tol() * tn));
                const Real err = norm2(subtract(t, fa));
                // Normalised so that <= 1 means the sqrt(kappa) bound holds.
                worst_ratio = std::max(worst_ratio, err / (sk * opt2[k - 1] + 10 * tol() * tn));
            }
        }
        detail = "max |lan - optA| / (10 tol ||A^-1 b||) = " + sci(worst_a) +
                 ", max err / (sqrt(kappa) opt2 + 10 tol ||A^-1 b||) = " + sci(worst_ratio);
        return worst_a <= 1 && worst_ratio <= 1;
    });

    criterion("theorem1_fig2", [](std::string& detail) {
        auto cfg = without_uniform(figure_config(2));
        std::size_t checked = 0, violations = 0, failed = 0;
        Real worst(0);
        for (const auto& s : cfg.series) {
            auto rep = run_series(cfg, s);
            for (const auto& row : rep.rows) {
                if (!row.bound_thm1) continue;
                ++checked;
                if (!row.err_lanczos_fa.is_ok()) {
                    ++failed;
                    continue;
                }
                worst = std::max(worst, row.err_lanczos_fa.value / row.bound_thm1->value);
                if (row.err_lanczos_fa.value > row.bound_thm1->value) ++violations;
            }
        }
        detail = std::to_string(checked) + " (series, k) pairs, " + std::to_string(violations) + " violations, " +
                 std::to_string(failed) + " failed iterates, max err/bound " + sci(worst);
        return checked > 0 && violations == 0 && failed == 0;
    });

    criterion("fig1_factor_4", [](std::string& detail) {
        auto cfg = without_uniform(figure_config(1));
        Real worst(0);
        std::string where;
        for (const auto& s : cfg.series) {
            auto rep = run_series(cfg, s);
            for (const auto& row : rep.rows) {
                if (row.ratio.is_ok() && row.ratio.value > worst) {
                    worst = row.ratio.value;
                    where = s.id + " k=" + std::to_string(row.k);
                }
            }
        }
        detail = "max ratio " + to_string(worst, 4) + " at " + where + " (limit 4(1 + 10 tol))";
        return worst <= 4 * (1 + 10 * tol());
    });

    criterion("proof_identities", [](std::string& detail) {
        bool pass = true;
        for (const auto& c : verify("lemmas")) {
            if (c.name == "rj_near_optimality") continue;
            pass = pass && c.pass;
            detail += (detail.empty() ? "" : "; ") + c.name + " " + c.detail;
        }
        return pass;
    });

    criterion("hard_instance", [](std::string& detail) {
        auto c = verify("hard_instance").at(0);
        detail = c.detail + " (limit 5e-10)";
        return c.pass;
    });

    criterion("inv_minimax_closed_form", [](std::string& detail) {
        Real worst(0);
        for (std::size_t k = 1; k <= 20; ++k) {
            const Real remez = remez_best_poly([](const Real& x) { return 1 / x; }, Real(1), Real(100), k - 1).error;
            worst = std::max(worst, mp::abs(inv_minimax_exact(Real(1), Real(100), k) - remez) / remez);
        }
        detail = "max relative gap to Remez (degree k-1), k = 1..20: " + sci(worst) + " (limit 5e-7)";
        return worst <= Real("5e-7");
    });

    criterion("cg_minres_and_k_star", [](std::string& detail) {
        Rng rng(303);
        Real worst(0);
        for (int i = 0; i < 20; ++i) {
            auto inst = rng.instance(rng.integer(5, 40), false);
            worst = std::max(worst, verify_cg_minres_relation(inst, inst.dim()).max_deviation);
        }
        ProblemInstance ind(spectrum(spectra::IndefiniteSymmetric{100, Real(1), Real(100)}), ones_b(100));
        const std::size_t grade = krylov_grade(ind);
        std::size_t bad = 0;
        bool factor_ok = true;
        for (const auto& rep : indefinite_theorem_scan(ind, grade)) {
            bad += !rep.holds;
            const Real k(rep.k);
            factor_ok = factor_ok && mp::abs(rep.factor - (mp::exp(Real(1)) * mp::sqrt(k) + 1 / mp::sqrt(k))) <= tol();
        }
        detail = "CG/MINRES max relative deviation " + sci(worst) + " (limit 100 tol); k* theorem: " +
                 std::to_string(bad) + " violations for k = 1.." + std::to_string(grade);
        return worst <= 100 * tol() && bad == 0 && factor_ok;
    });

    // The sweep feeds the next two criteria.
    std::vector<SweepCell> cells;
    SweepConfig sweep_cfg;
    sweep_cfg.precision_bits = working_precision().bits;
    criterion("sweep_trend", [&](std::string& detail) {
        cells = sweep(sweep_cfg, "acceptance_sweep");
        bool ge1 = true, le_pref = true;
        std::map<unsigned, Real> log_mean;
        for (const auto& c : cells) {
            if (c.method != Method::LanczosFA) continue;
            ge1 = ge1 && c.worst_ratio >= 1 - tol();
            le_pref = le_pref && c.worst_ratio <= c.prefactor;
            log_mean[c.q] += mp::log(c.worst_ratio) / sweep_cfg.kappas.size();
        }
        bool monotone = true;
        std::ostringstream trend;
        Real prev(-1);
        for (const auto& [q, lm] : log_mean) {
            const Real g = mp::exp(lm);
            monotone = monotone && g >= prev;
            prev = g;
            trend << " q=" << q << ":" << to_string(g, 3);
        }
        detail = std::string("(a) ratio >= 1: ") + (ge1 ? "yes" : "no") + ", (b) <= q kappa^q: " +
                 (le_pref ? "yes" : "no") + ", (c) geometric mean over kappa nondecreasing in q: " +
                 (monotone ? "yes" : "no") + ";" + trend.str();
        return ge1 && le_pref && monotone;
    });

    criterion("lanczos_or_guarantee", [&](std::string& detail) {
        // Sweep cells: the ratio is taken against the reduced-dimension 2-norm
        // optimum, so the guarantee reads ratio <= sqrt(kappa(r(A))) = kappa^(q/2).
        std::size_t over = 0, n = 0;
        std::ostringstream growth;
        for (const auto& c : cells) {
            if (c.method != Method::LanczosOR) continue;
            ++n;
            if (c.worst_ratio > c.or_ceiling * (1 + tol())) ++over;
            if (c.q == 4) growth << " kappa=" << sci(c.kappa) << ":" << to_string(c.worst_ratio, 2);
        }
        // Random real-pole battery, every valid k.
        Rng rng(404);
        Real worst(0);
        std::size_t checks = 0;
        for (int i = 0; i < 15; ++i) {
            auto inst = rng.instance(rng.integer(6, 30), false);
            const std::size_t q = rng.integer(1, 4);
            std::vector<Real> poles;
            for (std::size_t j = 0; j < q; ++j) {
                const Real gap = mp::pow(Real(10), Real(2 * rng.uniform() - 1));
                poles.push_back(rng.uniform() < 0.7 ? inst.lambda_min() * (1 - gap) : inst.lambda_max() * (1 + gap));
            }
            RationalFunction r({Real(1)}, poles);
            const auto f = ScalarFunction::rational(r);
            Real rmax(0), rmin(-1);
            for (const auto& x : inst.lambda) {
                const Real v = mp::abs(r(x));
                rmax = std::max(rmax, v);
                rmin = rmin < 0 ? v : std::min(rmin, v);
            }
            const Real sk = mp::sqrt(rmax / rmin);
            const XVector t = exact_apply(inst, f);
            auto opt2 = optimal_errors(inst, f, inst.dim());
            for (std::size_t k = q / 2 + 1; k <= inst.dim(); ++k) {
                const std::size_t kr = lanczos_or_dimension(r, k);
                const Real err = norm2(subtract(t, lanczos_or(inst, r, k)));
                worst = std::max(worst, err / (sk * opt2[kr - 1] + 10 * tol() * norm2(t)));
                ++checks;
            }
        }
        detail = std::to_string(over) + "/" + std::to_string(n) + " sweep cells above kappa^(q/2); battery " +
                 std::to_string(checks) + " checks, max err / (sqrt(kappa(r(A))) opt + 10 tol) = " + sci(worst) +
                 "; q=4 growth:" + growth.str();
        return n > 0 && over == 0 && worst <= 1;
    });

    criterion("triangle_bound_fig5", [](std::string& detail) {
        auto cfg = figure_config(5);
        auto rep = run_series(cfg, cfg.series.at(0));
        std::size_t finite = 0, violations = 0;
        Real worst(0);
        for (const auto& row : rep.rows) {
            if (!row.bound_triangle) continue;
            ++finite;
            if (!row.err_lanczos_fa.is_ok()) {
                ++violations;
                continue;
            }
            worst = std::max(worst, row.err_lanczos_fa.value / row.bound_triangle->value);
            if (row.err_lanczos_fa.value > row.bound_triangle->value) ++violations;
        }
        detail = std::to_string(finite) + " finite rows, " + std::to_string(violations) + " violations, max err/bound " +
                 sci(worst);
        return finite > 0 && violations == 0;
    });

    int failed = 0;
    for (const auto& l : lines) failed += !l.pass;
    std::cout << (failed == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(failed)) << " (" << lines.size()
              << " criteria)\n";
    return failed;
}

#include "lanfa/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "lanfa/approx.hpp"

#ifndef LANFA_VERSION
#define LANFA_VERSION "0.0.0"
#endif

namespace lanfa {

namespace mp = boost::multiprecision;
namespace fs = std::filesystem;

std::string library_version() { return LANFA_VERSION; }

// ---------------------------------------------------------------- config

namespace {

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }

const Json& field(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(at(where, key) + ": missing field");
    return *it;
}

Real real_field(const Json& v, const std::string& where) {
    if (v.is_number()) return real_from_string(v.dump());
    if (v.is_string()) {
        try {
            return real_from_string(v.get<std::string>());
        } catch (const Error&) {
        }
    }
    throw ConfigError(where + ": expected a number or a numeric string");
}

std::size_t size_field(const Json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::size_t>(v.get<long long>());
    throw ConfigError(where + ": expected a nonnegative integer");
}

Real real_at(const Json& j, const std::string& key, const std::string& where) {
    return real_field(field(j, key, where), at(where, key));
}

std::size_t size_at(const Json& j, const std::string& key, const std::string& where) {
    return size_field(field(j, key, where), at(where, key));
}

std::string string_at(const Json& j, const std::string& key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_string()) throw ConfigError(at(where, key) + ": expected a string");
    return v.get<std::string>();
}

bool bool_or(const Json& j, const std::string& key, bool fallback, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) throw ConfigError(at(where, key) + ": expected true or false");
    return it->get<bool>();
}

Json real_json(const Real& x) { return to_string(x, 25); }

Method parse_method(const std::string& s, const std::string& where) {
    if (s == "lanczos_fa") return Method::LanczosFA;
    if (s == "lanczos_or") return Method::LanczosOR;
    throw ConfigError(where + ": method must be lanczos_fa or lanczos_or");
}

BSpec parse_b(const Json& j, const std::string& where) {
    BSpec b;
    b.kind = string_at(j, "kind", where);
    if (b.kind == "ones") return b;
    if (b.kind == "adversarial") {
        if (j.contains("seed")) b.seed = size_at(j, "seed", where);
        if (j.contains("budget")) b.budget = size_at(j, "budget", where);
        if (j.contains("method")) b.method = parse_method(string_at(j, "method", where), at(where, "method"));
        if (b.budget < 1) throw ConfigError(at(where, "budget") + ": must be at least 1");
        return b;
    }
    if (b.kind == "explicit") {
        const Json& v = field(j, "values", where);
        if (!v.is_array() || v.empty()) throw ConfigError(at(where, "values") + ": expected a nonempty array");
        for (std::size_t i = 0; i < v.size(); ++i) b.values.push_back(real_field(v[i], at(where, "values/" + std::to_string(i))));
        return b;
    }
    throw ConfigError(at(where, "kind") + ": expected ones, adversarial or explicit");
}

Json b_to_json(const BSpec& b) {
    Json j{{"kind", b.kind}};
    if (b.kind == "adversarial") {
        j["seed"] = b.seed;
        j["budget"] = b.budget;
        j["method"] = method_name(b.method);
    } else if (b.kind == "explicit") {
        Json v = Json::array();
        for (const auto& x : b.values) v.push_back(real_json(x));
        j["values"] = v;
    }
    return j;
}

SeriesConfig parse_series(const Json& j, const std::string& where) {
    SeriesConfig s;
    s.id = string_at(j, "id", where);
    if (s.id.empty() || s.id.find_first_of("/\\") != std::string::npos || s.id == "." || s.id == "..") {
        throw ConfigError(at(where, "id") + ": must be a plain directory name");
    }
    s.spectrum = parse_spectrum(field(j, "spectrum", where), at(where, "spectrum"));
    if (j.contains("b")) s.b = parse_b(j["b"], at(where, "b"));
    s.function = string_at(j, "function", where);
    s.thm1 = bool_or(j, "thm1", false, where);
    s.uniform = bool_or(j, "uniform", false, where);
    s.lanczos_or = bool_or(j, "lanczos_or", false, where);
    if (j.contains("triangle_candidates")) {
        const Json& c = j["triangle_candidates"];
        if (!c.is_array()) throw ConfigError(at(where, "triangle_candidates") + ": expected an array of strings");
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c[i].is_string()) throw ConfigError(at(where, "triangle_candidates/" + std::to_string(i)) + ": expected a string");
            s.triangle_candidates.push_back(c[i].get<std::string>());
        }
    }
    if (j.contains("k_max")) {
        s.k_max = size_at(j, "k_max", where);
        if (*s.k_max < 1) throw ConfigError(at(where, "k_max") + ": must be at least 1");
    }
    return s;
}

Json series_to_json(const SeriesConfig& s) {
    Json j{{"id", s.id}, {"spectrum", spectrum_to_json(s.spectrum)}, {"b", b_to_json(s.b)}, {"function", s.function},
           {"thm1", s.thm1}, {"uniform", s.uniform}, {"lanczos_or", s.lanczos_or}};
    if (!s.triangle_candidates.empty()) j["triangle_candidates"] = s.triangle_candidates;
    if (s.k_max) j["k_max"] = *s.k_max;
    return j;
}

}  // namespace

SpectrumSpec parse_spectrum(const Json& j, const std::string& where) {
    const std::string kind = string_at(j, "kind", where);
    if (kind == "uniform") return spectra::Uniform{size_at(j, "d", where), real_at(j, "lo", where), real_at(j, "hi", where)};
    if (kind == "geometric") {
        return spectra::Geometric{size_at(j, "d", where), real_at(j, "lo", where), real_at(j, "hi", where)};
    }
    if (kind == "cluster_outlier") {
        return spectra::ClusterOutlier{size_at(j, "d", where), real_at(j, "outlier", where),
                                       real_at(j, "cluster_lo", where), real_at(j, "cluster_hi", where)};
    }
    if (kind == "indefinite_symmetric") {
        return spectra::IndefiniteSymmetric{size_at(j, "d", where), real_at(j, "inner", where), real_at(j, "outer", where)};
    }
    if (kind == "two_clusters") {
        return spectra::TwoClusters{size_at(j, "d1", where), real_at(j, "c1", where), real_at(j, "h1", where),
                                    size_at(j, "d2", where), real_at(j, "c2", where), real_at(j, "h2", where)};
    }
    if (kind == "sec41") return spectra::Sec41{size_at(j, "d", where), real_at(j, "kappa", where)};
    throw ConfigError(at(where, "kind") + ": unknown spectrum kind '" + kind + "'");
}

Json spectrum_to_json(const SpectrumSpec& s) {
    Json j{{"kind", spectrum_name(s)}};
    if (auto* u = std::get_if<spectra::Uniform>(&s)) {
        j["d"] = u->d, j["lo"] = real_json(u->lo), j["hi"] = real_json(u->hi);
    } else if (auto* g = std::get_if<spectra::Geometric>(&s)) {
        j["d"] = g->d, j["lo"] = real_json(g->lo), j["hi"] = real_json(g->hi);
    } else if (auto* c = std::get_if<spectra::ClusterOutlier>(&s)) {
        j["d"] = c->d, j["outlier"] = real_json(c->outlier);
        j["cluster_lo"] = real_json(c->cluster_lo), j["cluster_hi"] = real_json(c->cluster_hi);
    } else if (auto* i = std::get_if<spectra::IndefiniteSymmetric>(&s)) {
        j["d"] = i->d, j["inner"] = real_json(i->inner), j["outer"] = real_json(i->outer);
    } else if (auto* t = std::get_if<spectra::TwoClusters>(&s)) {
        j["d1"] = t->d1, j["c1"] = real_json(t->c1), j["h1"] = real_json(t->h1);
        j["d2"] = t->d2, j["c2"] = real_json(t->c2), j["h2"] = real_json(t->h2);
    } else {
        const auto& q = std::get<spectra::Sec41>(s);
        j["d"] = q.d, j["kappa"] = real_json(q.kappa);
    }
    return j;
}

ExperimentConfig parse_config(const Json& j) {
    const std::string where = "";
    if (!j.is_object()) throw ConfigError("config: expected a JSON object at the top level");
    ExperimentConfig cfg;
    if (j.contains("experiment")) cfg.experiment = string_at(j, "experiment", where);
    if (j.contains("precision_bits")) {
        cfg.precision_bits = static_cast<unsigned>(size_at(j, "precision_bits", where));
        if (cfg.precision_bits < 64) throw ConfigError("/precision_bits: must be at least 64");
    }
    if (j.contains("k_max") && !j["k_max"].is_null()) {
        if (j["k_max"].is_string() && j["k_max"].get<std::string>() == "auto") {
            cfg.k_max.reset();
        } else {
            cfg.k_max = size_at(j, "k_max", where);
            if (*cfg.k_max < 1) throw ConfigError("/k_max: must be at least 1");
        }
    }
    if (j.contains("grid")) cfg.grid = size_at(j, "grid", where);
    if (j.contains("seed")) cfg.seed = size_at(j, "seed", where);
    if (j.contains("artifact_choices")) cfg.artifact_choices = j["artifact_choices"];
    const Json& series = field(j, "series", where);
    if (!series.is_array() || series.empty()) throw ConfigError("/series: expected a nonempty array");
    for (std::size_t i = 0; i < series.size(); ++i) {
        cfg.series.push_back(parse_series(series[i], "/series/" + std::to_string(i)));
        for (std::size_t p = 0; p + 1 < cfg.series.size(); ++p) {
            if (cfg.series[p].id == cfg.series.back().id) {
                throw ConfigError("/series/" + std::to_string(i) + "/id: duplicate id '" + cfg.series.back().id + "'");
            }
        }
    }
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into a line number.
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) line += text[i] == '\n';
        throw ConfigError("config: JSON syntax error at line " + std::to_string(line) + ": " + e.what());
    }
    return parse_config(j);
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

Json config_to_json(const ExperimentConfig& cfg) {
    Json j{{"experiment", cfg.experiment}, {"precision_bits", cfg.precision_bits}};
    j["k_max"] = cfg.k_max ? Json(*cfg.k_max) : Json("auto");
    j["grid"] = cfg.grid;
    j["seed"] = cfg.seed;
    j["artifact_choices"] = cfg.artifact_choices;
    Json s = Json::array();
    for (const auto& x : cfg.series) s.push_back(series_to_json(x));
    j["series"] = s;
    return j;
}

ScalarFunction resolve_function(const std::string& text, const Real& lo, const Real& hi) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto param = [&](const std::string& key, const std::string& fallback) {
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq != std::string::npos && item.substr(0, eq) == key) return item.substr(eq + 1);
        }
        if (fallback.empty()) throw ConfigError("function '" + text + "': missing " + key + "=");
        return fallback;
    };
    auto positive_int = [&](const std::string& s) {
        Real v = real_from_string(s);
        if (v < 1 || v != mp::round(v)) throw ConfigError("function '" + text + "': expected a positive integer");
        return v.convert_to<unsigned>();
    };
    if (name == "pade_exp") {
        auto r = pade_exp(positive_int(param("m", "")));
        const Real s = real_from_string(param("scale", "1"));
        return ScalarFunction::rational(s == 1 ? r : r.scaled_argument(s));
    }
    if (name == "zolotarev_sqrt") {
        if (!(lo > 0)) throw ConfigError("function '" + text + "': needs a positive spectrum");
        return ScalarFunction::rational(zolotarev_sqrt_interval(lo, hi, positive_int(param("degree", ""))));
    }
    return parse_scalar_function(text);
}

unsigned resolve_precision(unsigned config_bits) {
    const char* env = std::getenv("LANFA_PRECISION_BITS");
    if (!env || !*env) return config_bits;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v < 64 || v > 1u << 20) {
        throw ConfigError(std::string("LANFA_PRECISION_BITS: expected an integer >= 64, got '") + env + "'");
    }
    return static_cast<unsigned>(v);
}

// ---------------------------------------------------------------- run

// Boost counts digits after the point in scientific form.
std::string format_real(const Real& x) { return x.str(24, std::ios_base::scientific); }

namespace {

std::string cell(const SeriesValue& v) {
    switch (v.status) {
    case Status::Failed:
        return "FAILED";
    case Status::Exact:
        return "EXACT";
    default:
        return format_real(v.value);
    }
}

std::string cell(const std::optional<SeriesValue>& v) { return v ? cell(*v) : std::string(); }

const char* status_text(Status s) {
    switch (s) {
    case Status::Failed:
        return "FAILED";
    case Status::Exact:
        return "EXACT";
    default:
        return "OK";
    }
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << text;
    if (!out) throw ConfigError("write failed for " + p.string());
}

Json precision_json() {
    const auto& p = working_precision();
    return Json{{"bits", p.bits}, {"effective_bits", effective_precision_bits()}, {"tol", to_string(p.tol, 17)}};
}

XVector build_b(const BSpec& b, const XVector& lambda, const ScalarFunction& f, std::size_t k_max, Json& meta) {
    const std::size_t d = lambda.size();
    if (b.kind == "explicit") {
        if (b.values.size() != d) throw ConfigError("b: explicit values have length " + std::to_string(b.values.size()) +
                                                    " but the spectrum has " + std::to_string(d));
        return b.values;
    }
    if (b.kind == "adversarial") {
        auto res = adversarial_b(lambda, f, k_max, b.budget, b.seed, b.method);
        meta["adversarial"] = {{"worst_ratio", real_json(res.worst_ratio)},
                               {"worst_k", res.worst_k},
                               {"evaluations", res.evaluations},
                               {"search", "ones baseline, then budget/4 log-uniform starts over 8 decades, then "
                                          "coordinate pattern search in log space"}};
        return res.w;
    }
    return ones_b(d);
}

}  // namespace

ConvergenceReport run_series(const ExperimentConfig& cfg, const SeriesConfig& s) {
    ConvergenceReport rep;
    rep.id = s.id;
    Json meta;
    meta["id"] = s.id;
    meta["experiment"] = cfg.experiment;
    meta["library_version"] = library_version();
    meta["precision"] = precision_json();
    meta["series"] = series_to_json(s);
    meta["artifact_choices"] = cfg.artifact_choices;

    const XVector lambda = spectrum(s.spectrum);
    const Real& lo = lambda.front();
    const Real& hi = lambda.back();
    const ScalarFunction f = resolve_function(s.function, lo, hi);
    meta["function_resolved"] = f.text();
    meta["lambda_min"] = real_json(lo);
    meta["lambda_max"] = real_json(hi);
    meta["d"] = lambda.size();

    const std::size_t k_request = s.k_max ? *s.k_max : cfg.k_max ? *cfg.k_max : 60;
    const std::size_t k_search = std::min(k_request, lambda.size());
    ProblemInstance inst(lambda, build_b(s.b, lambda, f, k_search, meta));
    const std::size_t grade = krylov_grade(inst);
    const std::size_t k_max = std::min(k_request, grade);
    meta["krylov_grade"] = grade;
    meta["k_max"] = k_max;
    meta["k_max_rule"] = s.k_max || cfg.k_max ? "configured, capped at the Krylov grade" : "min(grade, 60)";

    auto kd = lanczos(inst, k_max);
    meta["lanczos_steps"] = kd.size();
    const XVector target = exact_apply(inst, f);
    const Real nb = inst.norm_b();
    const Real floor = working_precision().tol * norm2(target);
    OptimalSeries opt2(kd, target);
    Json skipped = Json::object();

    std::optional<Thm1Evaluator> thm1;
    if (s.thm1) {
        if (auto r = f.as_rational()) {
            try {
                thm1.emplace(inst, *r, kd);
                meta["thm1_prefactor"] = real_json(thm1->prefactor());
            } catch (const DomainError& e) {
                skipped["thm1"] = e.what();
            }
        } else {
            skipped["thm1"] = "needs a rational function";
        }
    }
    bool uniform = s.uniform;
    if (uniform) {
        try {
            require_continuous(f, lo, hi);
        } catch (const DomainError& e) {
            skipped["uniform"] = e.what();
            uniform = false;
        }
    }
    std::optional<TriangleEvaluator> triangle;
    if (!s.triangle_candidates.empty()) {
        std::vector<RationalFunction> cands;
        Json resolved = Json::array();
        for (const auto& c : s.triangle_candidates) {
            auto rf = resolve_function(c, lo, hi).as_rational();
            if (!rf) throw ConfigError("triangle candidate '" + c + "' is not rational");
            resolved.push_back(ScalarFunction::rational(*rf).text());
            cands.push_back(*rf);
        }
        meta["triangle_candidates_resolved"] = resolved;
        try {
            triangle.emplace(inst, f, cands, kd, cfg.grid);
            Json sups = Json::array();
            for (const auto& x : triangle->sup_errors()) sups.push_back(real_json(x));
            meta["triangle_sup_errors"] = sups;
        } catch (const DomainError& e) {
            skipped["triangle"] = e.what();
        }
    }
    std::optional<OptimalSeries> or_series;
    std::optional<RationalFunction> or_r;
    if (s.lanczos_or) {
        if ((or_r = f.as_rational())) {
            try {
                or_series.emplace(kd, target, weight_values(inst, weights::AbsRational{*or_r}));
            } catch (const DomainError& e) {
                skipped["lanczos_or"] = e.what();
            }
        } else {
            skipped["lanczos_or"] = "needs a rational function";
        }
    }
    meta["skipped"] = skipped;

    for (std::size_t k = 1; k <= kd.size(); ++k) {
        ReportRow row;
        row.k = k;
        row.err_opt2 = opt2.error2(k);
        try {
            auto c = fa_coefficients(kd.T.leading(k), nb, f, FaPath::Auto, inst.norm_a());
            row.err_lanczos_fa = SeriesValue::ok(norm2(subtract(target, basis_combination(kd, c))));
        } catch (const SingularShiftError& e) {
            row.err_lanczos_fa = SeriesValue::failed(e.what());
        } catch (const DomainError& e) {
            row.err_lanczos_fa = SeriesValue::failed(e.what());
        }
        if (!row.err_lanczos_fa.is_ok()) {
            row.status = Status::Failed;
            row.ratio = row.err_lanczos_fa;
        } else if (row.err_opt2 <= floor) {
            row.status = Status::Exact;
            row.ratio = SeriesValue::exact();
        } else {
            row.ratio = SeriesValue::ok(row.err_lanczos_fa.value / row.err_opt2);
        }
        if (thm1 && k >= thm1->k_min()) row.bound_thm1 = SeriesValue::ok(thm1->report(k).bound);
        if (uniform) row.bound_uniform = SeriesValue::ok(nb * uniform_bound(inst, f, k, cfg.grid));
        if (triangle) {
            if (auto t = triangle->at(k)) row.bound_triangle = SeriesValue::ok(t->bound);
        }
        if (or_series) {
            const std::size_t half = or_r->denominator_degree() / 2;
            if (k > half && k > or_r->numerator_degree()) row.err_lanczos_or = SeriesValue::ok(or_series->error2(k - half));
        }
        rep.rows.push_back(std::move(row));
    }
    rep.meta = std::move(meta);
    return rep;
}

std::string report_csv(const ConvergenceReport& r) {
    std::string out = std::string(kReportColumns) + "\n";
    for (const auto& row : r.rows) {
        out += std::to_string(row.k) + "," + cell(row.err_lanczos_fa) + "," + format_real(row.err_opt2) + "," +
               cell(row.ratio) + "," + cell(row.bound_thm1) + "," + cell(row.bound_uniform) + "," +
               cell(row.bound_triangle) + "," + cell(row.err_lanczos_or) + "," + status_text(row.status) + "\n";
    }
    return out;
}

std::vector<ConvergenceReport> run(const ExperimentConfig& cfg, const fs::path& out) {
    PrecisionScope scope(resolve_precision(cfg.precision_bits));
    fs::create_directories(out);
    std::vector<ConvergenceReport> reports;
    Json runs = Json::array();
    for (const auto& s : cfg.series) {
        reports.push_back(run_series(cfg, s));
        const auto& rep = reports.back();
        const fs::path dir = out / s.id;
        fs::create_directories(dir);
        write_text(dir / "report.csv", report_csv(rep));
        write_text(dir / "meta.json", rep.meta.dump(2) + "\n");
        write_text(dir / "index.json", Json{{"id", s.id}, {"files", {"report.csv", "meta.json"}}}.dump(2) + "\n");
        runs.push_back({{"id", s.id},
                        {"report", s.id + "/report.csv"},
                        {"meta", s.id + "/meta.json"},
                        {"function", s.function},
                        {"spectrum", spectrum_name(s.spectrum)}});
    }
    Json meta{{"experiment", cfg.experiment},
              {"library_version", library_version()},
              {"precision", precision_json()},
              {"config", config_to_json(cfg)}};
    write_text(out / "meta.json", meta.dump(2) + "\n");
    write_text(out / "index.json", Json{{"experiment", cfg.experiment}, {"runs", runs}}.dump(2) + "\n");
    return reports;
}

// ---------------------------------------------------------------- presets

namespace {

struct NamedSpectrum {
    std::string name;
    SpectrumSpec spec;
};

std::vector<NamedSpectrum> condition_100_spectra() {
    return {{"uniform", spectra::Uniform{100, Real(1), Real(100)}},
            {"geometric", spectra::Geometric{100, Real(1), Real(100)}},
            {"cluster_outlier", spectra::ClusterOutlier{100, Real(1), Real(90), Real(100)}}};
}

SeriesConfig series(std::string id, SpectrumSpec spec, std::string fn) {
    SeriesConfig s;
    s.id = std::move(id);
    s.spectrum = std::move(spec);
    s.function = std::move(fn);
    return s;
}

}  // namespace

ExperimentConfig figure_config(int id) {
    ExperimentConfig cfg;
    cfg.experiment = "fig" + std::to_string(id);
    Json& art = cfg.artifact_choices;
    art["k_max"] = "min(grade, 60) unless stated";
    switch (id) {
    case 1: {
        art["cluster_outlier"] = "outlier 1, 99 points evenly spaced on [90, 100]";
        art["functions"] = "1/x, sqrt(x), exp(-x)";
        for (const auto& sp : condition_100_spectra()) {
            for (auto [label, fn] : {std::pair{"inv", "inv_power:1"}, {"sqrt", "sqrt"}, {"exp", "exp:t=1,sign=-1"}}) {
                auto s = series(sp.name + "_" + label, sp.spec, fn);
                s.uniform = true;
                cfg.series.push_back(s);
            }
        }
        break;
    }
    case 2: {
        art["cluster_outlier"] = "outlier 1, 99 points evenly spaced on [90, 100]";
        art["pade"] = "[5/5] Pade approximant of exp about 0, applied as exp(-x)";
        art["zolotarev"] = "type (13,13) Zolotarev approximant of sqrt on [lambda_min, lambda_max]";
        for (const auto& sp : condition_100_spectra()) {
            for (auto [label, fn] : {std::pair{"pade_exp", "pade_exp:m=5,scale=-1"},
                                     {"zolotarev_sqrt", "zolotarev_sqrt:degree=13"}}) {
                auto s = series(sp.name + "_" + label, sp.spec, fn);
                s.thm1 = true;
                s.uniform = true;
                cfg.series.push_back(s);
            }
        }
        break;
    }
    case 4: {
        art["k_max"] = 100;
        art["rational_one_pole"] = "1/(x - 5.5), pole between eigenvalues";
        art["rational_two_poles"] = "1/((x + 3)(x - 7)), both poles between eigenvalues";
        const SpectrumSpec sp = spectra::IndefiniteSymmetric{100, Real(1), Real(100)};
        cfg.k_max = 100;
        for (auto [label, fn] : {std::pair{"one_pole", "rational:numer=[1];poles=[5.5]"},
                                 {"two_poles", "rational:numer=[1];poles=[-3,7]"},
                                 {"sign", "sign"},
                                 {"inv", "inv_power:1"}}) {
            cfg.series.push_back(series(std::string("indefinite_") + label, sp, fn));
        }
        break;
    }
    case 5: {
        art["two_clusters"] = "10 points on 1 +- 0.005 and 90 points on 100 +- 0.5";
        art["zolotarev"] = "type (d,d) Zolotarev approximants of sqrt on [lambda_min, lambda_max]";
        const SpectrumSpec sp = spectra::TwoClusters{10, Real(1), Real("0.005"), 90, Real(100), Real("0.5")};
        auto s = series("two_clusters_sqrt", sp, "sqrt");
        for (unsigned deg : {3u, 5u, 7u, 9u, 13u}) {
            const std::string z = "zolotarev_sqrt:degree=" + std::to_string(deg);
            s.triangle_candidates.push_back(z);
            cfg.series.push_back(series("two_clusters_zolotarev_" + std::to_string(deg), sp, z));
        }
        cfg.series.insert(cfg.series.begin(), s);
        break;
    }
    default:
        throw ParameterError("figure id must be 1, 2, 4 or 5 (3 is the sweep)");
    }
    return cfg;
}

// ---------------------------------------------------------------- sweep

std::vector<SweepCell> sweep_cells(const SweepConfig& cfg) {
    if (cfg.qs.empty() || cfg.kappas.empty() || cfg.methods.empty()) throw ParameterError("sweep: empty grid");
    std::vector<SweepCell> out;
    std::uint64_t cell_index = 0;
    for (Method m : cfg.methods) {
        for (const auto& kappa : cfg.kappas) {
            const XVector lambda = spectrum(spectra::Sec41{cfg.d, kappa});
            for (unsigned q : cfg.qs) {
                auto res = adversarial_b(lambda, ScalarFunction::inv_power(q), std::min(cfg.k_max, cfg.d), cfg.budget,
                                         cfg.seed + cell_index++, m);
                SweepCell c;
                c.kappa = kappa;
                c.q = q;
                c.method = m;
                c.worst_ratio = res.worst_ratio;
                c.worst_k = res.worst_k;
                c.prefactor = q * mp::pow(kappa, Real(q));
                c.or_ceiling = mp::pow(kappa, Real(q) / 2);
                c.sqrt_qkappa = mp::sqrt(q * kappa);
                c.evaluations = res.evaluations;
                out.push_back(c);
            }
        }
    }
    return out;
}

std::vector<SweepCell> sweep(const SweepConfig& cfg, const fs::path& out) {
    PrecisionScope scope(resolve_precision(cfg.precision_bits));
    auto cells = sweep_cells(cfg);
    fs::create_directories(out);
    std::string csv = "method,kappa,q,worst_ratio,worst_k,prefactor,or_ceiling,sqrt_qkappa,evaluations\n";
    for (const auto& c : cells) {
        csv += method_name(c.method) + "," + format_real(c.kappa) + "," + std::to_string(c.q) + "," +
               format_real(c.worst_ratio) + "," + std::to_string(c.worst_k) + "," + format_real(c.prefactor) + "," +
               format_real(c.or_ceiling) + "," + format_real(c.sqrt_qkappa) + "," + std::to_string(c.evaluations) +
               "\n";
    }
    write_text(out / "sweep.csv", csv);
    Json files = Json::array({"sweep.csv"});
    for (Method m : cfg.methods) {
        std::string mat = "kappa";
        for (unsigned q : cfg.qs) mat += ",q=" + std::to_string(q);
        mat += "\n";
        for (const auto& kappa : cfg.kappas) {
            mat += format_real(kappa);
            for (unsigned q : cfg.qs) {
                for (const auto& c : cells) {
                    if (c.method == m && c.kappa == kappa && c.q == q) mat += "," + format_real(c.worst_ratio);
                }
            }
            mat += "\n";
        }
        const std::string name = "worst_ratio_" + method_name(m) + ".csv";
        write_text(out / name, mat);
        files.push_back(name);
    }
    Json kap = Json::array();
    for (const auto& k : cfg.kappas) kap.push_back(real_json(k));
    Json methods = Json::array();
    for (Method m : cfg.methods) methods.push_back(method_name(m));
    Json meta{{"experiment", "sweep"},
              {"library_version", library_version()},
              {"precision", precision_json()},
              {"function", "inv_power:q"},
              {"spectrum", "sec41: 1 and d-1 points evenly spaced on [0.99995 kappa, kappa]"},
              {"d", cfg.d},
              {"k_max", std::min(cfg.k_max, cfg.d)},
              {"qs", cfg.qs},
              {"kappas", kap},
              {"methods", methods},
              {"adversarial",
               {{"budget", cfg.budget},
                {"seed", cfg.seed},
                {"seed_rule", "seed + cell index, cells ordered by method, kappa, q"},
                {"search", "ones baseline, then budget/4 log-uniform starts over 8 decades, then coordinate "
                           "pattern search in log space"}}},
              {"reference_curves", {{"sqrt_qkappa", "sqrt(q kappa)"}, {"or_ceiling", "kappa^(q/2)"}}}};
    write_text(out / "meta.json", meta.dump(2) + "\n");
    files.push_back("meta.json");
    write_text(out / "index.json", Json{{"experiment", "sweep"}, {"files", files}}.dump(2) + "\n");
    return cells;
}

// ---------------------------------------------------------------- verify

namespace {

class Battery {
public:
    explicit Battery(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return std::ldexp(static_cast<double>(rng_() >> 11), -53); }
    std::size_t integer(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1)); }

    // Positive definite, log-uniform eigenvalues on [1, 10^(1 + 3u)].
    ProblemInstance pd_instance(std::size_t d_max) {
        const std::size_t d = integer(4, d_max);
        const double decades = 1 + 3 * uniform();
        XVector lambda;
        while (lambda.size() < d) {
            Real x = mp::pow(Real(10), Real(decades * uniform()));
            if (std::find(lambda.begin(), lambda.end(), x) == lambda.end()) lambda.push_back(x);
        }
        std::sort(lambda.begin(), lambda.end());
        XVector w(d);
        for (auto& x : w) x = Real(0.1 + uniform()) * (uniform() < 0.5 ? -1 : 1);
        return ProblemInstance(lambda, w);
    }

    // q real poles outside the spectrum, numerator degree <= q.
    RationalFunction rational_outside(const ProblemInstance& inst, std::size_t q) {
        std::vector<Real> poles;
        for (std::size_t j = 0; j < q; ++j) {
            const Real gap = mp::pow(Real(10), Real(2 * uniform() - 1));
            poles.push_back(uniform() < 0.7 ? inst.lambda_min() - gap * inst.lambda_min()
                                            : inst.lambda_max() + gap * inst.lambda_max());
        }
        std::vector<Real> numer(integer(1, q + 1));
        for (auto& c : numer) c = Real(2 * uniform() - 1);
        if (numer.back() == 0) numer.back() = 1;
        return RationalFunction(numer, poles);
    }

private:
    std::mt19937_64 rng_;
};

std::string sci(const Real& x) { return to_string(x, 4); }

CheckResult check(const std::string& suite, const std::string& name, bool pass, const std::string& detail) {
    return {suite, name, pass, detail};
}

std::vector<CheckResult> verify_lemmas() {
    std::vector<CheckResult> out;
    const Real tol = working_precision().tol;
    Battery rng(20240601);
    Real worst_tel(0), worst_lem(0);
    bool rj_ok = true;
    for (int i = 0; i < 20; ++i) {
        auto inst = rng.pd_instance(30);
        const std::size_t q = 1 + i % 4;
        auto r = rng.rational_outside(inst, q);
        const Real fnorm = norm2(exact_apply(inst, ScalarFunction::rational(r)));
        for (std::size_t k : {r.numerator_degree() + 1, (inst.dim() + q) / 2, inst.dim() - 1}) {
            if (k <= r.numerator_degree() || k < 1) continue;
            worst_tel = std::max(worst_tel, verify_telescoping(inst, r, k) / (fnorm * 10 * q * tol));
            for (std::size_t j = 1; j <= q; ++j) {
                const Real rjn = norm2(exact_apply(inst, ScalarFunction::rational(r.leading(j))));
                worst_lem = std::max(worst_lem, verify_lemma_opt_formula(inst, r, j, k) / (rjn * 10 * q * tol));
                if (k > q - j) {
                    auto c = verify_rj_optimality(inst, r, j, k);
                    if (!(c.lhs <= c.rhs * (1 + tol) + tol * rjn)) rj_ok = false;
                }
            }
        }
    }
    out.push_back(check("lemmas", "telescoping", worst_tel <= 1,
                        "max deviation / (10 q tol ||r(A)b||) = " + sci(worst_tel)));
    out.push_back(check("lemmas", "shifted_optimum_closed_form", worst_lem <= 1,
                        "max deviation / (10 q tol ||r_j(A)b||) = " + sci(worst_lem)));
    out.push_back(check("lemmas", "rj_near_optimality", rj_ok, "lhs <= kappa^(1/2) ||m|| opt on every case"));
    return out;
}

std::vector<CheckResult> verify_bounds() {
    std::vector<CheckResult> out;
    const Real tol = working_precision().tol;
    Battery rng(77);
    Real worst(0);
    bool gamma_ok = true, minres_ok = true, singleton_ok = true;
    for (int i = 0; i < 12; ++i) {
        auto inst = rng.pd_instance(30);
        auto r = rng.rational_outside(inst, 1 + i % 3);
        auto f = ScalarFunction::rational(r);
        const Real fnorm = norm2(exact_apply(inst, f));
        Thm1Evaluator ev(inst, r, inst.dim());
        auto errs = lanczos_fa_series(inst, f, inst.dim());
        for (std::size_t k = ev.k_min(); k <= inst.dim(); ++k) {
            auto rep = ev.report(k);
            gamma_ok = gamma_ok && rep.product_within_gamma;
            if (errs[k - 1].is_ok()) worst = std::max(worst, errs[k - 1].value / (rep.bound + tol * fnorm));
        }
        const std::size_t k = std::max(ev.k_min(), inst.dim() / 2);
        auto tri = triangle_bound(inst, f, k, {r}, 1000);
        singleton_ok = singleton_ok && mp::abs(tri.bound - thm1_bound(inst, r, k).bound) <= tol * (1 + tri.bound);
        auto m = minres_residuals(inst, inst.dim());
        for (std::size_t j = 1; j < m.size(); ++j) minres_ok = minres_ok && m[j] <= m[j - 1] * (1 + tol) + tol * m[0];
    }
    out.push_back(check("bounds", "thm1_master", worst <= 1, "max err / (bound + tol ||r(A)b||) = " + sci(worst)));
    out.push_back(check("bounds", "prefactor_within_gamma", gamma_ok, "prod kappa_j <= gamma^q"));
    out.push_back(check("bounds", "triangle_singleton_equals_thm1", singleton_ok, "candidate {r} for f = r"));
    out.push_back(check("bounds", "minres_nonincreasing", minres_ok, "MINRES residuals"));

    Real worst_digits(0);
    for (std::size_t k = 1; k <= 20; ++k) {
        auto best = remez_best_poly([](const Real& x) { return 1 / x; }, Real(1), Real(100), k - 1);
        const Real e = inv_minimax_exact(Real(1), Real(100), k);
        worst_digits = std::max(worst_digits, mp::abs(best.error - e) / e);
    }
    out.push_back(check("bounds", "inv_minimax_closed_form", worst_digits <= Real("5e-7"),
                        "max relative gap to Remez, k = 1..20: " + sci(worst_digits)));

    ProblemInstance uni(spectrum(spectra::Uniform{100, Real(1), Real(100)}), ones_b(100));
    bool unif_ok = true;
    for (std::size_t k = 1; k <= 20; ++k) {
        const Real u = uniform_bound(uni, ScalarFunction::inv_power(1), k);
        const Real e2 = 2 * inv_minimax_exact(Real(1), Real(100), k);
        unif_ok = unif_ok && u >= e2 * (1 - tol) && u <= e2 * 2 * (1 + mp::log(Real(k)));
    }
    out.push_back(check("bounds", "uniform_vs_minimax", unif_ok, "2 E_{k-1} <= uniform <= 2(1 + log k) 2 E_{k-1}"));
    return out;
}

std::vector<CheckResult> verify_indefinite() {
    std::vector<CheckResult> out;
    const Real tol = working_precision().tol;
    ProblemInstance inst(spectrum(spectra::IndefiniteSymmetric{100, Real(1), Real(100)}), ones_b(100));
    const std::size_t grade = krylov_grade(inst);
    std::size_t bad = 0;
    for (const auto& rep : indefinite_theorem_scan(inst, grade)) bad += !rep.holds;
    out.push_back(check("indefinite", "k_star_theorem", bad == 0,
                        std::to_string(bad) + " violations for k = 1.." + std::to_string(grade)));
    auto rel = verify_cg_minres_relation(inst, grade);
    out.push_back(check("indefinite", "cg_failures_on_stagnation", rel.sentinels_consistent,
                        std::to_string(rel.sentinels) + " CG failures, all at MINRES stagnation"));
    Battery rng(5);
    Real worst(0);
    for (int i = 0; i < 10; ++i) {
        auto pd = rng.pd_instance(30);
        auto c = verify_cg_minres_relation(pd, pd.dim());
        worst = std::max(worst, c.max_deviation);
    }
    out.push_back(check("indefinite", "cg_minres_relation_pd", worst <= 100 * tol,
                        "max relative deviation " + sci(worst) + " (limit 100 tol)"));
    return out;
}

std::vector<CheckResult> verify_hard_instance() {
    std::vector<CheckResult> out;
    const auto inv = ScalarFunction::inv_power(1);
    Real worst(0);
    for (std::size_t k = 1; k <= 8; ++k) {
        auto h = hard_instance(inv, Real(1), Real(100), k);
        auto errs = optimal_errors(h.instance, inv, k);
        worst = std::max(worst, mp::abs(errs.back() / h.instance.norm_b() - h.epsilon) / h.epsilon);
    }
    out.push_back(check("hard_instance", "optimum_equals_minimax", worst <= Real("5e-10"),
                        "max relative gap, k = 1..8: " + sci(worst)));
    return out;
}

}  // namespace

std::vector<CheckResult> verify(const std::string& suite) {
    if (suite == "lemmas") return verify_lemmas();
    if (suite == "bounds") return verify_bounds();
    if (suite == "indefinite") return verify_indefinite();
    if (suite == "hard_instance") return verify_hard_instance();
    throw ParameterError("unknown suite '" + suite + "' (lemmas, bounds, indefinite, hard_instance)");
}

}  // namespace lanfa

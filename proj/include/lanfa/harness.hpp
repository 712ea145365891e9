#pragma once

// Experiment runner behind the lanfa CLI: JSON configs, the five figure
// presets, the (kappa, q) adversarial sweep and the verification suites.
// Every run directory gets report.csv, meta.json and index.json.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lanfa/bounds.hpp"
#include "lanfa/function.hpp"
#include "lanfa/instances.hpp"

namespace lanfa {

using Json = nlohmann::ordered_json;

std::string library_version();

struct BSpec {
    std::string kind = "ones";  // ones | adversarial | explicit
    std::uint64_t seed = 0;
    std::size_t budget = 40;
    Method method = Method::LanczosFA;
    XVector values;  // explicit only
};

struct SeriesConfig {
    std::string id;
    SpectrumSpec spectrum;
    BSpec b;
    // parse_scalar_function text, or pade_exp:m=..,scale=.. /
    // zolotarev_sqrt:degree=.. resolved on the instance's interval.
    std::string function;
    bool thm1 = false;
    bool uniform = false;
    bool lanczos_or = false;
    std::vector<std::string> triangle_candidates;
    std::optional<std::size_t> k_max;  // overrides the experiment default
};

struct ExperimentConfig {
    std::string experiment = "custom";
    unsigned precision_bits = 256;
    std::optional<std::size_t> k_max;  // default min(grade, 60)
    std::size_t grid = 10000;
    std::uint64_t seed = 0;
    std::vector<SeriesConfig> series;
    Json artifact_choices = Json::object();
};

// ConfigError names the JSON field (or line, for syntax errors).
ExperimentConfig parse_config(const Json& j);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
Json config_to_json(const ExperimentConfig& cfg);

SpectrumSpec parse_spectrum(const Json& j, const std::string& where = "spectrum");
Json spectrum_to_json(const SpectrumSpec& s);

// Function text as accepted by SeriesConfig::function, resolved against an
// instance interval.
ScalarFunction resolve_function(const std::string& text, const Real& lo, const Real& hi);

// Precision to use: LANFA_PRECISION_BITS when set, else the given bits.
unsigned resolve_precision(unsigned config_bits);

struct ReportRow {
    std::size_t k = 0;
    SeriesValue err_lanczos_fa;
    Real err_opt2;
    SeriesValue ratio;
    std::optional<SeriesValue> bound_thm1;
    std::optional<SeriesValue> bound_uniform;
    std::optional<SeriesValue> bound_triangle;
    std::optional<SeriesValue> err_lanczos_or;
    Status status = Status::Ok;
};

struct ConvergenceReport {
    std::string id;
    std::vector<ReportRow> rows;
    Json meta;
};

inline const char* const kReportColumns =
    "k,err_lanczos_fa,err_opt2,ratio,bound_thm1,bound_uniform,bound_triangle,err_lanczos_or,status";

// Runs one series at the current working precision.
ConvergenceReport run_series(const ExperimentConfig& cfg, const SeriesConfig& s);
std::string report_csv(const ConvergenceReport& r);
// 25 significant digits.
std::string format_real(const Real& x);

// Sets the precision, runs every series and writes out/<id>/{report.csv,
// meta.json, index.json} plus out/{meta.json, index.json}.
std::vector<ConvergenceReport> run(const ExperimentConfig& cfg, const std::filesystem::path& out);

// Presets 1, 2, 4 and 5 (3 is the sweep).
ExperimentConfig figure_config(int id);

struct SweepConfig {
    std::vector<unsigned> qs{1, 2, 4, 8, 16, 32, 64};
    std::vector<Real> kappas{Real(100), Real(1000), Real(10000), Real(100000), Real(1000000)};
    std::size_t d = 100;
    std::size_t k_max = 100;
    std::size_t budget = 40;
    std::uint64_t seed = 0;
    std::vector<Method> methods{Method::LanczosFA, Method::LanczosOR};
    unsigned precision_bits = 256;
};

struct SweepCell {
    Real kappa;
    unsigned q = 0;
    Method method = Method::LanczosFA;
    Real worst_ratio;
    std::size_t worst_k = 0;
    Real prefactor;     // q kappa^q
    Real or_ceiling;    // kappa^{q/2}, the Lanczos-OR guarantee
    Real sqrt_qkappa;
    std::size_t evaluations = 0;
};

// Cells at the current working precision, ordered by method, kappa, q.
std::vector<SweepCell> sweep_cells(const SweepConfig& cfg);
// Sets the precision, runs the sweep and writes sweep.csv, one worst-ratio
// matrix per method, meta.json and index.json.
std::vector<SweepCell> sweep(const SweepConfig& cfg, const std::filesystem::path& out);

struct CheckResult {
    std::string suite;
    std::string name;
    bool pass = false;
    std::string detail;
};

inline const char* const kSuites[] = {"lemmas", "bounds", "indefinite", "hard_instance"};

// Runs a named invariant suite at the current precision. ParameterError for
// an unknown name.
std::vector<CheckResult> verify(const std::string& suite);

}  // namespace lanfa

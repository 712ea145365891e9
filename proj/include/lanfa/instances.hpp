#pragma once

// Problem instances (A, b) stored in A's eigenbasis: A = diag(lambda) and
// b has coefficients w. Every quantity studied here is invariant under
// orthogonal change of basis, so nothing is lost.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lanfa/approx.hpp"
#include "lanfa/function.hpp"
#include "lanfa/xlinalg.hpp"

namespace lanfa {

struct ProblemInstance {
    XVector lambda;  // strictly ascending
    XVector w;       // coefficients of b
    Precision precision;

    ProblemInstance() = default;
    // Validates: d >= 1, matching lengths, strictly ascending lambda, w != 0.
    ProblemInstance(XVector lambda, XVector w);

    std::size_t dim() const noexcept { return lambda.size(); }
    const Real& lambda_min() const { return lambda.front(); }
    const Real& lambda_max() const { return lambda.back(); }
    // max |lambda_i|
    Real norm_a() const;
    Real norm_b() const { return norm2(w); }
};

namespace spectra {
struct Uniform {
    std::size_t d;
    Real lo, hi;
};
struct Geometric {
    std::size_t d;
    Real lo, hi;
};
// One small outlier plus d-1 points evenly spaced on [cluster_lo, cluster_hi].
struct ClusterOutlier {
    std::size_t d;
    Real outlier, cluster_lo, cluster_hi;
};
// Geometric on [inner, outer] mirrored about 0; d even.
struct IndefiniteSymmetric {
    std::size_t d;
    Real inner, outer;
};
// d1 points evenly spaced on [c1 - h1, c1 + h1] and d2 on [c2 - h2, c2 + h2].
struct TwoClusters {
    std::size_t d1;
    Real c1, h1;
    std::size_t d2;
    Real c2, h2;
};
// lambda_1 = 1, the rest evenly spaced on [0.99995 kappa, kappa].
struct Sec41 {
    std::size_t d;
    Real kappa;
};
}  // namespace spectra

using SpectrumSpec = std::variant<spectra::Uniform, spectra::Geometric, spectra::ClusterOutlier,
                                  spectra::IndefiniteSymmetric, spectra::TwoClusters, spectra::Sec41>;

XVector spectrum(const SpectrumSpec& spec);
std::string spectrum_name(const SpectrumSpec& spec);

XVector ones_b(std::size_t d);

struct HardInstance {
    ProblemInstance instance;
    Real epsilon;
    XVector equioscillation_points;
    ChebPoly best_poly;
    // f is (numerically) a polynomial of degree < k: epsilon ~ 0 and the
    // weights carry no information.
    bool degenerate = false;
};

HardInstance hard_instance(const ScalarFunction& f, const Real& lo, const Real& hi, std::size_t k);
HardInstance discrete_hard_instance(const ScalarFunction& f, const XVector& points, std::size_t k);

// b_l^2 for equioscillation points x (ascending), normalised to sum 1.
XVector cramer_weights_squared(const XVector& x);

enum class Method { LanczosFA, LanczosOR };
std::string method_name(Method m);

struct AdversarialResult {
    XVector w;  // unit 2-norm
    Real worst_ratio;
    std::size_t worst_k = 0;
    std::size_t evaluations = 0;
};

// Searches for b maximising max_{k <= k_max} optimality ratio. The ones_b
// baseline is always evaluated (outside the budget). Deterministic for a
// fixed seed.
AdversarialResult adversarial_b(const XVector& lambda, const ScalarFunction& f, std::size_t k_max, std::size_t budget,
                                std::uint64_t seed, Method method = Method::LanczosFA);

}  // namespace lanfa

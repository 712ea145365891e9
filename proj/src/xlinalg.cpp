#include "lanfa/xlinalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace lanfa {

namespace {

Precision g_precision = [] {
    Real::default_precision(boost::multiprecision::detail::digits2_2_10(kDefaultPrecisionBits) + 1);
    return Precision::with_bits(kDefaultPrecisionBits);
}();

unsigned digits10_for_bits(unsigned bits) {
    unsigned d10 = static_cast<unsigned>(boost::multiprecision::detail::digits2_2_10(bits));
    while (boost::multiprecision::detail::digits10_2_2(d10) < bits) ++d10;
    return d10;
}

void check_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

}  // namespace

Precision Precision::with_bits(unsigned bits) {
    if (bits < 64) throw ParameterError("precision must be at least 64 bits, got " + std::to_string(bits));
    Precision p;
    p.bits = bits;
    p.tol = boost::multiprecision::ldexp(Real(1), -static_cast<int>(bits / 2));
    return p;
}

const Precision& set_working_precision(unsigned bits) {
    if (bits < 64) throw ParameterError("precision must be at least 64 bits, got " + std::to_string(bits));
    Real::default_precision(digits10_for_bits(bits));
    g_precision = Precision::with_bits(bits);
    return g_precision;
}

const Precision& working_precision() { return g_precision; }

unsigned effective_precision_bits() {
    Real probe(1);
    return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

PrecisionScope::PrecisionScope(unsigned bits) : previous_bits_(g_precision.bits) { set_working_precision(bits); }

PrecisionScope::~PrecisionScope() { set_working_precision(previous_bits_); }

Real pi() { return boost::multiprecision::acos(Real(-1)); }

Real real_from_string(const std::string& s) {
    try {
        return Real(s);
    } catch (const std::exception&) {
        throw ParameterError("not a real number: '" + s + "'");
    }
}

std::string to_string(const Real& x, int digits) { return x.str(digits, std::ios_base::scientific); }

Complex operator/(const Complex& a, const Complex& b) {
    // Smith's algorithm keeps intermediate magnitudes in range.
    using boost::multiprecision::abs;
    if (abs(b.re) >= abs(b.im)) {
        Real r = b.im / b.re;
        Real den = b.re + b.im * r;
        return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
    }
    Real r = b.re / b.im;
    Real den = b.re * r + b.im;
    return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
}

Real abs(const Complex& z) { return boost::multiprecision::hypot(z.re, z.im); }

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Real(0)) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Tridiagonal::Tridiagonal(std::vector<Real> a, std::vector<Real> b) : alpha(std::move(a)), beta(std::move(b)) {
    if (alpha.empty()) throw DimensionError("tridiagonal matrix must have at least one row");
    if (beta.size() + 1 != alpha.size()) {
        throw DimensionError("tridiagonal: expected " + std::to_string(alpha.size() - 1) + " off-diagonal entries, got " +
                             std::to_string(beta.size()));
    }
    for (const auto& b : beta) {
        if (!(b > 0)) throw DomainError("tridiagonal off-diagonal entries must be positive");
    }
}

Real Tridiagonal::norm() const {
    using boost::multiprecision::abs;
    Real best(0);
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        Real row = abs(alpha[i]);
        if (i > 0) row += beta[i - 1];
        if (i + 1 < n) row += beta[i];
        if (row > best) best = row;
    }
    return best;
}

Tridiagonal Tridiagonal::leading(std::size_t j) const {
    if (j == 0 || j > size()) throw DimensionError("leading block size out of range");
    Tridiagonal t;
    t.alpha.assign(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(j));
    t.beta.assign(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(j - 1));
    return t;
}

XVector Tridiagonal::multiply(std::span<const Real> x) const {
    check_same_length(x.size(), size(), "tridiagonal multiply");
    const std::size_t n = size();
    XVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Real s = alpha[i] * x[i];
        if (i > 0) s += beta[i - 1] * x[i - 1];
        if (i + 1 < n) s += beta[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

Real dot(std::span<const Real> u, std::span<const Real> v) {
    check_same_length(u.size(), v.size(), "dot");
    Real s(0);
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

Real norm2(std::span<const Real> u) { return boost::multiprecision::sqrt(dot(u, u)); }

Real weighted_dot(std::span<const Real> u, std::span<const Real> v, std::span<const Real> w) {
    check_same_length(u.size(), v.size(), "weighted_dot");
    check_same_length(u.size(), w.size(), "weighted_dot weights");
    Real s(0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(w[i] > 0)) throw DomainError("weighted_dot: weight " + std::to_string(i) + " is not positive");
        s += w[i] * u[i] * v[i];
    }
    return s;
}

XVector axpy(const Real& a, std::span<const Real> x, std::span<const Real> y) {
    check_same_length(x.size(), y.size(), "axpy");
    XVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + y[i];
    return out;
}

XVector subtract(std::span<const Real> x, std::span<const Real> y) {
    check_same_length(x.size(), y.size(), "subtract");
    XVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

XVector scale(const Real& a, std::span<const Real> x) {
    XVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i];
    return out;
}

XVector solve_dense(Matrix a, XVector b) {
    using boost::multiprecision::abs;
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionError("solve_dense: matrix is not square");
    check_same_length(b.size(), n, "solve_dense");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i) {
            if (abs(a(i, col)) > abs(a(piv, col))) piv = i;
        }
        if (a(piv, col) == 0) throw SolverError("solve_dense: singular matrix");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            std::swap(b[col], b[piv]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            Real f = a(i, col) / a(col, col);
            if (f == 0) continue;
            for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
            b[i] -= f * b[col];
        }
    }
    XVector x(n);
    for (std::size_t i = n; i-- > 0;) {
        Real s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

namespace {

// QL with implicit Wilkinson-type shifts (tqli). d/e are overwritten; when
// z is non-null the rotations are accumulated into it.
void ql_implicit(std::vector<Real>& d, std::vector<Real>& e, Matrix* z) {
    using boost::multiprecision::abs;
    using boost::multiprecision::hypot;
    const std::size_t n = d.size();
    if (n == 1) return;
    e.push_back(Real(0));
    const std::size_t cap = 50 * n;
    std::size_t sweeps = 0;

    for (std::size_t l = 0; l < n; ++l) {
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                Real dd = abs(d[m]) + abs(d[m + 1]);
                if (abs(e[m]) + dd == dd) break;
            }
            if (m != l) {
                if (++sweeps > cap) {
                    Real worst(0);
                    for (std::size_t i = 0; i + 1 < n; ++i) worst = std::max(worst, Real(abs(e[i])));
                    throw SolverError("tridiagonal QL did not converge in " + std::to_string(cap) +
                                      " sweeps; worst off-diagonal " + to_string(worst, 6));
                }
                Real g = (d[l + 1] - d[l]) / (2 * e[l]);
                Real r = hypot(g, Real(1));
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? abs(r) : -abs(r)));
                Real s(1), c(1), p(0);
                bool underflow = false;
                std::size_t i = m;
                while (i-- > l) {
                    Real f = s * e[i];
                    Real b = c * e[i];
                    r = hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0) {
                        d[i + 1] -= p;
                        e[m] = 0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z != nullptr) {
                        for (std::size_t k = 0; k < n; ++k) {
                            Real zf = (*z)(k, i + 1);
                            (*z)(k, i + 1) = s * (*z)(k, i) + c * zf;
                            (*z)(k, i) = c * (*z)(k, i) - s * zf;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0;
            }
        } while (m != l);
    }
}

}  // namespace

TridiagEig tridiag_eig(const Tridiagonal& t) {
    const std::size_t n = t.size();
    if (n == 0) throw DimensionError("tridiag_eig: empty matrix");
    std::vector<Real> d = t.alpha;
    std::vector<Real> e = t.beta;
    Matrix z = Matrix::identity(n);
    ql_implicit(d, e, &z);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    TridiagEig out;
    out.theta.reserve(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.theta.push_back(d[order[j]]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = z(i, order[j]);
    }
    return out;
}

std::vector<Real> tridiag_eigenvalues(const Tridiagonal& t) {
    if (t.size() == 0) throw DimensionError("tridiag_eigenvalues: empty matrix");
    std::vector<Real> d = t.alpha;
    std::vector<Real> e = t.beta;
    ql_implicit(d, e, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

std::size_t sturm_count(const Tridiagonal& t, const Real& x) {
    using boost::multiprecision::abs;
    const std::size_t n = t.size();
    const Real tiny = working_precision().tol * working_precision().tol * (t.norm() + 1);
    std::size_t count = 0;
    Real pivot = t.alpha[0] - x;
    for (std::size_t i = 0;; ++i) {
        if (pivot == 0) pivot = -tiny;
        if (pivot < 0) ++count;
        if (i + 1 == n) break;
        pivot = t.alpha[i + 1] - x - t.beta[i] * t.beta[i] / pivot;
    }
    return count;
}

namespace {

[[noreturn]] void throw_singular(const Tridiagonal& t, const Real& z_re, const Real& z_im) {
    using boost::multiprecision::abs;
    const auto theta = tridiag_eigenvalues(t);
    Real best_dist(-1);
    Real nearest(0);
    for (const auto& th : theta) {
        Real dist = boost::multiprecision::hypot(th - z_re, z_im);
        if (best_dist < 0 || dist < best_dist) {
            best_dist = dist;
            nearest = th;
        }
    }
    throw SingularShiftError("singular shift: z = " + to_string(z_re, 17) + " is within " +
                                 to_string(best_dist, 6) + " of Ritz value " + to_string(nearest, 17),
                             best_dist.convert_to<double>(), nearest.convert_to<double>(), z_re.convert_to<double>());
}

void check_shift(const Tridiagonal& t, const Real& z_re, const Real& z_im, const Real& scale) {
    using boost::multiprecision::abs;
    const Real radius = working_precision().tol * std::max(scale, t.norm());
    if (radius == 0) {
        // T is the zero matrix.
        if (z_re == 0 && z_im == 0) throw_singular(t, z_re, z_im);
        return;
    }
    if (abs(z_im) > radius) return;
    if (sturm_count(t, z_re + radius) != sturm_count(t, z_re - radius)) throw_singular(t, z_re, z_im);
}

// Gaussian elimination with partial pivoting on a tridiagonal system
// (LAPACK gtsv scheme). T is any field type with +,-,*,/ and an abs-like
// magnitude function.
template <typename Scalar, typename Mag>
std::vector<Scalar> gtsv(std::vector<Scalar> dl, std::vector<Scalar> d, std::vector<Scalar> du,
                         std::vector<Scalar> b, Mag mag) {
    const std::size_t n = d.size();
    std::vector<Scalar> du2(n > 2 ? n - 2 : 0, Scalar(Real(0)));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (mag(d[i]) >= mag(dl[i])) {
            Scalar fact = dl[i] / d[i];
            d[i + 1] = d[i + 1] - fact * du[i];
            b[i + 1] = b[i + 1] - fact * b[i];
            dl[i] = Scalar(Real(0));
        } else {
            Scalar fact = d[i] / dl[i];
            std::swap(d[i], dl[i]);
            Scalar temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = Scalar(Real(0)) - fact * du2[i];
            }
            du[i] = temp;
            std::swap(b[i], b[i + 1]);
            b[i + 1] = b[i + 1] - fact * b[i];
        }
    }
    std::vector<Scalar> x(n, Scalar(Real(0)));
    for (std::size_t ii = n; ii-- > 0;) {
        Scalar s = b[ii];
        if (ii + 1 < n) s = s - du[ii] * x[ii + 1];
        if (ii + 2 < n) s = s - du2[ii] * x[ii + 2];
        x[ii] = s / d[ii];
    }
    return x;
}

}  // namespace

XVector solve_shifted_tridiag(const Tridiagonal& t, const Real& z, std::span<const Real> rhs, const Real& scale) {
    check_same_length(rhs.size(), t.size(), "solve_shifted_tridiag");
    check_shift(t, z, Real(0), scale);
    const std::size_t n = t.size();
    std::vector<Real> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = t.alpha[i] - z;
    std::vector<Real> off = t.beta;
    return gtsv(off, std::move(d), off, std::vector<Real>(rhs.begin(), rhs.end()),
                [](const Real& x) { return Real(boost::multiprecision::abs(x)); });
}

ComplexVector solve_shifted_tridiag(const Tridiagonal& t, const Complex& z, std::span<const Real> rhs,
                                    const Real& scale) {
    check_same_length(rhs.size(), t.size(), "solve_shifted_tridiag");
    check_shift(t, z.re, z.im, scale);
    const std::size_t n = t.size();
    std::vector<Complex> d(n), off(n > 0 ? n - 1 : 0), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = Complex(t.alpha[i] - z.re, -z.im);
        b[i] = Complex(rhs[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) off[i] = Complex(t.beta[i]);
    auto x = gtsv(off, std::move(d), off, std::move(b), [](const Complex& c) { return abs(c); });
    ComplexVector out;
    out.re.reserve(n);
    out.im.reserve(n);
    for (auto& c : x) {
        out.re.push_back(std::move(c.re));
        out.im.push_back(std::move(c.im));
    }
    return out;
}

}  // namespace lanfa

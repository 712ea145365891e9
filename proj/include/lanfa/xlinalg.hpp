#pragma once

// Extended-precision scalar/vector arithmetic and the symmetric tridiagonal
// kernels (eigensolver, shifted solves) everything else is built on.
//
// Working precision is process-wide: set it once with set_working_precision()
// (or a PrecisionScope) before constructing any Real. Values keep the
// precision they were created with.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "lanfa/errors.hpp"

namespace lanfa {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using XVector = std::vector<Real>;

struct Precision {
    unsigned bits = 256;  // significand bits of working arithmetic
    Real tol;             // acceptance tolerance for identity checks

    // tol defaults to 2^(-bits/2).
    static Precision with_bits(unsigned bits);
};

inline constexpr unsigned kDefaultPrecisionBits = 256;

// Sets the global default precision and returns the resulting Precision.
// bits < 64 is rejected.
const Precision& set_working_precision(unsigned bits);
const Precision& working_precision();
// Bits actually carried by a freshly constructed Real (>= requested bits).
unsigned effective_precision_bits();

// Restores the previous working precision on scope exit.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned previous_bits_;
};

Real pi();
Real real_from_string(const std::string& s);
std::string to_string(const Real& x, int digits = 25);

// Minimal complex number over Real; only what shifted solves and pole
// bookkeeping need.
struct Complex {
    Real re;
    Real im;

    Complex() : re(0), im(0) {}
    Complex(Real r, Real i = Real(0)) : re(std::move(r)), im(std::move(i)) {}

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator/(const Complex& a, const Complex& b);
    Complex conj() const { return {re, -im}; }
};

Real abs(const Complex& z);

// Dense column-major matrix; small (k x k or d x k) objects only.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Real& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    const Real& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    std::span<Real> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const Real> column(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    static Matrix identity(std::size_t n);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Real> data_;
};

// Symmetric tridiagonal matrix: diagonal alpha (k), off-diagonal beta (k-1),
// every beta strictly positive.
struct Tridiagonal {
    std::vector<Real> alpha;
    std::vector<Real> beta;

    Tridiagonal() = default;
    Tridiagonal(std::vector<Real> a, std::vector<Real> b);

    std::size_t size() const noexcept { return alpha.size(); }
    // Infinity norm, an upper bound on the 2-norm.
    Real norm() const;
    // Leading j x j block.
    Tridiagonal leading(std::size_t j) const;
    XVector multiply(std::span<const Real> x) const;
};

struct TridiagEig {
    std::vector<Real> theta;  // ascending
    Matrix vectors;           // column i pairs with theta[i]
};

Real dot(std::span<const Real> u, std::span<const Real> v);
Real norm2(std::span<const Real> u);
// Sum_i w_i u_i v_i in left-to-right order; w must be strictly positive.
Real weighted_dot(std::span<const Real> u, std::span<const Real> v, std::span<const Real> w);

XVector axpy(const Real& a, std::span<const Real> x, std::span<const Real> y);  // a x + y
XVector subtract(std::span<const Real> x, std::span<const Real> y);
XVector scale(const Real& a, std::span<const Real> x);

// Gaussian elimination with partial pivoting; throws SolverError on an
// exactly singular pivot.
XVector solve_dense(Matrix a, XVector b);

// Implicit-shift QL on a symmetric tridiagonal with eigenvectors.
// Throws SolverError if the 50*k sweep cap is exhausted.
TridiagEig tridiag_eig(const Tridiagonal& t);
// Eigenvalues only (ascending); same iteration as tridiag_eig.
std::vector<Real> tridiag_eigenvalues(const Tridiagonal& t);

// Number of eigenvalues of t strictly less than x (Sturm count).
std::size_t sturm_count(const Tridiagonal& t, const Real& x);

// Solves (T - zI) y = rhs. Throws SingularShiftError when an eigenvalue of T
// lies within tol * max(scale, ||T||) of z. Pass ||A|| as scale when T is a
// small leading block whose own norm says little about the problem.
XVector solve_shifted_tridiag(const Tridiagonal& t, const Real& z, std::span<const Real> rhs,
                              const Real& scale = Real(0));

// Complex shift variant: returns y with (T - zI) y = rhs, as (real, imag).
struct ComplexVector {
    XVector re;
    XVector im;
};
ComplexVector solve_shifted_tridiag(const Tridiagonal& t, const Complex& z, std::span<const Real> rhs,
                                    const Real& scale = Real(0));

}  // namespace lanfa

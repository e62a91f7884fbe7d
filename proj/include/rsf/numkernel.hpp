// numkernel.hpp: dense complex linear algebra for small Hermitian matrices.
//
// Everything here is sized for mode counts up to a few dozen (and Fock spaces
// of a few hundred states in the oracle).  Storage is dense, row-major, full.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace rsf {

using Complex = std::complex<double>;
inline constexpr Complex I{0.0, 1.0};

// Tolerances shared by the whole library.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-10;

class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t n) : data_(n, Complex{}) {}
    ComplexVector(std::initializer_list<Complex> values) : data_(values) {}
    explicit ComplexVector(std::vector<Complex> values) : data_(std::move(values)) {}

    std::size_t size() const noexcept { return data_.size(); }
    Complex& operator[](std::size_t k) { return data_[k]; }
    const Complex& operator[](std::size_t k) const { return data_[k]; }
    std::span<const Complex> entries() const noexcept { return data_; }
    std::span<Complex> entries() noexcept { return data_; }

    // <v|v>
    double norm2() const noexcept;

    ComplexVector& operator+=(const ComplexVector& other);
    ComplexVector& operator-=(const ComplexVector& other);
    ComplexVector& operator*=(Complex s) noexcept;

    friend ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
    friend ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
    friend ComplexVector operator*(Complex s, ComplexVector a) { return a *= s; }

private:
    std::vector<Complex> data_;
};

// <a|b>, antilinear in the first argument.
Complex inner(const ComplexVector& a, const ComplexVector& b);
double norm(const ComplexVector& v);

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    // Row-major nested initializer, e.g. Matrix{{1, I}, {-I, 1}}.
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix zeros(std::size_t n) { return Matrix(n, n); }
    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);
    static Matrix diagonal(std::span<const Complex> d);
    // |a><b|
    static Matrix outer(const ComplexVector& a, const ComplexVector& b);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const Complex> entries() const noexcept { return data_; }
    std::span<Complex> entries() noexcept { return data_; }

    Matrix adjoint() const;
    Complex trace() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(Complex s) noexcept;

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend ComplexVector operator*(const Matrix& a, const ComplexVector& v);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

double frobenius_norm(const Matrix& m);
// max_{ij} |m_ij - conj(m_ji)|
double hermiticity_defect(const Matrix& m);
// ||u^dagger u - I||_F
double unitarity_defect(const Matrix& u);

// A matrix that is Hermitian by construction.  Build it through hermitize() or
// checked(); arithmetic happens on the underlying Matrix.
class HermitianMatrix {
public:
    HermitianMatrix() = default;

    // Throws DimensionError for non-square input, DomainError if the
    // Hermiticity defect exceeds tol.  Symmetrizes the residual.
    static HermitianMatrix checked(const Matrix& m, double tol = kHermitianTol);
    static HermitianMatrix zeros(std::size_t n);
    static HermitianMatrix identity(std::size_t n);
    static HermitianMatrix diagonal(std::span<const double> d);

    std::size_t dim() const noexcept { return m_.rows(); }
    const Matrix& matrix() const noexcept { return m_; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    double trace() const { return m_.trace().real(); }

    friend HermitianMatrix hermitize(const Matrix& m);

private:
    explicit HermitianMatrix(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// (M + M^dagger) / 2.  Throws DimensionError for non-square M.
HermitianMatrix hermitize(const Matrix& m);

struct EigenSystem {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns are eigenvectors
};

// Cyclic Jacobi rotations.  Throws NumericalError if the off-diagonal mass does
// not fall below 1e-13 * max(1, ||H||_F) within the sweep budget.
EigenSystem eig_hermitian(const HermitianMatrix& h);

// V diag(f(lambda)) V^dagger.  Throws DomainError naming the eigenvalue when f
// returns a non-finite value.
HermitianMatrix matrix_function(const EigenSystem& es, const std::function<double(double)>& f);
HermitianMatrix matrix_function(const HermitianMatrix& h, const std::function<double(double)>& f);

// Same as matrix_function but with a complex-valued f; the result is normal, not Hermitian.
Matrix spectral_map(const EigenSystem& es, const std::function<Complex(double)>& f);

// True if h + shift*I admits a Cholesky factorization, i.e. lambda_min(h) > -shift.
// Much cheaper than a full eigendecomposition for per-step guards.
bool cholesky_psd(const Matrix& h, double shift);

double min_eigenvalue(const HermitianMatrix& h);

// x ln x continued by 0 at x = 0.
double xlogx(double x) noexcept;

} // namespace rsf

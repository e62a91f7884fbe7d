#include "rsf/numkernel.hpp"

#include "rsf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rsf {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": size mismatch (" << a << " vs " << b << ")";
        throw DimensionError(os.str());
    }
}

} // namespace

// ---------------------------------------------------------------- vectors

double ComplexVector::norm2() const noexcept {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return s;
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
    require_same_size(size(), other.size(), "ComplexVector +=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
    require_same_size(size(), other.size(), "ComplexVector -=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

ComplexVector& ComplexVector::operator*=(Complex s) noexcept {
    for (auto& z : data_) z *= s;
    return *this;
}

Complex inner(const ComplexVector& a, const ComplexVector& b) {
    require_same_size(a.size(), b.size(), "inner");
    Complex s{};
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

double norm(const ComplexVector& v) { return std::sqrt(v.norm2()); }

// ---------------------------------------------------------------- matrices

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        require_same_size(row.size(), cols_, "Matrix initializer");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
    return m;
}

Matrix Matrix::diagonal(std::span<const Complex> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
    return m;
}

Matrix Matrix::outer(const ComplexVector& a, const ComplexVector& b) {
    Matrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

Complex Matrix::trace() const {
    if (!square()) throw DimensionError("trace: matrix is not square");
    Complex s{};
    for (std::size_t k = 0; k < rows_; ++k) s += (*this)(k, k);
    return s;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("Matrix +=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("Matrix -=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(Complex s) noexcept {
    for (auto& z : data_) z *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("Matrix *: inner dimensions differ");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t l = 0; l < a.cols_; ++l) {
            const Complex ail = a(i, l);
            if (ail == Complex{}) continue;
            const Complex* brow = &b.data_[l * b.cols_];
            Complex* crow = &c.data_[i * c.cols_];
            for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += ail * brow[j];
        }
    }
    return c;
}

ComplexVector operator*(const Matrix& a, const ComplexVector& v) {
    require_same_size(a.cols_, v.size(), "Matrix * vector");
    ComplexVector out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        Complex s{};
        for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (const auto& z : m.entries()) s += std::norm(z);
    return std::sqrt(s);
}

double hermiticity_defect(const Matrix& m) {
    if (!m.square()) throw DimensionError("hermiticity_defect: matrix is not square");
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    return worst;
}

double unitarity_defect(const Matrix& u) {
    if (!u.square()) throw DimensionError("unitarity_defect: matrix is not square");
    return frobenius_norm(u.adjoint() * u - Matrix::identity(u.rows()));
}

// ---------------------------------------------------------------- Hermitian

HermitianMatrix hermitize(const Matrix& m) {
    if (!m.square()) {
        std::ostringstream os;
        os << "hermitize: expected a square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionError(os.str());
    }
    const std::size_t n = m.rows();
    Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return HermitianMatrix(std::move(h));
}

HermitianMatrix HermitianMatrix::checked(const Matrix& m, double tol) {
    if (!m.square()) throw DimensionError("HermitianMatrix: matrix is not square");
    const double defect = hermiticity_defect(m);
    if (defect > tol) {
        std::ostringstream os;
        os << "HermitianMatrix: Hermiticity defect " << defect << " exceeds " << tol;
        throw DomainError(os.str());
    }
    return hermitize(m);
}

HermitianMatrix HermitianMatrix::zeros(std::size_t n) { return HermitianMatrix(Matrix::zeros(n)); }
HermitianMatrix HermitianMatrix::identity(std::size_t n) { return HermitianMatrix(Matrix::identity(n)); }
HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) { return HermitianMatrix(Matrix::diagonal(d)); }

// ---------------------------------------------------------------- Jacobi

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Annihilates a(p,q) with a unitary acting on the (p,q) plane.
// The rotation first removes the phase of a(p,q), then applies the real
// symmetric Jacobi rotation (t = tan(theta), smaller root).
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double g = std::abs(apq);
    if (g == 0.0) return;
    const Complex phase = apq / g;  // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * g);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] restricted to (p, q)
    const Complex jpp = c;
    const Complex jpq = s;
    const Complex jqp = -s * std::conj(phase);
    const Complex jqq = c * std::conj(phase);

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {  // A <- A J
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * jpp + akq * jqp;
        a(k, q) = akp * jpq + akq * jqq;
    }
    for (std::size_t k = 0; k < n; ++k) {  // A <- J^dagger A
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
        a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
    for (std::size_t k = 0; k < n; ++k) {  // V <- V J
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * jpp + vkq * jqp;
        v(k, q) = vkp * jpq + vkq * jqq;
    }
}

} // namespace

EigenSystem eig_hermitian(const HermitianMatrix& h) {
    constexpr int kMaxSweeps = 100;
    const std::size_t n = h.dim();
    Matrix a = h.matrix();
    Matrix v = Matrix::identity(n);
    const double norm = frobenius_norm(a);
    if (!std::isfinite(norm)) throw NumericalError("eig_hermitian: matrix has non-finite entries");
    const double tol = 1e-13 * std::max(1.0, norm);

    int sweep = 0;
    double off = off_diagonal_norm(a);
    while (off > tol) {
        if (++sweep > kMaxSweeps) {
            std::ostringstream os;
            os << "eig_hermitian: no convergence after " << kMaxSweeps << " sweeps (dim " << n
               << ", off-diagonal norm " << off << ", tolerance " << tol << ")";
            throw NumericalError(os.str());
        }
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
        off = off_diagonal_norm(a);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = Matrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        es.values[c] = a(order[c], order[c]).real();
        for (std::size_t r = 0; r < n; ++r) es.vectors(r, c) = v(r, order[c]);
    }
    return es;
}

Matrix spectral_map(const EigenSystem& es, const std::function<Complex(double)>& f) {
    const std::size_t n = es.values.size();
    std::vector<Complex> fl(n);
    for (std::size_t k = 0; k < n; ++k) {
        fl[k] = f(es.values[k]);
        if (!std::isfinite(fl[k].real()) || !std::isfinite(fl[k].imag())) {
            std::ostringstream os;
            os.precision(17);
            os << "matrix function undefined at eigenvalue " << es.values[k];
            throw DomainError(os.str());
        }
    }
    const Matrix& v = es.vectors;
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex s{};
            for (std::size_t k = 0; k < n; ++k) s += v(i, k) * fl[k] * std::conj(v(j, k));
            out(i, j) = s;
        }
    return out;
}

HermitianMatrix matrix_function(const EigenSystem& es, const std::function<double(double)>& f) {
    return hermitize(spectral_map(es, [&](double x) { return Complex{f(x), 0.0}; }));
}

HermitianMatrix matrix_function(const HermitianMatrix& h, const std::function<double(double)>& f) {
    return matrix_function(eig_hermitian(h), f);
}

bool cholesky_psd(const Matrix& h, double shift) {
    const std::size_t n = h.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = h(j, j).real() + shift;
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex s = h(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return true;
}

double min_eigenvalue(const HermitianMatrix& h) {
    if (h.dim() == 0) return 0.0;
    return eig_hermitian(h).values.front();
}

double xlogx(double x) noexcept { return x == 0.0 ? 0.0 : x * std::log(x); }

} // namespace rsf

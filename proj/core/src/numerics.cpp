#include "bimmpp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace bimmpp {

namespace {
constexpr double kPivotTol = 1e-12;

void require_square(const Matrix& m, const char* op) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ShapeMismatch(std::string(op) + ": square matrix required");
}
} // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ShapeMismatch("Matrix: ragged initializer");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw ShapeMismatch("Matrix multiply: inner dimensions differ");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            double v = a_[i * cols_ + k];
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out(i, j) += v * rhs(k, j);
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeMismatch("Matrix add: shapes differ");
    Matrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += rhs.a_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeMismatch("Matrix subtract: shapes differ");
    Matrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= rhs.a_[i];
    return out;
}

Matrix Matrix::operator*(double s) const {
    Matrix out = *this;
    for (double& v : out.a_) v *= s;
    return out;
}

Vector Matrix::col(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::inf_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        m = std::max(m, s);
    }
    return m;
}

Vector operator*(const Vector& v, const Matrix& m) {
    if (v.size() != m.rows()) throw ShapeMismatch("vector*matrix: dimensions differ");
    Vector out(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i] == 0.0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

Vector operator*(const Matrix& m, const Vector& v) {
    if (v.size() != m.cols()) throw ShapeMismatch("matrix*vector: dimensions differ");
    Vector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
    return out;
}

double dot(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw ShapeMismatch("dot: lengths differ");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

Vector ones(std::size_t n) { return Vector(n, 1.0); }

Lu::Lu(const Matrix& m) : n_(m.rows()), lu_(m), perm_(m.rows()) {
    require_square(m, "Lu");
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n_; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n_; ++i) {
            double v = std::abs(lu_(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best <= kPivotTol)
            throw SingularMatrix("Lu: no pivot above tolerance at column " + std::to_string(k));
        if (p != k) {
            for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[k], perm_[p]);
        }
        for (std::size_t i = k + 1; i < n_; ++i) {
            lu_(i, k) /= lu_(k, k);
            double f = lu_(i, k);
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

Vector Lu::solve(const Vector& rhs) const {
    if (rhs.size() != n_) throw ShapeMismatch("Lu::solve: length differs");
    Vector x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 1; i < n_; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = n_; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n_; ++j) x[ii] -= lu_(ii, j) * x[j];
        x[ii] /= lu_(ii, ii);
    }
    return x;
}

Vector Lu::solve_transposed(const Vector& rhs) const {
    // m^T x = rhs with m = P^T L U: solve U^T y = rhs, L^T z = y, x = P^T z.
    if (rhs.size() != n_) throw ShapeMismatch("Lu::solve_transposed: length differs");
    Vector y(rhs);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < i; ++j) y[i] -= lu_(j, i) * y[j];
        y[i] /= lu_(i, i);
    }
    for (std::size_t ii = n_; ii-- > 0;)
        for (std::size_t j = ii + 1; j < n_; ++j) y[ii] -= lu_(j, ii) * y[j];
    Vector x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[perm_[i]] = y[i];
    return x;
}

Matrix Lu::inverse() const {
    Matrix out(n_, n_);
    Vector e(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        e[j] = 1.0;
        Vector x = solve(e);
        for (std::size_t i = 0; i < n_; ++i) out(i, j) = x[i];
        e[j] = 0.0;
    }
    return out;
}

Matrix inverse(const Matrix& m) { return Lu(m).inverse(); }

Matrix mat_exp(const Matrix& m) {
    require_square(m, "mat_exp");
    const std::size_t n = m.rows();

    int squarings = 0;
    double norm = m.inf_norm();
    while (norm > 0.5) { norm /= 2.0; ++squarings; }
    Matrix a = m * std::pow(2.0, -squarings);

    // Diagonal [6/6] Pade approximant of exp(a).
    constexpr int q = 6;
    Matrix num = Matrix::identity(n);
    Matrix den = Matrix::identity(n);
    Matrix power = Matrix::identity(n);
    double c = 1.0;
    for (int k = 1; k <= q; ++k) {
        c *= static_cast<double>(q - k + 1) / static_cast<double>((2 * q - k + 1) * k);
        power = power * a;
        Matrix term = power * c;
        num = num + term;
        den = (k % 2 == 0) ? den + term : den - term;
    }
    Matrix r = Lu(den).inverse() * num;
    for (int s = 0; s < squarings; ++s) r = r * r;
    return r;
}

Vector stationary_vector(const Matrix& q, ChainKind kind) {
    require_square(q, "stationary_vector");
    const std::size_t n = q.rows();

    // v m = 0 with m = q (generator) or q - I (stochastic); replace the last
    // column by ones to append the normalization, then solve m^T v = e_n.
    Matrix m = q;
    if (kind == ChainKind::Stochastic)
        for (std::size_t i = 0; i < n; ++i) m(i, i) -= 1.0;
    for (std::size_t i = 0; i < n; ++i) m(i, n - 1) = 1.0;

    Vector rhs(n, 0.0);
    rhs[n - 1] = 1.0;
    Vector v;
    try {
        v = Lu(m).solve_transposed(rhs);
    } catch (const SingularMatrix&) {
        throw Reducible("stationary_vector: stationary distribution is not unique");
    }

    double sum = 0.0;
    for (double x : v) {
        if (x < -1e-10) throw Reducible("stationary_vector: negative component");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Reducible("stationary_vector: normalization failed");
    for (double& x : v) x = std::max(x, 0.0) / sum;
    return v;
}

} // namespace bimmpp

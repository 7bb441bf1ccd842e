#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "bimmpp/errors.hpp"

namespace bimmpp {

using Vector = std::vector<double>;

// Dense row-major matrix sized for the 2x2 and 6x6 problems in this library.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diag(const Vector& d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix operator*(double s) const;

    // Column j as a vector.
    Vector col(std::size_t j) const;

    double max_abs() const;
    // Maximum absolute row sum.
    double inf_norm() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

Vector operator*(const Vector& v, const Matrix& m); // row vector times matrix
Vector operator*(const Matrix& m, const Vector& v);
double dot(const Vector& x, const Vector& y);
Vector ones(std::size_t n);

// LU decomposition with partial pivoting; throws SingularMatrix when no
// pivot exceeds 1e-12 in absolute value.
class Lu {
public:
    explicit Lu(const Matrix& m);
    Vector solve(const Vector& rhs) const;         // solves m x = rhs
    Vector solve_transposed(const Vector& rhs) const; // solves m^T x = rhs
    Matrix inverse() const;

private:
    std::size_t n_;
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

Matrix inverse(const Matrix& m);

// Matrix exponential by scaling-and-squaring with a diagonal Pade
// approximant; accurate for the small generator matrices used here.
Matrix mat_exp(const Matrix& m);

enum class ChainKind { Generator, Stochastic };

// Stationary probability vector of a generator (v q = 0) or stochastic
// (v q = v) matrix; throws Reducible when it is not unique.
Vector stationary_vector(const Matrix& q, ChainKind kind);

} // namespace bimmpp

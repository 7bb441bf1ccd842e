#include "bimmpp/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace bimmpp {

namespace {

Matrix negate(const Matrix& m) { return m * -1.0; }

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Diagonal matrix holding one reward column.
Matrix reward_diag(const Matrix& r, int col) {
    Vector d(r.rows());
    for (std::size_t i = 0; i < r.rows(); ++i) d[i] = r(i, static_cast<std::size_t>(col));
    return Matrix::diag(d);
}

// Validates that -(d0 + diag) is a nonsingular M-matrix, which is exactly
// the requirement that every eigenvalue of -(d0 + diag) has positive real
// part: d0 + diag has nonnegative off-diagonals, so its spectral abscissa is
// attained at a real eigenvalue and lies below -tol iff the shifted negative
// is inverse-positive.
Matrix domain_checked_inverse(const Matrix& d0, const Vector& shift_diag) {
    const std::size_t n = d0.rows();
    Matrix a = negate(d0);
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= shift_diag[i];

    constexpr double tol = 1e-10;
    Matrix probe = a;
    for (std::size_t i = 0; i < n; ++i) probe(i, i) -= tol;
    Matrix inv;
    try {
        inv = inverse(probe);
    } catch (const SingularMatrix&) {
        throw Divergent("transform argument outside the convergence region");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (inv(i, j) < -1e-12)
                throw Divergent("transform argument outside the convergence region");
    return inverse(a);
}

} // namespace

double marginal_moment(const MarginalRep& rep, int r) {
    if (r < 1) throw InvalidParameter("marginal_moment: order must be >= 1");
    const Matrix u = inverse(negate(rep.d0));
    Vector v = rep.phi;
    for (int i = 0; i < r; ++i) v = v * u;
    return factorial(r) * dot(v, ones(v.size()));
}

double marginal_autocorr(const MarginalRep& rep, int lag) {
    if (lag < 1) throw InvalidParameter("marginal_autocorr: lag must be >= 1");
    const Matrix u = inverse(negate(rep.d0));
    const Vector e = ones(rep.phi.size());

    const double mu1 = dot(rep.phi * u, e);
    const double mu2 = 2.0 * dot((rep.phi * u) * u, e);
    if (std::abs(mu2 - 2.0 * mu1 * mu1) <= 1e-12 * mu1 * mu1)
        throw ZeroVariance("marginal_autocorr: i.i.d. exponential inter-failures");

    const Matrix p = u * rep.d1;
    Vector v = rep.pi;
    for (int i = 0; i < lag; ++i) v = v * p;
    const double num = dot(v * u, e) - mu1;
    const double den = 2.0 * dot(rep.pi * u, e) - mu1;
    return num / den;
}

double interfailure_cdf(const MarginalRep& rep, double t) {
    if (t < 0.0) throw InvalidParameter("interfailure_cdf: t must be >= 0");
    const Matrix et = mat_exp(rep.d0 * t);
    return 1.0 - dot(rep.phi * et, ones(rep.phi.size()));
}

double joint_moment(const MatrixRep& rep, int n, int m) {
    if (n < 0 || m < 0 || n + m < 1)
        throw InvalidParameter("joint_moment: orders must be nonnegative with n+m >= 1");
    if (n + m > 4)
        throw UnsupportedOrder("joint_moment: n+m above the supported order 4");

    const Matrix u = inverse(negate(rep.d0));
    const Matrix ut = u * reward_diag(rep.r, 0);
    const Matrix uk = u * reward_diag(rep.r, 1);
    const Vector e = ones(rep.phi6.size());

    // Sum over the distinct arrangements of n T-factors and m K-factors,
    // then scale by n! m! so duplicate orderings are counted.
    std::vector<int> arrangement(static_cast<std::size_t>(n), 0);
    arrangement.insert(arrangement.end(), static_cast<std::size_t>(m), 1);
    std::sort(arrangement.begin(), arrangement.end());

    double sum = 0.0;
    do {
        Vector v = rep.phi6;
        for (int which : arrangement) v = v * (which == 0 ? ut : uk);
        sum += dot(v, e);
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));

    return factorial(n) * factorial(m) * sum;
}

double mgf(const MatrixRep& rep, const std::array<double, 2>& theta) {
    return sequence_transform(rep, {theta});
}

double sequence_transform(const MatrixRep& rep,
                          const std::vector<std::array<double, 2>>& thetas) {
    if (thetas.empty())
        throw InvalidParameter("sequence_transform: at least one theta required");
    const std::size_t n = rep.phi6.size();
    const Vector e = ones(n);

    Vector v = rep.phi6;
    for (const auto& theta : thetas) {
        Vector shift(n);
        for (std::size_t i = 0; i < n; ++i)
            shift[i] = rep.r(i, 0) * theta[0] + rep.r(i, 1) * theta[1];
        const Matrix inv = domain_checked_inverse(rep.d0, shift);
        v = (v * inv) * rep.d1;
    }
    return dot(v, e);
}

double cross_moment(const MatrixRep& rep, Coordinate first, Coordinate second,
                    int lag) {
    if (lag < 1) throw InvalidParameter("cross_moment: lag must be >= 1");
    const Matrix u = inverse(negate(rep.d0));
    const Matrix p = u * rep.d1;
    const Vector e = ones(rep.phi6.size());

    Vector v = rep.phi6 * (u * reward_diag(rep.r, first == Coordinate::T ? 0 : 1));
    for (int i = 0; i < lag; ++i) v = v * p;
    v = v * (u * reward_diag(rep.r, second == Coordinate::T ? 0 : 1));
    return dot(v, e);
}

MomentSet theoretical_moment_set(const ModelParams& params) {
    const auto [time_marg, dist_marg] = marginal_reps(params);

    MomentSet ms;
    for (int r = 1; r <= 3; ++r) {
        ms.mu_t[r - 1] = marginal_moment(time_marg, r);
        ms.mu_k[r - 1] = marginal_moment(dist_marg, r);
    }
    try {
        ms.rho_t1 = marginal_autocorr(time_marg, 1);
    } catch (const ZeroVariance&) {
        ms.rho_t1 = 0.0;
        ms.rho_t_degenerate = true;
    }
    try {
        ms.rho_k1 = marginal_autocorr(dist_marg, 1);
    } catch (const ZeroVariance&) {
        ms.rho_k1 = 0.0;
        ms.rho_k_degenerate = true;
    }

    const MatrixRep rep = full_matrix_rep(params);
    ms.eta11 = joint_moment(rep, 1, 1);
    ms.eta21 = joint_moment(rep, 2, 1);
    ms.eta12 = joint_moment(rep, 1, 2);

    const double var_t = ms.mu_t[1] - ms.mu_t[0] * ms.mu_t[0];
    const double var_k = ms.mu_k[1] - ms.mu_k[0] * ms.mu_k[0];
    ms.corr_tk = (ms.eta11 - ms.mu_t[0] * ms.mu_k[0]) / std::sqrt(var_t * var_k);
    return ms;
}

} // namespace bimmpp

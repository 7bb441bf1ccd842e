#include "bimmpp/empirical.hpp"

#include <algorithm>
#include <cmath>

namespace bimmpp {

namespace {

double mean_of(const Vector& x, int power) {
    double s = 0.0;
    for (double v : x) {
        double p = v;
        for (int i = 1; i < power; ++i) p *= v;
        s += p;
    }
    return s / static_cast<double>(x.size());
}

double centered_sumsq(const Vector& x, double m) {
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s;
}

} // namespace

std::size_t CountingPath::count_t(double t) const {
    return static_cast<std::size_t>(
        std::upper_bound(cum_t.begin(), cum_t.end(), t) - cum_t.begin());
}

std::size_t CountingPath::count_k(double k) const {
    return static_cast<std::size_t>(
        std::upper_bound(cum_k.begin(), cum_k.end(), k) - cum_k.begin());
}

std::size_t CountingPath::count_joint(double t, double k) const {
    // Both sequences increase with the failure index, so each threshold
    // selects a prefix and the joint count is the shorter prefix.
    return std::min(count_t(t), count_k(k));
}

double lag_autocorr(const Vector& values, int lag) {
    if (lag < 1) throw InvalidParameter("lag_autocorr: lag must be >= 1");
    const std::size_t n = values.size();
    if (n <= static_cast<std::size_t>(lag) + 1)
        throw TooShort("lag_autocorr: need more than lag+1 values");

    const double m = mean_of(values, 1);
    const double denom = centered_sumsq(values, m);
    if (denom <= 0.0) throw ZeroVariance("lag_autocorr: constant sequence");

    double num = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i)
        num += (values[i] - m) * (values[i + lag] - m);
    return num / denom;
}

MomentSet empirical_moment_set(const BivariateTrace& trace) {
    const std::size_t n = trace.size();
    if (n < 3) throw TooShort("empirical_moment_set: need at least 3 pairs");

    MomentSet ms;
    for (int r = 1; r <= 3; ++r) {
        ms.mu_t[r - 1] = mean_of(trace.t, r);
        ms.mu_k[r - 1] = mean_of(trace.k, r);
    }

    try {
        ms.rho_t1 = lag_autocorr(trace.t, 1);
    } catch (const ZeroVariance&) {
        ms.rho_t1 = 0.0;
        ms.rho_t_degenerate = true;
    }
    try {
        ms.rho_k1 = lag_autocorr(trace.k, 1);
    } catch (const ZeroVariance&) {
        ms.rho_k1 = 0.0;
        ms.rho_k_degenerate = true;
    }

    double e11 = 0.0, e21 = 0.0, e12 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = trace.t[i], k = trace.k[i];
        e11 += t * k;
        e21 += t * t * k;
        e12 += t * k * k;
    }
    ms.eta11 = e11 / static_cast<double>(n);
    ms.eta21 = e21 / static_cast<double>(n);
    ms.eta12 = e12 / static_cast<double>(n);

    const double mt = ms.mu_t[0], mk = ms.mu_k[0];
    const double sst = centered_sumsq(trace.t, mt);
    const double ssk = centered_sumsq(trace.k, mk);
    if (sst <= 0.0 || ssk <= 0.0) {
        ms.corr_tk = 0.0;
    } else {
        double cov = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            cov += (trace.t[i] - mt) * (trace.k[i] - mk);
        ms.corr_tk = cov / std::sqrt(sst * ssk);
    }
    return ms;
}

CountingPath counting_path(const BivariateTrace& trace) {
    if (trace.size() == 0) throw TooShort("counting_path: empty trace");
    CountingPath path;
    path.cum_t.resize(trace.size());
    path.cum_k.resize(trace.size());
    double st = 0.0, sk = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        st += trace.t[i];
        sk += trace.k[i];
        path.cum_t[i] = st;
        path.cum_k[i] = sk;
    }
    return path;
}

} // namespace bimmpp

#include "bimmpp/model.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace bimmpp {

namespace {

void check_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw InvalidParameter(std::string(name) + " must be finite");
}

void check_rate_triple(const std::array<double, 3>& r, const char* name) {
    const char* suffix[] = {"1", "2", "3"};
    for (int i = 0; i < 3; ++i)
        check_finite(r[i], (std::string(name) + suffix[i]).c_str());
    if (r[0] <= 0.0) throw InvalidParameter(std::string(name) + "1 must be > 0");
    if (r[1] <= 0.0) throw InvalidParameter(std::string(name) + "2 must be > 0");
    if (r[2] < 0.0) throw InvalidParameter(std::string(name) + "3 must be >= 0");
}

} // namespace

const ModelParams& validate(const ModelParams& params) {
    check_finite(params.a, "a");
    check_finite(params.b, "b");
    if (!(params.a > 0.0 && params.a < 1.0))
        throw InvalidParameter("a must lie in the open interval (0,1)");
    if (!(params.b > 0.0 && params.b < 1.0))
        throw InvalidParameter("b must lie in the open interval (0,1)");
    check_rate_triple(params.lambda, "lambda");
    check_rate_triple(params.omega, "omega");
    return params;
}

Vector stationary_phi(double a, double b) {
    const double n1 = b * (1.0 - a);
    const double n2 = a * (1.0 - b);
    const double den = n1 + n2;
    if (den < 1e-14)
        throw DegenerateChain("stationary_phi: a and b both at the zero limit");
    return {n1 / den, n2 / den};
}

namespace {

MarginalRep make_marginal(double a, double b, double g1, double g2) {
    MarginalRep rep;
    rep.d0 = Matrix{{-g1, g1 * a}, {g2 * b, -g2}};
    rep.d1 = Matrix{{g1 * (1.0 - a), 0.0}, {0.0, g2 * (1.0 - b)}};
    rep.phi = stationary_phi(a, b);
    rep.pi = stationary_vector(rep.d0 + rep.d1, ChainKind::Generator);
    return rep;
}

} // namespace

std::pair<MarginalRep, MarginalRep> marginal_reps(const ModelParams& params) {
    validate(params);
    return {make_marginal(params.a, params.b, params.gamma_t1(), params.gamma_t2()),
            make_marginal(params.a, params.b, params.gamma_k1(), params.gamma_k2())};
}

MatrixRep full_matrix_rep(const ModelParams& params) {
    validate(params);
    const double a = params.a, b = params.b;
    const double l1 = params.lambda[0], l2 = params.lambda[1], l3 = params.lambda[2];
    const double w1 = params.omega[0], w2 = params.omega[1], w3 = params.omega[2];
    const double gt1 = params.gamma_t1(), gk1 = params.gamma_k1();
    const double gt2 = params.gamma_t2(), gk2 = params.gamma_k2();
    const double lt = l1 + l2 + l3, wt = w1 + w2 + w3;

    MatrixRep rep;
    rep.d0 = Matrix{{-lt, l2, l1, l3 * a, 0.0, 0.0},
                    {0.0, -gt1, 0.0, gt1 * a, 0.0, 0.0},
                    {0.0, 0.0, -gk1, gk1 * a, 0.0, 0.0},
                    {w3 * b, 0.0, 0.0, -wt, w2, w1},
                    {gt2 * b, 0.0, 0.0, 0.0, -gt2, 0.0},
                    {gk2 * b, 0.0, 0.0, 0.0, 0.0, -gk2}};
    rep.d1 = Matrix(6, 6);
    rep.d1(0, 0) = l3 * (1.0 - a);
    rep.d1(1, 0) = gt1 * (1.0 - a);
    rep.d1(2, 0) = gk1 * (1.0 - a);
    rep.d1(3, 3) = w3 * (1.0 - b);
    rep.d1(4, 3) = gt2 * (1.0 - b);
    rep.d1(5, 3) = gk2 * (1.0 - b);
    rep.r = Matrix{{1, 1}, {1, 0}, {0, 1}, {1, 1}, {1, 0}, {0, 1}};

    const Vector phi = stationary_phi(a, b);
    rep.phi6 = {phi[0], 0.0, 0.0, phi[1], 0.0, 0.0};
    return rep;
}

MatrixRep alt_matrix_rep(const ModelParams& params) {
    validate(params);
    const double a = params.a, b = params.b;
    const double l1 = params.lambda[0], l2 = params.lambda[1], l3 = params.lambda[2];
    const double w1 = params.omega[0], w2 = params.omega[1], w3 = params.omega[2];
    const double gt1 = params.gamma_t1(), gk1 = params.gamma_k1();
    const double gt2 = params.gamma_t2(), gk2 = params.gamma_k2();
    const double lt = l1 + l2 + l3, wt = w1 + w2 + w3;

    MatrixRep rep;
    rep.d0 = Matrix{{-gt1, 0.0, gt1, 0.0, 0.0, 0.0},
                    {0.0, -gk1, gk1, 0.0, 0.0, 0.0},
                    {0.0, 0.0, -lt, (lt / wt) * w2 * a, (lt / wt) * w1 * a, (lt / wt) * w3 * a},
                    {0.0, 0.0, 0.0, -gt2, 0.0, gt2},
                    {0.0, 0.0, 0.0, 0.0, -gk2, gk2},
                    {(wt / lt) * l2 * b, (wt / lt) * l1 * b, (wt / lt) * l3 * b, 0.0, 0.0, -wt}};
    rep.d1 = Matrix(6, 6);
    rep.d1(2, 0) = (1.0 - a) * l2;
    rep.d1(2, 1) = (1.0 - a) * l1;
    rep.d1(2, 2) = (1.0 - a) * l3;
    rep.d1(5, 3) = (1.0 - b) * w2;
    rep.d1(5, 4) = (1.0 - b) * w1;
    rep.d1(5, 5) = (1.0 - b) * w3;
    // Rewards by phase role: single-coordinate residuals, then the common
    // segment during which both coordinates accrue.
    rep.r = Matrix{{1, 0}, {0, 1}, {1, 1}, {1, 0}, {0, 1}, {1, 1}};

    const Vector phi = stationary_phi(a, b);
    rep.phi6 = {phi[0] * l2 / lt, phi[0] * l1 / lt, phi[0] * l3 / lt,
                phi[1] * w2 / wt, phi[1] * w1 / wt, phi[1] * w3 / wt};
    return rep;
}

ModelParams swap_states(const ModelParams& params) {
    ModelParams out = params;
    std::swap(out.a, out.b);
    std::swap(out.lambda, out.omega);
    return out;
}

ModelParams canonicalize(const ModelParams& params) {
    validate(params);
    const ModelParams& p = params;
    const double t1 = p.gamma_t1(), t2 = p.gamma_t2();
    bool keep;
    if (t1 != t2) {
        keep = t1 > t2;
    } else if (p.gamma_k1() != p.gamma_k2()) {
        keep = p.gamma_k1() > p.gamma_k2();
    } else {
        keep = p.a <= p.b;
    }
    return keep ? p : swap_states(p);
}

} // namespace bimmpp

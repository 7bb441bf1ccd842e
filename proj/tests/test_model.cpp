#include <cmath>

#include "bimmpp/model.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bimmpp;

namespace {

bool same_params(const ModelParams& x, const ModelParams& y) {
    return x.a == y.a && x.b == y.b && x.lambda == y.lambda &&
           x.omega == y.omega;
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("stationary phase vector of symmetric switching") {
    Vector phi = stationary_phi(0.3, 0.3);
    CHECK(phi[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(phi[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("stationary phase vector of the first reference set") {
    Vector phi = stationary_phi(0.02, 0.44);
    const double den = 0.44 * 0.98 + 0.02 * 0.56;
    CHECK(phi[0] == doctest::Approx(0.44 * 0.98 / den).epsilon(1e-14));
    CHECK(phi[1] == doctest::Approx(0.02 * 0.56 / den).epsilon(1e-14));
    CHECK(phi[0] + phi[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("vanishing switch probabilities leave no stationary law") {
    CHECK_THROWS_AS(stationary_phi(1e-15, 1e-15), DegenerateChain);
}

TEST_CASE("validate accepts the reference sets") {
    CHECK_NOTHROW(validate(testsupport::example1()));
    CHECK_NOTHROW(validate(testsupport::example2()));
    ModelParams free_shock = testsupport::example1();
    free_shock.lambda[2] = 0.0;
    free_shock.omega[2] = 0.0;
    CHECK_NOTHROW(validate(free_shock));
}

TEST_CASE("validate rejects out-of-range parameters") {
    ModelParams p = testsupport::example1();

    SUBCASE("switch probability at one") {
        p.a = 1.0;
        CHECK_THROWS_AS(validate(p), InvalidParameter);
    }
    SUBCASE("switch probability at zero") {
        p.b = 0.0;
        CHECK_THROWS_AS(validate(p), InvalidParameter);
    }
    SUBCASE("negative coordinate rate") {
        p.lambda[0] = -0.1;
        CHECK_THROWS_AS(validate(p), InvalidParameter);
    }
    SUBCASE("zero coordinate rate") {
        p.omega[1] = 0.0;
        CHECK_THROWS_AS(validate(p), InvalidParameter);
    }
    SUBCASE("negative shared rate") {
        p.lambda[2] = -1e-9;
        CHECK_THROWS_AS(validate(p), InvalidParameter);
    }
    SUBCASE("non-finite entry") {
        p.omega[0] = std::nan("");
        CHECK_THROWS_AS(validate(p), InvalidParameter);
    }
}

TEST_CASE("marginal representations carry the per-state total rates") {
    const ModelParams p = testsupport::example1();
    auto [time_rep, dist_rep] = marginal_reps(p);

    CHECK(time_rep.d0(0, 0) == doctest::Approx(-p.gamma_t1()).epsilon(1e-15));
    CHECK(time_rep.d0(0, 1) ==
          doctest::Approx(p.gamma_t1() * p.a).epsilon(1e-15));
    CHECK(time_rep.d0(1, 0) ==
          doctest::Approx(p.gamma_t2() * p.b).epsilon(1e-15));
    CHECK(time_rep.d0(1, 1) == doctest::Approx(-p.gamma_t2()).epsilon(1e-15));
    CHECK(time_rep.d1(0, 0) ==
          doctest::Approx(p.gamma_t1() * (1.0 - p.a)).epsilon(1e-15));
    CHECK(time_rep.d1(1, 1) ==
          doctest::Approx(p.gamma_t2() * (1.0 - p.b)).epsilon(1e-15));

    CHECK(dist_rep.d0(0, 0) == doctest::Approx(-p.gamma_k1()).epsilon(1e-15));
    CHECK(dist_rep.d0(1, 1) == doctest::Approx(-p.gamma_k2()).epsilon(1e-15));

    // d0 + d1 is a conservative generator and pi its stationary vector.
    for (const MarginalRep& rep : {time_rep, dist_rep}) {
        for (std::size_t i = 0; i < 2; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < 2; ++j)
                row += rep.d0(i, j) + rep.d1(i, j);
            CHECK(row == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        }
        CHECK(rep.pi[0] + rep.pi[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.phi[0] + rep.phi[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("six-phase representations are conservative with unit mass") {
    for (const ModelParams& p :
         {testsupport::example1(), testsupport::example2()}) {
        for (const MatrixRep& rep :
             {full_matrix_rep(p), alt_matrix_rep(p)}) {
            REQUIRE(rep.d0.rows() == 6);
            REQUIRE(rep.r.rows() == 6);
            REQUIRE(rep.r.cols() == 2);
            double mass = 0.0;
            for (double v : rep.phi6) mass += v;
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
            for (std::size_t i = 0; i < 6; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < 6; ++j)
                    row += rep.d0(i, j) + rep.d1(i, j);
                CHECK(row == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
                for (std::size_t c = 0; c < 2; ++c) {
                    const bool zero_or_one =
                        rep.r(i, c) == 0.0 || rep.r(i, c) == 1.0;
                    CHECK(zero_or_one);
                }
            }
        }
    }
}

TEST_CASE("swap is an involution") {
    for (int i = 0; i < 20; ++i) {
        const ModelParams p = testsupport::random_params(11, i);
        CHECK(same_params(swap_states(swap_states(p)), p));
    }
}

TEST_CASE("canonicalize is idempotent and ignores labeling") {
    for (int i = 0; i < 20; ++i) {
        const ModelParams p = testsupport::random_params(12, i);
        const ModelParams c = canonicalize(p);
        CHECK(same_params(canonicalize(c), c));
        CHECK(same_params(canonicalize(swap_states(p)), c));
        CHECK(c.gamma_t1() >= c.gamma_t2());
    }
}

} // TEST_SUITE

#include <doctest.h>

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.hpp"
#include "semcom/errors.hpp"
#include "semcom/numerics.hpp"

using namespace semcom;

TEST_CASE("q_function matches frozen high-precision values") {
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q_function(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
    CHECK(q_function(3.0) == doctest::Approx(0.0013498980316300945).epsilon(1e-13));
    CHECK(q_function(6.0) == doctest::Approx(9.8658764503769814e-10).epsilon(1e-12));
    CHECK(q_function(10.0) == doctest::Approx(7.6198530241605261e-24).epsilon(1e-12));
    CHECK(q_function(38.0) == doctest::Approx(2.8854283600687843e-316).epsilon(1e-6));
    CHECK(log_q_function(50.0) == doctest::Approx(-1254.8313611394199).epsilon(1e-14));
}

TEST_CASE("q_function agrees with the erfc oracle and is symmetric") {
    for (double x = -8.0; x <= 8.0; x += 0.37) {
        CHECK(q_function(x) == doctest::Approx(oracle::q(x)).epsilon(1e-12));
        CHECK(q_function(x) + q_function(-x) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("q_inverse round-trips and matches the quantile oracle") {
    CHECK(q_inverse(1e-9) == doctest::Approx(5.9978070150076869).epsilon(1e-12));
    for (double p : {1e-300, 1e-30, 1e-9, 1e-3, 0.1, 0.35, 0.5, 0.77, 0.999}) {
        CHECK(q_inverse(p) == doctest::Approx(oracle::q_inv(p)).epsilon(1e-10));
        CHECK(q_function(q_inverse(p)) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK_THROWS_AS(q_inverse(0.0), DomainError);
    CHECK_THROWS_AS(q_inverse(1.0), DomainError);
    CHECK_THROWS_AS(q_inverse(std::nan("")), DomainError);
}

TEST_CASE("regularized lower gamma against Boost") {
    CHECK(regularized_lower_gamma(2.5, 1.7) == doctest::Approx(0.36143007689620491).epsilon(1e-13));
    for (double s : {0.5, 1.0, 3.0, 50.0, 400.0}) {
        for (double x : {0.01, 0.5, 2.0, 10.0, 60.0, 500.0}) {
            CHECK(regularized_lower_gamma(s, x) ==
                  doctest::Approx(boost::math::gamma_p(s, x)).epsilon(1e-11));
        }
    }
    CHECK(regularized_lower_gamma(3.0, 0.0) == 0.0);
}

TEST_CASE("chi-square quantile") {
    CHECK(chi_square_quantile(0.95, 100) == doctest::Approx(124.34211340400408).epsilon(1e-11));
    CHECK(chi_square_quantile(0.9, 1) == doctest::Approx(2.705543454095404).epsilon(1e-11));
    for (std::size_t dof : {1u, 2u, 10u, 100u, 1000u}) {
        const boost::math::chi_squared_distribution<> dist(static_cast<double>(dof));
        for (double z : {0.01, 0.5, 0.95, 0.999999}) {
            CHECK(chi_square_quantile(z, dof) == doctest::Approx(boost::math::quantile(dist, z)).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(chi_square_quantile(1.0, 3), DomainError);
    CHECK_THROWS_AS(chi_square_quantile(0.5, 0), DomainError);
}

TEST_CASE("Lambert W0") {
    CHECK(lambert_w0(1.0) == doctest::Approx(0.56714329040978387).epsilon(1e-14));
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(lambert_w0(-std::exp(-1.0) + 1e-6) == doctest::Approx(-0.99767016627200789).epsilon(1e-9));
    for (double x : {-0.3, -0.01, 1e-8, 0.5, 3.0, 100.0, 1e6, 1e200}) {
        const double w = lambert_w0(x);
        CHECK(w == doctest::Approx(boost::math::lambert_w0(x)).epsilon(1e-12));
        CHECK(w * std::exp(w) == doctest::Approx(x).epsilon(1e-11));
    }
    CHECK_THROWS_AS(lambert_w0(-0.5), DomainError);
}

TEST_CASE("Lambert W0 of exp beyond the double range") {
    CHECK(lambert_w0_of_exp(1000.0) == doctest::Approx(993.0991694723891).epsilon(1e-14));
    for (double lx : {-30.0, -1.0, 0.0, 2.0, 300.0, 1e5}) {
        const double w = lambert_w0_of_exp(lx);
        CHECK(w + std::log(w) == doctest::Approx(lx).epsilon(1e-12));
        if (lx < 700.0) CHECK(w == doctest::Approx(boost::math::lambert_w0(std::exp(lx))).epsilon(1e-12));
    }
}

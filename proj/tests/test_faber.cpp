#include <doctest.h>

#include "replkit/faber.hpp"
#include "support/helpers.hpp"
#include "support/naive_series.hpp"

using namespace replkit;
using namespace replkit::series;
using testing::error_kind;
using testing::ints;

TEST_CASE("degree one with no constant term is x") {
    const QSeries f = QSeries::from_coefficients(-1, ints({1, 0, 5, -3}));
    const auto p = faber::faber_poly(f, 1);
    CHECK(p.n == 1);
    CHECK(p.c == ints({0}));
    CHECK(agree(faber::faber_apply(p, f), f));
}

TEST_CASE("a constant term is cancelled at degree one") {
    const QSeries f = QSeries::from_coefficients(-1, ints({1, 744, 196884}));
    CHECK(faber::faber_poly(f, 1).c == ints({-744}));
}

TEST_CASE("J at degree two") {
    const QSeries J = testing::j_minus_744(10);
    const auto p = faber::faber_poly(J, 2);
    CHECK(p.c == ints({-393768, 0}));
    CHECK(faber::to_json(p).dump() == R"({"c":["-393768","0"],"n":2})");

    const QSeries image = faber::faber_apply(p, J);
    CHECK(image.coeff(-2) == 1);
    CHECK(image.coeff(-1) == 0);
    CHECK(image.coeff(0) == 0);
    const naive::Laurent j = naive::j_invariant(4);
    CHECK(image.coeff(1) == 2 * j.at(2));
    CHECK(image.coeff(1) == 42987520);
}

TEST_CASE("q^-1 has the pure powers as Faber polynomials") {
    const QSeries f = QSeries::monomial(1, -1, 12);
    for (unsigned n = 1; n <= 10; ++n) {
        const auto p = faber::faber_poly(f, n);
        CHECK(p.n == n);
        CHECK(p.c == std::vector<Int>(n, 0));
    }
}

TEST_CASE("the image is q^-n + O(q) for every degree") {
    const QSeries J = testing::j_minus_744(16);
    for (unsigned n = 1; n <= 8; ++n) {
        const auto p = faber::faber_poly(J, n);
        const QSeries image = faber::faber_apply(p, J);
        CHECK(image.coeff(-static_cast<std::int64_t>(n)) == 1);
        for (std::int64_t e = -static_cast<std::int64_t>(n) + 1; e <= 0; ++e) CHECK(image.coeff(e) == 0);
        CHECK(p.certified_through >= 0);

        std::vector<QSeries> powers{pow(J, 0)};
        for (unsigned k = 1; k <= n; ++k) powers.push_back(mul(powers.back(), J));
        CHECK(agree(faber::faber_apply_powers(p, powers), image));
    }
}

TEST_CASE("faber_apply of x is the identity") {
    const QSeries J = testing::j_minus_744(6);
    faber::FaberPolynomial x;
    x.n = 1;
    x.c = ints({0});
    const QSeries out = faber::faber_apply(x, J);
    CHECK(out.coeffs() == J.coeffs());
}

TEST_CASE("errors") {
    const QSeries not_normalized = QSeries::from_coefficients(-1, ints({2, 0, 1}));
    CHECK(error_kind([&] { (void)faber::faber_poly(not_normalized, 2); }) == "NotNormalized");
    const QSeries holomorphic = QSeries::from_coefficients(0, ints({1, 1}));
    CHECK(error_kind([&] { (void)faber::faber_poly(holomorphic, 1); }) == "NotNormalized");
    const QSeries fractional(2, -2, ints({1, 0, 0}), 1);
    CHECK(error_kind([&] { (void)faber::faber_poly(fractional, 1); }) == "NotNormalized");
    const QSeries short_series = QSeries::from_coefficients(-1, ints({1, 0, 3}));
    CHECK(error_kind([&] { (void)faber::faber_poly(short_series, 4); }) == "InsufficientPrecision");
    CHECK(error_kind([&] { (void)faber::faber_poly(short_series, 0); }) == "InvalidArgument");
}

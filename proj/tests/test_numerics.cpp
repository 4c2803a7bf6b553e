#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hgteq/errors.hpp"
#include "hgteq/numerics.hpp"
#include "hgteq/rootfind.hpp"

using namespace hgteq;

TEST_CASE("log_sum_exp agrees with the naive sum on small arguments") {
    std::vector<double> a = {0.3, -1.2, 2.5, 0.0};
    double naive = 0.0;
    for (double x : a) naive += std::exp(x);
    CHECK(log_sum_exp(a) == doctest::Approx(std::log(naive)).epsilon(1e-14));
}

TEST_CASE("log_sum_exp survives arguments that would overflow") {
    std::vector<double> a = {10000.0, 9999.0, -20000.0};
    const double expect = 10000.0 + std::log(1.0 + std::exp(-1.0));
    CHECK(log_sum_exp(a) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("log_sum_exp shift invariance") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    std::vector<double> a(16);
    for (double& x : a) x = dist(rng);
    const double base = log_sum_exp(a);
    for (double& x : a) x += 300.0;
    CHECK(log_sum_exp(a) == doctest::Approx(base + 300.0).epsilon(1e-13));
}

TEST_CASE("log_sum_exp rejects empty and non-finite input") {
    CHECK_THROWS_AS(log_sum_exp(std::vector<double>{}), DomainError);
    std::vector<double> bad = {1.0, std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(log_sum_exp(bad), NumericalError);
}

TEST_CASE("solve_linear recovers a known solution") {
    // random well-conditioned 6x6 against a planted x
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int n = 6;
    std::vector<double> a(n * n);
    for (double& v : a) v = dist(rng);
    for (int i = 0; i < n; ++i) a[i * n + i] += 4.0;   // diagonally dominant
    std::vector<double> x_true(n);
    for (double& v : x_true) v = dist(rng);
    std::vector<double> b(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i] += a[i * n + j] * x_true[j];
    std::vector<double> a_copy = a;
    REQUIRE(solve_linear(a_copy, b));
    for (int i = 0; i < n; ++i)
        CHECK(b[i] == doctest::Approx(x_true[i]).epsilon(1e-12));
}

TEST_CASE("solve_linear reports singular systems") {
    std::vector<double> a = {1.0, 2.0, 2.0, 4.0};
    std::vector<double> b = {1.0, 2.0};
    CHECK_FALSE(solve_linear(a, b));
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 0.9375, 2.5e-1}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("bisect finds a bracketed root") {
    const auto f = [](double x) { return x * x - 2.0; };
    CHECK(bisect(f, 0.0, 2.0, 1e-14) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(bisect(f, 2.0, 3.0, 1e-14), NumericalError);
}

TEST_CASE("newton_polish sharpens a bisection estimate") {
    const auto f = [](double x) { return std::cos(x) - x; };
    const auto df = [](double x) { return -std::sin(x) - 1.0; };
    const double rough = bisect(f, 0.0, 1.0, 1e-4);
    const double root = newton_polish(f, df, 0.0, 1.0, rough, 1e-15);
    CHECK(std::fabs(f(root)) < 1e-14);
}

TEST_CASE("golden_max locates a quadratic maximum") {
    const auto f = [](double x) { return -(x - 0.3) * (x - 0.3); };
    CHECK(golden_max(f, -1.0, 1.0, 1e-10) == doctest::Approx(0.3).epsilon(1e-7));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "prodcalc/mulcalc.hpp"
#include "test_util.hpp"

using namespace prodcalc;

namespace {

const QuadratureRule kRule = QuadratureRule::adaptive();

/// The limit definition as an oracle: (f(x+d)/f(x))^(1/d).
double ratio_oracle(const Expr& f, double x, double delta) {
    Eigen::VectorXd p0(1), p1(1);
    p0[0] = x;
    p1[0] = x + delta;
    return std::pow(eval(f, p1) / eval(f, p0), 1.0 / delta);
}

double eval_at(const Expr& f, double x) {
    Eigen::VectorXd p(1);
    p[0] = x;
    return eval(f, p);
}

}  // namespace

TEST_CASE("product derivative") {
    CHECK(product_derivative(parse_expr("exp(x1^2)"), 1.0) ==
          doctest::Approx(std::exp(2.0)).epsilon(1e-12));
    for (double x : {-1.0, 0.0, 2.5, 3.7})
        CHECK(product_derivative(parse_expr("5^x1"), x) == doctest::Approx(5.0).epsilon(1e-12));

    const double got = product_derivative(parse_expr("x1"), 2.0);
    CHECK(got == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    CHECK(got == doctest::Approx(ratio_oracle(parse_expr("x1"), 2.0, 1e-6)).epsilon(1e-6));

    CHECK_THROWS_AS(product_derivative(parse_expr("x1"), 0.0), DomainError);
    // a negative f still has a real product derivative
    CHECK(product_derivative(parse_expr("x1 - 2"), 1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("multiplicative linearization") {
    CHECK(multiplicative_linearization(parse_expr("exp(x1^2)"), 1.0, 1.1) ==
          doctest::Approx(std::exp(1.2)).epsilon(1e-12));
    CHECK(multiplicative_linearization(parse_expr("exp(x1^2)"), 1.0, 1.0) ==
          doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(multiplicative_linearization(parse_expr("5^x1"), 0.0, 2.0) ==
          doctest::Approx(25.0).epsilon(1e-12));
    CHECK_THROWS_AS(multiplicative_linearization(parse_expr("x1 - 2"), 1.0, 1.5), DomainError);
}

TEST_CASE("geometric integral") {
    CHECK(geometric_integral(parse_expr("exp(x1)"), Interval(0, 1), kRule) ==
          doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    CHECK(geometric_integral(parse_expr("e"), Interval(0.5, 2.25), kRule) ==
          doctest::Approx(std::exp(1.75)).epsilon(1e-12));
    // analytic antiderivative x ln x - x gives 27 e^-2 on [1,3]
    CHECK(geometric_integral(parse_expr("x1"), Interval(1, 3), kRule) ==
          doctest::Approx(std::exp(3.0 * std::log(3.0) - 2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(geometric_integral(parse_expr("x1 - 0.5"), Interval(0, 1), kRule),
                    NonPositiveIntegrand);
}

TEST_CASE("riemann product oracle") {
    for (long n : {1L, 7L, 100L})
        CHECK(riemann_product_oracle(parse_expr("e"), Interval(0.25, 1.75), n) ==
              doctest::Approx(std::exp(1.5)).epsilon(1e-12));
    CHECK(riemann_product_oracle(parse_expr("x1"), Interval(1, 3), 1) == doctest::Approx(4.0));
    const double exact = std::exp(3.0 * std::log(3.0) - 2.0);
    CHECK(std::abs(riemann_product_oracle(parse_expr("x1"), Interval(1, 3), 100000) - exact) <=
          1e-6 * exact);
    CHECK_THROWS_AS(riemann_product_oracle(parse_expr("x1 - 2"), Interval(1, 3), 10),
                    NonPositiveIntegrand);
}

TEST_CASE("oracle converges at second order") {
    const double exact = std::exp(3.0 * std::log(3.0) - 2.0);
    std::vector<double> errors;
    for (long n : {1000L, 2000L, 4000L})
        errors.push_back(std::abs(riemann_product_oracle(parse_expr("x1"), Interval(1, 3), n) -
                                  exact) /
                         exact);
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        const double order = std::log2(errors[i] / errors[i + 1]);
        CHECK(order > 1.8);
        CHECK(order < 2.2);
    }
}

TEST_CASE("volterra integral") {
    CHECK(volterra_integral(parse_expr("1.5"), Interval(0, 2), kRule) ==
          doctest::Approx(std::exp(3.0)).epsilon(1e-12));
    CHECK(volterra_integral(parse_expr("cos(x1)"), Interval(0, M_PI / 2), kRule) ==
          doctest::Approx(M_E).epsilon(1e-8));
    // replacing g with ln f reproduces the geometric integral
    CHECK(volterra_integral(parse_expr("ln(exp(x1))"), Interval(0, 1), kRule) ==
          doctest::Approx(geometric_integral(parse_expr("exp(x1)"), Interval(0, 1), kRule))
              .epsilon(1e-12));
}

TEST_CASE("volterra riemann oracle") {
    for (long n : {1L, 13L}) CHECK(volterra_riemann_oracle(Expr(0.0), Interval(0, 5), n) == 1.0);
    CHECK(std::abs(volterra_riemann_oracle(parse_expr("cos(x1)"), Interval(0, M_PI / 2), 100000) -
                   M_E) <= 1e-4 * M_E);
    CHECK_THROWS_AS(volterra_riemann_oracle(parse_expr("0 - 1000"), Interval(0, 1), 10),
                    DegeneratePartition);
}

TEST_CASE("logarithmic derivative") {
    CHECK(log_derivative(parse_expr("x1^2"), 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double x : {0.1, 1.0, 4.2})
        CHECK(log_derivative(parse_expr("exp(3*x1)"), x) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(std::log(product_derivative(parse_expr("x1^2 + 1"), 1.0)) ==
          doctest::Approx(log_derivative(parse_expr("x1^2 + 1"), 1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(log_derivative(parse_expr("x1"), 0.0), DomainError);
}

TEST_CASE("sign profile") {
    SignProfile sine = sign_profile(parse_expr("sin(x1)"), Interval(0, 2 * M_PI), 1000);
    REQUIRE(sine.roots.size() == 1);
    CHECK(std::abs(sine.roots[0] - M_PI) <= 1e-9);
    REQUIRE(sine.segment_signs.size() == 2);
    CHECK(sine.segment_signs[0] == 1);
    CHECK(sine.segment_signs[1] == -1);
    CHECK(sine.negative_measure == doctest::Approx(M_PI).epsilon(1e-9));

    SignProfile neg = sign_profile(parse_expr("0 - 3"), Interval(0, 1));
    CHECK(neg.roots.empty());
    REQUIRE(neg.segment_signs.size() == 1);
    CHECK(neg.segment_signs[0] == -1);
    CHECK(neg.negative_measure == 1.0);

    SignProfile pos = sign_profile(parse_expr("x1^2 + 1"), Interval(-1, 1));
    CHECK(pos.roots.empty());
    CHECK(pos.segment_signs == std::vector<int>{1});
    CHECK(pos.negative_measure == 0.0);

    CHECK_THROWS_AS(sign_profile(Expr(0.0), Interval(0, 1)), DegenerateSign);
    // abs(x) - x vanishes on the whole right half
    CHECK_THROWS_AS(sign_profile(parse_expr("abs(x1) - x1"), Interval(-1, 1)), DegenerateSign);
}

TEST_CASE("signed geometric integral of negative constants") {
    const Expr minus3 = parse_expr("0 - 3");

    SignProfile p01 = sign_profile(minus3, Interval(0, 1));
    const ComplexScalar z1 = geometric_integral_signed(minus3, Interval(0, 1), kRule, p01);
    CHECK(std::abs(z1 - ComplexScalar(-3.0, 0.0)) <= 1e-10 * 3.0);

    SignProfile p02 = sign_profile(minus3, Interval(0, 2));
    const ComplexScalar z2 = geometric_integral_signed(minus3, Interval(0, 2), kRule, p02);
    CHECK(std::abs(z2 - ComplexScalar(9.0, 0.0)) <= 1e-10 * 9.0);
}

TEST_CASE("signed geometric integral of sine over a full period") {
    const Expr f = parse_expr("sin(x1)");
    const Interval I(0, 2 * M_PI);
    SignProfile profile = sign_profile(f, I, 1000);
    const ComplexScalar got = geometric_integral_signed(f, I, kRule, profile);
    const ComplexScalar expected = std::polar(std::pow(2.0, -2 * M_PI), M_PI * M_PI);
    CHECK(std::abs(got - expected) <= 1e-8 * std::abs(expected));
}

TEST_CASE("signed integral of a positive function matches the unsigned one") {
    const Expr f = parse_expr("x1^2 + 0.5");
    const Interval I(0.2, 1.9);
    SignProfile profile = sign_profile(f, I);
    const ComplexScalar z = geometric_integral_signed(f, I, kRule, profile);
    CHECK(std::abs(z.imag()) <= 1e-12);
    CHECK(z.real() == doctest::Approx(geometric_integral(f, I, kRule)).epsilon(1e-10));
}

TEST_CASE("signed integral of an everywhere-negative function carries the phase factor") {
    const Expr f = parse_expr("0 - (x1^2 + 1)");
    const Interval I(0.2, 1.5);
    SignProfile profile = sign_profile(f, I);
    const ComplexScalar got = geometric_integral_signed(f, I, kRule, profile);
    const double magnitude = geometric_integral(parse_expr("x1^2 + 1"), I, kRule);
    const ComplexScalar expected = std::polar(magnitude, M_PI * I.length());
    CHECK(std::abs(got - expected) <= 1e-10 * std::abs(expected));
}

TEST_CASE("geometric mean") {
    // sin over a full period has mean i/2
    const Expr f = parse_expr("sin(x1)");
    const Interval I(0, 2 * M_PI);
    SignProfile profile = sign_profile(f, I, 1000);
    const ComplexScalar mean = geometric_mean(f, I, kRule, profile);
    CHECK(std::abs(mean - ComplexScalar(0.0, 0.5)) <= 1e-6);

    // a negative constant is its own mean
    const Expr minus3 = parse_expr("0 - 3");
    SignProfile p = sign_profile(minus3, Interval(0.5, 2.75));
    const ComplexScalar cmean = geometric_mean(minus3, Interval(0.5, 2.75), kRule, p);
    CHECK(std::abs(cmean - ComplexScalar(-3.0, 0.0)) <= 1e-10 * 3.0);

    // f = x on [1,3]: (27 e^-2)^(1/2)
    const Expr x = parse_expr("x1");
    SignProfile px = sign_profile(x, Interval(1, 3));
    const ComplexScalar xmean = geometric_mean(x, Interval(1, 3), kRule, px);
    CHECK(std::abs(xmean - ComplexScalar(std::exp((3.0 * std::log(3.0) - 2.0) / 2.0), 0.0)) <=
          1e-10 * std::abs(xmean));
}

TEST_CASE("geometric mean of sine over a half period is 1/2") {
    const Expr f = parse_expr("sin(x1)");
    const Interval I(0, M_PI);
    SignProfile profile = sign_profile(f, I, 1000);
    const ComplexScalar mean = geometric_mean(f, I, kRule, profile);
    CHECK(std::abs(mean - ComplexScalar(0.5, 0.0)) <= 1e-8);
}

TEST_CASE("fundamental theorem: product derivative inverts the geometric integral") {
    std::mt19937 rng(31);
    const double a = 0.3;
    std::uniform_real_distribution<double> xdist(0.6, 1.6);
    const double delta = 1e-5;
    for (const char* fs : {"exp(sin(x1))", "x1^2 + 1", "5^x1"}) {
        const Expr f = parse_expr(fs);
        for (int trial = 0; trial < 3; ++trial) {
            const double x = xdist(rng);
            // symmetric ratio oracle for the derivative of F(x) = prod-int of f on [a,x]
            const double upper = geometric_integral(f, Interval(a, x + delta), kRule);
            const double lower = geometric_integral(f, Interval(a, x - delta), kRule);
            const double qF = std::pow(upper / lower, 1.0 / (2.0 * delta));
            CHECK(std::abs(qF - eval_at(f, x)) <= 1e-6 * std::abs(eval_at(f, x)));
        }
    }
}

TEST_CASE("fundamental theorem: geometric integral of the product derivative telescopes") {
    std::mt19937 rng(32);
    const double a = 0.3;
    std::uniform_real_distribution<double> xdist(0.6, 1.6);
    for (const char* fs : {"exp(sin(x1))", "x1^2 + 1", "5^x1"}) {
        const Expr f = parse_expr(fs);
        const Expr qf = exp(diff(f, 1) / f);  // product derivative as a field
        for (int trial = 0; trial < 3; ++trial) {
            const double x = xdist(rng);
            const double got = geometric_integral(qf, Interval(a, x), kRule);
            const double expected = eval_at(f, x) / eval_at(f, a);
            CHECK(std::abs(got - expected) <= 1e-8 * std::abs(expected));
        }
    }
}

TEST_CASE("volterra fundamental theorems") {
    std::mt19937 rng(33);
    const double a = 0.3;
    std::uniform_real_distribution<double> xdist(0.6, 1.6);
    const double delta = 1e-5;

    // the volterra integral of the logarithmic derivative telescopes
    for (const char* fs : {"exp(sin(x1))", "x1^2 + 1", "5^x1"}) {
        const Expr f = parse_expr(fs);
        const Expr lf = simplify(diff(f, 1) / f);
        for (int trial = 0; trial < 3; ++trial) {
            const double x = xdist(rng);
            const double got = volterra_integral(lf, Interval(a, x), kRule);
            const double expected = eval_at(f, x) / eval_at(f, a);
            CHECK(std::abs(got - expected) <= 1e-8 * std::abs(expected));
        }
    }

    // the logarithmic derivative recovers the integrand of a volterra integral
    for (const char* gs : {"cos(x1)", "x1^2 + 0.5", "exp(0 - x1)"}) {
        const Expr g = parse_expr(gs);
        for (int trial = 0; trial < 3; ++trial) {
            const double x = xdist(rng);
            const double upper = volterra_integral(g, Interval(a, x + delta), kRule);
            const double lower = volterra_integral(g, Interval(a, x - delta), kRule);
            const double ell = (std::log(upper) - std::log(lower)) / (2.0 * delta);
            CHECK(std::abs(ell - eval_at(g, x)) <= 1e-6 * (1.0 + std::abs(eval_at(g, x))));
        }
    }
}

TEST_CASE("volterra integral of ln f equals the geometric integral of f") {
    for (const char* fs : {"exp(x1)", "x1^2 + 1"}) {
        const Expr f = parse_expr(fs);
        const Expr lnf = ln(f);
        const Interval I(0.5, 2.0);
        const double a = volterra_integral(lnf, I, kRule);
        const double b = geometric_integral(f, I, kRule);
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(b));
    }
}

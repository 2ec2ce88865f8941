// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "prodcalc/forms.hpp"
#include "prodcalc/geometry.hpp"
#include "prodcalc/mulcalc.hpp"
#include "prodcalc/quad.hpp"
#include "prodcalc/stokes.hpp"
#include "test_util.hpp"

using namespace prodcalc;

namespace {

int failures = 0;

void report(int number, bool pass, const std::string& label, const std::string& detail) {
    std::printf("%s %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, label.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

const QuadratureRule kAdaptive = QuadratureRule::adaptive();
const QuadratureRule kFixed16 = QuadratureRule::fixed(16);

double eval_at(const Expr& f, double x) {
    Eigen::VectorXd p(1);
    p[0] = x;
    return eval(f, p);
}

// 1. geometric mean of sine over a full period equals i/2 within 1e-6, < 5 s
void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const Expr f = parse_expr("sin(x1)");
    const Interval I(0.0, 2.0 * M_PI);
    const SignProfile profile = sign_profile(f, I, 1000);
    const ComplexScalar mean = geometric_mean(f, I, kAdaptive, profile);
    const double elapsed = seconds_since(start);
    const double err_re = std::abs(mean.real());
    const double err_im = std::abs(mean.imag() - 0.5);
    report(1, err_re <= 1e-6 && err_im <= 1e-6 && elapsed < 5.0,
           "geometric mean of sine over a full period is i/2",
           "|re|=" + fmt(err_re) + ", |im-1/2|=" + fmt(err_im) + ", " + fmt(elapsed) + " s");
}

// 2. product integral of sine over a half period is 2^-pi (1e-6 relative) and
//    its geometric mean is 1/2 (1e-8 absolute)
void criterion_2() {
    const Expr f = parse_expr("sin(x1)");
    const Interval I(0.0, M_PI);
    const double integral = geometric_integral(f, I, kAdaptive);
    const double expected = std::pow(2.0, -M_PI);
    const double rel = std::abs(integral - expected) / expected;

    const SignProfile profile = sign_profile(f, I, 1000);
    const ComplexScalar mean = geometric_mean(f, I, kAdaptive, profile);
    const double mean_err = std::abs(mean - ComplexScalar(0.5, 0.0));
    report(2, rel <= 1e-6 && mean_err <= 1e-8,
           "product integral of sine over a half period",
           "rel=" + fmt(rel) + ", |mean-1/2|=" + fmt(mean_err));
}

// 3. randomized boundary/differential agreement: 100 cases, each within 1e-8,
//    under 60 s with fixed order-16 quadrature
void criterion_3() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(20250809);
    const std::pair<int, int> shapes[] = {{2, 0}, {2, 1}, {3, 0}, {3, 1}, {3, 2}};
    double worst = 0.0;
    int cases = 0;
    for (const auto& [n, p] : shapes) {
        for (int trial = 0; trial < 20; ++trial) {
            const ProductForm alpha = testutil::random_exp_poly_form(rng, n, p);
            const Chain c = testutil::random_chain(rng, n, p + 1);
            const StokesReport rep = stokes_check(alpha, c, kFixed16);
            worst = std::max(worst, rep.log_discrepancy);
            ++cases;
        }
    }
    const double elapsed = seconds_since(start);
    report(3, worst <= 1e-8 && cases == 100 && elapsed < 60.0,
           "randomized boundary vs q-side agreement, 100 cases",
           "worst=" + fmt(worst) + ", " + fmt(elapsed) + " s");
}

// 4. three-way proof identity for 20 random A = exp(poly<=3), n in {1,2}
void criterion_4() {
    std::mt19937 rng(4);
    double worst = 0.0;
    for (int n : {1, 2}) {
        for (int trial = 0; trial < 10; ++trial) {
            const Expr A = exp(testutil::random_poly(rng, n + 1, 3, -1.0, 1.0));
            const ProofIdentityReport rep = proof_identity_check(A, n, kFixed16);
            worst = std::max(worst, rep.max_log_discrepancy);
        }
    }
    report(4, worst <= 1e-8, "boundary, q-side, and closed form agree pairwise",
           "worst=" + fmt(worst));
}

// 5. the second q differential vanishes: 50 random 0- and 1-forms in R^3,
//    log coefficients <= 1e-10 at 100 random points
void criterion_5() {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coord(0.1, 0.9);
    std::vector<Eigen::VectorXd> points;
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd p(3);
        for (int d = 0; d < 3; ++d) p[d] = coord(rng);
        points.push_back(std::move(p));
    }
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int p = trial % 2;
        const ProductForm alpha = testutil::random_form(rng, 3, p);
        const ProductForm qq = q_diff(q_diff(alpha));
        worst = std::max(worst, max_log_difference(qq, identity_form(3, p + 2), points));
    }
    report(5, worst <= 1e-10, "second q differential is the identity form",
           "worst=" + fmt(worst));
}

// 6. fundamental-theorem round trips at their stated tolerances
void criterion_6() {
    std::mt19937 rng(6);
    const double a = 0.3;
    std::uniform_real_distribution<double> xdist(0.6, 1.6);
    const double delta = 1e-5;
    double worst4 = 0.0, worst5 = 0.0, worst15 = 0.0, worst16 = 0.0;
    for (const char* fs : {"exp(sin(x1))", "x1^2 + 1", "5^x1"}) {
        const Expr f = parse_expr(fs);
        const Expr qf = exp(diff(f, 1) / f);
        const Expr lf = simplify(diff(f, 1) / f);
        for (int trial = 0; trial < 4; ++trial) {
            const double x = xdist(rng);
            // derivative of the running integral recovers the integrand
            const double upper = geometric_integral(f, Interval(a, x + delta), kAdaptive);
            const double lower = geometric_integral(f, Interval(a, x - delta), kAdaptive);
            const double qF = std::pow(upper / lower, 1.0 / (2.0 * delta));
            worst4 = std::max(worst4, std::abs(qF - eval_at(f, x)) / std::abs(eval_at(f, x)));

            // integral of the derivative telescopes
            const double ratio = eval_at(f, x) / eval_at(f, a);
            worst5 = std::max(worst5,
                              std::abs(geometric_integral(qf, Interval(a, x), kAdaptive) - ratio) /
                                  std::abs(ratio));
            worst16 = std::max(worst16,
                               std::abs(volterra_integral(lf, Interval(a, x), kAdaptive) - ratio) /
                                   std::abs(ratio));

            // logarithmic derivative of the running Volterra integral
            const double vu = volterra_integral(lf, Interval(a, x + delta), kAdaptive);
            const double vl = volterra_integral(lf, Interval(a, x - delta), kAdaptive);
            const double ell = (std::log(vu) - std::log(vl)) / (2.0 * delta);
            worst15 = std::max(worst15, std::abs(ell - eval_at(lf, x)) /
                                            (1.0 + std::abs(eval_at(lf, x))));
        }
    }
    report(6,
           worst4 <= 1e-6 && worst5 <= 1e-8 && worst15 <= 1e-6 && worst16 <= 1e-8,
           "fundamental-theorem round trips",
           "deriv-of-integral=" + fmt(worst4) + ", integral-of-deriv=" + fmt(worst5) +
               ", volterra=" + fmt(worst16) + ", log-deriv=" + fmt(worst15));
}

// 7. signed product integrals of the constant -3
void criterion_7() {
    const Expr minus3 = parse_expr("0 - 3");
    const SignProfile p1 = sign_profile(minus3, Interval(0, 1));
    const SignProfile p2 = sign_profile(minus3, Interval(0, 2));
    const ComplexScalar z1 = geometric_integral_signed(minus3, Interval(0, 1), kAdaptive, p1);
    const ComplexScalar z2 = geometric_integral_signed(minus3, Interval(0, 2), kAdaptive, p2);
    const double e1 = std::abs(z1 - ComplexScalar(-3.0, 0.0)) / 3.0;
    const double e2 = std::abs(z2 - ComplexScalar(9.0, 0.0)) / 9.0;
    report(7, e1 <= 1e-10 && e2 <= 1e-10, "signed integrals of the constant -3",
           "rel errors " + fmt(e1) + ", " + fmt(e2));
}

// 8. midpoint product oracle: 1e-6 at n = 4096 and observed order about 2
void criterion_8() {
    const Expr f = parse_expr("x1");
    const Interval I(1, 3);
    const double exact = std::exp(3.0 * std::log(3.0) - 2.0);
    const double rel4096 = std::abs(riemann_product_oracle(f, I, 4096) - exact) / exact;

    std::vector<double> errors;
    for (long n : {1000L, 2000L, 4000L})
        errors.push_back(std::abs(riemann_product_oracle(f, I, n) - exact) / exact);
    double min_order = HUGE_VAL, max_order = 0.0;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        const double order = std::log2(errors[i] / errors[i + 1]);
        min_order = std::min(min_order, order);
        max_order = std::max(max_order, order);
    }
    report(8, rel4096 <= 1e-6 && min_order >= 1.8 && max_order <= 2.2,
           "midpoint product oracle converges at second order",
           "rel(n=4096)=" + fmt(rel4096) + ", order in [" + fmt(min_order) + ", " +
               fmt(max_order) + "]");
}

// 9. algebra axiom suites at 1e-12 on log coefficients, 200 random draws
void criterion_9() {
    std::mt19937 rng(9);
    const auto points = sample_points(3, 8);
    std::uniform_real_distribution<double> sdist(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int p = std::uniform_int_distribution<int>(0, 2)(rng);
        const ProductForm alpha = testutil::random_form(rng, 3, p);
        const ProductForm beta = testutil::random_form(rng, 3, p);
        const ProductForm gamma = testutil::random_form(rng, 3, p);
        const double s = sdist(rng), t = sdist(rng);
        worst = std::max(worst, max_log_difference(oplus(alpha, beta), oplus(beta, alpha), points));
        worst = std::max(worst, max_log_difference(oplus(alpha, oplus(beta, gamma)),
                                                   oplus(oplus(alpha, beta), gamma), points));
        worst = std::max(worst,
                         max_log_difference(scalar_odot(s, oplus(alpha, beta)),
                                            oplus(scalar_odot(s, alpha), scalar_odot(s, beta)),
                                            points));
        worst = std::max(worst,
                         max_log_difference(scalar_odot(s + t, alpha),
                                            oplus(scalar_odot(s, alpha), scalar_odot(t, alpha)),
                                            points));
        worst = std::max(worst, max_log_difference(scalar_odot(s * t, alpha),
                                                   scalar_odot(s, scalar_odot(t, alpha)), points));
        worst = std::max(worst, max_log_difference(scalar_odot(1.0, alpha), alpha, points));
        worst = std::max(worst, max_log_difference(oplus(alpha, inverse(alpha)),
                                                   identity_form(3, p), points));
    }
    // antisymmetry across degree combinations
    for (int trial = 0; trial < 50; ++trial) {
        for (auto [p, q] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}}) {
            const ProductForm alpha = testutil::random_form(rng, 3, p);
            const ProductForm beta = testutil::random_form(rng, 3, q);
            worst = std::max(
                worst, max_log_difference(wedge_p(alpha, beta),
                                          scalar_odot(std::pow(-1.0, p * q), wedge_p(beta, alpha)),
                                          points));
        }
    }
    // distributivity over oplus for forms on disjoint slots
    for (int trial = 0; trial < 50; ++trial) {
        const ProductForm alpha = testutil::random_form(rng, 3, 1);
        ProductForm beta(3, 1), gamma(3, 1);
        beta.with_coefficient({1}, testutil::random_positive_expr(rng, 3));
        gamma.with_coefficient({2}, testutil::random_positive_expr(rng, 3));
        worst = std::max(worst, max_log_difference(wedge_p(alpha, oplus(beta, gamma)),
                                                   oplus(wedge_p(alpha, beta),
                                                         wedge_p(alpha, gamma)),
                                                   points));
    }
    // log bridge homomorphism
    for (int trial = 0; trial < 50; ++trial) {
        const ProductForm alpha = testutil::random_form(rng, 3, 1);
        const ProductForm beta = testutil::random_form(rng, 3, 1);
        const double s = sdist(rng);
        worst = std::max(worst, max_coefficient_difference(log_map(oplus(alpha, beta)),
                                                           add(log_map(alpha), log_map(beta)),
                                                           points));
        worst = std::max(worst, max_coefficient_difference(log_map(scalar_odot(s, alpha)),
                                                           scale(s, log_map(alpha)), points));
    }
    report(9, worst <= 1e-12, "vector-space, antisymmetry, distributivity, log-bridge axioms",
           "worst=" + fmt(worst));
}

// 10. the associativity and Leibniz diagnostics are honest
void criterion_10() {
    const auto points = sample_points(3, 16);

    ProductForm ma(3, 1), mb(3, 1), mc(3, 1);
    ma.with_coefficient({1}, parse_expr("exp(x2)"));
    mb.with_coefficient({2}, parse_expr("x1^2 + 1"));
    mc.with_coefficient({3}, parse_expr("exp(x1*x3)"));
    const double assoc_monomial = check_associativity(ma, mb, mc, points).max_abs_difference;

    ProductForm da(3, 1), db(3, 1), dc(3, 1);
    const double as[] = {2, 3, 5}, bs[] = {7, 11, 13}, cs[] = {17, 19, 23};
    for (int i = 0; i < 3; ++i) {
        da.with_coefficient({i + 1}, Expr(as[i]));
        db.with_coefficient({i + 1}, Expr(bs[i]));
        dc.with_coefficient({i + 1}, Expr(cs[i]));
    }
    const double assoc_dense = check_associativity(da, db, dc, points).max_abs_difference;

    ProductForm ca(3, 1), cb(3, 1);
    ca.with_coefficient({1}, Expr(2.0));
    cb.with_coefficient({2}, Expr(3.0));
    const double leibniz_const = check_leibniz(ca, cb, points).max_abs_difference;

    ProductForm na(3, 1), nb(3, 1);
    na.with_coefficient({1}, parse_expr("exp(x2)"));
    nb.with_coefficient({2}, parse_expr("exp(x3)"));
    const double leibniz_nonconst = check_leibniz(na, nb, points).max_abs_difference;

    report(10,
           assoc_monomial <= 1e-12 && assoc_dense > 1e-3 && leibniz_const <= 1e-12 &&
               leibniz_nonconst > 1e-3,
           "associativity and product-rule diagnostics stay honest",
           "assoc " + fmt(assoc_monomial) + " / " + fmt(assoc_dense) + ", product-rule " +
               fmt(leibniz_const) + " / " + fmt(leibniz_nonconst));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}

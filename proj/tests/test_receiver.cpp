#include "pnsc/quadrature.hpp"
#include "pnsc/receiver.hpp"
#include "pnsc/stable.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pnsc;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double r = lo; r <= hi + 1e-12; r += step) g.push_back(r);
    return g;
}

LrtSpec spec(double alpha, Regime regime, double gamma_tilde = 1.0) {
    LrtSpec s;
    s.alpha = alpha;
    s.gamma_tilde = gamma_tilde;
    s.regime = regime;
    return s;
}

// 1 - E log2(1 + f(s + d) / f(s)) with s from the standardized density f.
double capacity_by_quadrature(double alpha, double d) {
    const StableParams p{alpha, 0.0, 1.0, 0.0};
    auto integrand = [&](double s) {
        const double f0 = stable::pdf(p, s);
        if (f0 == 0.0) return 0.0;
        return f0 * std::log2(1.0 + stable::pdf(p, s + d) / f0);
    };
    QuadControl qc;
    qc.abs_tol = 1e-10;
    qc.rel_tol = 1e-9;
    double total = 0.0;
    const std::vector<double> cuts{-1e4, -200.0, -40.0, -d - 5, -d / 2, 0.0, 5.0, 40.0, 200.0, 1e4};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += quad::integrate(integrand, cuts[i], cuts[i + 1], qc).value;
    return 1.0 - total;
}

}  // namespace

TEST(Lrt, CauchyValues) {
    const auto c = spec(1.0, Regime::Cauchy);
    EXPECT_EQ(lrt(c, 0.0), 1.0);
    // f(r | H0) / f(r | H1) at r = 1 is 5; its reciprocal is (1 + 0) / (1 + 4).
    EXPECT_NEAR(lrt(c, 1.0), 5.0, 1e-15);
    EXPECT_NEAR(1.0 / lrt(c, 1.0), 0.2, 1e-15);
    for (double g : {0.3, 1.0, 4.0})
        for (double r : grid(-10, 10, 0.25)) {
            const auto s = spec(1.0, Regime::Cauchy, g);
            const double ratio = stable::pdf({1.0, 0.0, g, 1.0}, r) / stable::pdf({1.0, 0.0, g, -1.0}, r);
            EXPECT_NEAR(lrt(s, r) / ratio, 1.0, 1e-12) << g << " " << r;
            EXPECT_NEAR(lrt(s, r) * lrt(s, -r), 1.0, 1e-12);
        }
}

TEST(Lrt, MonotoneForCauchyAndGaussian) {
    for (double g : {0.5, 1.0, 2.0}) {
        const auto c = spec(1.0, Regime::Cauchy, g);
        const double edge = std::sqrt(1 + g * g);
        double prev = -INFINITY;
        for (double r : grid(-edge + 1e-9, edge - 1e-9, edge / 50)) {
            const double v = log_lrt(c, r);
            EXPECT_GT(v, prev) << r;
            prev = v;
        }
        const auto n = spec(2.0, Regime::Gaussian, g);
        prev = -INFINITY;
        for (double r : grid(-40, 40, 0.5)) {
            const double v = log_lrt(n, r);
            EXPECT_NEAR(v, r / (g * g), 1e-12 * std::max(1.0, std::abs(v)));
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(Lrt, GeneralSeriesAtAlphaOneIsCauchy) {
    for (double r : grid(-6, 6, 0.3)) EXPECT_EQ(lrt(spec(1.0, Regime::GeneralSeries), r), lrt(spec(1.0, Regime::Cauchy), r));
    for (double r : grid(-6, 6, 0.3))
        EXPECT_NEAR(log_lrt(spec(2.0, Regime::GeneralSeries, 0.7), r), log_lrt(spec(2.0, Regime::Gaussian, 0.7), r),
                    1e-13);
}

TEST(Lrt, SeriesMatchesInversion) {
    for (double a : {1.4, 1.8}) {
        const auto w = regime_window(Regime::GeneralSeries, a);
        EXPECT_GE(w.hi, 2.0) << a;
        RecordProperty("series_window_" + std::to_string(a), std::to_string(w.hi));
        EXPECT_EQ(w.lo, 0.0);
        const auto s = spec(a, Regime::GeneralSeries);
        const auto m = spec(a, Regime::MonteCarlo);
        for (double r : grid(-1, 1, 0.05)) EXPECT_NEAR(lrt(s, r) / lrt(m, r), 1.0, 1e-4) << a << " " << r;
        // Everywhere on the recorded window.
        const double reach = w.hi - 1.0 - 1e-9;
        for (double r : grid(-reach, reach, reach / 40)) {
            EXPECT_NEAR(lrt(s, r) / lrt(m, r), 1.0, 1e-4) << a << " " << r;
            EXPECT_NEAR(log_lrt(s, r) + log_lrt(s, -r), 0.0, 1e-8);
        }
        EXPECT_THROW(lrt(s, w.hi + 1.2), ValidityError);
    }
    // alpha < 1: the expansion is trusted away from the hypotheses.
    const auto w = regime_window(Regime::GeneralSeries, 0.5);
    EXPECT_GT(w.lo, 0.0);
    EXPECT_TRUE(std::isinf(w.hi));
    const auto s = spec(0.5, Regime::GeneralSeries);
    EXPECT_THROW(lrt(s, 1.0), ValidityError);
    for (double r : {1.0 + w.lo + 0.3, 5.0, 20.0}) {
        EXPECT_NEAR(lrt(s, r) / lrt(spec(0.5, Regime::MonteCarlo), r), 1.0, 1e-4) << r;
        EXPECT_NEAR(log_lrt(s, r) + log_lrt(s, -r), 0.0, 1e-8);
    }
}

TEST(Lrt, HoltsmarkAgainstHistogram) {
    const auto h = spec(1.5, Regime::Holtsmark);
    const auto r = grid(-3, 3, 0.25);
    const auto mc = histogram_lrt(h, r, 4'000'000, 0.05, 11);
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_NEAR(log_lrt(h, r[i]), mc[i].log_lambda, 4 * mc[i].se) << r[i];
        EXPECT_NEAR(log_lrt(h, r[i]) + log_lrt(h, -r[i]), 0.0, 1e-8);
    }
    EXPECT_THROW(lrt(h, 3.5), ValidityError);
    const auto curve = lrt_curve(h, grid(-5, 5, 0.25));
    for (std::size_t i = 0; i < curve.r.size(); ++i) {
        const bool inside = std::abs(curve.r[i]) <= 3.0 + 1e-12;
        EXPECT_EQ(curve.regime_used[i], inside ? Regime::Holtsmark : Regime::MonteCarlo) << curve.r[i];
        EXPECT_EQ(curve.valid[i], inside);
        EXPECT_GT(curve.lambda[i], 0.0);
    }
    ASSERT_TRUE(curve.validity_window);
    EXPECT_NEAR(curve.validity_window->first, -3.0, 1e-12);
    EXPECT_NEAR(curve.validity_window->second, 3.0, 1e-12);
}

TEST(Lrt, WhittakerAgainstHistogram) {
    const auto w = spec(2.0 / 3.0, Regime::Whittaker);
    std::vector<double> r;
    for (double v : grid(-3, 3, 0.25))
        if (std::abs(std::abs(v) - 1.0) >= 0.05) r.push_back(v);
    const auto mc = histogram_lrt(w, r, 4'000'000, 0.05, 12);
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_NEAR(log_lrt(w, r[i]), mc[i].log_lambda, 4 * mc[i].se) << r[i];
        EXPECT_NEAR(log_lrt(w, r[i]) + log_lrt(w, -r[i]), 0.0, 1e-8);
    }
    EXPECT_THROW(lrt(w, 1.02), ValidityError);
    const auto curve = lrt_curve(w, {-1.0, -0.97, 0.5, 1.03, 2.0});
    EXPECT_EQ(curve.regime_used[0], Regime::MonteCarlo);
    EXPECT_EQ(curve.regime_used[1], Regime::MonteCarlo);
    EXPECT_EQ(curve.regime_used[2], Regime::Whittaker);
    EXPECT_EQ(curve.regime_used[3], Regime::MonteCarlo);
    EXPECT_TRUE(curve.valid[2] && curve.valid[4]);
    EXPECT_NEAR(curve.lambda[0] * lrt(spec(2.0 / 3.0, Regime::MonteCarlo), 1.0), 1.0, 1e-8);
}

TEST(Lrt, Validation) {
    EXPECT_THROW(lrt(spec(1.2, Regime::Cauchy), 0.0), DomainError);
    EXPECT_THROW(lrt(spec(1.0, Regime::Holtsmark), 0.0), DomainError);
    EXPECT_THROW(lrt(spec(1.0, Regime::Whittaker), 0.0), DomainError);
    EXPECT_THROW(lrt(spec(1.9, Regime::Gaussian), 0.0), DomainError);
    auto s = spec(1.0, Regime::Cauchy);
    s.x_h1 = s.x_h0;
    EXPECT_THROW(lrt(s, 0.0), DomainError);
    EXPECT_THROW(lrt_curve(spec(1.0, Regime::Cauchy), {}), DomainError);
    for (auto r : {Regime::Cauchy, Regime::Holtsmark, Regime::Whittaker, Regime::GeneralSeries, Regime::Gaussian,
                   Regime::MonteCarlo})
        EXPECT_EQ(regime_from_string(to_string(r)), r);
    EXPECT_THROW(regime_from_string("nope"), DomainError);
    EXPECT_EQ(natural_regime(1.5), Regime::Holtsmark);
    EXPECT_EQ(natural_regime(2.0 / 3.0), Regime::Whittaker);
    EXPECT_EQ(natural_regime(1.3), Regime::GeneralSeries);
}

TEST(Capacity, Limits) {
    const auto clean = biso_capacity(spec(1.0, Regime::Cauchy, 1e-6), 20'000, 1);
    EXPECT_NEAR(clean.bits, 1.0, 0.01);
    const auto useless = biso_capacity(spec(1.0, Regime::Cauchy, 1e6), 20'000, 2);
    EXPECT_NEAR(useless.bits, 0.0, 0.01);
    // 0 dB: unit amplitude and unit noise variance 2 gamma^2.
    const double g = 1.0 / std::sqrt(2.0);
    const auto gauss = biso_capacity(spec(2.0, Regime::Gaussian, g), 200'000, 3);
    EXPECT_NEAR(gauss.bits, capacity_by_quadrature(2.0, 2.0 / g), 0.005);
    EXPECT_NEAR(gauss.bits, capacity_by_quadrature(2.0, 2.0 / g), 4 * gauss.std_error);
}

TEST(Capacity, TabulatedDensityAgainstQuadrature) {
    for (double a : {0.7, 1.5}) {
        const auto c = biso_capacity(spec(a, Regime::MonteCarlo, 0.8), 200'000, 4);
        EXPECT_NEAR(c.bits, capacity_by_quadrature(a, 2.0 / 0.8), 4 * c.std_error) << a;
    }
}

TEST(Capacity, BoundedAndMonotone) {
    std::vector<CapacityEstimate> v;
    for (double g : {0.1, 0.3, 1.0, 3.0, 10.0}) {
        v.push_back(biso_capacity(spec(1.0, Regime::Cauchy, g), 50'000, 5));
        EXPECT_GE(v.back().bits, 0.0);
        EXPECT_LE(v.back().bits, 1.0);
    }
    for (std::size_t i = 1; i < v.size(); ++i)
        EXPECT_LE(v[i].bits, v[i - 1].bits + 2 * std::hypot(v[i].std_error, v[i - 1].std_error));
    const auto a = biso_capacity(spec(1.0, Regime::Cauchy, 0.5), 30'000, 9, 1);
    const auto b = biso_capacity(spec(1.0, Regime::Cauchy, 0.5), 30'000, 9, 3);
    EXPECT_EQ(a.bits, b.bits);
    EXPECT_THROW(biso_capacity(spec(1.0, Regime::Cauchy), 100, 1), DomainError);
}

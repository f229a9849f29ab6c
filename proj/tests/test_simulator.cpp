#include "pnsc/error.hpp"
#include "pnsc/mixture.hpp"
#include "pnsc/simulator.hpp"
#include "pnsc/stats.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace pnsc;
using test_support::ks_interpolated;
using test_support::median;

namespace {

constexpr double kPi = 3.14159265358979323846;

FieldConfig field(double sigma, double expected, double lambda = 1.0 / kPi) {
    FieldConfig c;
    c.sigma = sigma;
    c.intensity = Homogeneous{lambda};
    c.r_t = std::sqrt(expected / (lambda * kPi));
    return c;
}

std::vector<double> moduli(const IQBatch& b, int carrier) {
    std::vector<double> m(b.replicates);
    for (std::size_t r = 0; r < b.replicates; ++r) m[r] = std::abs(b.at(r, carrier));
    return m;
}

// One million single-carrier replicates at sigma = 4 with 1e4 expected
// interferers, shared by the checks that need that much data.
const IQBatch& reference_batch() {
    static const IQBatch b = synthesize(field(4.0, 1e4), 1'000'000, 2024);
    return b;
}

double poisson_pmf(double mean, int n) { return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0)); }

// Chi-square of interferer counts from draw_field against Poisson(expected_count).
stats::TestResult count_gof(const FieldConfig& cfg, int draws, std::uint64_t seed) {
    const double mean = expected_count(cfg);
    const int top = static_cast<int>(mean + 10 * std::sqrt(mean) + 10);
    std::vector<double> observed(top + 1, 0.0), expected(top + 1, 0.0);
    auto rng = make_stream(seed, 0);
    for (int i = 0; i < draws; ++i) observed[std::min<std::size_t>(top, draw_field(cfg, 0, rng).size())] += 1.0;
    double head = 0.0;
    for (int n = 0; n < top; ++n) {
        expected[n] = draws * poisson_pmf(mean, n);
        head += expected[n];
    }
    expected[top] = draws - head;
    return stats::chi_square_gof(observed, expected);
}

}  // namespace

TEST(Field, CountAndRadialLaw) {
    const auto cfg = field(4.0, 5.0);
    auto rng = make_stream(1, 0);
    double total = 0.0;
    std::vector<double> radii;
    for (int i = 0; i < 100'000; ++i) {
        const auto f = draw_field(cfg, 2, rng);
        total += f.size();
        for (const auto& it : f) {
            radii.push_back(it.r);
            ASSERT_EQ(it.a.size(), 2u);
            ASSERT_TRUE(std::abs(it.a[0]) == 1.0);
            ASSERT_TRUE(it.phase[1] >= 0.0 && it.phase[1] < 2 * kPi);
            ASSERT_TRUE(it.phi >= 0.0 && it.phi < 2 * kPi);
        }
    }
    EXPECT_NEAR(total / 100'000, 5.0, 0.03);
    radii.resize(100'000);
    const double rt2 = cfg.r_t * cfg.r_t;
    EXPECT_GT(stats::ks_one_sample(radii, [&](double r) { return std::clamp(r * r / rt2, 0.0, 1.0); }).p_value, 0.01);
}

TEST(Field, SectorHalvesTheCount) {
    auto cfg = field(4.0, 8.0);
    const double full = expected_count(cfg);
    cfg.intensity = Sector{1.0 / kPi, kPi};
    EXPECT_NEAR(expected_count(cfg), full / 2, 1e-12);
    auto rng = make_stream(3, 0);
    double total = 0.0;
    for (int i = 0; i < 100'000; ++i) {
        const auto f = draw_field(cfg, 0, rng);
        total += f.size();
        for (const auto& it : f) ASSERT_LT(it.phi, kPi);
    }
    EXPECT_NEAR(total / 100'000, full / 2, 4 * std::sqrt(full / 2 / 100'000));
}

TEST(Field, MapIntensity) {
    FieldConfig c;
    c.intensity = SpatialPowerLaw{1.0, 2.0};
    EXPECT_NEAR(map_intensity(c), kPi, 1e-15);
    c.intensity = Sector{4.0, kPi / 2};
    EXPECT_NEAR(map_intensity(c), 1.0, 1e-15);
    c.intensity = TimeProfile{{0.0, 1.0, 2.5, 4.0}, {3.0, 3.0, 3.0, 3.0}, 3.5, 2.0};
    EXPECT_NEAR(map_intensity(c), 6.0, 1e-14);
    c.intensity = TimeProfile{{0.0, 2.0}, {0.0, 4.0}, 2.0, 1.0};  // integral of 2t over [1, 2]
    EXPECT_NEAR(map_intensity(c), 3.0, 1e-14);
    c.intensity = Homogeneous{0.7};
    EXPECT_EQ(map_intensity(c), 0.7);

    c.intensity = TimeProfile{};
    EXPECT_THROW(map_intensity(c), ConfigError);
    c.intensity = TimeProfile{{0.0, 1.0}, {1.0, 1.0}, 2.0, 1.0};
    EXPECT_THROW(map_intensity(c), ConfigError);
    c.intensity = SpatialPowerLaw{1.0, 4.0};
    EXPECT_THROW(c.validate(), ConfigError);
    c.intensity = Sector{1.0, 7.0};
    EXPECT_THROW(c.validate(), ConfigError);
    c.intensity = Homogeneous{1.0};
    c.sigma = 2.0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Field, CarrierLawOfMappedFields) {
    FieldConfig c;
    c.sigma = 4.0;
    c.intensity = SpatialPowerLaw{1.0, 2.0};
    const auto spl = carrier_law_of(c);
    EXPECT_NEAR(spl.sigma, 4.0, 1e-15);
    EXPECT_NEAR(spl.lambda_spatial, 1.0, 1e-15);
    c.intensity = SpatialPowerLaw{1.0, 1.0};
    EXPECT_NEAR(carrier_law_of(c).sigma, 8.0, 1e-15);
    c.intensity = Sector{2.0, kPi};
    EXPECT_NEAR(carrier_law_of(c).lambda_spatial, 1.0, 1e-15);
    c.fading = {AmplitudeLaw::Kind::Rayleigh, 1.0};
    c.channel = {ChannelLaw::Kind::Gaussian, 2.0};
    // alpha = 1: E A = sqrt(pi/2), E|c| = 2 sqrt(2/pi).
    EXPECT_NEAR(carrier_law_of(c).moment_ac, std::sqrt(kPi / 2) * 2 * std::sqrt(2 / kPi), 1e-14);
}

TEST(Field, CountChiSquareForEveryKind) {
    FieldConfig c = field(4.0, 6.0);
    EXPECT_GT(count_gof(c, 50'000, 5).p_value, 0.01);
    c.intensity = TimeProfile{{0.0, 1.0, 2.0}, {0.1, 0.4, 0.2}, 2.0, 1.5};
    EXPECT_GT(count_gof(c, 50'000, 6).p_value, 0.01);
    c.intensity = SpatialPowerLaw{0.5, 1.5};
    EXPECT_GT(count_gof(c, 50'000, 7).p_value, 0.01);
    c.intensity = Sector{1.0, 2.0};
    EXPECT_GT(count_gof(c, 50'000, 8).p_value, 0.01);
}

TEST(Synthesize, EmptyFieldIsZero) {
    FieldConfig c = field(4.0, 1e-14);
    c.bandwidth = BandwidthLaw::poisson(2.0, 3);
    for (auto mode : {SimMode::Direct, SimMode::Hybrid}) {
        const auto b = synthesize(c, 5000, 1, {mode, 8, 1});
        for (const auto& v : b.samples) ASSERT_EQ(v, std::complex<double>{});
        for (auto k : b.k_used) ASSERT_TRUE(k >= 1 && k <= 3);
    }
}

TEST(Synthesize, ReproducibleAcrossThreadCounts) {
    FieldConfig c = field(3.0, 1e4);
    c.bandwidth = BandwidthLaw::poisson_gamma(2.0, 1.0, 5);
    const auto a = synthesize(c, 20'000, 77, {SimMode::Hybrid, 16, 1});
    const auto b = synthesize(c, 20'000, 77, {SimMode::Hybrid, 16, 3});
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.k_used, b.k_used);
    const auto d = synthesize(c, 20'000, 78, {SimMode::Hybrid, 16, 1});
    EXPECT_NE(a.samples, d.samples);
    for (std::size_t r = 0; r < a.replicates; ++r)
        for (int k = static_cast<int>(a.k_used[r]); k < a.k_max; ++k) ASSERT_EQ(a.at(r, k), std::complex<double>{});
}

TEST(Synthesize, CarrierCountFollowsTruncatedLaw) {
    FieldConfig c = field(4.0, 100.0);
    c.bandwidth = BandwidthLaw::poisson(3.0, 8);
    const auto b = synthesize(c, 200'000, 9, {SimMode::Hybrid, 4, 1});
    const auto w = mixture_weights(c.bandwidth);
    std::vector<double> observed(8, 0.0), expected(8, 0.0);
    for (auto k : b.k_used) observed[k - 1] += 1.0;
    for (std::size_t i = 0; i < w.k.size(); ++i) expected[w.k[i] - 1] = w.normalized[i] * b.replicates;
    EXPECT_GT(stats::chi_square_gof(observed, expected).p_value, 0.01);
}

TEST(Reference, CfMatchesAnalytic) {
    const auto& b = reference_batch();
    const auto law = carrier_alpha_gamma(carrier_law_of(field(4.0, 1e4)));
    EXPECT_NEAR(law.dispersion, 1.0, 1e-10);
    const auto cf = empirical_cf(b, 0, {0.0, 0.2, 0.5, 1.0, 2.0});
    EXPECT_EQ(cf.estimate[0], std::complex<double>(1.0, 0.0));
    for (std::size_t i = 1; i < cf.omega.size(); ++i) {
        EXPECT_NEAR(cf.estimate[i].real(), std::exp(-law.dispersion * cf.omega[i]), 3 * cf.std_error[i]) << cf.omega[i];
        EXPECT_NEAR(cf.estimate[i].imag(), 0.0, 3 * cf.std_error_imag[i]);
        EXPECT_LE(std::abs(cf.estimate[i]), 1.0 + 3 * cf.std_error[i]);
    }
}

TEST(Reference, Isotropy) {
    const auto& b = reference_batch();
    const std::vector<double> omega{0.3, 1.0, 2.5};
    const auto a = empirical_cf(b, 0, omega, 0.0);
    const auto r = empirical_cf(b, 0, omega, 1.1);
    for (std::size_t i = 0; i < omega.size(); ++i)
        EXPECT_NEAR(a.estimate[i].real(), r.estimate[i].real(),
                    3 * std::hypot(a.std_error[i], r.std_error[i]));
    // Independent halves projected on the two axes.
    const auto re = project(b, 0, 0.0);
    const auto im = project(b, 0, kPi / 2);
    const std::size_t h = re.size() / 2;
    EXPECT_GT(stats::ks_two_sample({re.begin(), re.begin() + h}, {im.begin() + h, im.end()}).p_value, 0.01);
}

TEST(Reference, StatisticsAgainstAnalytics) {
    const auto& b = reference_batch();
    const auto m = build_mixture(carrier_law_of(field(4.0, 1e4)), BandwidthLaw::poisson(1.0, 1));
    const double q99 = mixture::quantile(m, 0.99);
    StatsRequest req;
    req.survival_at = {q99};
    req.powers = {0.3, 0.6};
    const auto s = empirical_stats(project(b, 0), req);
    EXPECT_NEAR(s.survival[0].value, 0.01, 3 * s.survival[0].se);
    EXPECT_NEAR(std::exp(s.log_moment.value), mixture::geometric_power(m), 3 * s.log_moment.se);
    for (std::size_t i = 0; i < req.powers.size(); ++i)
        EXPECT_NEAR(s.fractional_moments[i].value, mixture::flom(m, req.powers[i]), 3 * s.fractional_moments[i].se);
    // Histogram against the Cauchy density.
    for (std::size_t i = 0; i < s.density.size(); i += 7) {
        const double mid = 0.5 * (s.bin_edges[i] + s.bin_edges[i + 1]);
        EXPECT_NEAR(s.density[i], mixture::pdf(m, mid), 4 * s.density_se[i] + 1e-3) << mid;
    }
    EXPECT_NEAR(s.ecdf(0.0), 0.5, 3e-3);
    EXPECT_NEAR(tail_slope(moduli(b, 0)), 1.0, 0.1);
}

TEST(Reference, MomentsDivergeAboveAlpha) {
    const auto x = project(reference_batch(), 0);
    // Median over 250 independent chunks of the sample mean of |x|^p at sizes
    // n, 2n, ..., 16n; returns the growth factor of that median per doubling.
    auto growth = [&](double p, int doublings) {
        const std::size_t n = 250;
        const std::size_t chunk = n << doublings;
        std::vector<std::vector<double>> means(doublings + 1);
        for (std::size_t start = 0; start + chunk <= x.size(); start += chunk) {
            double s = 0.0;
            std::size_t upto = 0;
            int d = 0;
            for (std::size_t len = n; len <= chunk; len *= 2, ++d) {
                for (; upto < len; ++upto) s += std::pow(std::abs(x[start + upto]), p);
                means[d].push_back(s / len);
            }
        }
        std::vector<double> g;
        for (int d = 0; d < doublings; ++d) g.push_back(median(means[d + 1]) / median(means[d]));
        return g;
    };
    const auto above = growth(1.5, 4);
    double total = 1.0;
    for (double g : above) {
        EXPECT_GT(g, 1.1);
        total *= g;
    }
    EXPECT_GT(total, 2.0);
    double below = 1.0;
    for (double g : growth(0.5, 4)) below *= g;
    EXPECT_NEAR(below, 1.0, 0.1);
}

TEST(Synthesize, TailSlopeRecoversAlpha) {
    for (double sigma : {8.0 / 3.0, 6.0}) {
        const auto b = synthesize(field(sigma, 1e4), 300'000, 31, {SimMode::Hybrid, 32, 0});
        EXPECT_NEAR(tail_slope(moduli(b, 0)), 4.0 / sigma, 0.1) << sigma;
    }
    EXPECT_THROW(tail_slope({1.0, 2.0, 3.0}), DomainError);
}

TEST(Synthesize, CompositeTotalsFollowMixture) {
    FieldConfig c = field(8.0 / 3.0, 1e10);
    c.bandwidth = BandwidthLaw::poisson(3.0, 8);
    const auto b = synthesize(c, 100'000, 41);
    const auto m = build_mixture(carrier_law_of(c), c.bandwidth);
    const auto r = ks_interpolated(project(b, std::nullopt), [&](double y) { return mixture::cdf(m, y); });
    EXPECT_GT(r.p_value, 0.01) << "D=" << r.statistic;
    // A 10% error in the analytic scale is detected.
    const auto wrong = rescaled(m, 1.1);
    EXPECT_LT(ks_interpolated(project(b, std::nullopt), [&](double y) { return mixture::cdf(wrong, y); }).p_value,
              0.01);
}

TEST(Synthesize, MappedFieldEquivalence) {
    FieldConfig spl;
    spl.sigma = 4.0;
    spl.r_t = 1e4;
    spl.intensity = SpatialPowerLaw{1.0, 2.0};
    FieldConfig hom = spl;
    hom.intensity = Homogeneous{map_intensity(spl) / kPi};
    EXPECT_NEAR(expected_count(hom), expected_count(spl), 1e-6 * expected_count(spl));
    const auto a = project(synthesize(spl, 100'000, 51, {SimMode::Hybrid, 32, 0}), 0);
    const auto h = project(synthesize(hom, 100'000, 52, {SimMode::Hybrid, 32, 0}), 0);
    EXPECT_GT(stats::ks_two_sample(a, h).p_value, 0.01);
    // beta_s = 1 maps to a planar field with path-loss exponent 8, i.e. alpha = 1/2.
    spl.intensity = SpatialPowerLaw{1.0, 1.0};
    spl.r_t = 1e8;
    const auto s = project(synthesize(spl, 100'000, 53, {SimMode::Hybrid, 32, 0}), 0);
    const auto law = carrier_alpha_gamma(carrier_law_of(spl));
    EXPECT_NEAR(law.alpha, 0.5, 1e-15);
    const StableParams p{0.5, 0.0, law.scale, 0.0};
    EXPECT_GT(ks_interpolated(s, [&](double y) { return stable::cdf(p, y); }).p_value, 0.01);
}

TEST(Synthesize, SectorAndTimeProfileMatchTheirLaws) {
    FieldConfig c;
    c.sigma = 4.0;
    c.r_t = 1e3;
    c.intensity = Sector{2.0, kPi / 3};
    c.fading = {AmplitudeLaw::Kind::Rayleigh, 0.8};
    const auto law = carrier_alpha_gamma(carrier_law_of(c));
    const auto x = project(synthesize(c, 100'000, 61, {SimMode::Hybrid, 32, 0}), 0);
    EXPECT_GT(ks_interpolated(x, [&](double y) { return stable::cdf({1.0, 0.0, law.scale, 0.0}, y); }).p_value, 0.01);

    c.intensity = TimeProfile{{0.0, 1.0, 2.0}, {0.1, 0.5, 0.3}, 2.0, 2.0};
    c.channel = {ChannelLaw::Kind::Gaussian, 1.0};
    c.sigma = 3.0;
    const auto l2 = carrier_alpha_gamma(carrier_law_of(c));
    const auto y = project(synthesize(c, 100'000, 62, {SimMode::Hybrid, 32, 0}), 0);
    EXPECT_GT(ks_interpolated(y, [&](double v) { return stable::cdf({l2.alpha, 0.0, l2.scale, 0.0}, v); }).p_value,
              0.01);
}

TEST(Synthesize, SharedPositionsKeepMarginals) {
    FieldConfig c = field(4.0, 1e4);
    c.bandwidth = BandwidthLaw::poisson(50.0, 2);
    c.coupling = CarrierCoupling::SharedPositions;
    const auto b = synthesize(c, 100'000, 71, {SimMode::Hybrid, 32, 0});
    const auto law = carrier_alpha_gamma(carrier_law_of(c));
    std::vector<double> second;
    for (std::size_t r = 0; r < b.replicates; ++r)
        if (b.k_used[r] == 2) second.push_back(b.at(r, 1).real());
    ASSERT_GT(second.size(), 90'000u);
    EXPECT_GT(ks_interpolated(second, [&](double y) { return stable::cdf({1.0, 0.0, law.scale, 0.0}, y); }).p_value,
              0.01);
}

TEST(Synthesize, HybridAgreesWithDirect) {
    const auto c = field(3.0, 200.0);
    const auto d = project(synthesize(c, 50'000, 81, {SimMode::Direct, 1, 0}), 0);
    const auto h = project(synthesize(c, 50'000, 82, {SimMode::Hybrid, 16, 0}), 0);
    EXPECT_GT(stats::ks_two_sample(d, h).p_value, 0.01);
}

TEST(Synthesize, DiscConvergence) {
    const auto pts = disc_convergence(field(4.0, 4.0), 1.0, 2, 400'000, 91, {SimMode::Direct, 1, 0});
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_NEAR(pts[2].expected_count, 64.0, 1e-9);
    double prev = 1.0;
    for (const auto& p : pts) {
        const double err = std::abs(p.cf.value - p.analytic);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_GT(pts[0].cf.value - pts[0].analytic, 5 * pts[0].cf.se);  // a small disc misses far-field interference
}

TEST(Export, CsvAndBinaryRoundTrip) {
    FieldConfig c = field(4.0, 50.0);
    c.bandwidth = BandwidthLaw::poisson(1.5, 3);
    const auto b = synthesize(c, 300, 5);
    const auto dir = std::filesystem::temp_directory_path() / "pnsc_export_test";
    std::filesystem::create_directories(dir);
    write_binary(b, dir / "b.bin");
    const auto r = read_binary(dir / "b.bin");
    EXPECT_EQ(r.samples, b.samples);
    EXPECT_EQ(r.k_used, b.k_used);
    EXPECT_EQ(r.seed, 5u);
    EXPECT_EQ(r.k_max, 3);
    EXPECT_EQ(std::filesystem::file_size(dir / "b.bin"), 32 + 300 * 4 + 300 * 3 * 16u);

    write_csv(b, dir / "b.csv");
    std::ifstream in(dir / "b.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "replicate,carrier,re,im");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    std::size_t occupied = 0;
    for (auto k : b.k_used) occupied += k;
    EXPECT_EQ(rows, occupied);

    {
        std::ofstream bad(dir / "bad.bin", std::ios::binary);
        bad << "NOTABATCHFILE";
    }
    EXPECT_THROW(read_binary(dir / "bad.bin"), IoError);
    EXPECT_THROW(read_binary(dir / "missing.bin"), IoError);
    std::filesystem::remove_all(dir);
}

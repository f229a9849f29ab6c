#include "pnsc/validation.hpp"

#include "pnsc/error.hpp"
#include "pnsc/mixture.hpp"
#include "pnsc/receiver.hpp"
#include "pnsc/stable.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pnsc::validation {

namespace {

using std::numbers::pi;

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> g;
    const auto n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int i = 0; i <= n; ++i) g.push_back(lo + i * step);
    return g;
}

double poisson_pmf(double mean, int n) { return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0)); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void cf_suite(const Config& cfg, Report& rep) {
    const auto field = reference_field(4.0, cfg.cf_expected_count);
    const auto batch = synthesize(field, cfg.cf_replicates, cfg.seed, {SimMode::Hybrid, 64, cfg.threads});
    const auto law = carrier_alpha_gamma(carrier_law_of(field));
    const double scale = law.scale * cfg.gamma_corruption;
    const auto cf = empirical_cf(batch, 0, cfg.cf_omega);
    for (std::size_t i = 0; i < cf.omega.size(); ++i) {
        const double analytic = std::exp(-std::pow(scale * cf.omega[i], law.alpha));
        const double z = std::abs(cf.estimate[i].real() - analytic) / cf.std_error[i];
        rep.checks.push_back(make_check("cf", "cf_match_omega_" + fmt(cf.omega[i]), z, cfg.cf_z_max, Bound::AtMost));
    }
}

void mixture_suite(const Config& cfg, Report& rep) {
    FieldConfig field = reference_field(8.0 / 3.0, 1e10);
    field.bandwidth = BandwidthLaw::poisson(3.0, 8);
    const auto batch = synthesize(field, cfg.mixture_replicates, cfg.seed + 1, {SimMode::Hybrid, 64, cfg.threads});
    const auto m = rescaled(build_mixture(carrier_law_of(field), field.bandwidth), cfg.gamma_corruption);
    const auto ks =
        stats::ks_one_sample_sparse(project(batch, std::nullopt), [&](double y) { return mixture::cdf(m, y); });
    rep.checks.push_back(make_check("mixture", "composite_totals_ks_p", ks.p_value, cfg.p_min, Bound::AtLeast));

    auto weight_error = [](const BandwidthLaw& law) {
        const auto w = mixture_weights(law);
        double s = 0.0;
        for (double v : w.normalized) s += v;
        return std::abs(s - 1.0);
    };
    rep.checks.push_back(make_check("mixture", "poisson_weight_sum_error",
                                    weight_error(BandwidthLaw::poisson(3.0, 8)), 1e-12, Bound::AtMost));
    rep.checks.push_back(make_check("mixture", "poisson_gamma_weight_sum_error",
                                    weight_error(BandwidthLaw::poisson_gamma(2.0, 0.5, 8)), 1e-12, Bound::AtMost));
}

void mapping_suite(const Config& cfg, Report& rep) {
    FieldConfig spl;
    spl.sigma = 4.0;
    spl.r_t = 1e4;
    spl.intensity = SpatialPowerLaw{1.0, 2.0};
    FieldConfig hom = spl;
    hom.intensity = Homogeneous{map_intensity(spl) / pi};
    const SimOptions opt{SimMode::Hybrid, 32, cfg.threads};
    const auto a = project(synthesize(spl, cfg.mapping_replicates, cfg.seed + 2, opt), 0);
    const auto h = project(synthesize(hom, cfg.mapping_replicates, cfg.seed + 3, opt), 0);
    rep.checks.push_back(make_check("mapping", "power_law_vs_homogeneous_ks_p", stats::ks_two_sample(a, h).p_value,
                                    cfg.p_min, Bound::AtLeast));

    FieldConfig c = reference_field(4.0, 6.0);
    const std::vector<std::pair<std::string, IntensityKind>> kinds{
        {"homogeneous", c.intensity},
        {"time_profile", TimeProfile{{0.0, 1.0, 2.0}, {0.1, 0.4, 0.2}, 2.0, 1.5}},
        {"spatial_power_law", SpatialPowerLaw{0.5, 1.5}},
        {"sector", Sector{1.0, 2.0}},
    };
    std::uint64_t s = cfg.seed + 10;
    for (const auto& [name, kind] : kinds) {
        c.intensity = kind;
        rep.checks.push_back(make_check("mapping", "count_chi_square_p_" + name,
                                        count_gof(c, cfg.count_draws, s++).p_value, cfg.p_min, Bound::AtLeast));
    }
}

void lrt_suite(const Config& cfg, Report& rep) {
    auto spec = [](double alpha, Regime regime) {
        LrtSpec s;
        s.alpha = alpha;
        s.regime = regime;
        return s;
    };
    double symmetry = 0.0;
    auto note_symmetry = [&](const LrtSpec& s, double r) {
        symmetry = std::max(symmetry, std::abs(log_lrt(s, r) + log_lrt(s, -r)));
    };

    const auto cauchy = spec(1.0, Regime::Cauchy);
    double cauchy_err = 0.0;
    for (double r : grid(-10.0, 10.0, 0.25)) {
        const double ratio = stable::pdf({1.0, 0.0, 1.0, 1.0}, r) / stable::pdf({1.0, 0.0, 1.0, -1.0}, r);
        cauchy_err = std::max(cauchy_err, std::abs(lrt(cauchy, r) / ratio - 1.0));
        note_symmetry(cauchy, r);
    }
    rep.checks.push_back(make_check("lrt", "cauchy_vs_density_ratio_rel_error", cauchy_err, 1e-12, Bound::AtMost));

    for (double a : {1.4, 1.8}) {
        const auto w = regime_window(Regime::GeneralSeries, a);
        const auto s = spec(a, Regime::GeneralSeries);
        const auto m = spec(a, Regime::MonteCarlo);
        const double reach = w.hi - 1.0 - 1e-9;
        double err = 0.0;
        for (double r : grid(-reach, reach, reach / 40)) {
            err = std::max(err, std::abs(lrt(s, r) / lrt(m, r) - 1.0));
            note_symmetry(s, r);
        }
        rep.checks.push_back(
            make_check("lrt", "series_vs_inversion_rel_error_alpha_" + fmt(a), err, 1e-4, Bound::AtMost));
    }

    auto against_histogram = [&](const LrtSpec& s, const std::vector<double>& r, std::uint64_t seed) {
        const auto mc = histogram_lrt(s, r, cfg.lrt_draws, 0.05, seed);
        double z = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            z = std::max(z, std::abs(log_lrt(s, r[i]) - mc[i].log_lambda) / mc[i].se);
            note_symmetry(s, r[i]);
        }
        return z;
    };
    const auto holtsmark = spec(1.5, Regime::Holtsmark);
    rep.checks.push_back(make_check("lrt", "holtsmark_vs_histogram_max_z",
                                    against_histogram(holtsmark, grid(-3.0, 3.0, 0.25), cfg.seed + 20), 4.0,
                                    Bound::AtMost));
    std::vector<double> away;
    for (double v : grid(-3.0, 3.0, 0.25))
        if (std::abs(std::abs(v) - 1.0) >= 0.05) away.push_back(v);
    rep.checks.push_back(make_check("lrt", "whittaker_vs_histogram_max_z",
                                    against_histogram(spec(2.0 / 3.0, Regime::Whittaker), away, cfg.seed + 21), 4.0,
                                    Bound::AtMost));
    rep.checks.push_back(make_check("lrt", "antisymmetry_max_abs_log", symmetry, 1e-8, Bound::AtMost));
}

nlohmann::json as_json(const Report& r) {
    nlohmann::json j;
    j["passed"] = r.passed();
    auto& arr = j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
        arr.push_back({{"suite", c.suite},
                       {"name", c.name},
                       {"statistic", c.statistic},
                       {"threshold", c.threshold},
                       {"bound", c.bound == Bound::AtMost ? "<=" : ">="},
                       {"passed", c.passed}});
    }
    return j;
}

}  // namespace

Check make_check(std::string suite, std::string name, double statistic, double threshold, Bound bound) {
    const bool ok = bound == Bound::AtMost ? statistic <= threshold : statistic >= threshold;
    return {std::move(suite), std::move(name), statistic, threshold, bound, ok};
}

bool Report::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void Config::validate() const {
    static const std::vector<std::string> known{"cf", "mixture", "mapping", "lrt"};
    for (const auto& s : suites)
        if (std::find(known.begin(), known.end(), s) == known.end())
            throw ConfigError("validate: unknown suite '" + s + "'");
    if (cf_replicates < 1000 || mixture_replicates < 100 || mapping_replicates < 100 || count_draws < 100 ||
        lrt_draws < 10'000)
        throw ConfigError("validate: sample sizes too small to test anything");
    if (!(cf_expected_count > 0) || !(cf_z_max > 0) || !(p_min > 0 && p_min < 1) || !(gamma_corruption > 0))
        throw ConfigError("validate: thresholds and scale factors must be positive");
    for (double w : cf_omega)
        if (!(w > 0) || !std::isfinite(w)) throw ConfigError("validate: omega values must be positive");
}

FieldConfig reference_field(double sigma, double expected) {
    FieldConfig c;
    c.sigma = sigma;
    c.intensity = Homogeneous{1.0 / pi};
    c.r_t = std::sqrt(expected);
    return c;
}

stats::TestResult count_gof(const FieldConfig& cfg, int draws, std::uint64_t seed) {
    const double mean = expected_count(cfg);
    const int top = static_cast<int>(mean + 10 * std::sqrt(mean) + 10);
    std::vector<double> observed(top + 1, 0.0), expected(top + 1, 0.0);
    auto rng = make_stream(seed, 0);
    for (int i = 0; i < draws; ++i)
        observed[std::min<std::size_t>(top, draw_field(cfg, 0, rng).size())] += 1.0;
    double head = 0.0;
    for (int n = 0; n < top; ++n) {
        expected[n] = draws * poisson_pmf(mean, n);
        head += expected[n];
    }
    expected[top] = draws - head;
    return stats::chi_square_gof(observed, expected);
}

Report run(const Config& cfg) {
    cfg.validate();
    Report rep;
    auto wants = [&](const char* s) { return std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end(); };
    if (wants("cf")) cf_suite(cfg, rep);
    if (wants("mixture")) mixture_suite(cfg, rep);
    if (wants("mapping")) mapping_suite(cfg, rep);
    if (wants("lrt")) lrt_suite(cfg, rep);
    return rep;
}

std::string to_json(const Report& r) { return as_json(r).dump(2); }

std::string to_text(const Report& r) {
    const auto j = as_json(r);
    std::ostringstream os;
    for (const auto& c : j["checks"]) {
        os << (c["passed"].get<bool>() ? "PASS" : "FAIL") << "  " << c["suite"].get<std::string>() << "/"
           << c["name"].get<std::string>() << "  statistic=" << fmt(c["statistic"].get<double>()) << " "
           << c["bound"].get<std::string>() << " " << fmt(c["threshold"].get<double>()) << "\n";
    }
    os << "overall: " << (j["passed"].get<bool>() ? "PASS" : "FAIL") << " (" << j["checks"].size() << " checks)\n";
    return os.str();
}

}  // namespace pnsc::validation

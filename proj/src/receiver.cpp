#include "pnsc/receiver.hpp"

#include "pnsc/rng.hpp"
#include "pnsc/simulator.hpp"
#include "pnsc/specfun.hpp"
#include "pnsc/stable.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

namespace pnsc {

using specfun::pi;

namespace {

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

// Standardized symmetric density through the always-available route: CF
// inversion where it is accurate, the automatic route in the far tail.
double fallback_log_pdf(double alpha, double z) {
    const StableParams p{alpha, 0.0, 1.0, 0.0};
    if (std::abs(z) <= 100.0) return std::log(stable::pdf(p, z, stable::PdfMethod::CfInversion));
    return std::log(stable::pdf(p, z));
}

double series_log_pdf(double alpha, double z) {
    try {
        return std::log(stable::pdf({alpha, 0.0, 1.0, 0.0}, z, stable::PdfMethod::SeriesZolotarev));
    } catch (const ConvergenceError&) {
        throw ValidityError("lrt: series does not converge at this point");
    }
}

double cauchy_log_pdf(double z) { return -std::log(pi) - std::log1p(z * z); }
double gauss_log_pdf(double z) { return -0.25 * z * z - std::log(2.0 * std::sqrt(pi)); }

double regime_log_pdf(Regime regime, double alpha, double z) {
    switch (regime) {
        case Regime::Cauchy: return cauchy_log_pdf(z);
        case Regime::Gaussian: return gauss_log_pdf(z);
        case Regime::Holtsmark: return std::log(stable::holtsmark_pdf(z));
        case Regime::Whittaker: return std::log(stable::whittaker_pdf(z));
        case Regime::GeneralSeries:
            if (near(alpha, 1.0)) return cauchy_log_pdf(z);
            if (near(alpha, 2.0)) return gauss_log_pdf(z);
            return series_log_pdf(alpha, z);
        case Regime::MonteCarlo: return fallback_log_pdf(alpha, z);
    }
    throw DomainError("lrt: unknown regime");
}

ZWindow scan_series_window(double alpha) {
    constexpr double step = 0.05, top = 60.0;
    auto agrees = [alpha](double z) {
        try {
            const double s = series_log_pdf(alpha, z);
            return std::abs(std::expm1(s - fallback_log_pdf(alpha, z))) <= 1e-6;
        } catch (const ValidityError&) {
            return false;
        }
    };
    ZWindow w;
    const int n = static_cast<int>(top / step);
    if (alpha > 1.0) {
        int i = 0;
        while (i <= n && agrees(i * step)) ++i;
        if (i == 0) throw ConvergenceError("lrt: series fails even at the origin");
        w.hi = (i - 1) * step;
    } else {
        int i = n;
        while (i >= 1 && agrees(i * step)) --i;
        if (i == n) throw ConvergenceError("lrt: series fails on the whole scanned range");
        w.lo = (i + 1) * step;
    }
    return w;
}

ZWindow series_window(double alpha) {
    static std::mutex lock;
    static std::map<double, ZWindow> cache;
    std::lock_guard guard(lock);
    if (auto it = cache.find(alpha); it != cache.end()) return it->second;
    const auto w = scan_series_window(alpha);
    cache.emplace(alpha, w);
    return w;
}

}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Cauchy: return "cauchy";
        case Regime::Holtsmark: return "holtsmark";
        case Regime::Whittaker: return "whittaker";
        case Regime::GeneralSeries: return "general_series";
        case Regime::Gaussian: return "gaussian";
        case Regime::MonteCarlo: return "monte_carlo";
    }
    return "unknown";
}

Regime regime_from_string(const std::string& s) {
    for (auto r : {Regime::Cauchy, Regime::Holtsmark, Regime::Whittaker, Regime::GeneralSeries, Regime::Gaussian,
                   Regime::MonteCarlo})
        if (to_string(r) == s) return r;
    throw DomainError("unknown LRT regime '" + s + "'");
}

void LrtSpec::validate() const {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("lrt: alpha must lie in (0, 2]");
    if (!(gamma_tilde > 0.0) || !std::isfinite(gamma_tilde)) throw DomainError("lrt: gamma_tilde must be > 0");
    if (!std::isfinite(x_h0) || !std::isfinite(x_h1) || x_h0 == x_h1)
        throw DomainError("lrt: hypotheses must be finite and distinct");
    auto need = [&](double a, const char* name) {
        if (!near(alpha, a)) throw DomainError(std::string("lrt: the ") + name + " regime does not match alpha");
    };
    switch (regime) {
        case Regime::Cauchy: need(1.0, "cauchy"); break;
        case Regime::Holtsmark: need(1.5, "holtsmark"); break;
        case Regime::Whittaker: need(2.0 / 3.0, "whittaker"); break;
        case Regime::Gaussian: need(2.0, "gaussian"); break;
        case Regime::GeneralSeries:
        case Regime::MonteCarlo: break;
    }
}

Regime natural_regime(double alpha) {
    if (near(alpha, 1.0)) return Regime::Cauchy;
    if (near(alpha, 1.5)) return Regime::Holtsmark;
    if (near(alpha, 2.0 / 3.0)) return Regime::Whittaker;
    if (near(alpha, 2.0)) return Regime::Gaussian;
    return Regime::GeneralSeries;
}

ZWindow regime_window(Regime regime, double alpha) {
    switch (regime) {
        case Regime::Holtsmark: return {0.0, stable::holtsmark_window};
        case Regime::Whittaker: return {0.05, std::numeric_limits<double>::infinity()};
        case Regime::GeneralSeries:
            if (near(alpha, 1.0) || near(alpha, 2.0)) return {};
            return series_window(alpha);
        default: return {};
    }
}

double log_lrt(const LrtSpec& spec, double r) {
    spec.validate();
    const double z0 = (r - spec.x_h0) / spec.gamma_tilde;
    const double z1 = (r - spec.x_h1) / spec.gamma_tilde;
    const auto w = regime_window(spec.regime, spec.alpha);
    if (!w.contains(std::abs(z0)) || !w.contains(std::abs(z1)))
        throw ValidityError("lrt: r = " + std::to_string(r) + " is outside the " + to_string(spec.regime) +
                            " validity window");
    return regime_log_pdf(spec.regime, spec.alpha, z0) - regime_log_pdf(spec.regime, spec.alpha, z1);
}

double lrt(const LrtSpec& spec, double r) { return std::exp(log_lrt(spec, r)); }

LrtResult lrt_curve(const LrtSpec& spec, const std::vector<double>& r_grid) {
    spec.validate();
    if (r_grid.empty()) throw DomainError("lrt_curve: empty grid");
    LrtSpec fb = spec;
    fb.regime = Regime::MonteCarlo;
    LrtResult out;
    for (double r : r_grid) {
        std::optional<double> ll;
        try {
            ll = log_lrt(spec, r);
        } catch (const ValidityError&) {
        }
        const double ref = spec.regime == Regime::MonteCarlo ? ll.value_or(0.0) : log_lrt(fb, r);
        out.r.push_back(r);
        out.regime_used.push_back(ll ? spec.regime : Regime::MonteCarlo);
        out.log_lambda.push_back(ll.value_or(ref));
        out.lambda.push_back(std::exp(out.log_lambda.back()));
        const bool ok = ll && std::abs(std::expm1(*ll - ref)) <= 1e-4;
        out.valid.push_back(ok);
        if (ok) {
            if (!out.validity_window) out.validity_window = std::pair{r, r};
            out.validity_window->first = std::min(out.validity_window->first, r);
            out.validity_window->second = std::max(out.validity_window->second, r);
        }
    }
    return out;
}

std::vector<HistogramLrt> histogram_lrt(const LrtSpec& spec, const std::vector<double>& r_grid, std::size_t n,
                                        double h, std::uint64_t seed) {
    spec.validate();
    if (!(h > 0.0)) throw DomainError("histogram_lrt: bin width must be > 0");
    auto noise = stable::sample({spec.alpha, 0.0, 1.0, 0.0}, seed, n);
    std::sort(noise.begin(), noise.end());
    const double hz = h / spec.gamma_tilde;
    auto count = [&](double z) {
        return static_cast<double>(std::upper_bound(noise.begin(), noise.end(), z + hz / 2) -
                                   std::lower_bound(noise.begin(), noise.end(), z - hz / 2));
    };
    std::vector<HistogramLrt> out;
    for (double r : r_grid) {
        const double c0 = count((r - spec.x_h0) / spec.gamma_tilde);
        const double c1 = count((r - spec.x_h1) / spec.gamma_tilde);
        if (c0 == 0 || c1 == 0) throw ConvergenceError("histogram_lrt: empty bin; increase n or h");
        out.push_back({std::log(c0 / c1), std::sqrt(1.0 / c0 + 1.0 / c1)});
    }
    return out;
}

namespace {

// log f of the standardized symmetric law, tabulated once per alpha on
// u = asinh(|z|/2) with a cubic B-spline; closed forms where available.
class LogDensity {
public:
    explicit LogDensity(double alpha) : alpha_(alpha) {
        if (near(alpha, 1.0) || near(alpha, 2.0)) return;
        std::vector<double> v(points);
        for (int i = 0; i < points; ++i) v[i] = fallback_log_pdf(alpha, 2.0 * std::sinh(i * step));
        spline_ = std::make_unique<boost::math::interpolators::cardinal_cubic_b_spline<double>>(v.begin(), v.end(),
                                                                                                 0.0, step);
        const StableParams p{alpha, 0.0, 1.0, 0.0};
        tail_ = std::log(stable::tail_pdf_asymptotic(p, 1.0));
    }

    double operator()(double z) const {
        if (near(alpha_, 1.0)) return cauchy_log_pdf(z);
        if (near(alpha_, 2.0)) return gauss_log_pdf(z);
        const double u = std::asinh(std::abs(z) / 2);
        if (u <= top) return (*spline_)(u);
        return tail_ - (alpha_ + 1.0) * std::log(std::abs(z));
    }

private:
    static constexpr int points = 2001;
    static constexpr double top = 18.42;  // |z| up to about 1e8
    static constexpr double step = top / (points - 1);
    double alpha_;
    double tail_ = 0.0;
    std::unique_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

const LogDensity& log_density(double alpha) {
    static std::mutex lock;
    static std::map<double, std::unique_ptr<LogDensity>> cache;
    std::lock_guard guard(lock);
    auto& slot = cache[alpha];
    if (!slot) slot = std::make_unique<LogDensity>(alpha);
    return *slot;
}

// log2(1 + e^{-l}) without overflow.
double log2_one_plus_exp_neg(double l) {
    const double v = l > 0 ? std::log1p(std::exp(-l)) : -l + std::log1p(std::exp(l));
    return v / std::log(2.0);
}

}  // namespace

CapacityEstimate biso_capacity(const LrtSpec& spec, std::size_t n_mc, std::uint64_t seed, unsigned threads) {
    spec.validate();
    if (n_mc < 10'000) throw DomainError("biso_capacity: n_mc must be >= 1e4");
    const auto& logf = log_density(spec.alpha);
    const StableParams noise{spec.alpha, 0.0, 1.0, 0.0};
    const double d = (spec.x_h0 - spec.x_h1) / spec.gamma_tilde;
    const std::size_t blocks = (n_mc + block_size - 1) / block_size;
    std::vector<double> sum(blocks, 0.0), sum_sq(blocks, 0.0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t b = next++; b < blocks; b = next++) {
            auto rng = make_stream(seed, b);
            const std::size_t m = std::min(block_size, n_mc - b * block_size);
            for (std::size_t i = 0; i < m; ++i) {
                // Standardized noise; under H0 the distances are s and s + d, under H1 t and t - d.
                const double s = stable::draw(noise, rng);
                const double t = stable::draw(noise, rng);
                const double l0 = logf(s) - logf(s + d);
                const double l1 = logf(t) - logf(t - d);
                const double v = 0.5 * (log2_one_plus_exp_neg(l0) + log2_one_plus_exp_neg(l1));
                sum[b] += v;
                sum_sq[b] += v * v;
            }
        }
    };
    const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(blocks, threads ? threads : default_threads()));
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < nt; ++i) pool.emplace_back(worker);
    }
    double s = 0.0, ss = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        s += sum[b];
        ss += sum_sq[b];
    }
    const double n = static_cast<double>(n_mc);
    const double mean = s / n;
    const double var = std::max(0.0, ss / n - mean * mean);
    return {1.0 - mean, std::sqrt(var / (n - 1))};
}

}  // namespace pnsc

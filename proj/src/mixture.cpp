#include "pnsc/mixture.hpp"

#include "pnsc/error.hpp"
#include "pnsc/specfun.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pnsc {

using specfun::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

// Neumaier-compensated sum, so that normalized weights sum to one to a few ulps.
double compensated_sum(const std::vector<double>& v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    return s + c;
}

double component_scale(int k, double alpha, double gamma) { return std::pow(static_cast<double>(k), 1.0 / alpha) * gamma; }

}  // namespace

void CarrierLaw::validate() const {
    if (!(sigma > 2.0) || !std::isfinite(sigma)) throw DomainError("CarrierLaw: sigma must be > 2");
    if (!(lambda_spatial > 0.0)) throw DomainError("CarrierLaw: lambda_spatial must be > 0");
    if (!(moment_ac > 0.0)) throw DomainError("CarrierLaw: moment_ac must be > 0");
}

CarrierStable carrier_alpha_gamma(const CarrierLaw& c) {
    c.validate();
    CarrierStable s;
    s.alpha = 4.0 / c.sigma;
    s.dispersion = c.lambda_spatial * pi * c.moment_ac * specfun::dispersion_integral(s.alpha);
    s.scale = scale_of(s.dispersion, s.alpha);
    return s;
}

BandwidthLaw BandwidthLaw::poisson(double lambda_k, int k_max) {
    BandwidthLaw law;
    law.kind = Kind::Poisson;
    law.lambda_k = lambda_k;
    law.k_max = k_max;
    law.validate();
    return law;
}

BandwidthLaw BandwidthLaw::poisson_gamma(double a, double b, int k_max) {
    BandwidthLaw law;
    law.kind = Kind::PoissonGamma;
    law.a = a;
    law.b = b;
    law.k_max = k_max;
    law.validate();
    return law;
}

void BandwidthLaw::validate() const {
    if (k_max < 1) throw DomainError("BandwidthLaw: k_max must be >= 1");
    if (kind == Kind::Poisson && !(lambda_k > 0.0)) throw DomainError("BandwidthLaw: lambda_k must be > 0");
    if (kind == Kind::PoissonGamma && !(a > 0.0 && b > 0.0))
        throw DomainError("BandwidthLaw: Gamma shape a and rate b must be > 0");
}

double BandwidthLaw::log_probability(int k) const {
    if (k < 0) return -kInf;
    const double kk = k;
    if (kind == Kind::Poisson) return -lambda_k + kk * std::log(lambda_k) - std::lgamma(kk + 1.0);
    // Gamma(a+k) / (Gamma(a) k!) (b/(1+b))^a (1/(1+b))^k
    return std::lgamma(a + kk) - std::lgamma(a) - std::lgamma(kk + 1.0) + a * std::log(b / (1.0 + b)) -
           kk * std::log1p(b);
}

double BandwidthLaw::probability(int k) const { return std::exp(log_probability(k)); }

MixtureWeights mixture_weights(const BandwidthLaw& law) {
    law.validate();
    MixtureWeights w;
    for (int k = 1; k <= law.k_max; ++k) {
        const double p = law.probability(k);
        if (p > 0.0) {
            w.k.push_back(k);
            w.raw.push_back(p);
        }
    }
    w.normalizer = compensated_sum(w.raw);
    if (!(w.normalizer > 0.0)) throw DomainError("mixture_weights: all weights underflow");
    w.normalized.reserve(w.raw.size());
    for (double r : w.raw) w.normalized.push_back(r / w.normalizer);
    w.zero_atom = law.probability(0);
    return w;
}

void PnscMixture::validate() const {
    if (components.empty()) throw DomainError("PnscMixture: no components");
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("PnscMixture: alpha must lie in (0, 2]");
}

PnscMixture build_mixture(double alpha, double gamma_scale, const BandwidthLaw& law) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("build_mixture: alpha must lie in (0, 2]");
    if (!(gamma_scale > 0.0)) throw DomainError("build_mixture: gamma must be > 0");
    const auto w = mixture_weights(law);
    PnscMixture m;
    m.alpha = alpha;
    m.base_gamma = gamma_scale;
    m.normalizer = w.normalizer;
    m.zero_atom = w.zero_atom;
    for (std::size_t i = 0; i < w.k.size(); ++i) {
        MixtureComponent c;
        c.k = w.k[i];
        c.weight = w.normalized[i];
        c.params = StableParams{alpha, 0.0, component_scale(c.k, alpha, gamma_scale), 0.0, Param::S0};
        m.components.push_back(c);
    }
    return m;
}

PnscMixture build_mixture(const CarrierLaw& c, const BandwidthLaw& law) {
    const auto s = carrier_alpha_gamma(c);
    return build_mixture(s.alpha, s.scale, law);
}

PnscMixture rescaled(const PnscMixture& m, double s) {
    if (!(s > 0.0)) throw DomainError("rescaled: factor must be > 0");
    PnscMixture r = m;
    r.base_gamma *= s;
    for (auto& c : r.components) c.params.gamma *= s;
    return r;
}

namespace mixture {

double pdf(const PnscMixture& m, double y, stable::PdfMethod method) {
    m.validate();
    double s = 0.0;
    for (const auto& c : m.components) s += c.weight * stable::pdf(c.params, y, method);
    return s;
}

double cdf(const PnscMixture& m, double y) {
    m.validate();
    double s = 0.0;
    for (const auto& c : m.components) s += c.weight * stable::cdf(c.params, y);
    return std::clamp(s, 0.0, 1.0);
}

double survival(const PnscMixture& m, double y) {
    m.validate();
    double s = 0.0;
    for (const auto& c : m.components) s += c.weight * stable::survival(c.params, y);
    return std::clamp(s, 0.0, 1.0);
}

double quantile(const PnscMixture& m, double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile: q must lie in (0, 1)");
    // Work on whichever tail is smaller to keep relative accuracy.
    const bool upper = q > 0.5;
    auto g = [&](double y) { return upper ? survival(m, y) - (1.0 - q) : cdf(m, y) - q; };
    double lo = -m.base_gamma, hi = m.base_gamma;
    while (cdf(m, lo) > q) lo *= 2.0;
    while (survival(m, hi) > 1.0 - q) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = g(mid);
        const bool below = upper ? v > 0.0 : v < 0.0;
        (below ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

template <class Closed>
double closed_form_mixture(const PnscMixture& m, double y, Closed&& closed, double window) {
    double s = 0.0;
    for (const auto& c : m.components) {
        const double g = c.params.gamma;
        const double z = y / g;
        const double f = std::abs(z) <= window ? closed(z) / g : stable::pdf(c.params, y);
        s += c.weight * f;
    }
    return s;
}

}  // namespace

double holtsmark_pdf(const PnscMixture& m, double y) {
    m.validate();
    if (!near(m.alpha, 1.5)) throw DomainError("holtsmark mixture: alpha must be 3/2");
    return closed_form_mixture(m, y, [](double z) { return stable::holtsmark_pdf(z); }, stable::holtsmark_window);
}

double whittaker_pdf(const PnscMixture& m, double y) {
    m.validate();
    if (!near(m.alpha, 2.0 / 3.0)) throw DomainError("whittaker mixture: alpha must be 2/3");
    return closed_form_mixture(m, y, [](double z) { return stable::whittaker_pdf(z); }, kInf);
}

double conditional_gaussian_pdf(const PnscMixture& m, double y, double lambda_aux) {
    m.validate();
    if (!(lambda_aux > 0.0)) throw DomainError("conditional_gaussian_pdf: lambda_aux must be > 0");
    double s = 0.0;
    for (const auto& c : m.components) {
        const double v = 2.0 * c.params.gamma * c.params.gamma * lambda_aux;
        s += c.weight * std::exp(-0.5 * y * y / v) / std::sqrt(2.0 * pi * v);
    }
    return s;
}

TailAsymptote tail(const PnscMixture& m, double y) {
    m.validate();
    if (m.alpha >= 2.0) throw DomainError("mixture tail: not defined for alpha = 2");
    if (!(y > 0.0)) throw DomainError("mixture tail: y must be > 0");
    // Dispersion units: component k contributes k gamma^alpha.
    double disp = 0.0;
    for (const auto& c : m.components) disp += c.weight * dispersion_of(c.params.gamma, m.alpha);
    TailAsymptote t;
    t.survival = disp * stable::tail_constant(m.alpha) * std::pow(y, -m.alpha);
    t.pdf = m.alpha * t.survival / y;
    return t;
}

double flom(const PnscMixture& m, double p) {
    m.validate();
    if (!(p > 0.0 && p < 2.0)) throw DomainError("mixture flom: p must lie in (0, 2)");
    if (m.alpha < 2.0 && p >= m.alpha) return kInf;
    const double cp = stable::flom_constant(p, m.alpha);
    double s = 0.0;
    for (const auto& c : m.components) s += c.weight * std::pow(dispersion_of(c.params.gamma, m.alpha), p / m.alpha);
    return cp * s;
}

double geometric_power(const PnscMixture& m, S0Formula formula) {
    m.validate();
    const double cg = specfun::c_g;
    const double a = m.alpha;
    if (formula == S0Formula::AsPrinted) {
        double s = 0.0;
        for (const auto& c : m.components) s += c.weight * std::sqrt(static_cast<double>(c.k)) * m.base_gamma;
        return s * std::pow(cg, 1.0 / a) / cg;
    }
    // E log|X| = (1/alpha - 1) * euler_gamma + log(scale) for a symmetric law.
    double e = 0.0;
    for (const auto& c : m.components) e += c.weight * std::log(c.params.gamma);
    return std::exp((1.0 / a - 1.0) * specfun::euler_gamma + e);
}

GsnrReport gsnr(const PnscMixture& m, double amplitude, S0Formula formula) {
    if (!(amplitude > 0.0)) throw DomainError("gsnr: amplitude must be > 0");
    GsnrReport r;
    r.c_g = specfun::c_g;
    r.amplitude = amplitude;
    r.s0 = geometric_power(m, formula);
    const double ratio = amplitude / r.s0;
    r.gsnr = ratio * ratio / (2.0 * r.c_g);
    r.flom_bound = m.alpha > 1.0 ? flom(m, 1.0) : kInf;
    return r;
}

std::string to_json(const PnscMixture& m) {
    nlohmann::json j;
    j["schema"] = "pnsc.mixture/1";
    j["alpha"] = m.alpha;
    j["base_gamma"] = m.base_gamma;
    j["normalizer"] = m.normalizer;
    j["zero_atom"] = m.zero_atom;
    auto& comps = j["components"] = nlohmann::json::array();
    for (const auto& c : m.components) {
        comps.push_back({{"k", c.k},
                         {"weight", c.weight},
                         {"alpha", c.params.alpha},
                         {"beta", c.params.beta},
                         {"gamma", c.params.gamma},
                         {"delta", c.params.delta},
                         {"param", c.params.param == Param::S0 ? "S0" : "S1"}});
    }
    return j.dump(2);
}

std::string to_json(const GsnrReport& r) {
    nlohmann::json j;
    j["schema"] = "pnsc.gsnr/1";
    j["s0"] = r.s0;
    j["gsnr"] = r.gsnr;
    j["c_g"] = r.c_g;
    j["amplitude"] = r.amplitude;
    if (std::isfinite(r.flom_bound))
        j["flom_bound"] = r.flom_bound;
    else
        j["flom_bound"] = "inf";
    return j.dump(2);
}

}  // namespace mixture

std::vector<GsnrRow> gsnr_surface(const std::vector<double>& alphas, const std::vector<double>& gammas,
                                  double amplitude, const BandwidthLaw& law, S0Formula formula) {
    if (alphas.empty() || gammas.empty()) throw DomainError("gsnr_surface: empty grid");
    std::vector<double> g = gammas;
    std::sort(g.begin(), g.end());
    if (std::adjacent_find(g.begin(), g.end()) != g.end()) throw DomainError("gsnr_surface: repeated gamma");
    std::vector<GsnrRow> rows;
    for (double a : alphas) {
        double prev = kInf;
        for (double gamma : g) {
            const auto r = mixture::gsnr(build_mixture(a, gamma, law), amplitude, formula);
            if (!(r.gsnr < prev)) throw Error("gsnr_surface: GSNR not decreasing in gamma");
            prev = r.gsnr;
            rows.push_back({a, gamma, r.s0, r.gsnr});
        }
    }
    return rows;
}

}  // namespace pnsc

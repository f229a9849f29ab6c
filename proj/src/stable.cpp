#include "pnsc/error.hpp"
#include "pnsc/specfun.hpp"
#include "pnsc/stable.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pnsc {

using specfun::pi;

void StableParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("StableParams: alpha must lie in (0, 2]");
    if (!(beta >= -1.0 && beta <= 1.0)) throw DomainError("StableParams: beta must lie in [-1, 1]");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("StableParams: gamma must be > 0");
    if (!std::isfinite(delta)) throw DomainError("StableParams: delta must be finite");
}

double dispersion_of(double scale, double alpha) { return std::pow(scale, alpha); }
double scale_of(double dispersion, double alpha) { return std::pow(dispersion, 1.0 / alpha); }

double DispersionScale::as_scale(double alpha) const {
    return kind == ScaleKind::Scale ? value : scale_of(value, alpha);
}
double DispersionScale::as_dispersion(double alpha) const {
    return kind == ScaleKind::Dispersion ? value : dispersion_of(value, alpha);
}

namespace stable {

namespace {

bool is_one(double alpha) { return std::abs(alpha - 1.0) < 1e-12; }

// Location offset delta0 - delta1 between the two parameterizations.
double s0_minus_s1(const StableParams& p) {
    if (is_one(p.alpha)) return (2.0 / pi) * p.beta * p.gamma * std::log(p.gamma);
    return p.beta * p.gamma * std::tan(pi * p.alpha / 2);
}

// Uniform on the open interval (0, 1).
double open_uniform(Rng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

double standard_exponential(Rng& rng) { return -std::log(open_uniform(rng)); }

double standard_normal(Rng& rng) {
    std::normal_distribution<double> n;
    return n(rng);
}

}  // namespace

StableParams to_s0(const StableParams& p) {
    if (p.param == Param::S0) return p;
    StableParams q = p;
    q.param = Param::S0;
    q.delta = p.delta + s0_minus_s1(p);
    return q;
}

StableParams to_s1(const StableParams& p) {
    if (p.param == Param::S1) return p;
    StableParams q = p;
    q.param = Param::S1;
    q.delta = p.delta - s0_minus_s1(p);
    return q;
}

std::complex<double> char_fn(const StableParams& p, double theta) {
    p.validate();
    if (theta == 0.0) return {1.0, 0.0};
    const auto q = to_s0(p);
    const double a = std::abs(theta);
    const double sg = theta > 0 ? 1.0 : -1.0;
    const double gt = q.gamma * a;
    double re, im;
    if (is_one(q.alpha)) {
        re = -gt;
        im = -gt * q.beta * (2.0 / pi) * sg * std::log(gt);
    } else {
        const double mag = std::pow(gt, q.alpha);
        re = -mag;
        // (|gamma theta|^{1-alpha} - 1) tan(pi alpha/2), continuous at alpha = 1
        im = -mag * q.beta * sg * std::tan(pi * q.alpha / 2) * std::expm1((1.0 - q.alpha) * std::log(gt));
    }
    return std::exp(std::complex<double>(re, im + q.delta * theta));
}

double draw(const StableParams& p, Rng& rng) {
    const double v = pi * (open_uniform(rng) - 0.5);
    const double w = standard_exponential(rng);
    const double a = p.alpha;
    const double b = p.beta;
    if (is_one(a)) {
        const double h = pi / 2 + b * v;
        const double x = (2.0 / pi) * (h * std::tan(v) - b * std::log((pi / 2) * w * std::cos(v) / h));
        // Standard S1 draw; S0 location then needs no log-gamma correction.
        if (p.param == Param::S0) return p.gamma * x + p.delta;
        return p.gamma * x + (2.0 / pi) * b * p.gamma * std::log(p.gamma) + p.delta;
    }
    const double t = std::tan(pi * a / 2);
    const double xi = std::atan(b * t) / a;
    const double s = std::pow(1.0 + b * b * t * t, 1.0 / (2.0 * a));
    const double x = s * std::sin(a * (v + xi)) / std::pow(std::cos(v), 1.0 / a) *
                     std::pow(std::cos(v - a * (v + xi)) / w, (1.0 - a) / a);
    if (p.param == Param::S1) return p.gamma * x + p.delta;
    return p.gamma * (x - b * t) + p.delta;
}

std::vector<double> sample(const StableParams& p, std::uint64_t seed, std::size_t n) {
    p.validate();
    if (n < 1) throw DomainError("sample: n must be >= 1");
    auto rng = make_stream(seed, 0);
    std::vector<double> out(n);
    for (auto& x : out) x = draw(p, rng);
    return out;
}

StableParams affine(const StableParams& p, double a, double b) {
    p.validate();
    if (a == 0.0) throw DomainError("affine: a must be nonzero");
    auto q = to_s0(p);
    q.beta = a > 0 ? q.beta : -q.beta;
    q.gamma = std::abs(a) * q.gamma;
    q.delta = a * q.delta + b;
    return p.param == Param::S0 ? q : to_s1(q);
}

StableParams convolve(std::span<const StableParams> components) {
    if (components.empty()) throw DomainError("convolve: empty component list");
    const double alpha = components.front().alpha;
    bool all_s1 = true;
    double disp = 0.0, beta_disp = 0.0, delta = 0.0, beta_gamma = 0.0, beta_gamma_log = 0.0;
    for (const auto& c : components) {
        c.validate();
        if (c.alpha != alpha) throw DomainError("convolve: all components must share alpha");
        all_s1 = all_s1 && c.param == Param::S1;
        const auto q = to_s0(c);
        const double d = std::pow(q.gamma, alpha);
        disp += d;
        beta_disp += q.beta * d;
        delta += q.delta;
        beta_gamma += q.beta * q.gamma;
        beta_gamma_log += q.beta * q.gamma * std::log(q.gamma);
    }
    StableParams r;
    r.alpha = alpha;
    r.param = Param::S0;
    r.gamma = std::pow(disp, 1.0 / alpha);
    r.beta = beta_disp / disp;
    if (is_one(alpha))
        r.delta = delta + (2.0 / pi) * (r.beta * r.gamma * std::log(r.gamma) - beta_gamma_log);
    else
        r.delta = delta + std::tan(pi * alpha / 2) * (r.beta * r.gamma - beta_gamma);
    return all_s1 ? to_s1(r) : r;
}

SminDraw smin_draw(double alpha, double gamma, double delta, Rng& rng) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("smin: alpha must lie in (0, 2)");
    if (!(gamma > 0.0)) throw DomainError("smin: gamma must be > 0");
    // Positive (alpha/2)-stable variable whose Laplace transform is exp(-s^{alpha/2}).
    StableParams aux{alpha / 2, 1.0, std::pow(std::cos(pi * alpha / 4), 2.0 / alpha), 0.0, Param::S1};
    SminDraw d;
    d.lambda_aux = draw(aux, rng);
    d.conditional_mean = delta;
    d.conditional_scale = gamma * std::sqrt(2.0 * d.lambda_aux);
    return d;
}

std::vector<double> smin_sample(double alpha, double gamma, double delta, std::uint64_t seed, std::size_t n) {
    if (n < 1) throw DomainError("smin_sample: n must be >= 1");
    auto rng = make_stream(seed, 0);
    std::vector<double> out(n);
    for (auto& x : out) {
        const auto d = smin_draw(alpha, gamma, delta, rng);
        x = d.conditional_mean + d.conditional_scale * standard_normal(rng);
    }
    return out;
}

double tail_constant(double alpha) { return std::sin(pi * alpha / 2) * std::tgamma(alpha) / pi; }

double tail_survival_asymptotic(const StableParams& p, double x) {
    p.validate();
    if (p.alpha >= 2.0) throw DomainError("tail asymptote: not defined for alpha = 2");
    if (!(x > 0.0)) throw DomainError("tail asymptote: x must be > 0");
    return std::pow(p.gamma, p.alpha) * tail_constant(p.alpha) * (1.0 + p.beta) * std::pow(x, -p.alpha);
}

double tail_pdf_asymptotic(const StableParams& p, double x) {
    return p.alpha * tail_survival_asymptotic(p, x) / x;
}

double flom_constant(double power, double alpha) {
    if (!(power > -1.0 && power < 2.0)) throw DomainError("flom: power must lie in (-1, 2)");
    if (power == 0.0) return 1.0;
    if (alpha < 2.0 && power >= alpha) return std::numeric_limits<double>::infinity();
    return std::pow(2.0, power + 1.0) * std::tgamma((power + 1.0) / 2) * std::tgamma(-power / alpha) /
           (alpha * std::sqrt(pi) * std::tgamma(-power / 2));
}

double flom(const StableParams& p, double power) {
    p.validate();
    if (!(power > -1.0 && power < 2.0)) throw DomainError("flom: power must lie in (-1, 2)");
    if (p.alpha < 2.0 && power >= p.alpha) return std::numeric_limits<double>::infinity();
    if (p.beta == 0.0 || p.alpha == 2.0) {
        if (p.delta != 0.0) throw DomainError("flom: symmetric branch needs zero location");
        return flom_constant(power, p.alpha) * std::pow(dispersion_of(p.gamma, p.alpha), power / p.alpha);
    }
    if (!(power > 0.0)) throw DomainError("flom: skewed branch needs 0 < p < alpha");
    if (is_one(p.alpha)) throw DomainError("flom: skewed branch excludes alpha = 1");
    const auto q = to_s1(p);
    if (std::abs(q.delta) > 1e-12 * q.gamma) throw DomainError("flom: skewed branch needs zero S1 location");
    // E|X|^p = C sigma^p with C from the S1 characteristic function.
    const double bt = p.beta * std::tan(pi * p.alpha / 2);
    const double ip = std::pow(2.0, power - 2.0) * pi / (std::tgamma(power + 1.0) * std::sin(pi * power / 2));
    const double c = std::pow(2.0, power - 1.0) * std::tgamma(1.0 - power / p.alpha) / (power * ip) *
                     std::pow(1.0 + bt * bt, power / (2.0 * p.alpha)) * std::cos(power / p.alpha * std::atan(bt));
    return c * std::pow(q.gamma, power);
}

}  // namespace stable
}  // namespace pnsc

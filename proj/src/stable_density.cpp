// Densities and distribution functions of univariate stable laws.
//
// Every evaluation is reduced to the standard S0 variable z = (x - loc0)/gamma.
// From there four routes exist:
//   * closed forms for the symmetric Gaussian, Cauchy, Holtsmark (3/2) and
//     Whittaker (2/3) laws;
//   * the convergent Zolotarev power series in the "form C" variable;
//   * Fourier inversion of the S0 characteristic function (continuous in alpha,
//     used around alpha = 1 and in the bulk);
//   * the non-oscillatory Zolotarev integral, which also gives the cdf and is
//     the most reliable choice far out in the tails.

#include "pnsc/error.hpp"
#include "pnsc/quadrature.hpp"
#include "pnsc/specfun.hpp"
#include "pnsc/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace pnsc::stable {

using specfun::pi;

namespace {

constexpr double kAlphaSnap = 1e-12;

bool near(double a, double b) { return std::abs(a - b) < kAlphaSnap; }

double loc0_of(const StableParams& p) { return to_s0(p).delta; }

// Skewness expressed in the form C variable.
struct FormC {
    double alpha;
    double theta;  // in [-1, 1]
    double c;      // x_C = (z - shift) / c
    double shift;  // z_S1 = z_S0 - shift, i.e. z_S1 = z_S0 + beta tan(pi alpha/2)
    double rho() const { return 0.5 * (1.0 + theta); }
};

FormC form_c(double alpha, double beta) {
    const double t = std::tan(pi * alpha / 2);
    const double phi0 = std::atan(beta * t);
    FormC f;
    f.alpha = alpha;
    f.theta = std::clamp(2.0 * phi0 / (pi * alpha), -1.0, 1.0);
    f.c = std::pow(std::cos(phi0), -1.0 / alpha);
    f.shift = -beta * t;
    return f;
}

// ---------------------------------------------------------------- closed forms

double gauss_pdf(double z) { return std::exp(-0.25 * z * z) / (2.0 * std::sqrt(pi)); }
double cauchy_pdf(double z) { return 1.0 / (pi * (1.0 + z * z)); }

// ---------------------------------------------------------------- series

struct SeriesOutcome {
    double value = 0.0;
    bool ok = false;
};

SeriesOutcome series_alpha_gt1(double alpha, double rho, double x, const SeriesControl& ctl) {
    SeriesOutcome out;
    if (x == 0.0) {
        out.value = std::tgamma(1.0 / alpha + 1.0) * std::sin(pi * rho) / pi;
        out.ok = true;
        return out;
    }
    const double lx = std::log(std::abs(x));
    const bool negative = x < 0;
    double sum = 0.0;
    double max_term = 0.0;
    double prev_bound = std::numeric_limits<double>::infinity();
    int n = 1;
    for (; n <= ctl.max_terms; ++n) {
        const double bound = std::exp(std::lgamma(n / alpha + 1.0) - std::lgamma(n + 1.0) + (n - 1) * lx);
        // (-1)^{n-1} x^{n-1} = (-x)^{n-1}: the sign only alternates for x > 0.
        const bool flip = (n - 1) % 2 == 1 && !negative;
        const double term = (flip ? -bound : bound) * std::sin(n * pi * rho);
        sum += term;
        max_term = std::max(max_term, std::abs(term));
        if (bound < prev_bound && bound <= 1e-17 * std::max(std::abs(sum), 1e-300)) break;
        prev_bound = bound;
    }
    if (n > ctl.max_terms) return out;
    const double rounding = max_term * 2.2e-16 * std::sqrt(static_cast<double>(n));
    out.value = sum / pi;
    out.ok = rounding <= std::max(ctl.abs_tol, ctl.rel_tol * std::abs(sum));
    return out;
}

SeriesOutcome series_alpha_lt1(double alpha, double rho, double x, const SeriesControl& ctl) {
    SeriesOutcome out;
    if (x < 0) {
        rho = 1.0 - rho;
        x = -x;
    }
    if (x == 0) return out;
    const double lx = std::log(x);
    double sum = 0.0;
    double max_term = 0.0;
    double prev_bound = std::numeric_limits<double>::infinity();
    int n = 1;
    for (; n <= ctl.max_terms; ++n) {
        const double bound = std::exp(std::lgamma(n * alpha + 1.0) - std::lgamma(n + 1.0) - (n * alpha + 1.0) * lx);
        const double term = ((n - 1) % 2 ? -1.0 : 1.0) * bound * std::sin(n * pi * rho * alpha);
        sum += term;
        max_term = std::max(max_term, std::abs(term));
        if (bound < prev_bound && bound <= 1e-17 * std::max(std::abs(sum), 1e-300)) break;
        prev_bound = bound;
    }
    if (n > ctl.max_terms) return out;
    const double rounding = max_term * 2.2e-16 * std::sqrt(static_cast<double>(n));
    out.value = sum / pi;
    out.ok = rounding <= std::max(ctl.abs_tol, ctl.rel_tol * std::abs(sum));
    return out;
}

// Large-|x| expansion of the form C density and tail mass. Convergent for
// alpha < 1 and asymptotic for alpha > 1, where it is summed up to its
// smallest term. `ok` only when that term is negligible.
struct TailSeries {
    double pdf = 0.0;
    double tail = 0.0;  // mass beyond x on the same side
    bool ok = false;
};

// Below this |x_C| the integral and inversion routes are used instead.
constexpr double tail_series_from = 1e3;

TailSeries tail_series(double alpha, double rho, double x) {
    TailSeries out;
    if (x < 0) {
        rho = 1.0 - rho;
        x = -x;
    }
    const double lx = std::log(x);
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (int n = 1; n <= 200; ++n) {
        const double lb = std::lgamma(n * alpha + 1.0) - std::lgamma(n + 1.0) - (n * alpha + 1.0) * lx;
        const double bound = std::exp(lb);
        if (bound > prev) break;
        const double sg = ((n - 1) % 2 ? -1.0 : 1.0) * std::sin(n * pi * rho * alpha);
        out.pdf += sg * bound;
        out.tail += sg * bound * x / (n * alpha);
        prev = last = bound;
        if (bound <= 1e-17 * std::abs(out.pdf)) break;
    }
    out.pdf /= pi;
    out.tail /= pi;
    out.ok = out.pdf > 0.0 && out.tail > 0.0 && last / pi <= 1e-14 * out.pdf;
    return out;
}

// Series in the S0-standard variable; converts to form C internally.
SeriesOutcome series_s0(double alpha, double beta, double z, const SeriesControl& ctl) {
    const auto f = form_c(alpha, beta);
    const double xc = (z - f.shift) / f.c;
    auto r = alpha > 1.0 ? series_alpha_gt1(alpha, f.rho(), xc, ctl)
                         : series_alpha_lt1(alpha, f.rho(), xc, ctl);
    r.value /= f.c;
    return r;
}

// ---------------------------------------------------------------- CF inversion

// Phase of exp(-i t z) phi(t) for the standard S0 law, t > 0.
struct Phase {
    double alpha, beta, z, tan_half;

    double psi(double t) const {
        if (alpha == 1.0) return (2.0 / pi) * t * std::log(t);
        // t - t^alpha, written so that it stays accurate as alpha -> 1
        return -tan_half * t * std::expm1((alpha - 1.0) * std::log(t));
    }
    double operator()(double t) const { return t * z + beta * psi(t); }
    double slope(double t) const {
        if (alpha == 1.0) return z + beta * (2.0 / pi) * (std::log(t) + 1.0);
        const double lt = std::log(t);
        return z + beta * (-tan_half * std::expm1((alpha - 1.0) * lt) -
                           tan_half * (alpha - 1.0) * std::exp((alpha - 1.0) * lt));
    }
};

struct CfOutcome {
    double value = 0.0;
    bool converged = true;
};

// (1/pi) * integral over (0, inf) of the damped oscillatory kernel; `for_cdf`
// selects sin(phase)/t (Gil-Pelaez) instead of cos(phase).
CfOutcome cf_integral(double alpha, double beta, double z, bool for_cdf) {
    Phase ph{alpha, beta, z, alpha == 1.0 ? 0.0 : std::tan(pi * alpha / 2)};
    auto kernel = [&](double t) {
        const double env = std::exp(-std::pow(t, alpha));
        return for_cdf ? env * std::sin(ph(t)) / t : env * std::cos(ph(t));
    };
    QuadControl qc;
    qc.abs_tol = 1e-16;
    qc.rel_tol = 1e-13;
    qc.max_subdivisions = 200;

    CfOutcome out;
    const double t_max = std::pow(39.0, 1.0 / alpha);
    const double t1 = std::min({t_max, 1.0, pi / (std::abs(z) + 1.0)});
    quad::Result first;
    if (alpha < 1.0) {
        // u = t^alpha tames the cusp of exp(-t^alpha) at the origin.
        const double ia = 1.0 / alpha;
        auto ku = [&](double u) {
            const double t = std::pow(u, ia);
            return for_cdf ? std::exp(-u) * std::sin(ph(t)) / (alpha * u)
                           : std::exp(-u) * std::cos(ph(t)) * ia * std::pow(u, ia - 1.0);
        };
        first = quad::integrate(ku, 0.0, std::pow(t1, alpha), qc);
    } else {
        first = quad::integrate(kernel, 0.0, t1, qc);
    }
    double sum = first.value;
    out.converged = first.converged;

    double t = t1;
    int panels = 0;
    const double omega_inf = alpha < 1.0 ? std::abs(z + beta * ph.tan_half) : 0.0;
    while (t < t_max) {
        if (alpha < 1.0 && panels > 3000 && omega_inf > 1e-3) {
            // Long slowly-damped tail: half-period panels plus Wynn acceleration.
            const double h = pi / omega_inf;
            std::vector<double> partial{sum};
            for (int k = 0; k < 60; ++k) {
                auto r = quad::integrate(kernel, t, t + h, qc);
                sum += r.value;
                partial.push_back(sum);
                t += h;
            }
            sum = quad::wynn_epsilon(partial).value;
            break;
        }
        const double envelope_scale = 2.0 / (alpha * std::pow(t, alpha - 1.0));
        const double osc = pi / std::max(std::abs(ph.slope(t)), 1e-300);
        double w = std::min({envelope_scale, osc, t_max - t});
        if (omega_inf <= 1e-3 && alpha < 1.0) w = std::min(std::max(w, 0.5 * t), t_max - t);
        auto r = quad::integrate(kernel, t, t + w, qc);
        sum += r.value;
        out.converged = out.converged && r.converged;
        t += w;
        ++panels;
    }
    out.value = sum / pi;
    return out;
}

// ---------------------------------------------------------------- Zolotarev integral

struct Tails {
    double cdf = 0.0;
    double survival = 0.0;
    double pdf = 0.0;
};

QuadControl integral_qc() {
    QuadControl qc;
    qc.abs_tol = 1e-17;
    qc.rel_tol = 1e-13;
    qc.max_subdivisions = 400;
    return qc;
}

// Integrate a function of log s over an interval on which log s is monotone.
// The integrands below peak where s = 1 and are flat once s is far from 1, so
// the interval is cut where log s crosses a ladder of levels; otherwise every
// node of a wide panel can land in the flat region and miss the peak.
template <class LogS, class G>
double split_integral(LogS&& log_s, G&& g, double lo, double hi) {
    static constexpr double levels[] = {-36.0, -12.0, -5.0, -2.0, -0.7, 0.0, 0.7, 1.5, 2.5, 4.0, 5.5, 6.6};
    const auto qc = integral_qc();
    auto integrand = [&](double u) { return g(log_s(u)); };
    const double l_lo = log_s(lo + 1e-12 * (hi - lo));
    const double l_hi = log_s(hi - 1e-12 * (hi - lo));
    const bool rising = l_hi > l_lo;
    std::vector<double> cuts{lo};
    for (double level : levels) {
        if (!((l_lo < level) != (l_hi < level))) continue;
        double a = lo, b = hi;
        for (int it = 0; it < 80; ++it) {
            const double m = 0.5 * (a + b);
            if ((log_s(m) < level) == rising)
                a = m;
            else
                b = m;
        }
        cuts.push_back(0.5 * (a + b));
    }
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(hi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) total += quad::integrate(integrand, cuts[i], cuts[i + 1], qc).value;
    return total;
}

// Form C law with alpha != 1 at x > 0.
Tails zolotarev_positive(double alpha, double theta, double x) {
    const double ex = alpha / (alpha - 1.0);
    const double lx = ex * std::log(x);
    auto log_s = [&](double phi) {
        const double a1 = std::sin(pi * alpha * (phi + theta) / 2);
        const double a2 = std::cos(pi * phi / 2);
        const double a3 = std::cos(pi * ((alpha - 1.0) * phi + alpha * theta) / 2);
        if (a1 <= 0 || a2 <= 0 || a3 <= 0) return alpha < 1.0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        const double lu = (alpha / (1.0 - alpha)) * (std::log(a1) - std::log(a2)) + std::log(a3) - std::log(a2);
        return lu + lx;
    };
    auto e_minus = [](double l) { return l > 700 ? 0.0 : std::exp(-std::exp(l)); };
    auto one_minus = [](double l) { return l > 700 ? 1.0 : -std::expm1(-std::exp(l)); };
    auto dens = [](double l) {
        if (l > 700 || l < -745) return 0.0;
        const double s = std::exp(l);
        return s * std::exp(-s);
    };
    Tails t;
    if (theta <= -1.0) {  // empty integration range: all mass on the other side
        t.cdf = 1.0;
        t.survival = 0.0;
        return t;
    }
    const double lo = -theta;
    const double hi = 1.0;
    const double i_exp = split_integral(log_s, e_minus, lo, hi);
    const double i_dens = split_integral(log_s, dens, lo, hi);
    if (alpha < 1.0) {
        const double i_one = split_integral(log_s, one_minus, lo, hi);
        t.cdf = 0.5 * (1.0 - theta) + 0.5 * i_exp;
        t.survival = 0.5 * i_one;
    } else {
        t.cdf = 1.0 - 0.5 * i_exp;
        t.survival = 0.5 * i_exp;
    }
    t.pdf = alpha / (2.0 * std::abs(alpha - 1.0) * x) * i_dens;
    return t;
}

Tails zolotarev_form_c(double alpha, double theta, double x) {
    if (x > 0) return zolotarev_positive(alpha, theta, x);
    if (x < 0) {
        const auto m = zolotarev_positive(alpha, -theta, -x);
        return {m.survival, m.cdf, m.pdf};
    }
    Tails t;
    t.cdf = 0.5 * (1.0 - theta);
    t.survival = 0.5 * (1.0 + theta);
    t.pdf = std::tgamma(1.0 + 1.0 / alpha) * std::sin(pi * 0.5 * (1.0 + theta)) / pi;
    return t;
}

// Alpha = 1, beta > 0, standard S1 = S0 variable.
Tails nolan_alpha1_positive_beta(double beta, double x) {
    const double shift = -pi * x / (2.0 * beta);
    auto log_s = [&](double th) {
        const double a = pi / 2 + beta * th;
        const double ct = std::cos(th);
        if (a <= 0 || ct <= 0) return -std::numeric_limits<double>::infinity();
        return std::log(2.0 / pi) + std::log(a) - std::log(ct) + a * std::tan(th) / beta + shift;
    };
    auto e_minus = [](double l) { return l > 700 ? 0.0 : std::exp(-std::exp(l)); };
    auto one_minus = [](double l) { return l > 700 ? 1.0 : -std::expm1(-std::exp(l)); };
    auto dens = [](double l) {
        if (l > 700 || l < -745) return 0.0;
        const double s = std::exp(l);
        return s * std::exp(-s);
    };
    Tails t;
    t.cdf = split_integral(log_s, e_minus, -pi / 2, pi / 2) / pi;
    t.survival = split_integral(log_s, one_minus, -pi / 2, pi / 2) / pi;
    t.pdf = split_integral(log_s, dens, -pi / 2, pi / 2) / (2.0 * beta);
    return t;
}

// Integral route for the standard S0 variable.
Tails integral_s0(double alpha, double beta, double z) {
    if (near(alpha, 1.0)) {
        if (beta == 0.0) {
            // Each tail through atan(1/|z|) so that neither side cancels.
            const double far = std::atan(1.0 / std::abs(z)) / pi;
            if (z > 0) return {1.0 - far, far, cauchy_pdf(z)};
            if (z < 0) return {far, 1.0 - far, cauchy_pdf(z)};
            return {0.5, 0.5, cauchy_pdf(z)};
        }
        if (beta > 0) return nolan_alpha1_positive_beta(beta, z);
        const auto m = nolan_alpha1_positive_beta(-beta, -z);
        return {m.survival, m.cdf, m.pdf};
    }
    const auto f = form_c(alpha, beta);
    const double xc = (z - f.shift) / f.c;
    auto t = zolotarev_form_c(alpha, f.theta, xc);
    t.pdf /= f.c;
    return t;
}

// ---------------------------------------------------------------- dispatch

bool has_closed_form(double alpha, double beta) {
    if (near(alpha, 2.0)) return true;
    if (beta != 0.0) return false;
    return near(alpha, 1.0) || near(alpha, 1.5) || near(alpha, 2.0 / 3.0);
}

double closed_form_pdf(double alpha, double z, const SeriesControl& ctl) {
    if (near(alpha, 2.0)) return gauss_pdf(z);
    if (near(alpha, 1.0)) return cauchy_pdf(z);
    if (near(alpha, 1.5)) return holtsmark_pdf(z, ctl);
    return whittaker_pdf(z, ctl);
}

// Standard S0 density (gamma = 1, delta = 0).
Evaluation standard_pdf(double alpha, double beta, double z, PdfMethod method, const SeriesControl& ctl) {
    Evaluation ev;
    ev.method = method;
    switch (method) {
        case PdfMethod::ClosedForm:
            if (!has_closed_form(alpha, beta))
                throw DomainError("pdf: no closed form for these (alpha, beta)");
            ev.value = closed_form_pdf(alpha, z, ctl);
            return ev;
        case PdfMethod::SeriesZolotarev: {
            if (near(alpha, 1.0) || near(alpha, 2.0))
                throw DomainError("pdf: the series route needs alpha != 1 and alpha < 2");
            auto s = series_s0(alpha, beta, z, ctl);
            if (!s.ok) throw ConvergenceError("pdf: series did not reach tolerance at this point");
            ev.value = s.value;
            return ev;
        }
        case PdfMethod::CfInversion: {
            auto r = cf_integral(near(alpha, 1.0) ? 1.0 : alpha, beta, z, false);
            ev.value = r.value;
            ev.converged = r.converged;
            return ev;
        }
        case PdfMethod::Integral:
            if (near(alpha, 2.0)) {
                ev.value = gauss_pdf(z);
                return ev;
            }
            ev.value = integral_s0(alpha, beta, z).pdf;
            return ev;
        case PdfMethod::Auto:
            break;
    }
    if (has_closed_form(alpha, beta) && !(near(alpha, 1.5) && std::abs(z) > holtsmark_window))
        return standard_pdf(alpha, beta, z, PdfMethod::ClosedForm, ctl);
    if (std::abs(alpha - 1.0) > 0.1 && !near(alpha, 2.0)) {
        const auto f = form_c(alpha, beta);
        const double xc = std::abs((z - f.shift) / f.c);
        if ((alpha > 1.0 && xc <= 3.0) || (alpha < 1.0 && xc >= 3.0)) {
            auto s = series_s0(alpha, beta, z, ctl);
            if (s.ok) {
                ev.method = PdfMethod::SeriesZolotarev;
                ev.value = s.value;
                return ev;
            }
        }
    }
    if (!near(alpha, 1.0) && !near(alpha, 2.0)) {
        const auto f = form_c(alpha, beta);
        const double xc = (z - f.shift) / f.c;
        if (std::abs(xc) >= tail_series_from) {
            const auto t = tail_series(alpha, f.rho(), xc);
            if (t.ok) {
                ev.method = PdfMethod::SeriesZolotarev;
                ev.value = t.pdf / f.c;
                return ev;
            }
        }
    }
    if (std::abs(z) <= 40.0 || std::abs(alpha - 1.0) < 0.02)
        return standard_pdf(alpha, beta, z, PdfMethod::CfInversion, ctl);
    return standard_pdf(alpha, beta, z, PdfMethod::Integral, ctl);
}

Tails standard_tails(double alpha, double beta, double z, CdfMethod method) {
    if (near(alpha, 2.0)) {
        return {0.5 * std::erfc(-z / 2), 0.5 * std::erfc(z / 2), gauss_pdf(z)};
    }
    if (method == CdfMethod::Auto && !near(alpha, 1.0)) {
        const auto f = form_c(alpha, beta);
        const double xc = (z - f.shift) / f.c;
        if (std::abs(xc) >= tail_series_from) {
            const auto t = tail_series(alpha, f.rho(), xc);
            if (t.ok) return xc > 0 ? Tails{1.0 - t.tail, t.tail, t.pdf / f.c} : Tails{t.tail, 1.0 - t.tail, t.pdf / f.c};
        }
    }
    if (method == CdfMethod::Auto)
        method = (std::abs(alpha - 1.0) < 0.02 && !near(alpha, 1.0) && beta != 0.0) ? CdfMethod::CfInversion
                                                                                     : CdfMethod::Integral;
    if (method == CdfMethod::CfInversion) {
        auto r = cf_integral(near(alpha, 1.0) ? 1.0 : alpha, beta, z, true);
        const double f = 0.5 + r.value;
        return {f, 1.0 - f, 0.0};
    }
    return integral_s0(alpha, beta, z);
}

}  // namespace

std::string to_string(PdfMethod m) {
    switch (m) {
        case PdfMethod::Auto: return "auto";
        case PdfMethod::SeriesZolotarev: return "series";
        case PdfMethod::CfInversion: return "cf_inversion";
        case PdfMethod::ClosedForm: return "closed_form";
        case PdfMethod::Integral: return "integral";
    }
    return "unknown";
}

double holtsmark_pdf(double x, const SeriesControl& ctl) {
    if (std::abs(x) > holtsmark_window)
        throw DomainError("holtsmark_pdf: |x| beyond the closed-form window");
    const double x2 = x * x;
    const double w = -4.0 * x2 * x2 * x2 / 729.0;
    SeriesControl c = ctl;
    c.abs_tol = std::min(ctl.abs_tol, 1e-17);
    const double t1 = std::tgamma(5.0 / 3.0) / pi * specfun::p_f_q({5.0 / 12, 11.0 / 12}, {1.0 / 3, 0.5, 5.0 / 6}, w, c);
    const double t2 = x2 / (3.0 * pi) *
                      specfun::p_f_q({0.75, 1.0, 1.25}, {2.0 / 3, 5.0 / 6, 7.0 / 6, 4.0 / 3}, w, c);
    const double t3 = 7.0 * x2 * x2 * std::tgamma(4.0 / 3.0) / (81.0 * pi) *
                      specfun::p_f_q({13.0 / 12, 19.0 / 12}, {7.0 / 6, 1.5, 5.0 / 3}, w, c);
    return std::max(0.0, t1 - t2 + t3);
}

double whittaker_pdf(double x, const SeriesControl& ctl) {
    const double ax = std::abs(x);
    if (ax == 0.0) return 3.0 / (4.0 * std::sqrt(pi));
    // exp(zeta/2) W_{-1/2,1/6}(zeta) = zeta^{2/3} U(7/6, 4/3, zeta): no overflow.
    const double zeta = 4.0 / (27.0 * ax * ax);
    const double lu = specfun::log_conf_hypergeom_u(7.0 / 6, 4.0 / 3, zeta, ctl);
    return std::exp(lu + (2.0 / 3.0) * std::log(zeta)) / (2.0 * std::sqrt(3.0 * pi) * ax);
}

Evaluation pdf_eval(const StableParams& p, double x, PdfMethod method, const SeriesControl& ctl) {
    p.validate();
    const double z = (x - loc0_of(p)) / p.gamma;
    auto ev = standard_pdf(p.alpha, p.beta, z, method, ctl);
    ev.value = std::max(0.0, ev.value) / p.gamma;
    return ev;
}

double pdf(const StableParams& p, double x, PdfMethod method, const SeriesControl& ctl) {
    auto ev = pdf_eval(p, x, method, ctl);
    if (!ev.converged) throw ConvergenceError("pdf: quadrature did not reach tolerance");
    return ev.value;
}

double cdf(const StableParams& p, double x, CdfMethod method) {
    p.validate();
    const double z = (x - loc0_of(p)) / p.gamma;
    return std::clamp(standard_tails(p.alpha, p.beta, z, method).cdf, 0.0, 1.0);
}

double survival(const StableParams& p, double x, CdfMethod method) {
    p.validate();
    const double z = (x - loc0_of(p)) / p.gamma;
    return std::clamp(standard_tails(p.alpha, p.beta, z, method).survival, 0.0, 1.0);
}

}  // namespace pnsc::stable

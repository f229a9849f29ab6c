#include "pnsc/specfun.hpp"

#include "pnsc/error.hpp"
#include "pnsc/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pnsc::specfun {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Distance from b to the nearest integer; the Kummer pair of M terms has
// Gamma(1-b) and Gamma(b-1) prefactors that blow up there.
double distance_to_integer(double b) { return std::abs(b - std::round(b)); }

}  // namespace

double gamma_fn(double x) {
    if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
    if (is_nonpositive_integer(x))
        throw DomainError("gamma_fn: pole at non-positive integer " + std::to_string(x));
    return std::tgamma(x);
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > 171.0) return 0.0;
    return 1.0 / std::tgamma(x);
}

double log_abs_gamma(double x) {
    if (is_nonpositive_integer(x)) throw DomainError("log_abs_gamma: pole");
    return std::lgamma(x);
}

double bessel_j(int order, double x) {
    if (order < 0) throw DomainError("bessel_j: negative order");
    if (!(x >= 0.0)) throw DomainError("bessel_j: x must be >= 0");
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    return std::cyl_bessel_j(static_cast<double>(order), x);
}

SeriesResult p_f_q_series(const std::vector<double>& a, const std::vector<double>& b, double z,
                          const SeriesControl& ctl) {
    ctl.validate();
    for (double bj : b)
        if (is_nonpositive_integer(bj))
            throw DomainError("p_f_q: lower parameter is a non-positive integer");
    SeriesResult r;
    r.value = 1.0;
    r.max_abs_term = 1.0;
    r.terms = 1;
    if (z == 0.0) {
        r.converged = true;
        return r;
    }
    bool terminating = false;
    for (double ai : a)
        if (is_nonpositive_integer(ai)) terminating = true;
    if (!terminating) {
        const auto p = a.size();
        const auto q = b.size();
        if (p > q + 1) throw DomainError("p_f_q: divergent series (p > q+1)");
        if (p == q + 1 && std::abs(z) >= 1.0)
            throw DomainError("p_f_q: |z| >= 1 outside the disc of convergence");
    }
    double term = 1.0;
    int small_run = 0;
    for (int n = 0; n < ctl.max_terms; ++n) {
        double ratio = z / (n + 1.0);
        for (double ai : a) ratio *= (ai + n);
        for (double bj : b) ratio /= (bj + n);
        term *= ratio;
        r.value += term;
        r.terms = n + 2;
        r.max_abs_term = std::max(r.max_abs_term, std::abs(term));
        if (term == 0.0) {
            r.converged = true;
            return r;
        }
        if (std::abs(term) < ctl.abs_tol * std::max(1.0, std::abs(r.value)) ||
            std::abs(term) < ctl.rel_tol * 1e-3 * std::abs(r.value)) {
            if (++small_run >= 2) {
                r.converged = true;
                return r;
            }
        } else {
            small_run = 0;
        }
    }
    return r;
}

double p_f_q(const std::vector<double>& a, const std::vector<double>& b, double z,
             const SeriesControl& ctl) {
    auto r = p_f_q_series(a, b, z, ctl);
    if (!r.converged)
        throw ConvergenceError("p_f_q: series did not converge within " +
                               std::to_string(ctl.max_terms) + " terms");
    return r.value;
}

double conf_hypergeom_m(double a, double b, double z, const SeriesControl& ctl) {
    SeriesControl c = ctl;
    // The series needs roughly |z| terms before they start to fall.
    c.max_terms = std::max(ctl.max_terms, static_cast<int>(4.0 * std::abs(z)) + 50);
    if (z < 0.0) return std::exp(z) * p_f_q({b - a}, {b}, -z, c);
    return p_f_q({a}, {b}, z, c);
}

namespace {

double u_kummer_pair(double a, double b, double z, const SeriesControl& ctl) {
    const double t1 = gamma_fn(1.0 - b) * rgamma(a - b + 1.0);
    const double t2 = gamma_fn(b - 1.0) * rgamma(a);
    double u = 0.0;
    if (t1 != 0.0) u += t1 * conf_hypergeom_m(a, b, z, ctl);
    if (t2 != 0.0) u += t2 * std::pow(z, 1.0 - b) * conf_hypergeom_m(a - b + 1.0, 2.0 - b, z, ctl);
    return u;
}

// log of  Gamma(a) z^a U(a,b,z) = integral of e^{-s} s^{a-1} (1+s/z)^{b-a-1} ds, a > 0.
double log_u_integral_scaled(double a, double b, double z) {
    const double c = b - a - 1.0;
    const double s_max = 80.0 + 10.0 * std::max(0.0, c) + 4.0 * std::max(0.0, a);
    auto g = [&](double s) { return std::exp(-s + c * std::log1p(s / z)); };

    std::vector<double> brk{0.0};
    for (double t = std::min(z, 1.0) * 1e-3; t < s_max; t *= 2.0)
        if (t > 0.0) brk.push_back(t);
    brk.push_back(s_max);

    QuadControl qc;
    qc.abs_tol = 1e-300;
    qc.rel_tol = 1e-14;
    qc.max_subdivisions = 400;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const double lo = brk[i];
        const double hi = brk[i + 1];
        quad::Result r;
        if (lo == 0.0) {
            // s = u^{1/a} removes the s^{a-1} endpoint behaviour.
            if (a < 1.0) {
                const double ia = 1.0 / a;
                auto h = [&](double u) { return g(u <= 0.0 ? 0.0 : std::pow(u, ia)) * ia; };
                r = quad::integrate(h, 0.0, std::pow(hi, a), qc);
            } else {
                auto k = [&](double s) { return s <= 0.0 ? 0.0 : std::pow(s, a - 1.0) * g(s); };
                r = quad::integrate(k, 0.0, hi, qc);
            }
        } else {
            auto k = [&](double s) { return std::pow(s, a - 1.0) * g(s); };
            r = quad::integrate(k, lo, hi, qc);
        }
        total += r.value;
    }
    if (!(total > 0.0)) throw ConvergenceError("conf_hypergeom_u: integral representation failed");
    return std::log(total);
}

// Returns (a', b', shift) so that U(a,b,z) = z^{shift} U(a',b',z) with a' > 0.
struct Shifted {
    double a, b, power;
};

Shifted positive_a(double a, double b) {
    if (a > 0.0) return {a, b, 0.0};
    if (a - b + 1.0 > 0.0) return {a - b + 1.0, 2.0 - b, 1.0 - b};
    throw DomainError("conf_hypergeom_u: integral form needs a > 0 or a-b+1 > 0");
}

bool prefer_integral(double a, double b, double z) {
    if (distance_to_integer(b) < 1e-3) return true;
    if (z > 2.0) return a > 0.0 || a - b + 1.0 > 0.0;
    return false;
}

}  // namespace

double conf_hypergeom_u(double a, double b, double z, const SeriesControl& ctl, UMethod method) {
    if (!(z > 0.0)) throw DomainError("conf_hypergeom_u: z must be > 0");
    if (method == UMethod::Auto) method = prefer_integral(a, b, z) ? UMethod::Integral : UMethod::KummerPair;
    if (method == UMethod::KummerPair) {
        if (distance_to_integer(b) == 0.0)
            throw DomainError("conf_hypergeom_u: Kummer pair undefined for integer b");
        return u_kummer_pair(a, b, z, ctl);
    }
    if (is_nonpositive_integer(a)) return u_kummer_pair(a, b, z, ctl);  // polynomial case
    const auto s = positive_a(a, b);
    const double lu = log_u_integral_scaled(s.a, s.b, z) - std::lgamma(s.a) - s.a * std::log(z);
    return std::exp(lu + s.power * std::log(z));
}

double log_conf_hypergeom_u(double a, double b, double z, const SeriesControl& ctl) {
    if (!(z > 0.0)) throw DomainError("log_conf_hypergeom_u: z must be > 0");
    if (prefer_integral(a, b, z) && !is_nonpositive_integer(a)) {
        const auto s = positive_a(a, b);
        return log_u_integral_scaled(s.a, s.b, z) - std::lgamma(s.a) - s.a * std::log(z) +
               s.power * std::log(z);
    }
    const double u = conf_hypergeom_u(a, b, z, ctl, UMethod::KummerPair);
    if (!(u > 0.0)) throw DomainError("log_conf_hypergeom_u: U is not positive");
    return std::log(u);
}

double whittaker_w(double lam, double mu, double z, const SeriesControl& ctl) {
    if (!(z > 0.0)) throw DomainError("whittaker_w: z must be > 0");
    const double a = mu - lam + 0.5;
    const double b = 1.0 + 2.0 * mu;
    const double u = conf_hypergeom_u(a, b, z, ctl);
    if (u == 0.0) return 0.0;
    const double mag = std::exp(-0.5 * z + (mu + 0.5) * std::log(z) + std::log(std::abs(u)));
    return u < 0.0 ? -mag : mag;
}

double log_whittaker_w(double lam, double mu, double z, const SeriesControl& ctl) {
    if (!(z > 0.0)) throw DomainError("log_whittaker_w: z must be > 0");
    const double a = mu - lam + 0.5;
    const double b = 1.0 + 2.0 * mu;
    return -0.5 * z + (mu + 0.5) * std::log(z) + log_conf_hypergeom_u(a, b, z, ctl);
}

namespace {

double bessel_j1_zero(int k) {
    const double beta = (k + 0.25) * pi;
    double x = beta - 3.0 / (8.0 * beta);
    for (int it = 0; it < 6; ++it) {
        const double j1 = std::cyl_bessel_j(1.0, x);
        const double dj1 = std::cyl_bessel_j(0.0, x) - j1 / x;
        const double step = j1 / dj1;
        x -= step;
        if (std::abs(step) < 1e-15 * x) break;
    }
    return x;
}

}  // namespace

double dispersion_integral(double mu, int panels) {
    if (!(mu > 0.0 && mu < 2.0)) throw DomainError("dispersion_integral: mu must lie in (0, 2)");
    if (panels < 4) throw DomainError("dispersion_integral: need at least 4 panels");
    QuadControl qc;
    qc.abs_tol = 1e-15;
    qc.rel_tol = 1e-12;
    qc.max_subdivisions = 100;

    // On [0, 1] integrate the power series of J_1(x) x^{-mu} term by term;
    // this absorbs the x^{1-mu} endpoint behaviour exactly.
    double sum = 0.0;
    double coef = 0.5;  // 1 / (2^{2k+1} k! (k+1)!)
    for (int k = 0; k < 30; ++k) {
        const double term = coef / (2.0 * k + 2.0 - mu);
        sum += (k % 2 ? -term : term);
        if (term < 1e-18) break;
        coef /= 4.0 * (k + 1.0) * (k + 2.0);
    }
    const double j1 = bessel_j1_zero(1);
    auto f = [&](double x) { return std::cyl_bessel_j(1.0, x) * std::pow(x, -mu); };
    sum += quad::integrate(f, 1.0, j1, qc).value;

    std::vector<double> partial{sum};
    double lo = j1;
    for (int k = 2; k <= panels; ++k) {
        const double hi = bessel_j1_zero(k);
        sum += quad::integrate(f, lo, hi, qc).value;
        partial.push_back(sum);
        lo = hi;
    }
    return quad::wynn_epsilon(partial).value;
}

}  // namespace pnsc::specfun

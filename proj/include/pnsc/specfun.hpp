#pragma once

#include "pnsc/control.hpp"

#include <vector>

namespace pnsc::specfun {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
// exp(euler_gamma) to 20 digits.
inline constexpr double c_g = 1.7810724179901979852;

// Gamma function; throws DomainError at 0, -1, -2, ...
double gamma_fn(double x);
// 1/Gamma(x), equal to 0 at the poles.
double rgamma(double x);
double log_abs_gamma(double x);

// J_order(x) for order >= 0 and x >= 0.
double bessel_j(int order, double x);

struct SeriesResult {
    double value = 0.0;
    int terms = 0;
    double max_abs_term = 0.0;  // used to judge cancellation
    bool converged = false;
};

// Generalized hypergeometric series pFq. The _series form never throws on
// slow convergence; p_f_q throws ConvergenceError instead.
SeriesResult p_f_q_series(const std::vector<double>& a, const std::vector<double>& b, double z,
                          const SeriesControl& ctl = {});
double p_f_q(const std::vector<double>& a, const std::vector<double>& b, double z,
             const SeriesControl& ctl = {});

// Kummer's M(a, b, z) = 1F1(a; b; z).
double conf_hypergeom_m(double a, double b, double z, const SeriesControl& ctl = {});

enum class UMethod { Auto, KummerPair, Integral };

// Tricomi's U(a, b, z) for z > 0.
double conf_hypergeom_u(double a, double b, double z, const SeriesControl& ctl = {},
                        UMethod method = UMethod::Auto);
// log U for z > 0 when U > 0; stays finite where U itself would under/overflow.
double log_conf_hypergeom_u(double a, double b, double z, const SeriesControl& ctl = {});

// Whittaker W_{lam,mu}(z) = exp(-z/2) z^{mu+1/2} U(mu-lam+1/2, 1+2mu, z).
double whittaker_w(double lam, double mu, double z, const SeriesControl& ctl = {});
double log_whittaker_w(double lam, double mu, double z, const SeriesControl& ctl = {});

// Integral of J_1(x) x^{-mu} over (0, inf) for mu in (0, 2). The integral
// is split at the zeros of J_1 and the partial sums accelerated.
double dispersion_integral(double mu, int panels = 48);

}  // namespace pnsc::specfun

#pragma once

#include "pnsc/stable.hpp"

#include <string>
#include <vector>

namespace pnsc {

// Physical description of one carrier's interference field.
struct CarrierLaw {
    double sigma = 4.0;           // path-loss exponent, > 2
    double lambda_spatial = 1.0;  // interferers per unit area
    double moment_ac = 1.0;       // E[(A c)^{4/sigma}]

    void validate() const;
};

struct CarrierStable {
    double alpha = 1.0;
    double scale = 1.0;       // gamma as a scale parameter
    double dispersion = 1.0;  // scale^alpha
};

// alpha = 4/sigma, dispersion = lambda pi E[(A c)^alpha] int_0^inf J_1(x) x^{-alpha} dx.
CarrierStable carrier_alpha_gamma(const CarrierLaw& c);

struct BandwidthLaw {
    enum class Kind { Poisson, PoissonGamma };

    Kind kind = Kind::Poisson;
    double lambda_k = 1.0;  // Poisson mean
    double a = 1.0;         // Gamma shape of the Poisson mean
    double b = 1.0;         // Gamma rate of the Poisson mean
    int k_max = 1;

    static BandwidthLaw poisson(double lambda_k, int k_max);
    static BandwidthLaw poisson_gamma(double a, double b, int k_max);

    void validate() const;
    // Untruncated P(K = k): Poisson, or negative binomial with r = a, p = 1/(1+b).
    double probability(int k) const;
    double log_probability(int k) const;
};

struct MixtureWeights {
    std::vector<int> k;               // occupied-carrier counts with nonzero weight
    std::vector<double> raw;          // P(K = k)
    std::vector<double> normalized;   // raw / normalizer
    double normalizer = 1.0;          // sum of raw over k = 1..k_max
    double zero_atom = 0.0;           // P(K = 0), reported separately
};

MixtureWeights mixture_weights(const BandwidthLaw& law);

struct MixtureComponent {
    int k = 1;
    double weight = 1.0;
    StableParams params;
};

// Symmetric stable mixture sum_k w_k S_alpha(0, k^{1/alpha} gamma, 0; S0).
struct PnscMixture {
    std::vector<MixtureComponent> components;
    double normalizer = 1.0;
    double alpha = 1.0;
    double base_gamma = 1.0;  // per-carrier scale
    double zero_atom = 0.0;

    void validate() const;
};

PnscMixture build_mixture(const CarrierLaw& c, const BandwidthLaw& law);
PnscMixture build_mixture(double alpha, double gamma_scale, const BandwidthLaw& law);
// Same weights, every scale multiplied by s.
PnscMixture rescaled(const PnscMixture& m, double s);

// Geometric power formulas. AsPrinted averages the per-component geometric
// power sqrt(k) gamma C_g^{1/alpha} / C_g with the mixture weights; Exact is
// exp(E log|Y|) of the mixture law itself. They agree for one component.
enum class S0Formula { AsPrinted, Exact };

struct GsnrReport {
    double s0 = 1.0;
    double gsnr = 1.0;
    double c_g = 1.0;
    double amplitude = 1.0;
    double flom_bound = 0.0;  // E|Y| when alpha > 1, +infinity otherwise
};

struct GsnrRow {
    double alpha = 1.0;
    double gamma = 1.0;
    double s0 = 1.0;
    double gsnr = 1.0;
};

struct TailAsymptote {
    double survival = 0.0;
    double pdf = 0.0;
};

namespace mixture {

double pdf(const PnscMixture& m, double y, stable::PdfMethod method = stable::PdfMethod::Auto);
double cdf(const PnscMixture& m, double y);
double survival(const PnscMixture& m, double y);
// Solves cdf(y) = q by bracketing and bisection.
double quantile(const PnscMixture& m, double q);

// Closed-form special cases. Each component is evaluated at its own
// standardized argument y / (k^{1/alpha} gamma) and mapped back with the
// Jacobian. Components whose standardized argument leaves the Holtsmark
// series window fall back to the generic density.
double holtsmark_pdf(const PnscMixture& m, double y);
double whittaker_pdf(const PnscMixture& m, double y);

// Gaussian scale-mixture density given one draw of the auxiliary positive
// stable variable (see stable::smin_draw); its average over draws is pdf().
double conditional_gaussian_pdf(const PnscMixture& m, double y, double lambda_aux);

TailAsymptote tail(const PnscMixture& m, double y);
double flom(const PnscMixture& m, double p);

double geometric_power(const PnscMixture& m, S0Formula formula = S0Formula::AsPrinted);
GsnrReport gsnr(const PnscMixture& m, double amplitude, S0Formula formula = S0Formula::AsPrinted);

std::string to_json(const PnscMixture& m);
std::string to_json(const GsnrReport& r);

}  // namespace mixture

// GSNR over an (alpha, gamma) grid for a fixed bandwidth law; rows ordered by
// alpha then gamma. Throws if GSNR fails to decrease along gamma.
std::vector<GsnrRow> gsnr_surface(const std::vector<double>& alphas, const std::vector<double>& gammas,
                                  double amplitude, const BandwidthLaw& law,
                                  S0Formula formula = S0Formula::AsPrinted);

}  // namespace pnsc

#pragma once

#include "pnsc/control.hpp"
#include "pnsc/rng.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pnsc {

enum class Param { S0, S1 };

struct StableParams {
    double alpha = 2.0;
    double beta = 0.0;
    double gamma = 1.0;  // scale
    double delta = 0.0;
    Param param = Param::S0;

    void validate() const;
    bool operator==(const StableParams&) const = default;
};

enum class ScaleKind { Scale, Dispersion };

// A scale-like quantity tagged with its convention: Dispersion = Scale^alpha.
struct DispersionScale {
    double value = 1.0;
    ScaleKind kind = ScaleKind::Scale;

    double as_scale(double alpha) const;
    double as_dispersion(double alpha) const;
};

double dispersion_of(double scale, double alpha);
double scale_of(double dispersion, double alpha);

struct SminDraw {
    double lambda_aux = 1.0;         // positive alpha/2-stable mixing variable
    double conditional_mean = 0.0;
    double conditional_scale = 1.0;  // standard deviation of the Gaussian given lambda_aux
};

namespace stable {

// Parameterization changes. Both keep alpha, beta, gamma; only delta moves.
StableParams to_s0(const StableParams& p);
StableParams to_s1(const StableParams& p);

std::complex<double> char_fn(const StableParams& p, double theta);

// One Chambers-Mallows-Stuck draw.
double draw(const StableParams& p, Rng& rng);
std::vector<double> sample(const StableParams& p, std::uint64_t seed, std::size_t n);

enum class PdfMethod { Auto, SeriesZolotarev, CfInversion, ClosedForm, Integral };
enum class CdfMethod { Auto, Integral, CfInversion };

std::string to_string(PdfMethod m);

struct Evaluation {
    double value = 0.0;
    PdfMethod method = PdfMethod::Auto;
    bool converged = true;
};

Evaluation pdf_eval(const StableParams& p, double x, PdfMethod method = PdfMethod::Auto,
                    const SeriesControl& ctl = {});
double pdf(const StableParams& p, double x, PdfMethod method = PdfMethod::Auto,
           const SeriesControl& ctl = {});
double cdf(const StableParams& p, double x, CdfMethod method = CdfMethod::Auto);
// 1 - cdf, computed without cancellation in the right tail.
double survival(const StableParams& p, double x, CdfMethod method = CdfMethod::Auto);

// Standard symmetric closed forms (gamma = 1, delta = 0).
double holtsmark_pdf(double x, const SeriesControl& ctl = {});
double whittaker_pdf(double x, const SeriesControl& ctl = {});
// |x| beyond which the double-precision Holtsmark series loses accuracy.
inline constexpr double holtsmark_window = 4.0;

StableParams affine(const StableParams& p, double a, double b);
StableParams convolve(std::span<const StableParams> components);

SminDraw smin_draw(double alpha, double gamma, double delta, Rng& rng);
std::vector<double> smin_sample(double alpha, double gamma, double delta, std::uint64_t seed,
                                std::size_t n);

double tail_survival_asymptotic(const StableParams& p, double x);
double tail_pdf_asymptotic(const StableParams& p, double x);
// c_alpha = sin(pi alpha/2) Gamma(alpha)/pi
double tail_constant(double alpha);

// E|Y|^p. Returns +infinity when the moment does not exist (p >= alpha < 2).
double flom(const StableParams& p, double power);
// Symmetric constant C(p, alpha): E|Y|^p = C(p, alpha) dispersion^{p/alpha}.
double flom_constant(double power, double alpha);

}  // namespace stable
}  // namespace pnsc

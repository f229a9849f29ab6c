#pragma once

#include "pnsc/error.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pnsc {

// Raised when an analytic LRT regime is asked for a point outside the range
// where it is trusted.
class ValidityError : public DomainError {
public:
    explicit ValidityError(const std::string& what) : DomainError(what) {}
};

// Likelihood-ratio detection of antipodal BPSK in symmetric stable noise
// S_alpha(0, gamma_tilde, 0; S0). Lambda(r) = f(r - x_h0) / f(r - x_h1).
enum class Regime { Cauchy, Holtsmark, Whittaker, GeneralSeries, Gaussian, MonteCarlo };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct LrtSpec {
    double alpha = 1.0;
    double gamma_tilde = 1.0;
    double x_h0 = 1.0;
    double x_h1 = -1.0;
    Regime regime = Regime::Cauchy;

    // Throws DomainError on bad values or a regime that does not fit alpha:
    // Cauchy needs alpha = 1, Holtsmark 3/2, Whittaker 2/3, Gaussian 2.
    void validate() const;
};

// Picks the closed-form regime when alpha has one, GeneralSeries otherwise.
Regime natural_regime(double alpha);

// Range of the standardized distance |r - x| / gamma_tilde on which a regime is
// trusted. Both hypotheses must fall inside it.
struct ZWindow {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double abs_z) const { return abs_z >= lo && abs_z <= hi; }
};

// Holtsmark: |z| <= 4. Whittaker: |z| >= 0.05. GeneralSeries: |z| <= w(alpha)
// for alpha > 1 and |z| >= w(alpha) for alpha < 1, where w is found on first
// use by scanning a 0.05 grid against CF inversion and then cached.
ZWindow regime_window(Regime regime, double alpha);

double lrt(const LrtSpec& spec, double r);
double log_lrt(const LrtSpec& spec, double r);

struct LrtResult {
    std::vector<double> r;
    std::vector<double> lambda;
    std::vector<double> log_lambda;
    std::vector<Regime> regime_used;
    std::vector<bool> valid;  // the requested regime was used and matched the fallback to 1e-4
    // Smallest interval holding every valid point; empty when none is valid.
    std::optional<std::pair<double, double>> validity_window;
};

// Points outside the regime window are evaluated with the MonteCarlo regime.
LrtResult lrt_curve(const LrtSpec& spec, const std::vector<double>& r_grid);

// LRT from a histogram of n simulated noise draws with bin width h around
// r - x_h0 and r - x_h1. The standard error is that of log Lambda.
struct HistogramLrt {
    double log_lambda = 0.0;
    double se = 0.0;
};
std::vector<HistogramLrt> histogram_lrt(const LrtSpec& spec, const std::vector<double>& r_grid, std::size_t n,
                                        double h, std::uint64_t seed);

struct CapacityEstimate {
    double bits = 0.0;
    double std_error = 0.0;
};

// C = 1 - E log2(1 + exp(-L)) with L the log-likelihood ratio of the received
// sample toward the hypothesis actually sent; n_mc draws under each
// hypothesis, paired.
CapacityEstimate biso_capacity(const LrtSpec& spec, std::size_t n_mc, std::uint64_t seed, unsigned threads = 0);

}  // namespace pnsc

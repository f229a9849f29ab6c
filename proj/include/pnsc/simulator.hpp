#pragma once

#include "pnsc/mixture.hpp"
#include "pnsc/rng.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pnsc {

// Per-interferer amplitude A.
struct AmplitudeLaw {
    enum class Kind { Constant, Rayleigh };
    Kind kind = Kind::Constant;
    double value = 1.0;  // the constant, or the Rayleigh scale s (E A^2 = 2 s^2)

    double moment(double p) const;  // E[A^p]
    double draw(Rng& rng) const;
};

// Per-interferer signed channel coefficient c.
struct ChannelLaw {
    enum class Kind { Rademacher, Constant, Gaussian };
    Kind kind = Kind::Rademacher;
    double value = 1.0;  // magnitude for Rademacher/Constant, standard deviation for Gaussian

    double abs_moment(double p) const;  // E|c|^p
    double draw(Rng& rng) const;
};

struct Homogeneous {
    double lambda = 1.0;  // per unit area
};

// Intensity lambda(t) tabulated at increasing times; the field uses its
// integral over the window [t_end - tau, t_end].
struct TimeProfile {
    std::vector<double> t;
    std::vector<double> lambda;
    double t_end = 1.0;
    double tau = 1.0;
};

// lambda(r, phi) = lambda0 r^{beta_s - 2}. Drawn as a homogeneous process of
// rate 2 pi lambda0 / beta_s in the coordinate w = r^{beta_s}.
struct SpatialPowerLaw {
    double lambda0 = 1.0;
    double beta_s = 2.0;
};

// Interferers restricted to a sector of opening angle phi.
struct Sector {
    double lambda = 1.0;
    double phi = 6.283185307179586;
};

using IntensityKind = std::variant<Homogeneous, TimeProfile, SpatialPowerLaw, Sector>;

enum class CarrierCoupling {
    Independent,     // each occupied carrier sees its own field
    SharedPositions  // one set of positions, fading and phase drawn per carrier
};

struct FieldConfig {
    double r_t = 100.0;
    double sigma = 4.0;
    AmplitudeLaw fading;
    ChannelLaw channel;
    BandwidthLaw bandwidth = BandwidthLaw::poisson(1.0, 1);
    IntensityKind intensity = Homogeneous{1.0 / 3.141592653589793};
    CarrierCoupling coupling = CarrierCoupling::Independent;

    void validate() const;
};

// Homogeneous-equivalent intensity: lambda, the window integral of lambda(t),
// 2 pi lambda0 / beta_s (rate in w = r^beta_s), or lambda phi / (2 pi).
double map_intensity(const FieldConfig& cfg);
// Mean number of interferers inside the disc of radius r_t.
double expected_count(const FieldConfig& cfg);
// Equivalent planar homogeneous carrier law (intensity, path-loss exponent,
// fading moment) whose stable limit this field has.
CarrierLaw carrier_law_of(const FieldConfig& cfg);

struct Interferer {
    double r = 0.0;    // distance
    double phi = 0.0;  // angular position
    std::vector<double> a;      // A c per carrier
    std::vector<double> phase;  // per carrier, uniform on [0, 2 pi)
};

// Exact draw of the interferers in the disc, with `carriers` fading/phase entries each.
std::vector<Interferer> draw_field(const FieldConfig& cfg, int carriers, Rng& rng);

enum class SimMode {
    Direct,  // every interferer in the disc is drawn
    Hybrid   // nearest n_near exactly, the far remainder as a matched complex Gaussian
};

struct SimOptions {
    SimMode mode = SimMode::Hybrid;
    int n_near = 64;
    unsigned threads = 0;  // 0: PNSC_THREADS or hardware concurrency
};

unsigned default_threads();

struct IQBatch {
    std::size_t replicates = 0;
    int k_max = 1;
    std::vector<std::complex<double>> samples;  // replicates x k_max, row-major; unused carriers are 0
    std::vector<std::uint32_t> k_used;
    std::uint64_t seed = 0;

    const std::complex<double>& at(std::size_t rep, int carrier) const { return samples[rep * k_max + carrier]; }
    std::complex<double> total(std::size_t rep) const;
    // Carrier `carrier` of every replicate, or totals when carrier is empty.
    std::vector<std::complex<double>> column(std::optional<int> carrier) const;
};

// Replicates are generated in blocks of `block_size`, block b from make_stream(seed, b).
inline constexpr std::size_t block_size = 4096;

IQBatch synthesize(const FieldConfig& cfg, std::size_t replicates, std::uint64_t seed, const SimOptions& opt = {});

struct EmpiricalCf {
    std::vector<double> omega;
    std::vector<std::complex<double>> estimate;
    std::vector<double> std_error;       // real part
    std::vector<double> std_error_imag;  // imaginary part
    std::size_t n = 0;
};

// E exp(i omega <u, Y>) along direction angle `theta`; standard errors from a
// bootstrap over 64 contiguous blocks of replicates.
EmpiricalCf empirical_cf(const IQBatch& batch, std::optional<int> carrier, const std::vector<double>& omega,
                         double theta = 0.0);
EmpiricalCf empirical_cf(const std::vector<double>& projected, const std::vector<double>& omega);

std::vector<double> project(const IQBatch& batch, std::optional<int> carrier, double theta = 0.0);

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

struct EmpiricalStats {
    std::vector<double> bin_edges;
    std::vector<double> density;
    std::vector<double> density_se;
    std::vector<double> sorted;  // empirical cdf support
    std::vector<double> survival_at;
    std::vector<Estimate> survival;
    Estimate log_moment;  // E log|<u, Y>|
    std::vector<double> powers;
    std::vector<Estimate> fractional_moments;  // E |<u, Y>|^p

    double ecdf(double x) const;
};

struct StatsRequest {
    double hist_lo = -5.0;
    double hist_hi = 5.0;
    int bins = 50;
    std::vector<double> survival_at;
    std::vector<double> powers;
};

EmpiricalStats empirical_stats(const std::vector<double>& projected, const StatsRequest& req);

// Tail exponent from a least-squares fit of log survival against log x over
// the order statistics whose survival lies in [lo_survival, hi_survival].
double tail_slope(std::vector<double> magnitudes, double hi_survival = 1e-2, double lo_survival = 1e-4);

struct DiscPoint {
    double r_t = 0.0;
    double expected_count = 0.0;
    Estimate cf;       // real part of the empirical CF of carrier 0 at omega
    double analytic = 0.0;
};

// CF at fixed omega while doubling r_t, against the infinite-disc limit.
std::vector<DiscPoint> disc_convergence(FieldConfig cfg, double omega, int doublings, std::size_t replicates,
                                        std::uint64_t seed, const SimOptions& opt = {});

// Columnar CSV: replicate,carrier,re,im for every occupied carrier.
void write_csv(const IQBatch& batch, const std::filesystem::path& path);
// Little-endian binary: "PNSCIQ\0\0", u32 version (1), u32 k_max, u64 replicates,
// u64 seed, u32 k_used[replicates], then f64 (re, im) row-major.
void write_binary(const IQBatch& batch, const std::filesystem::path& path);
IQBatch read_binary(const std::filesystem::path& path);

}  // namespace pnsc

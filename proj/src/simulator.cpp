#include "pnsc/simulator.hpp"

#include "pnsc/error.hpp"
#include "pnsc/specfun.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

namespace pnsc {

using specfun::pi;

namespace {

double open_uniform(Rng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double window_integral(const TimeProfile& p) {
    if (p.t.empty() || p.t.size() != p.lambda.size()) throw ConfigError("time profile: empty or mismatched table");
    if (p.t.size() < 2) throw ConfigError("time profile: need at least two samples");
    if (!(p.tau > 0.0)) throw ConfigError("time profile: tau must be > 0");
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        if (!(p.lambda[i] >= 0.0)) throw ConfigError("time profile: intensities must be >= 0");
        if (i > 0 && !(p.t[i] > p.t[i - 1])) throw ConfigError("time profile: times must increase");
    }
    const double a = p.t_end - p.tau, b = p.t_end;
    if (a < p.t.front() - 1e-12 * std::abs(p.t.front()) || b > p.t.back() + 1e-12 * std::abs(p.t.back()))
        throw ConfigError("time profile: window lies outside the tabulated range");
    auto value_at = [&](double x) {
        const auto it = std::upper_bound(p.t.begin(), p.t.end(), x);
        const std::size_t j = std::clamp<std::size_t>(it - p.t.begin(), 1, p.t.size() - 1);
        const double w = (x - p.t[j - 1]) / (p.t[j] - p.t[j - 1]);
        return p.lambda[j - 1] + w * (p.lambda[j] - p.lambda[j - 1]);
    };
    // Trapezoids over the table nodes that fall inside the window.
    std::vector<double> xs{a};
    for (double t : p.t)
        if (t > a && t < b) xs.push_back(t);
    xs.push_back(b);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) s += 0.5 * (xs[i + 1] - xs[i]) * (value_at(xs[i]) + value_at(xs[i + 1]));
    return s;
}

// The field in the coordinate w = r^beta: homogeneous of rate `rate` on [0, r_t^beta].
struct LineField {
    double beta = 2.0;
    double rate = 1.0;
    double w_max = 1.0;
    double decay = 1.0;      // amplitude w^{-decay}
    double sector = 2 * pi;  // angular support for positions
    double mean_count() const { return rate * w_max; }
};

LineField line_field(const FieldConfig& cfg) {
    LineField f;
    std::visit(overloaded{[&](const Homogeneous& h) { f.rate = h.lambda * pi; },
                          [&](const TimeProfile& t) { f.rate = window_integral(t) * pi; },
                          [&](const SpatialPowerLaw& s) {
                              f.beta = s.beta_s;
                              f.rate = 2 * pi * s.lambda0 / s.beta_s;
                          },
                          [&](const Sector& s) {
                              f.rate = s.lambda * s.phi / 2;
                              f.sector = s.phi;
                          }},
               cfg.intensity);
    f.w_max = std::pow(cfg.r_t, f.beta);
    f.decay = cfg.sigma / (2 * f.beta);
    return f;
}

// Sum of the Poisson remainder beyond w_near, as a complex Gaussian with its
// exact conditional variance given the remainder count.
std::complex<double> gaussian_remainder(const LineField& f, double w_near, double mean_sq_ac, Rng& rng) {
    const double w_lo = w_near, w_hi = f.w_max;
    if (!(w_hi > w_lo)) return {};
    std::poisson_distribution<long long> count(f.rate * (w_hi - w_lo));
    const long long n = count(rng);
    if (n == 0) return {};
    // Mean of w^{-2 decay} for w uniform on [w_lo, w_hi].
    const double q = 1.0 - 2 * f.decay;
    const double lo = std::log(w_lo), hi = std::log(w_hi);
    const double integral = std::abs(q) < 1e-12 ? hi - lo : std::exp(q * lo) * std::expm1(q * (hi - lo)) / q;
    const double var = static_cast<double>(n) * mean_sq_ac * integral / (w_hi - w_lo);
    std::normal_distribution<double> g(0.0, std::sqrt(var / 2));
    const double re = g(rng);
    return {re, g(rng)};
}

}  // namespace

double AmplitudeLaw::moment(double p) const {
    if (kind == Kind::Constant) return std::pow(value, p);
    return std::pow(std::sqrt(2.0) * value, p) * std::tgamma(1.0 + p / 2);
}

double AmplitudeLaw::draw(Rng& rng) const {
    if (kind == Kind::Constant) return value;
    return value * std::sqrt(-2.0 * std::log(open_uniform(rng)));
}

double ChannelLaw::abs_moment(double p) const {
    if (kind != Kind::Gaussian) return std::pow(std::abs(value), p);
    return std::pow(value, p) * std::pow(2.0, p / 2) * std::tgamma((p + 1) / 2) / std::sqrt(pi);
}

double ChannelLaw::draw(Rng& rng) const {
    switch (kind) {
        case Kind::Rademacher: return (rng() >> 63) ? value : -value;
        case Kind::Constant: return value;
        case Kind::Gaussian: {
            std::normal_distribution<double> n(0.0, value);
            return n(rng);
        }
    }
    return value;
}

void FieldConfig::validate() const {
    if (!(r_t > 0.0) || !std::isfinite(r_t)) throw ConfigError("field: r_T must be > 0");
    if (!(sigma > 2.0)) throw ConfigError("field: sigma must be > 2");
    if (!(fading.value > 0.0)) throw ConfigError("field: fading value must be > 0");
    if (!(channel.value > 0.0)) throw ConfigError("field: channel value must be > 0");
    bandwidth.validate();
    std::visit(overloaded{[](const Homogeneous& h) {
                              if (!(h.lambda > 0.0)) throw ConfigError("field: lambda must be > 0");
                          },
                          [](const TimeProfile& t) {
                              if (!(window_integral(t) > 0.0)) throw ConfigError("time profile: zero window intensity");
                          },
                          [this](const SpatialPowerLaw& s) {
                              if (!(s.lambda0 > 0.0)) throw ConfigError("spatial power law: lambda0 must be > 0");
                              if (!(s.beta_s > 0.0)) throw ConfigError("spatial power law: beta_s must be > 0");
                              if (!(s.beta_s < sigma))
                                  throw ConfigError("spatial power law: beta_s must be below sigma for a stable limit");
                          },
                          [](const Sector& s) {
                              if (!(s.lambda > 0.0)) throw ConfigError("sector: lambda must be > 0");
                              if (!(s.phi > 0.0 && s.phi <= 2 * pi + 1e-12)) throw ConfigError("sector: phi must lie in (0, 2 pi]");
                          }},
               intensity);
}

double map_intensity(const FieldConfig& cfg) {
    return std::visit(overloaded{[](const Homogeneous& h) { return h.lambda; },
                                 [](const TimeProfile& t) { return window_integral(t); },
                                 [](const SpatialPowerLaw& s) { return 2 * pi * s.lambda0 / s.beta_s; },
                                 [](const Sector& s) { return s.lambda * s.phi / (2 * pi); }},
                      cfg.intensity);
}

double expected_count(const FieldConfig& cfg) {
    cfg.validate();
    return line_field(cfg).mean_count();
}

CarrierLaw carrier_law_of(const FieldConfig& cfg) {
    cfg.validate();
    const auto f = line_field(cfg);
    CarrierLaw c;
    c.sigma = 2 * cfg.sigma / f.beta;
    c.lambda_spatial = f.rate / pi;
    const double alpha = 4.0 / c.sigma;
    c.moment_ac = cfg.fading.moment(alpha) * cfg.channel.abs_moment(alpha);
    return c;
}

std::vector<Interferer> draw_field(const FieldConfig& cfg, int carriers, Rng& rng) {
    cfg.validate();
    if (carriers < 0) throw DomainError("draw_field: carriers must be >= 0");
    const auto f = line_field(cfg);
    std::poisson_distribution<long long> count(f.mean_count());
    const long long n = count(rng);
    std::vector<Interferer> out(static_cast<std::size_t>(n));
    for (auto& it : out) {
        it.r = std::pow(f.w_max * open_uniform(rng), 1.0 / f.beta);
        it.phi = f.sector * open_uniform(rng);
        it.a.resize(carriers);
        it.phase.resize(carriers);
        for (int k = 0; k < carriers; ++k) {
            it.a[k] = cfg.fading.draw(rng) * cfg.channel.draw(rng);
            it.phase[k] = 2 * pi * open_uniform(rng);
        }
    }
    return out;
}

unsigned default_threads() {
    if (const char* env = std::getenv("PNSC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::complex<double> IQBatch::total(std::size_t rep) const {
    std::complex<double> s{};
    for (int k = 0; k < k_max; ++k) s += at(rep, k);
    return s;
}

std::vector<std::complex<double>> IQBatch::column(std::optional<int> carrier) const {
    if (carrier && (*carrier < 0 || *carrier >= k_max)) throw DomainError("IQBatch: carrier index out of range");
    std::vector<std::complex<double>> out(replicates);
    for (std::size_t r = 0; r < replicates; ++r) out[r] = carrier ? at(r, *carrier) : total(r);
    return out;
}

namespace {

class Synthesizer {
public:
    Synthesizer(const FieldConfig& cfg, const SimOptions& opt)
        : cfg_(cfg), opt_(opt), field_(line_field(cfg)), weights_(mixture_weights(cfg.bandwidth)) {
        mean_sq_ac_ = cfg.fading.moment(2.0) * cfg.channel.abs_moment(2.0);
    }

    void block(std::uint64_t seed, std::size_t b, IQBatch& out) const {
        auto rng = make_stream(seed, b);
        std::discrete_distribution<std::size_t> pick(weights_.normalized.begin(), weights_.normalized.end());
        const std::size_t first = b * block_size;
        const std::size_t last = std::min(out.replicates, first + block_size);
        std::vector<double> w;
        for (std::size_t r = first; r < last; ++r) {
            const int k = weights_.k[pick(rng)];
            out.k_used[r] = static_cast<std::uint32_t>(k);
            std::complex<double>* row = &out.samples[r * out.k_max];
            if (cfg_.coupling == CarrierCoupling::Independent) {
                for (int c = 0; c < k; ++c) {
                    draw_positions(rng, w);
                    row[c] = carrier_sum(rng, w);
                }
            } else {
                draw_positions(rng, w);
                for (int c = 0; c < k; ++c) row[c] = carrier_sum(rng, w);
            }
        }
    }

private:
    // Fills w with interferer coordinates (w = r^beta). In hybrid mode they are
    // the nearest n_near in increasing order.
    void draw_positions(Rng& rng, std::vector<double>& w) const {
        w.clear();
        if (opt_.mode == SimMode::Direct) {
            std::poisson_distribution<long long> count(field_.mean_count());
            const long long n = count(rng);
            for (long long i = 0; i < n; ++i) w.push_back(field_.w_max * open_uniform(rng));
            return;
        }
        double arrival = 0.0;
        for (int i = 0; i < opt_.n_near; ++i) {
            arrival += -std::log(open_uniform(rng));
            const double wi = arrival / field_.rate;
            if (wi > field_.w_max) return;
            w.push_back(wi);
        }
    }

    std::complex<double> carrier_sum(Rng& rng, const std::vector<double>& w) const {
        std::complex<double> s{};
        for (double wi : w) {
            const double amp = cfg_.fading.draw(rng) * cfg_.channel.draw(rng) * std::exp(-field_.decay * std::log(wi));
            const double ph = 2 * pi * open_uniform(rng);
            s += std::polar(amp, ph);
        }
        if (opt_.mode == SimMode::Hybrid && static_cast<int>(w.size()) == opt_.n_near)
            s += gaussian_remainder(field_, w.back(), mean_sq_ac_, rng);
        return s;
    }

    const FieldConfig& cfg_;
    const SimOptions& opt_;
    LineField field_;
    MixtureWeights weights_;
    double mean_sq_ac_ = 1.0;
};

}  // namespace

IQBatch synthesize(const FieldConfig& cfg, std::size_t replicates, std::uint64_t seed, const SimOptions& opt) {
    cfg.validate();
    if (replicates < 1) throw DomainError("synthesize: replicates must be >= 1");
    if (opt.n_near < 1) throw DomainError("synthesize: n_near must be >= 1");
    IQBatch out;
    out.replicates = replicates;
    out.k_max = cfg.bandwidth.k_max;
    out.seed = seed;
    out.samples.assign(replicates * static_cast<std::size_t>(out.k_max), {});
    out.k_used.assign(replicates, 0);

    const Synthesizer synth(cfg, opt);
    const std::size_t blocks = (replicates + block_size - 1) / block_size;
    const unsigned threads = static_cast<unsigned>(
        std::min<std::size_t>(blocks, opt.threads ? opt.threads : default_threads()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&] {
        try {
            for (std::size_t b = next++; b < blocks; b = next++) synth.block(seed, b, out);
        } catch (...) {
            std::lock_guard lock(failure_lock);
            if (!failure) failure = std::current_exception();
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<double> project(const IQBatch& batch, std::optional<int> carrier, double theta) {
    const auto col = batch.column(carrier);
    const double c = std::cos(theta), s = std::sin(theta);
    std::vector<double> out(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) out[i] = c * col[i].real() + s * col[i].imag();
    return out;
}

EmpiricalCf empirical_cf(const std::vector<double>& x, const std::vector<double>& omega) {
    if (x.empty()) throw DomainError("empirical_cf: empty sample");
    const std::size_t n = x.size();
    const std::size_t nb = std::min<std::size_t>(64, n);
    constexpr int resamples = 400;
    EmpiricalCf cf;
    cf.omega = omega;
    cf.n = n;
    auto boot_rng = make_stream(0x0b00757a9ULL, 0);
    std::vector<std::size_t> picks(static_cast<std::size_t>(resamples) * nb);
    std::uniform_int_distribution<std::size_t> uni(0, nb - 1);
    for (auto& p : picks) p = uni(boot_rng);
    for (double w : omega) {
        if (w == 0.0) {
            cf.estimate.emplace_back(1.0, 0.0);
            cf.std_error.push_back(0.0);
            cf.std_error_imag.push_back(0.0);
            continue;
        }
        std::vector<double> sum_c(nb, 0.0), sum_s(nb, 0.0), size(nb, 0.0);
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t lo = b * n / nb, hi = (b + 1) * n / nb;
            for (std::size_t i = lo; i < hi; ++i) {
                sum_c[b] += std::cos(w * x[i]);
                sum_s[b] += std::sin(w * x[i]);
            }
            size[b] = static_cast<double>(hi - lo);
        }
        const double tc = std::accumulate(sum_c.begin(), sum_c.end(), 0.0);
        const double ts = std::accumulate(sum_s.begin(), sum_s.end(), 0.0);
        cf.estimate.emplace_back(tc / n, ts / n);
        double m1c = 0, m2c = 0, m1s = 0, m2s = 0;
        for (int r = 0; r < resamples; ++r) {
            double c = 0, s = 0, m = 0;
            for (std::size_t j = 0; j < nb; ++j) {
                const std::size_t b = picks[r * nb + j];
                c += sum_c[b];
                s += sum_s[b];
                m += size[b];
            }
            c /= m;
            s /= m;
            m1c += c;
            m2c += c * c;
            m1s += s;
            m2s += s * s;
        }
        m1c /= resamples;
        m1s /= resamples;
        cf.std_error.push_back(std::sqrt(std::max(0.0, m2c / resamples - m1c * m1c)));
        cf.std_error_imag.push_back(std::sqrt(std::max(0.0, m2s / resamples - m1s * m1s)));
    }
    return cf;
}

EmpiricalCf empirical_cf(const IQBatch& batch, std::optional<int> carrier, const std::vector<double>& omega,
                         double theta) {
    return empirical_cf(project(batch, carrier, theta), omega);
}

double EmpiricalStats::ecdf(double x) const {
    if (sorted.empty()) throw DomainError("ecdf: no data");
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin()) / sorted.size();
}

namespace {

Estimate mean_and_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double m = 0.0;
    for (double x : v) m += x;
    m /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, v.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0};
}

}  // namespace

EmpiricalStats empirical_stats(const std::vector<double>& x, const StatsRequest& req) {
    if (x.empty()) throw DomainError("empirical_stats: empty sample");
    if (!(req.hist_hi > req.hist_lo) || req.bins < 1) throw DomainError("empirical_stats: bad histogram range");
    EmpiricalStats s;
    const double n = static_cast<double>(x.size());
    const double h = (req.hist_hi - req.hist_lo) / req.bins;
    for (int i = 0; i <= req.bins; ++i) s.bin_edges.push_back(req.hist_lo + i * h);
    std::vector<double> counts(req.bins, 0.0);
    for (double v : x) {
        if (v < req.hist_lo || v >= req.hist_hi) continue;
        counts[std::min(req.bins - 1, static_cast<int>((v - req.hist_lo) / h))] += 1.0;
    }
    for (double c : counts) {
        const double p = c / n;
        s.density.push_back(p / h);
        s.density_se.push_back(std::sqrt(p * (1 - p) / n) / h);
    }
    s.sorted = x;
    std::sort(s.sorted.begin(), s.sorted.end());
    s.survival_at = req.survival_at;
    for (double t : req.survival_at) {
        const double p = 1.0 - s.ecdf(t);
        s.survival.push_back({p, std::sqrt(p * (1 - p) / n)});
    }
    std::vector<double> tmp(x.size());
    std::transform(x.begin(), x.end(), tmp.begin(), [](double v) { return std::log(std::abs(v)); });
    s.log_moment = mean_and_se(tmp);
    s.powers = req.powers;
    for (double p : req.powers) {
        std::transform(x.begin(), x.end(), tmp.begin(), [p](double v) { return std::pow(std::abs(v), p); });
        s.fractional_moments.push_back(mean_and_se(tmp));
    }
    return s;
}

double tail_slope(std::vector<double> m, double hi_survival, double lo_survival) {
    if (!(hi_survival > lo_survival && lo_survival > 0.0 && hi_survival < 1.0))
        throw DomainError("tail_slope: need 0 < lo_survival < hi_survival < 1");
    const std::size_t n = m.size();
    const auto i_lo = static_cast<std::size_t>(std::ceil(lo_survival * n));
    const auto i_hi = static_cast<std::size_t>(std::floor(hi_survival * n));
    if (i_lo < 1 || i_hi < i_lo + 2) throw DomainError("tail_slope: too few order statistics in the fitting range");
    for (double& v : m) v = std::abs(v);
    std::sort(m.begin(), m.end(), std::greater<>());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
        const double lx = std::log(m[i - 1]);
        const double ly = std::log(static_cast<double>(i) / n);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        cnt += 1;
    }
    return -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

std::vector<DiscPoint> disc_convergence(FieldConfig cfg, double omega, int doublings, std::size_t replicates,
                                        std::uint64_t seed, const SimOptions& opt) {
    if (doublings < 0) throw DomainError("disc_convergence: doublings must be >= 0");
    const auto law = carrier_alpha_gamma(carrier_law_of(cfg));
    const double analytic = std::exp(-law.dispersion * std::pow(std::abs(omega), law.alpha));
    std::vector<DiscPoint> out;
    for (int d = 0; d <= doublings; ++d) {
        if (d > 0) cfg.r_t *= 2;
        const auto batch = synthesize(cfg, replicates, seed, opt);
        const auto cf = empirical_cf(batch, 0, {omega});
        out.push_back({cfg.r_t, expected_count(cfg), {cf.estimate[0].real(), cf.std_error[0]}, analytic});
    }
    return out;
}

void write_csv(const IQBatch& batch, const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    std::fputs("replicate,carrier,re,im\n", f);
    for (std::size_t r = 0; r < batch.replicates; ++r)
        for (std::uint32_t k = 0; k < batch.k_used[r]; ++k) {
            const auto v = batch.at(r, static_cast<int>(k));
            std::fprintf(f, "%zu,%u,%.12g,%.12g\n", r, k, v.real(), v.imag());
        }
    const bool bad = std::ferror(f) != 0;
    if (std::fclose(f) != 0 || bad) throw IoError("write failed for " + path.string());
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary batch format assumes a little-endian host");
constexpr char kMagic[8] = {'P', 'N', 'S', 'C', 'I', 'Q', '\0', '\0'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw IoError("truncated batch file");
    return v;
}

}  // namespace

void write_binary(const IQBatch& batch, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(kMagic, sizeof kMagic);
    put(os, kVersion);
    put(os, static_cast<std::uint32_t>(batch.k_max));
    put(os, static_cast<std::uint64_t>(batch.replicates));
    put(os, batch.seed);
    os.write(reinterpret_cast<const char*>(batch.k_used.data()),
             static_cast<std::streamsize>(batch.k_used.size() * sizeof(std::uint32_t)));
    os.write(reinterpret_cast<const char*>(batch.samples.data()),
             static_cast<std::streamsize>(batch.samples.size() * sizeof(std::complex<double>)));
    if (!os) throw IoError("write failed for " + path.string());
}

IQBatch read_binary(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw IoError(path.string() + " is not a batch file");
    if (get<std::uint32_t>(is) != kVersion) throw IoError("unsupported batch file version");
    IQBatch b;
    b.k_max = static_cast<int>(get<std::uint32_t>(is));
    b.replicates = get<std::uint64_t>(is);
    b.seed = get<std::uint64_t>(is);
    b.k_used.resize(b.replicates);
    b.samples.resize(b.replicates * b.k_max);
    is.read(reinterpret_cast<char*>(b.k_used.data()), static_cast<std::streamsize>(b.k_used.size() * sizeof(std::uint32_t)));
    is.read(reinterpret_cast<char*>(b.samples.data()),
            static_cast<std::streamsize>(b.samples.size() * sizeof(std::complex<double>)));
    if (!is) throw IoError("truncated batch file");
    return b;
}

}  // namespace pnsc

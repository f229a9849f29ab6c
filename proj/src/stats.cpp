#include "pnsc/stats.hpp"

#include "pnsc/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace pnsc::stats {

double kolmogorov_q(double lambda) {
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 ? term : -term);
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p(double d, double n_eff) {
    const double s = std::sqrt(n_eff);
    return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

}  // namespace

TestResult ks_one_sample(std::vector<double> data, const std::function<double(double)>& cdf) {
    if (data.empty()) throw DomainError("ks_one_sample: empty sample");
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double f = cdf(data[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return {d, ks_p(d, n), 0};
}

TestResult ks_one_sample_sparse(std::vector<double> data, const std::function<double(double)>& cdf,
                                std::size_t stride) {
    if (data.empty()) throw DomainError("ks_one_sample_sparse: empty sample");
    if (stride == 0) throw DomainError("ks_one_sample_sparse: stride must be positive");
    std::sort(data.begin(), data.end());
    std::vector<double> kx, kf;
    for (std::size_t i = 0; i < data.size(); i += stride) {
        kx.push_back(data[i]);
        kf.push_back(cdf(data[i]));
    }
    if (kx.back() != data.back()) {
        kx.push_back(data.back());
        kf.push_back(cdf(data.back()));
    }
    auto interp = [&](double x) {
        auto it = std::lower_bound(kx.begin(), kx.end(), x);
        if (it == kx.end()) return kf.back();
        const auto j = static_cast<std::size_t>(it - kx.begin());
        if (*it == x || j == 0) return kf[j];
        const double t = (x - kx[j - 1]) / (kx[j] - kx[j - 1]);
        return kf[j - 1] + t * (kf[j] - kf[j - 1]);
    };
    return ks_one_sample(std::move(data), interp);
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return {d, ks_p(d, na * nb / (na + nb)), 0};
}

TestResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& expected,
                          int fitted_parameters, double min_expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw DomainError("chi_square_gof: size mismatch");
    std::vector<double> o, e;
    double ob = 0.0, eb = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        ob += observed[i];
        eb += expected[i];
        if (eb >= min_expected) {
            o.push_back(ob);
            e.push_back(eb);
            ob = eb = 0.0;
        }
    }
    if (eb > 0.0 || ob > 0.0) {
        if (e.empty()) {
            o.push_back(ob);
            e.push_back(eb);
        } else {
            o.back() += ob;
            e.back() += eb;
        }
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < o.size(); ++i) stat += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
    const int dof = static_cast<int>(o.size()) - 1 - fitted_parameters;
    if (dof < 1) throw DomainError("chi_square_gof: not enough cells");
    return {stat, boost::math::gamma_q(0.5 * dof, 0.5 * stat), dof};
}

MeanSe mean_se(const std::vector<double>& x) {
    if (x.size() < 2) throw DomainError("mean_se: need at least two values");
    double m = 0.0;
    for (double v : x) m += v;
    m /= x.size();
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / (x.size() - 1) / x.size())};
}

}  // namespace pnsc::stats

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pnsc::stats {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int dof = 0;  // chi-square only
};

// Kolmogorov limiting survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

TestResult ks_one_sample(std::vector<double> data, const std::function<double(double)>& cdf);
// Same test with the cdf evaluated only at every `stride`-th order statistic
// and interpolated linearly in between. For 1e5 draws and stride 50 the
// interpolation error is far below the KS statistic.
TestResult ks_one_sample_sparse(std::vector<double> data, const std::function<double(double)>& cdf,
                                std::size_t stride = 50);
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Pearson goodness of fit. Cells with expected count below `min_expected`
// are pooled with their neighbours first.
TestResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& expected,
                          int fitted_parameters = 0, double min_expected = 5.0);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};
MeanSe mean_se(const std::vector<double>& x);

}  // namespace pnsc::stats

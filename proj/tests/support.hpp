#pragma once

#include "pnsc/stats.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace pnsc::test_support {

inline stats::TestResult ks_interpolated(std::vector<double> data, const std::function<double(double)>& cdf,
                                         std::size_t stride = 50) {
    return stats::ks_one_sample_sparse(std::move(data), cdf, stride);
}

inline double median(std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

}  // namespace pnsc::test_support

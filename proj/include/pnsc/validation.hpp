#pragma once

#include "pnsc/simulator.hpp"
#include "pnsc/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pnsc::validation {

enum class Bound { AtMost, AtLeast };

struct Check {
    std::string suite;
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    Bound bound = Bound::AtMost;
    bool passed = false;
};

Check make_check(std::string suite, std::string name, double statistic, double threshold, Bound bound);

struct Report {
    std::vector<Check> checks;
    bool passed() const;
};

struct Config {
    std::uint64_t seed = 20240611;
    unsigned threads = 0;
    std::vector<std::string> suites{"cf", "mixture", "mapping", "lrt"};

    std::size_t cf_replicates = 200'000;
    double cf_expected_count = 1e4;
    std::vector<double> cf_omega{0.2, 0.5, 1.0, 2.0};
    double cf_z_max = 3.0;

    std::size_t mixture_replicates = 20'000;
    std::size_t mapping_replicates = 20'000;
    int count_draws = 20'000;
    std::size_t lrt_draws = 2'000'000;
    double p_min = 0.01;

    // Multiplies every analytic scale compared against simulation. Values
    // other than 1 exist to confirm the suite notices a wrong model.
    double gamma_corruption = 1.0;

    void validate() const;
};

// Reference field: unit-modulus Rademacher interferers, sigma = 4, one
// carrier, disc radius chosen for `expected` interferers at lambda = 1 / pi.
FieldConfig reference_field(double sigma, double expected);

// Pearson test of the interferer count of draw_field against
// Poisson(expected_count(cfg)).
stats::TestResult count_gof(const FieldConfig& cfg, int draws, std::uint64_t seed);

Report run(const Config& cfg);

// The text form is rendered from the JSON document, so both always agree.
std::string to_json(const Report& r);
std::string to_text(const Report& r);

}  // namespace pnsc::validation

#pragma once

#include "pnsc/mixture.hpp"
#include "pnsc/receiver.hpp"
#include "pnsc/simulator.hpp"
#include "pnsc/stable.hpp"
#include "pnsc/validation.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pnsc::cli {

enum ExitCode : int {
    Ok = 0,
    Failure = 1,
    ConfigFailure = 2,
    NonConvergence = 3,
    IoFailure = 4,
    ValidationFailure = 5,
};

inline constexpr int schema_version = 1;

enum class Model { Stable, Mixture };

struct MixtureSpec {
    double alpha = 1.0;
    double gamma = 1.0;  // per-carrier scale
    BandwidthLaw bandwidth = BandwidthLaw::poisson(1.0, 1);
};

struct SimulateSpec {
    std::size_t replicates = 10'000;
    SimOptions options;
    std::string csv;     // empty: not written
    std::string binary;  // empty: not written
    std::string summary; // empty: standard output
};

struct GsnrSpec {
    std::vector<double> alphas;
    std::vector<double> gammas;
    double amplitude = 1.0;
    BandwidthLaw bandwidth = BandwidthLaw::poisson(10.0, 64);
    S0Formula formula = S0Formula::AsPrinted;
};

struct RunConfig {
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string output;  // empty: standard output

    Model model = Model::Stable;
    StableParams stable{1.0, 0.0, 1.0, 0.0};
    stable::PdfMethod pdf_method = stable::PdfMethod::Auto;
    stable::CdfMethod cdf_method = stable::CdfMethod::Auto;
    SeriesControl series;
    MixtureSpec mixture;
    std::vector<double> x{0.0};
    std::size_t sample_count = 1000;
    bool tail_exact = false;  // tail: exact survival instead of the power-law asymptote

    FieldConfig field;
    SimulateSpec simulate;

    LrtSpec lrt;
    std::vector<double> r{0.0};
    std::string lrt_summary;  // empty: standard error stream
    std::size_t capacity_n_mc = 100'000;

    GsnrSpec gsnr;
    validation::Config validate;
    std::string report;  // validate: JSON report path; empty: standard output only
};

// Parses a JSON configuration document. Unknown keys, a missing or
// unsupported schema_version, and values outside their domain raise
// ConfigError.
RunConfig parse_config(std::string_view json_text);

// Runs one invocation, e.g. {"pdf", "--alpha", "1", "--x", "0"}. Results go
// to `out` unless redirected by the configuration; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pnsc::cli

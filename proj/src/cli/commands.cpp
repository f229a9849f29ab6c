#include "pnsc/cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>

namespace pnsc::cli {

namespace {

using nlohmann::json;
using Patch = std::function<void(json&)>;

// "{model}" in a pointer stands for the section of the selected model.
std::string resolve(std::string pointer, const json& doc) {
    const auto at = pointer.find("{model}");
    if (at != std::string::npos) pointer.replace(at, 7, doc.value("model", std::string("stable")));
    return pointer;
}

// A command-line option that, when given, overwrites one value of the
// configuration document.
template <class T>
void override_option(CLI::App* app, std::vector<Patch>& patches, const std::string& flag, std::string pointer,
          const std::string& help) {
    auto value = std::make_shared<T>();
    auto* opt = app->add_option(flag, *value, help);
    patches.push_back([value, opt, pointer](json& doc) {
        if (opt->count() > 0) doc[json::json_pointer(resolve(pointer, doc))] = *value;
    });
}

// Selecting a different intensity kind discards the parameters of the old one.
void bind_intensity_kind(CLI::App* app, std::vector<Patch>& patches) {
    auto kind = std::make_shared<std::string>();
    auto* opt = app->add_option("--intensity", *kind, "homogeneous | time_profile | spatial_power_law | sector");
    patches.push_back([kind, opt](json& doc) {
        if (opt->count() == 0) return;
        auto& node = doc["field"]["intensity"];
        if (!node.is_object() || node.value("kind", std::string("homogeneous")) != *kind) node = json::object();
        node["kind"] = *kind;
    });
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path);
    f << content;
    if (!f.flush()) throw IoError("write failed for " + path);
}

void emit(const std::string& path, const std::string& content, std::ostream& fallback) {
    if (path.empty())
        fallback << content;
    else
        write_file(path, content);
}

std::ostringstream csv_stream() {
    std::ostringstream os;
    os.precision(12);
    return os;
}

const char* boolean(bool b) { return b ? "true" : "false"; }

PnscMixture mixture_of(const RunConfig& c) {
    return build_mixture(c.mixture.alpha, c.mixture.gamma, c.mixture.bandwidth);
}

enum class Quantity { Pdf, Cdf, Tail };

std::string cdf_method_name(stable::CdfMethod m) {
    switch (m) {
        case stable::CdfMethod::Auto: return "auto";
        case stable::CdfMethod::Integral: return "integral";
        case stable::CdfMethod::CfInversion: return "cf_inversion";
    }
    return "unknown";
}

std::string nominal_method(const RunConfig& c, Quantity q) {
    const bool mixed = c.model == Model::Mixture;
    switch (q) {
        case Quantity::Pdf: return (mixed ? "mixture_" : "") + stable::to_string(c.pdf_method);
        case Quantity::Cdf: return mixed ? "mixture" : cdf_method_name(c.cdf_method);
        case Quantity::Tail: return c.tail_exact ? "exact" : "asymptote";
    }
    return "unknown";
}

int cmd_density(const RunConfig& c, Quantity q, std::ostream& out) {
    auto os = csv_stream();
    os << "x,value,method,converged\n";
    bool all_converged = true;
    const bool mixed = c.model == Model::Mixture;
    const auto m = mixed ? std::optional(mixture_of(c)) : std::nullopt;
    for (double x : c.x) {
        double value = std::numeric_limits<double>::quiet_NaN();
        std::string method = nominal_method(c, q);
        bool converged = true;
        try {
            switch (q) {
                case Quantity::Pdf:
                    if (mixed) {
                        value = mixture::pdf(*m, x, c.pdf_method);
                    } else {
                        const auto e = stable::pdf_eval(c.stable, x, c.pdf_method, c.series);
                        value = e.value;
                        method = stable::to_string(e.method);
                        converged = e.converged;
                    }
                    break;
                case Quantity::Cdf:
                    value = mixed ? mixture::cdf(*m, x) : stable::cdf(c.stable, x, c.cdf_method);
                    break;
                case Quantity::Tail:
                    if (c.tail_exact)
                        value = mixed ? mixture::survival(*m, x) : stable::survival(c.stable, x, c.cdf_method);
                    else
                        value = mixed ? mixture::tail(*m, x).survival : stable::tail_survival_asymptotic(c.stable, x);
                    break;
            }
        } catch (const ConvergenceError&) {
            converged = false;
        }
        all_converged = all_converged && converged;
        os << x << "," << value << "," << method << "," << boolean(converged) << "\n";
    }
    emit(c.output, os.str(), out);
    return all_converged ? Ok : NonConvergence;
}

int cmd_sample(const RunConfig& c, std::ostream& out) {
    std::vector<double> draws;
    if (c.model == Model::Stable) {
        draws = stable::sample(c.stable, c.seed, c.sample_count);
    } else {
        const auto m = mixture_of(c);
        std::vector<double> w;
        for (const auto& comp : m.components) w.push_back(comp.weight);
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        auto rng = make_stream(c.seed, 0);
        draws.reserve(c.sample_count);
        for (std::size_t i = 0; i < c.sample_count; ++i) draws.push_back(stable::draw(m.components[pick(rng)].params, rng));
    }
    auto os = csv_stream();
    os << "index,value\n";
    for (std::size_t i = 0; i < draws.size(); ++i) os << i << "," << draws[i] << "\n";
    emit(c.output, os.str(), out);
    return Ok;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
    SimOptions opt = c.simulate.options;
    opt.threads = c.threads;
    const auto batch = synthesize(c.field, c.simulate.replicates, c.seed, opt);
    if (!c.simulate.csv.empty()) write_csv(batch, c.simulate.csv);
    if (!c.simulate.binary.empty()) write_binary(batch, c.simulate.binary);

    const auto law = carrier_alpha_gamma(carrier_law_of(c.field));
    json s;
    s["lambda_star"] = map_intensity(c.field);
    s["expected_count"] = expected_count(c.field);
    s["alpha"] = law.alpha;
    s["gamma_scale"] = law.scale;
    s["dispersion"] = law.dispersion;
    std::vector<double> moduli;
    for (std::size_t r = 0; r < batch.replicates; ++r)
        if (batch.k_used[r] > 0) moduli.push_back(std::abs(batch.at(r, 0)));
    try {
        s["alpha_hat"] = tail_slope(std::move(moduli));
    } catch (const DomainError&) {
        s["alpha_hat"] = nullptr;  // too few samples in the tail window
    }
    s["replicates"] = batch.replicates;
    s["k_max"] = batch.k_max;
    s["seed"] = c.seed;
    s["mode"] = opt.mode == SimMode::Hybrid ? "hybrid" : "direct";
    s["n_near"] = opt.n_near;
    s["csv"] = c.simulate.csv.empty() ? json(nullptr) : json(c.simulate.csv);
    s["binary"] = c.simulate.binary.empty() ? json(nullptr) : json(c.simulate.binary);
    emit(c.simulate.summary.empty() ? c.output : c.simulate.summary, s.dump(2) + "\n", out);
    return Ok;
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
    const auto report = validation::run(c.validate);
    std::string text = validation::to_text(report);
    if (c.report.empty())
        text += validation::to_json(report) + "\n";
    else
        write_file(c.report, validation::to_json(report) + "\n");
    emit(c.output, text, out);
    return report.passed() ? Ok : ValidationFailure;
}

int cmd_lrt(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto curve = lrt_curve(c.lrt, c.r);
    auto os = csv_stream();
    os << "r,lambda,log_lambda,regime,valid\n";
    for (std::size_t i = 0; i < curve.r.size(); ++i)
        os << curve.r[i] << "," << curve.lambda[i] << "," << curve.log_lambda[i] << ","
           << to_string(curve.regime_used[i]) << "," << boolean(curve.valid[i]) << "\n";
    emit(c.output, os.str(), out);

    json s;
    s["alpha"] = c.lrt.alpha;
    s["gamma_tilde"] = c.lrt.gamma_tilde;
    s["x_h0"] = c.lrt.x_h0;
    s["x_h1"] = c.lrt.x_h1;
    s["regime"] = to_string(c.lrt.regime);
    s["points"] = curve.r.size();
    s["valid_points"] = std::count(curve.valid.begin(), curve.valid.end(), true);
    s["validity_window"] = curve.validity_window
                               ? json::array({curve.validity_window->first, curve.validity_window->second})
                               : json(nullptr);
    emit(c.lrt_summary, s.dump(2) + "\n", err);
    return Ok;
}

int cmd_gsnr(const RunConfig& c, std::ostream& out) {
    const auto rows = gsnr_surface(c.gsnr.alphas, c.gsnr.gammas, c.gsnr.amplitude, c.gsnr.bandwidth, c.gsnr.formula);
    auto os = csv_stream();
    os << "alpha,gamma,s0,gsnr\n";
    for (const auto& r : rows) os << r.alpha << "," << r.gamma << "," << r.s0 << "," << r.gsnr << "\n";
    emit(c.output, os.str(), out);
    return Ok;
}

int cmd_capacity(const RunConfig& c, std::ostream& out) {
    const auto est = biso_capacity(c.lrt, c.capacity_n_mc, c.seed, c.threads);
    json s;
    s["alpha"] = c.lrt.alpha;
    s["gamma_tilde"] = c.lrt.gamma_tilde;
    s["n_mc"] = c.capacity_n_mc;
    s["seed"] = c.seed;
    s["bits"] = est.bits;
    s["std_error"] = est.std_error;
    emit(c.output, s.dump(2) + "\n", out);
    return Ok;
}

struct Invocation {
    CLI::App app{"Stable-law interference models: densities, simulation, detection"};
    std::string config_path;
    std::vector<Patch> patches;
    std::map<std::string, CLI::App*> subs;

    Invocation() {
        app.require_subcommand(1, 1);
        for (const char* name : {"pdf", "cdf", "tail", "sample"}) {
            auto* s = add(name);
            override_option<std::string>(s, patches, "--model", "/model", "stable | mixture");
            override_option<double>(s, patches, "--alpha", "/{model}/alpha", "characteristic exponent");
            override_option<double>(s, patches, "--gamma", "/{model}/gamma", "scale (per carrier for mixtures)");
            override_option<double>(s, patches, "--beta", "/stable/beta", "skewness");
            override_option<double>(s, patches, "--delta", "/stable/delta", "location");
            override_option<std::string>(s, patches, "--param", "/stable/param", "S0 | S1");
            override_option<double>(s, patches, "--lambda-k", "/mixture/bandwidth/lambda_k", "mean occupied carriers");
            override_option<int>(s, patches, "--k-max", "/mixture/bandwidth/k_max", "carrier truncation");
            override_option<std::vector<double>>(s, patches, "--x", "/x", "evaluation points");
        }
        override_option<std::string>(subs["pdf"], patches, "--method", "/stable/pdf_method",
                          "auto | series | cf_inversion | closed_form | integral");
        override_option<std::string>(subs["cdf"], patches, "--method", "/stable/cdf_method", "auto | integral | cf_inversion");
        override_option<std::string>(subs["tail"], patches, "--method", "/tail/method", "asymptote | exact");
        override_option<std::size_t>(subs["sample"], patches, "--count", "/sample/count", "number of draws");

        auto* sim = add("simulate");
        bind_intensity_kind(sim, patches);
        override_option<double>(sim, patches, "--sigma", "/field/sigma", "path-loss exponent");
        override_option<double>(sim, patches, "--r-t", "/field/r_t", "disc radius");
        override_option<double>(sim, patches, "--lambda", "/field/intensity/lambda", "intensity (homogeneous, sector)");
        override_option<double>(sim, patches, "--phi", "/field/intensity/phi", "sector opening angle");
        override_option<double>(sim, patches, "--lambda0", "/field/intensity/lambda0", "power-law intensity coefficient");
        override_option<double>(sim, patches, "--beta-s", "/field/intensity/beta_s", "power-law intensity exponent");
        override_option<double>(sim, patches, "--lambda-k", "/field/bandwidth/lambda_k", "mean occupied carriers");
        override_option<int>(sim, patches, "--k-max", "/field/bandwidth/k_max", "carrier truncation");
        override_option<std::size_t>(sim, patches, "--replicates", "/simulate/replicates", "number of replicates");
        override_option<std::string>(sim, patches, "--mode", "/simulate/mode", "hybrid | direct");
        override_option<int>(sim, patches, "--n-near", "/simulate/n_near", "interferers drawn exactly in hybrid mode");
        override_option<std::string>(sim, patches, "--csv", "/simulate/csv", "CSV batch path");
        override_option<std::string>(sim, patches, "--binary", "/simulate/binary", "binary batch path");
        override_option<std::string>(sim, patches, "--summary", "/simulate/summary", "summary JSON path");

        auto* val = add("validate");
        override_option<std::vector<std::string>>(val, patches, "--suites", "/validate/suites", "cf mixture mapping lrt");
        override_option<std::size_t>(val, patches, "--replicates", "/validate/cf_replicates", "replicates for the CF check");
        override_option<double>(val, patches, "--gamma-corruption", "/validate/gamma_corruption", "analytic scale multiplier");
        override_option<std::string>(val, patches, "--report", "/validate/report", "JSON report path");

        for (const char* name : {"lrt", "capacity"}) {
            auto* s = add(name);
            override_option<double>(s, patches, "--alpha", "/lrt/alpha", "characteristic exponent");
            override_option<double>(s, patches, "--gamma-tilde", "/lrt/gamma_tilde", "noise scale");
            override_option<std::string>(s, patches, "--regime", "/lrt/regime",
                              "cauchy | holtsmark | whittaker | general_series | gaussian | monte_carlo");
        }
        override_option<double>(subs["lrt"], patches, "--x-h0", "/lrt/x_h0", "symbol under H0");
        override_option<double>(subs["lrt"], patches, "--x-h1", "/lrt/x_h1", "symbol under H1");
        override_option<std::vector<double>>(subs["lrt"], patches, "--r", "/lrt/r", "received values");
        override_option<std::string>(subs["lrt"], patches, "--summary", "/lrt/summary", "summary JSON path");
        override_option<std::size_t>(subs["capacity"], patches, "--n-mc", "/capacity/n_mc", "Monte Carlo draws");

        auto* g = add("gsnr");
        override_option<std::vector<double>>(g, patches, "--alphas", "/gsnr/alphas", "alpha grid");
        override_option<std::vector<double>>(g, patches, "--gammas", "/gsnr/gammas", "gamma grid");
        override_option<double>(g, patches, "--amplitude", "/gsnr/amplitude", "signal amplitude");
        override_option<double>(g, patches, "--lambda-k", "/gsnr/bandwidth/lambda_k", "mean occupied carriers");
        override_option<int>(g, patches, "--k-max", "/gsnr/bandwidth/k_max", "carrier truncation");
        override_option<std::string>(g, patches, "--formula", "/gsnr/formula", "as_printed | exact");
    }

    CLI::App* add(const char* name) {
        auto* s = app.add_subcommand(name);
        s->add_option("--config", config_path, "JSON configuration file");
        override_option<std::uint64_t>(s, patches, "--seed", "/seed", "random seed");
        override_option<unsigned>(s, patches, "--threads", "/threads", "worker threads (0: PNSC_THREADS or all cores)");
        override_option<std::string>(s, patches, "--out", "/output", "output path (default: standard output)");
        subs[name] = s;
        return s;
    }

    std::string selected() const {
        for (const auto& [name, s] : subs)
            if (s->parsed()) return name;
        return {};
    }

    RunConfig config() const {
        json doc = json{{"schema_version", schema_version}};
        if (!config_path.empty()) {
            try {
                doc = json::parse(read_file(config_path));
            } catch (const json::parse_error& e) {
                throw ConfigError(config_path + ": malformed JSON: " + e.what());
            }
            if (!doc.is_object()) throw ConfigError(config_path + ": expected a JSON object");
        }
        try {
            for (const auto& p : patches) p(doc);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("option does not fit the configuration: ") + e.what());
        }
        return parse_config(doc.dump());
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Invocation inv;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        inv.app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = inv.app.exit(e, out, err);
        return code == 0 ? Ok : ConfigFailure;
    }
    try {
        const auto cfg = inv.config();
        const auto cmd = inv.selected();
        if (cmd == "pdf") return cmd_density(cfg, Quantity::Pdf, out);
        if (cmd == "cdf") return cmd_density(cfg, Quantity::Cdf, out);
        if (cmd == "tail") return cmd_density(cfg, Quantity::Tail, out);
        if (cmd == "sample") return cmd_sample(cfg, out);
        if (cmd == "simulate") return cmd_simulate(cfg, out);
        if (cmd == "validate") return cmd_validate(cfg, out);
        if (cmd == "lrt") return cmd_lrt(cfg, out, err);
        if (cmd == "gsnr") return cmd_gsnr(cfg, out);
        if (cmd == "capacity") return cmd_capacity(cfg, out);
        err << "error: no command\n";
        return ConfigFailure;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return ConfigFailure;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return ConfigFailure;
    } catch (const ConvergenceError& e) {
        err << "no convergence: " << e.what() << "\n";
        return NonConvergence;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return IoFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return Failure;
    }
}

}  // namespace pnsc::cli

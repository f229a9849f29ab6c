#include "pnsc/cli.hpp"

#include "json.hpp"

#include <cmath>
#include <set>

namespace pnsc::cli {

namespace {

using nlohmann::json;

// Strict view of one JSON object: every key must be read before finish().
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + "expected an object");
    }

    const json* find(const char* key) {
        auto it = j_.find(key);
        if (it == j_.end()) return nullptr;
        used_.insert(key);
        return &*it;
    }

    void number(const char* key, double& dst) {
        if (auto v = find(key)) {
            if (!v->is_number()) throw ConfigError(where(key) + "expected a number");
            dst = v->get<double>();
        }
    }

    template <class Int>
    void count(const char* key, Int& dst) {
        if (auto v = find(key)) {
            if (!v->is_number_integer() || v->get<long long>() < 0)
                throw ConfigError(where(key) + "expected a non-negative integer");
            dst = static_cast<Int>(v->get<unsigned long long>());
        }
    }

    void text(const char* key, std::string& dst) {
        if (auto v = find(key)) {
            if (!v->is_string()) throw ConfigError(where(key) + "expected a string");
            dst = v->get<std::string>();
        }
    }

    std::optional<std::string> text(const char* key) {
        std::string s;
        if (!j_.contains(key)) return std::nullopt;
        text(key, s);
        return s;
    }

    std::vector<double> grid(const char* key, std::vector<double> fallback) {
        auto v = find(key);
        return v ? parse_grid(*v, path_ + key) : fallback;
    }

    Section child(const char* key) {
        auto v = find(key);
        static const json empty = json::object();
        return Section(v ? *v : empty, path_ + key + ".");
    }

    bool has(const char* key) const { return j_.contains(key); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError(where(it.key().c_str()) + "unknown key");
    }

    std::string where(const char* key = "") const { return "config " + path_ + key + ": "; }

private:
    static std::vector<double> parse_grid(const json& v, const std::string& path) {
        const std::string at = "config " + path + ": ";
        std::vector<double> out;
        if (v.is_array()) {
            for (const auto& e : v) {
                if (!e.is_number()) throw ConfigError(at + "grid entries must be numbers");
                out.push_back(e.get<double>());
            }
        } else if (v.is_number()) {
            out.push_back(v.get<double>());
        } else if (v.is_object()) {
            Section s(v, path + ".");
            double from = 0.0, to = 0.0;
            std::size_t count = 0;
            bool log = false;
            s.number("from", from);
            s.number("to", to);
            s.count("count", count);
            if (auto l = s.find("log")) {
                if (!l->is_boolean()) throw ConfigError(at + "log must be a boolean");
                log = l->get<bool>();
            }
            s.finish();
            if (count < 1 || (count > 1 && !(to > from)))
                throw ConfigError(at + "a range needs count >= 1 and to > from");
            if (log && !(from > 0)) throw ConfigError(at + "a log range needs from > 0");
            for (std::size_t i = 0; i < count; ++i) {
                const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
                out.push_back(log ? from * std::pow(to / from, t) : from + t * (to - from));
            }
        } else {
            throw ConfigError(at + "expected a number, an array or a {from, to, count} range");
        }
        if (out.empty()) throw ConfigError(at + "empty grid");
        for (double x : out)
            if (!std::isfinite(x)) throw ConfigError(at + "grid values must be finite");
        return out;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

template <class E>
E choose(const std::string& value, std::initializer_list<std::pair<const char*, E>> options, const std::string& at) {
    std::string names;
    for (const auto& [name, e] : options) {
        if (value == name) return e;
        names += names.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError(at + "'" + value + "' is not one of " + names);
}

BandwidthLaw parse_bandwidth(Section s, BandwidthLaw law) {
    if (auto kind = s.text("law"))
        law.kind = choose<BandwidthLaw::Kind>(*kind, {{"poisson", BandwidthLaw::Kind::Poisson},
                                  {"poisson_gamma", BandwidthLaw::Kind::PoissonGamma}},
                          s.where("law"));
    s.number("lambda_k", law.lambda_k);
    s.number("a", law.a);
    s.number("b", law.b);
    s.count("k_max", law.k_max);
    s.finish();
    return law;
}

IntensityKind parse_intensity(Section s, const IntensityKind& current) {
    const std::string kind = s.text("kind").value_or("homogeneous");
    IntensityKind out;
    if (kind == "homogeneous") {
        Homogeneous h = std::holds_alternative<Homogeneous>(current) ? std::get<Homogeneous>(current)
                                                                      : std::get<Homogeneous>(FieldConfig{}.intensity);
        s.number("lambda", h.lambda);
        out = h;
    } else if (kind == "time_profile") {
        TimeProfile t;
        t.t = s.grid("t", {});
        t.lambda = s.grid("lambda", {});
        s.number("t_end", t.t_end);
        s.number("tau", t.tau);
        out = t;
    } else if (kind == "spatial_power_law") {
        SpatialPowerLaw p;
        s.number("lambda0", p.lambda0);
        s.number("beta_s", p.beta_s);
        out = p;
    } else if (kind == "sector") {
        Sector c;
        s.number("lambda", c.lambda);
        s.number("phi", c.phi);
        out = c;
    } else {
        throw ConfigError(s.where("kind") + "'" + kind +
                          "' is not one of homogeneous, time_profile, spatial_power_law, sector");
    }
    s.finish();
    return out;
}

void parse_field(Section s, FieldConfig& f) {
    s.number("r_t", f.r_t);
    s.number("sigma", f.sigma);
    {
        auto a = s.child("fading");
        if (auto k = a.text("kind"))
            f.fading.kind = choose<AmplitudeLaw::Kind>(*k, {{"constant", AmplitudeLaw::Kind::Constant},
                                        {"rayleigh", AmplitudeLaw::Kind::Rayleigh}},
                                   a.where("kind"));
        a.number("value", f.fading.value);
        a.finish();
    }
    {
        auto c = s.child("channel");
        if (auto k = c.text("kind"))
            f.channel.kind = choose<ChannelLaw::Kind>(*k, {{"rademacher", ChannelLaw::Kind::Rademacher},
                                         {"constant", ChannelLaw::Kind::Constant},
                                         {"gaussian", ChannelLaw::Kind::Gaussian}},
                                    c.where("kind"));
        c.number("value", f.channel.value);
        c.finish();
    }
    if (s.has("intensity")) f.intensity = parse_intensity(s.child("intensity"), f.intensity);
    if (s.has("bandwidth")) f.bandwidth = parse_bandwidth(s.child("bandwidth"), f.bandwidth);
    if (auto c = s.text("coupling"))
        f.coupling = choose<CarrierCoupling>(*c, {{"independent", CarrierCoupling::Independent},
                                 {"shared_positions", CarrierCoupling::SharedPositions}},
                            s.where("coupling"));
    s.finish();
}

std::vector<double> default_gsnr_alphas() {
    std::vector<double> a;
    for (int i = 1; i <= 19; ++i) a.push_back(i / 10.0);
    return a;
}

// Wraps domain checks of library types so they surface as configuration errors.
template <class F>
void checked(const char* what, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config ") + what + ": " + e.what());
    }
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    Section top(doc, "");
    RunConfig c;

    const json* version = top.find("schema_version");
    if (!version) throw ConfigError("config: schema_version is required");
    if (!version->is_number_integer() || version->get<int>() != schema_version)
        throw ConfigError("config: unsupported schema_version (expected " + std::to_string(schema_version) + ")");

    top.count("seed", c.seed);
    top.count("threads", c.threads);
    top.text("output", c.output);
    if (auto m = top.text("model"))
        c.model = choose<Model>(*m, {{"stable", Model::Stable}, {"mixture", Model::Mixture}}, top.where("model"));
    c.x = top.grid("x", c.x);

    {
        auto s = top.child("stable");
        s.number("alpha", c.stable.alpha);
        s.number("beta", c.stable.beta);
        s.number("gamma", c.stable.gamma);
        s.number("delta", c.stable.delta);
        if (auto p = s.text("param"))
            c.stable.param = choose<Param>(*p, {{"S0", Param::S0}, {"S1", Param::S1}}, s.where("param"));
        if (auto m = s.text("pdf_method"))
            c.pdf_method = choose<stable::PdfMethod>(*m, {{"auto", stable::PdfMethod::Auto},
                                       {"series", stable::PdfMethod::SeriesZolotarev},
                                       {"cf_inversion", stable::PdfMethod::CfInversion},
                                       {"closed_form", stable::PdfMethod::ClosedForm},
                                       {"integral", stable::PdfMethod::Integral}},
                                  s.where("pdf_method"));
        if (auto m = s.text("cdf_method"))
            c.cdf_method = choose<stable::CdfMethod>(*m, {{"auto", stable::CdfMethod::Auto},
                                       {"integral", stable::CdfMethod::Integral},
                                       {"cf_inversion", stable::CdfMethod::CfInversion}},
                                  s.where("cdf_method"));
        s.finish();
    }
    {
        auto s = top.child("mixture");
        s.number("alpha", c.mixture.alpha);
        s.number("gamma", c.mixture.gamma);
        if (s.has("bandwidth")) c.mixture.bandwidth = parse_bandwidth(s.child("bandwidth"), c.mixture.bandwidth);
        s.finish();
    }
    {
        auto s = top.child("tolerance");
        s.count("max_terms", c.series.max_terms);
        s.number("abs_tol", c.series.abs_tol);
        s.number("rel_tol", c.series.rel_tol);
        s.finish();
    }
    {
        auto s = top.child("tail");
        if (auto m = s.text("method")) c.tail_exact = choose<bool>(*m, {{"asymptote", false}, {"exact", true}}, s.where("method"));
        s.finish();
    }
    {
        auto s = top.child("sample");
        s.count("count", c.sample_count);
        s.finish();
    }
    parse_field(top.child("field"), c.field);
    {
        auto s = top.child("simulate");
        s.count("replicates", c.simulate.replicates);
        if (auto m = s.text("mode"))
            c.simulate.options.mode = choose<SimMode>(*m, {{"hybrid", SimMode::Hybrid}, {"direct", SimMode::Direct}},
                                             s.where("mode"));
        s.count("n_near", c.simulate.options.n_near);
        s.text("csv", c.simulate.csv);
        s.text("binary", c.simulate.binary);
        s.text("summary", c.simulate.summary);
        s.finish();
    }
    {
        auto s = top.child("lrt");
        s.number("alpha", c.lrt.alpha);
        s.number("gamma_tilde", c.lrt.gamma_tilde);
        s.number("x_h0", c.lrt.x_h0);
        s.number("x_h1", c.lrt.x_h1);
        const auto regime = s.text("regime");
        checked("lrt.regime", [&] { c.lrt.regime = regime ? regime_from_string(*regime) : natural_regime(c.lrt.alpha); });
        c.r = s.grid("r", c.r);
        s.text("summary", c.lrt_summary);
        s.finish();
    }
    {
        auto s = top.child("capacity");
        s.count("n_mc", c.capacity_n_mc);
        s.finish();
    }
    {
        auto s = top.child("gsnr");
        c.gsnr.alphas = s.grid("alphas", default_gsnr_alphas());
        c.gsnr.gammas = s.grid("gammas", {0.1e-5, 10e-5, 250e-5, 500e-5, 750e-5, 1000e-5});
        s.number("amplitude", c.gsnr.amplitude);
        if (s.has("bandwidth")) c.gsnr.bandwidth = parse_bandwidth(s.child("bandwidth"), c.gsnr.bandwidth);
        if (auto f = s.text("formula"))
            c.gsnr.formula = choose<S0Formula>(*f, {{"as_printed", S0Formula::AsPrinted}, {"exact", S0Formula::Exact}},
                                    s.where("formula"));
        s.finish();
    }
    {
        auto s = top.child("validate");
        auto& v = c.validate;
        if (auto suites = s.find("suites")) {
            if (!suites->is_array()) throw ConfigError(s.where("suites") + "expected an array of names");
            v.suites.clear();
            for (const auto& e : *suites) {
                if (!e.is_string()) throw ConfigError(s.where("suites") + "expected an array of names");
                v.suites.push_back(e.get<std::string>());
            }
        }
        s.count("cf_replicates", v.cf_replicates);
        s.number("cf_expected_count", v.cf_expected_count);
        v.cf_omega = s.grid("cf_omega", v.cf_omega);
        s.number("cf_z_max", v.cf_z_max);
        s.count("mixture_replicates", v.mixture_replicates);
        s.count("mapping_replicates", v.mapping_replicates);
        s.count("count_draws", v.count_draws);
        s.count("lrt_draws", v.lrt_draws);
        s.number("p_min", v.p_min);
        s.number("gamma_corruption", v.gamma_corruption);
        s.text("report", c.report);
        s.finish();
    }
    top.finish();

    c.validate.seed = c.seed;
    c.validate.threads = c.threads;
    checked("stable", [&] { c.stable.validate(); });
    checked("tolerance", [&] { c.series.validate(); });
    checked("mixture", [&] {
        c.mixture.bandwidth.validate();
        if (!(c.mixture.alpha > 0 && c.mixture.alpha <= 2) || !(c.mixture.gamma > 0))
            throw DomainError("alpha must lie in (0, 2] and gamma be positive");
    });
    checked("field", [&] { c.field.validate(); });
    checked("simulate", [&] {
        if (c.simulate.replicates < 1) throw DomainError("replicates must be positive");
        if (c.simulate.options.n_near < 1) throw DomainError("n_near must be positive");
    });
    checked("lrt", [&] { c.lrt.validate(); });
    checked("capacity", [&] {
        if (c.capacity_n_mc < 10'000) throw DomainError("n_mc must be at least 10000");
    });
    checked("gsnr", [&] { c.gsnr.bandwidth.validate(); });
    checked("sample", [&] {
        if (c.sample_count < 1) throw DomainError("count must be positive");
    });
    c.validate.validate();
    return c;
}

}  // namespace pnsc::cli

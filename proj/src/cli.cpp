#include "aicg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "aicg/bias_t3.hpp"
#include "aicg/monte_carlo.hpp"
#include "aicg/quadrature.hpp"
#include "aicg/selection.hpp"

namespace aicg::cli {

namespace {

using json = nlohmann::json;

constexpr const char* kVersion = "1.0.0";

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::string model;
    std::string models;
    std::string pair;
    std::string counts;
    std::string angles;
    std::string grid;
    std::string method;
    std::string format = "csv";
    std::string out;
    std::string config;
    std::string observed = "default";
    std::string estimators;
    double mu0y = 0.0;
    double phi0 = 0.0;
    double radius = 0.0;
    double eta = 1.0 / 3.0;
    double violation_tol = 1.02e-14;
    double n = 0.0;
    std::int64_t samples = 100000;
    std::int64_t chunk_size = std::int64_t{1} << 16;
    std::int64_t replicates = 1000;
    std::uint64_t seed = 0;
    int resolution = 200;
    int workers = 0;
    int smooth = 0;
    bool n_from_counts = false;
    bool weights = false;
};

// Keys accepted in a --config file: every long flag name.
const std::set<std::string>& config_keys() {
    static const std::set<std::string> keys = {
        "model", "models", "pair", "counts", "angles", "grid", "method", "format", "out", "observed",
        "estimators", "mu0y", "phi0", "radius", "eta", "violation-tol", "n", "samples", "chunk-size",
        "replicates", "seed", "resolution", "workers", "smooth", "n-from-counts", "weights"};
    return keys;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty()) throw UsageError("not a number: '" + text + "'");
    return v;
}

std::string config_value(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_array()) {
        std::string joined;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) joined += ",";
            joined += config_value(v[i]);
        }
        return joined;
    }
    throw UsageError("unsupported config value " + v.dump());
}

// Expands --config into flags placed before the command-line flags, so the
// latter win under the take-last policy.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed config file: ") + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    std::vector<std::string> injected;
    for (const auto& [key, value] : cfg.items()) {
        if (!config_keys().count(key)) throw UsageError("unknown config key '" + key + "'");
        if (value.is_boolean()) {
            if (value.get<bool>()) injected.push_back("--" + key);
            continue;
        }
        injected.push_back("--" + key);
        injected.push_back(config_value(value));
    }
    if (rest.empty()) return injected;
    std::vector<std::string> merged{rest.front()};
    merged.insert(merged.end(), injected.begin(), injected.end());
    merged.insert(merged.end(), rest.begin() + 1, rest.end());
    return merged;
}

ModelSpec model_from(const std::string& text, const std::string& angles) {
    const std::string t = trim(text);
    if (t.empty()) throw UsageError("--model is required");
    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "halflines" || lower == "half-lines") {
        if (angles.empty()) throw UsageError("half-lines models need --angles");
        return ModelSpec::halflines(parse_angles(angles));
    }
    if (!angles.empty()) throw UsageError("--angles applies to half-lines models only");
    return parse_model(t);
}

std::vector<ModelSpec> model_list(const std::string& text) {
    std::vector<ModelSpec> out;
    for (const auto& part : split(text, ',')) {
        const std::string t = trim(part);
        if (t.empty()) throw UsageError("empty model name in list '" + text + "'");
        out.push_back(parse_model(t));
    }
    if (out.empty()) throw UsageError("model list is empty");
    return out;
}

EstimatorRule rule_from(const Options& o, const CLI::App& sub, Method method) {
    EstimatorRule rule;
    rule.method = method;
    if (sub.count("--radius")) rule.radius = o.radius;
    rule.observed = parse_observed_point(o.observed);
    rule.eta.exponent = o.eta;
    rule.bootstrap_replicates = o.replicates;
    rule.validate();
    return rule;
}

bool stochastic(Method m) { return m == Method::MonteCarlo || m == Method::Bootstrap; }

void require_seed(const CLI::App& sub, const std::string& what) {
    if (!sub.count("--seed")) throw UsageError(what + " is stochastic and needs --seed");
}

McSettings mc_from(const Options& o) {
    McSettings s;
    s.seed = o.seed;
    s.samples = o.samples;
    s.chunk_size = o.chunk_size;
    s.workers = o.workers;
    s.validate();
    return s;
}

std::int64_t sample_size(double n) {
    if (!(n >= 1.0) || n != std::floor(n) || n > 9e15) throw UsageError("--n must be a positive integer");
    return static_cast<std::int64_t>(n);
}

std::string csv_optional(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

json json_optional(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

std::string render_json(const json& j) { return j.dump(2) + "\n"; }

void check_format(const Options& o) {
    if (o.format != "csv" && o.format != "json") throw UsageError("--format must be csv or json");
}

// ---- bias ------------------------------------------------------------------

std::string cmd_bias(const Options& o, const CLI::App& sub) {
    check_format(o);
    const ModelSpec model = model_from(o.model, o.angles);
    const int modes = static_cast<int>(sub.count("--mu0y") > 0) + static_cast<int>(sub.count("--phi0") > 0) +
                      static_cast<int>(sub.count("--counts") > 0);
    const bool apex_default = modes == 0 && (model.kind() == ModelKind::HalfLines || has_constant_bias(model));
    if (modes != 1 && !apex_default) throw UsageError("give exactly one of --mu0y, --phi0 or --counts");

    BiasEstimate est;
    double mu = 0.0;
    double n = 1e6;
    std::string canonical = "model=" + model.id();
    for (double a : model.angles()) canonical += "," + format_number(a);

    if (sub.count("--counts")) {
        const Counts counts = parse_counts(o.counts);
        n = static_cast<double>(counts.total());
        if (sub.count("--n") && o.n != n) throw UsageError("--n disagrees with the counts total");
        if (!model.on_simplex()) throw UsageError("counts need a simplex model");
        const Method method = o.method.empty() ? Method::PlugIn : parse_method(o.method);
        if (method == Method::ClosedForm || method == Method::Quadrature || method == Method::MonteCarlo) {
            throw UsageError("with --counts choose a data estimator (plug-in, llf, ulf, uo, minimax, consistent, "
                             "bootstrap, aic, crude-lower, crude-upper)");
        }
        if (stochastic(method)) require_seed(sub, "bootstrap");
        const EstimatorRule rule = rule_from(o, sub, method);
        const Observation obs = observe_counts(model, counts);
        if (method == Method::Bootstrap) {
            est = bootstrap_bias(model, obs, rule.bootstrap_replicates, o.seed, rule.eta, rule.observed, o.workers);
        } else {
            est = estimate_bias(model, rule, obs, o.seed);
        }
        mu = obs.at_infinity ? std::numeric_limits<double>::infinity() : obs.mle.norm();
        canonical += ";counts=" + o.counts + ";observed=" + to_string(rule.observed) + ";eta=" + format_number(o.eta) +
                     ";replicates=" + std::to_string(o.replicates);
        if (rule.radius) canonical += ";radius=" + format_number(*rule.radius);
    } else {
        if (sub.count("--phi0")) {
            if (!sub.count("--n")) throw UsageError("--phi0 needs --n");
            n = o.n;
            mu = aicg::mu0y(o.phi0, n);
        } else {
            if (sub.count("--n")) n = o.n;
            mu = o.mu0y;
        }
        if (!(mu >= 0.0) || !std::isfinite(mu)) throw UsageError("mu0y must be finite and >= 0");
        if (!(n >= 1.0)) throw UsageError("--n must be >= 1");
        Method method = model.kind() == ModelKind::T3 && mu > 0.0 ? Method::Quadrature : Method::ClosedForm;
        if (!o.method.empty()) method = parse_method(o.method);
        switch (method) {
            case Method::ClosedForm:
                if (model.kind() == ModelKind::T1) {
                    est = bias_t1(mu);
                } else if (has_constant_bias(model)) {
                    est = bias_constant(model);
                } else if (mu == 0.0) {
                    est = model.kind() == ModelKind::T3 ? BiasEstimate{t3_singular_value(), Method::ClosedForm, {}, {}}
                                                        : bias_halflines_at_singularity(model);
                } else {
                    throw UsageError("no closed form for " + model.id() + " away from the singularity; use " +
                                     (model.kind() == ModelKind::T3 ? "quadrature" : "monte-carlo"));
                }
                break;
            case Method::Quadrature: {
                if (model.kind() != ModelKind::T3) throw UsageError("quadrature applies to t3");
                const GeometryParams g = GeometryParams::from_mu0y(mu, n);
                est = bias_t3(g.mu0y, g.alpha0);
                break;
            }
            case Method::MonteCarlo: {
                require_seed(sub, "monte-carlo");
                const McSettings s = mc_from(o);
                const Cone cone = cone_of(model, GeometryParams::from_mu0y(mu, n));
                TransformedPoint mu0{0.0, mu};
                if (model.kind() == ModelKind::HalfLines) {
                    const double a = model.angles().back();
                    mu0 = {mu * std::cos(a), mu * std::sin(a)};
                    if (a == 2.0 * std::numbers::pi) mu0 = {mu, 0.0};
                } else if (model.kind() == ModelKind::Polytomy && mu != 0.0) {
                    throw UsageError("the polytomy model is the single point mu0y = 0");
                }
                est = mc_bias_gaussian(cone, mu0, s);
                canonical += ";seed=" + std::to_string(o.seed) + ";samples=" + std::to_string(o.samples) +
                             ";chunk=" + std::to_string(o.chunk_size);
                break;
            }
            case Method::Aic:
                est = bias_aic(model);
                break;
            case Method::CrudeLower:
            case Method::CrudeUpper: {
                const CrudeBounds b = crude_bounds(model);
                est = {method == Method::CrudeLower ? b.lower : b.upper, method, {}, {}};
                break;
            }
            default:
                throw UsageError("method '" + to_string(method) + "' needs --counts");
        }
        canonical += ";mu0y=" + format_number(mu) + ";n=" + format_number(n);
    }
    canonical += ";method=" + to_string(est.method);
    const std::string hash = settings_hash(canonical);

    if (o.format == "json") {
        json j;
        j["model"] = model.id();
        j["mu0y"] = json_number(mu);
        j["method"] = to_string(est.method);
        j["bias"] = json_number(est.value);
        j["std_error"] = json_optional(est.std_error);
        j["settings_hash"] = hash;
        return render_json(j);
    }
    return "model,mu0y,method,bias,std_error,settings_hash\n" + model.id() + "," + format_number(mu) + "," +
           to_string(est.method) + "," + format_number(est.value) + "," + csv_optional(est.std_error) + "," + hash +
           "\n";
}

// ---- target ----------------------------------------------------------------

std::string cmd_target(const Options& o, const CLI::App& sub) {
    check_format(o);
    const ModelSpec model = model_from(o.model, o.angles);
    if (!model.on_simplex()) throw UsageError("target needs a simplex model");
    if (!sub.count("--n")) throw UsageError("target needs --n");
    require_seed(sub, "target");
    const std::int64_t n = sample_size(o.n);
    const std::vector<double> grid = GridSpec::parse(o.grid.empty() ? "0:5:0.02" : o.grid).points();
    const McSettings s = mc_from(o);
    std::vector<EstimatorRule> rules;
    std::vector<std::string> tags;
    if (!o.estimators.empty()) {
        for (const auto& t : split(o.estimators, ',')) {
            const Method m = parse_method(trim(t));
            if (m == Method::ClosedForm || m == Method::Quadrature || m == Method::MonteCarlo) {
                throw UsageError("'" + t + "' is not a data estimator");
            }
            rules.push_back(rule_from(o, sub, m));
            tags.push_back(to_string(m));
        }
    }
    if (o.smooth != 0 && (o.smooth < 1 || o.smooth % 2 == 0)) throw UsageError("--smooth must be an odd window");
    const auto rows = curve_grid(model, n, grid, rules, s);
    std::vector<double> smoothed;
    if (o.smooth > 1) {
        std::vector<double> raw;
        for (const auto& r : rows) raw.push_back(r.target.estimate);
        smoothed = moving_average(raw, o.smooth);
    }

    if (o.format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            json j;
            j["mu0y"] = r.mu0y;
            j["target"] = r.target.estimate;
            j["target_se"] = r.target.std_error;
            j["aicg_bias"] = r.aicg_bias;
            j["aic_bias"] = r.aic_bias;
            if (!smoothed.empty()) j["target_smoothed"] = smoothed[i];
            for (std::size_t k = 0; k < tags.size(); ++k) {
                j[tags[k]] = r.estimators[k].estimate;
                j[tags[k] + "_se"] = r.estimators[k].std_error;
            }
            arr.push_back(j);
        }
        json doc;
        doc["model"] = model.id();
        doc["n"] = n;
        doc["seed"] = o.seed;
        doc["samples"] = o.samples;
        doc["rows"] = arr;
        return render_json(doc);
    }
    std::string text = "mu0y,target,target_se,aicg_bias,aic_bias";
    if (!smoothed.empty()) text += ",target_smoothed";
    for (const auto& t : tags) text += "," + t + "," + t + "_se";
    text += "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        text += format_number(r.mu0y) + "," + format_number(r.target.estimate) + "," +
                format_number(r.target.std_error) + "," + format_number(r.aicg_bias) + "," +
                format_number(r.aic_bias);
        if (!smoothed.empty()) text += "," + format_number(smoothed[i]);
        for (const auto& e : r.estimators) text += "," + format_number(e.estimate) + "," + format_number(e.std_error);
        text += "\n";
    }
    return text;
}

// ---- select ----------------------------------------------------------------

std::string cmd_select(const Options& o, const CLI::App& sub) {
    check_format(o);
    if (!sub.count("--counts")) throw UsageError("select needs --counts");
    if (o.models.empty()) throw UsageError("select needs a non-empty --models list");
    const Counts counts = parse_counts(o.counts);
    if (sub.count("--n") && o.n != static_cast<double>(counts.total())) {
        throw UsageError("--n disagrees with the counts total");
    }
    const auto models = model_list(o.models);
    const Method method = o.method.empty() ? Method::PlugIn : parse_method(o.method);
    if (method == Method::ClosedForm || method == Method::Quadrature || method == Method::MonteCarlo) {
        throw UsageError("select needs a data estimator");
    }
    if (stochastic(method)) require_seed(sub, "bootstrap");
    const EstimatorRule rule = rule_from(o, sub, method);
    const SelectionReport report = score(models, counts, rule, o.seed, o.weights);

    if (o.format == "json") {
        json rows = json::array();
        for (const auto& r : report.rows) {
            json j;
            j["model"] = r.model_id;
            if (r.ok()) {
                j["neg2loglik"] = r.neg2loglik;
                j["bias_method"] = to_string(r.bias.method);
                j["bias"] = r.bias.value;
                j["bias_se"] = json_optional(r.bias.std_error);
                j["aicg"] = r.aicg;
                j["aic"] = r.aic;
                j["rank_aicg"] = r.rank_aicg;
                j["rank_aic"] = r.rank_aic;
                if (o.weights) j["weight"] = json_optional(r.weight);
            } else {
                j["error"] = r.error;
            }
            rows.push_back(j);
        }
        json meta;
        meta["n"] = report.n;
        meta["seed"] = report.seed;
        meta["estimator"] = to_string(rule.method);
        meta["observed"] = to_string(resolve_observed(models.front(), rule.observed));
        meta["version"] = kVersion;
        meta["note"] = report.note;
        json doc;
        doc["metadata"] = meta;
        doc["rows"] = rows;
        return render_json(doc);
    }
    std::string text;
    text += "# n=" + std::to_string(report.n) + "\n";
    text += "# seed=" + std::to_string(report.seed) + "\n";
    text += "# estimator=" + to_string(rule.method) + "\n";
    text += "# version=" + std::string(kVersion) + "\n";
    text += "# note=" + report.note + "\n";
    text += "rank_aicg,model,neg2loglik,bias_method,bias,bias_se,aicg,aic,rank_aic";
    if (o.weights) text += ",weight";
    text += ",error\n";
    for (const auto& r : report.rows) {
        if (r.ok()) {
            text += std::to_string(r.rank_aicg) + "," + r.model_id + "," + format_number(r.neg2loglik) + "," +
                    to_string(r.bias.method) + "," + format_number(r.bias.value) + "," + csv_optional(r.bias.std_error) +
                    "," + format_number(r.aicg) + "," + format_number(r.aic) + "," + std::to_string(r.rank_aic);
            if (o.weights) text += "," + csv_optional(r.weight);
            text += ",\n";
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            text += "," + r.model_id + ",,,,,,,";
            if (o.weights) text += ",";
            text += "," + msg + "\n";
        }
    }
    return text;
}

// ---- regions ---------------------------------------------------------------

std::string cmd_regions(const Options& o, const CLI::App& sub) {
    check_format(o);
    const std::string spec = !o.pair.empty() ? o.pair : o.models;
    if (spec.empty()) throw UsageError("regions needs --pair");
    const auto models = model_list(spec);
    if (o.resolution < 50) throw UsageError("--resolution must be >= 50");
    const std::int64_t n = sub.count("--n") ? sample_size(o.n) : 200;
    const Method method = o.method.empty() ? Method::PlugIn : parse_method(o.method);
    if (method == Method::ClosedForm || method == Method::Quadrature || method == Method::MonteCarlo) {
        throw UsageError("regions needs a data estimator");
    }
    if (stochastic(method)) require_seed(sub, "bootstrap");
    const EstimatorRule rule = rule_from(o, sub, method);
    const RegionGrid grid = region_grid(models, n, o.resolution, rule, o.seed, o.workers);

    if (o.format == "json") {
        json cells = json::array();
        for (const auto& c : grid.cells) {
            const SimplexPoint p = c.point(grid.resolution);
            cells.push_back(json{{"p1", p[0]}, {"p2", p[1]}, {"p3", p[2]}, {"winner", c.winner}});
        }
        json doc;
        doc["models"] = grid.model_ids;
        doc["n"] = n;
        doc["resolution"] = grid.resolution;
        doc["estimator"] = to_string(rule.method);
        doc["cells"] = cells;
        return render_json(doc);
    }
    std::string text = "p1,p2,p3,winner\n";
    for (const auto& c : grid.cells) {
        const SimplexPoint p = c.point(grid.resolution);
        text += format_number(p[0]) + "," + format_number(p[1]) + "," + format_number(p[2]) + "," + c.winner + "\n";
    }
    return text;
}

// ---- radii -----------------------------------------------------------------

json search_json(const RadiusSearch& r) {
    if (!r.applicable) return json{{"status", "not-applicable"}, {"note", r.note}};
    json j;
    j["status"] = "ok";
    j["radius"] = r.radius;
    j["objective"] = r.objective;
    j["evaluations"] = r.evaluations;
    j["warning"] = r.warning;
    j["note"] = r.note;
    return j;
}

struct RadiiFailure : std::runtime_error {
    RadiiFailure(const std::string& what, std::string body) : std::runtime_error(what), body(std::move(body)) {}
    std::string body;
};

std::string cmd_radii(const Options& o, const CLI::App& sub) {
    const ModelSpec model = model_from(o.model, o.angles);
    const double n = sub.count("--n") ? o.n : 1e6;
    if (!(n >= 1.0)) throw UsageError("--n must be >= 1");
    const std::vector<double> grid = GridSpec::parse(o.grid.empty() ? "0:5:0.02" : o.grid).points();
    if (!(o.violation_tol >= 0.0)) throw UsageError("--violation-tol must be >= 0");
    const ObservedPoint observed = parse_observed_point(o.observed);
    json doc;
    doc["model"] = model.id();
    doc["n"] = n;
    doc["grid_points"] = grid.size();
    doc["observed"] = to_string(resolve_observed(model, observed));
    doc["violation_tol"] = o.violation_tol;
    doc["minimax_radius"] = search_json(minimax_radius(model, grid, n, observed));
    try {
        doc["uo_radius"] = search_json(uo_radius(model, grid, n, o.violation_tol, observed));
    } catch (const InfeasibleError& e) {
        doc["uo_radius"] = json{{"status", "infeasible"}, {"error", e.what()}};
        throw RadiiFailure(e.what(), render_json(doc));
    }
    return render_json(doc);
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot write '" + o.out + "'");
    file << text;
}

template <typename T>
CLI::Option* flag(CLI::App* sub, const std::string& name, T& target, const std::string& help) {
    return sub->add_option(name, target, help)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void common_flags(CLI::App* sub, Options& o) {
    flag(sub, "--format", o.format, "csv or json");
    flag(sub, "--out", o.out, "output file (default stdout)");
    sub->add_option("--config", o.config, "JSON config file; flags override it");
}

void estimator_flags(CLI::App* sub, Options& o) {
    flag(sub, "--method", o.method, "estimator tag");
    flag(sub, "--radius", o.radius, "neighborhood radius for uo/minimax");
    flag(sub, "--observed", o.observed, "default, zbar or mle");
    flag(sub, "--eta", o.eta, "consistent-estimation rate exponent in (0, 1/2)");
    flag(sub, "--replicates", o.replicates, "bootstrap replicates");
    flag(sub, "--seed", o.seed, "random seed");
    flag(sub, "--workers", o.workers, "worker threads (0 = all cores)");
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

std::string settings_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::array<char, 17> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + 16, h, 16);
    std::string hex(buf.data(), res.ptr);
    return std::string(16 - hex.size(), '0') + hex;
}

double parse_angle(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw UsageError("empty angle");
    if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
        const std::string coef = t.substr(0, t.size() - 2);
        const double c = coef.empty() ? 1.0 : parse_real(coef);
        return c * std::numbers::pi;
    }
    return parse_real(t);
}

std::vector<double> parse_angles(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_angle(part));
    if (out.empty()) throw UsageError("no angles given");
    return out;
}

Counts parse_counts(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw UsageError("counts must be three comma-separated integers, got '" + text + "'");
    std::array<std::int64_t, 3> c{};
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string t = trim(parts[i]);
        const char* first = t.data();
        const char* last = first + t.size();
        const auto [ptr, ec] = std::from_chars(first, last, c[i]);
        if (t.empty() || ec != std::errc() || ptr != last || c[i] < 0) {
            throw UsageError("malformed count '" + parts[i] + "'");
        }
    }
    if (c[0] + c[1] + c[2] < 1) throw UsageError("counts must sum to at least 1");
    return {c[0], c[1], c[2]};
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Generalized AIC for trinomial models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto* bias = app.add_subcommand("bias", "bias correction at a generating point or for observed counts");
    flag(bias, "--model", o.model, "t1[:k], t3, polytomy, unconstrained or halflines");
    flag(bias, "--angles", o.angles, "half-lines ray angles, e.g. 0.5pi,pi,2pi");
    flag(bias, "--mu0y", o.mu0y, "Mahalanobis distance of the generating point");
    flag(bias, "--phi0", o.phi0, "phi0 of the generating point (needs --n)");
    flag(bias, "--counts", o.counts, "observed counts n1,n2,n3");
    flag(bias, "--n", o.n, "sample size");
    flag(bias, "--samples", o.samples, "Monte Carlo samples");
    flag(bias, "--chunk-size", o.chunk_size, "Monte Carlo chunk size");
    estimator_flags(bias, o);
    common_flags(bias, o);

    auto* target = app.add_subcommand("target", "finite-n target curve by simulation");
    flag(target, "--model", o.model, "t1[:k], t3, polytomy or unconstrained");
    flag(target, "--n", o.n, "sample size");
    flag(target, "--grid", o.grid, "start:stop:step over mu0y");
    flag(target, "--samples", o.samples, "samples per grid point");
    flag(target, "--chunk-size", o.chunk_size, "Monte Carlo chunk size");
    flag(target, "--estimators", o.estimators, "extra estimator columns, e.g. plugin,uo");
    flag(target, "--smooth", o.smooth, "centered moving-average window for the target");
    estimator_flags(target, o);
    common_flags(target, o);

    auto* select = app.add_subcommand("select", "score and rank models for observed counts");
    flag(select, "--counts", o.counts, "observed counts n1,n2,n3");
    flag(select, "--models", o.models, "comma-separated model list");
    flag(select, "--n", o.n, "sample size (must equal the counts total)");
    select->add_flag("--n-from-counts", o.n_from_counts, "take n from the counts total");
    select->add_flag("--weights", o.weights, "emit Akaike-style weights");
    estimator_flags(select, o);
    common_flags(select, o);

    auto* regions = app.add_subcommand("regions", "decision regions over the simplex");
    flag(regions, "--pair", o.pair, "comma-separated models to compare");
    flag(regions, "--models", o.models, "alias of --pair");
    flag(regions, "--n", o.n, "sample size");
    flag(regions, "--resolution", o.resolution, "lattice resolution (>= 50)");
    estimator_flags(regions, o);
    common_flags(regions, o);

    auto* radii = app.add_subcommand("radii", "uniformly outperforming and minimax radii");
    flag(radii, "--model", o.model, "t1[:k] or t3");
    flag(radii, "--angles", o.angles, "half-lines ray angles");
    flag(radii, "--n", o.n, "reference sample size");
    flag(radii, "--grid", o.grid, "start:stop:step over mu0y");
    flag(radii, "--violation-tol", o.violation_tol, "allowed excursion past the true correction");
    flag(radii, "--observed", o.observed, "default, zbar or mle");
    flag(radii, "--out", o.out, "output file (default stdout)");
    radii->add_option("--config", o.config, "JSON config file; flags override it");

    std::vector<std::string> args;
    try {
        args = expand_config(args_in);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        std::string text;
        if (bias->parsed()) text = cmd_bias(o, *bias);
        else if (target->parsed()) text = cmd_target(o, *target);
        else if (select->parsed()) text = cmd_select(o, *select);
        else if (regions->parsed()) text = cmd_regions(o, *regions);
        else text = cmd_radii(o, *radii);
        emit(o, text, out);
        return kExitOk;
    } catch (const RadiiFailure& e) {
        try {
            emit(o, e.body, out);
        } catch (const std::exception&) {
        }
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const HalfLinesError& e) {
        err << "error: " << e.what() << "\n";
        if (!e.hint().empty()) err << "hint: " << e.hint() << "\n";
        return kExitUsage;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (best estimate " << format_number(e.best_estimate()) << ", error estimate "
            << format_number(e.error_estimate()) << ")\n";
        return kExitNumerical;
    } catch (const InfeasibleError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace aicg::cli

#include "vnlw/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "vnlw/fft.hpp"
#include "vnlw/norms.hpp"
#include "vnlw/seeding.hpp"
#include "vnlw/snapshot.hpp"

namespace vnlw {

namespace {

std::string join_errors(const std::vector<std::string>& errors)
{
    std::string out = "invalid configuration:";
    for (const auto& e : errors) out += "\n  " + e;
    return out;
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt(double x)
{
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

bool parse_double(const std::string& s, double& out)
{
    if (s == "inf" || s == "infinity") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end && !std::isnan(out);
}

template <typename Int>
bool parse_int(const std::string& s, Int& out)
{
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_list(const std::string& s, std::vector<double>& out)
{
    out.clear();
    if (trim(s).empty()) return true;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double x = 0.0;
        if (!parse_double(trim(item), x)) return false;
        out.push_back(x);
    }
    return true;
}

std::string emit_list(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
    return out;
}

using Setter = std::function<bool(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
    const char* name;
    Setter set;
    Getter get;
};

template <typename M>
Key real_key(const char* name, M member)
{
    return {name, [member](RunConfig& c, const std::string& v) { return parse_double(v, member(c)); },
            [member](const RunConfig& c) { return fmt(member(const_cast<RunConfig&>(c))); }};
}

template <typename T, typename M>
Key int_key(const char* name, M member)
{
    return {name, [member](RunConfig& c, const std::string& v) { return parse_int<T>(v, member(c)); },
            [member](const RunConfig& c) { return std::to_string(member(const_cast<RunConfig&>(c))); }};
}

template <typename M>
Key text_key(const char* name, M member)
{
    return {name,
            [member](RunConfig& c, const std::string& v) {
                member(c) = v;
                return true;
            },
            [member](const RunConfig& c) { return member(const_cast<RunConfig&>(c)); }};
}

template <typename M>
Key list_key(const char* name, M member)
{
    return {name, [member](RunConfig& c, const std::string& v) { return parse_list(v, member(c)); },
            [member](const RunConfig& c) { return emit_list(member(const_cast<RunConfig&>(c))); }};
}

const std::vector<Key>& keys()
{
    static const std::vector<Key> table = {
        int_key<std::size_t>("grid.n_points", [](RunConfig& c) -> auto& { return c.grid.n_points; }),
        real_key("grid.side_length", [](RunConfig& c) -> auto& { return c.grid.side_length; }),

        text_key("data.profile", [](RunConfig& c) -> auto& { return c.data.profile; }),
        real_key("data.amplitude", [](RunConfig& c) -> auto& { return c.data.amplitude; }),
        real_key("data.width", [](RunConfig& c) -> auto& { return c.data.width; }),
        real_key("data.mode", [](RunConfig& c) -> auto& { return c.data.mode; }),
        real_key("data.exponent", [](RunConfig& c) -> auto& { return c.data.exponent; }),
        real_key("data.velocity_amplitude", [](RunConfig& c) -> auto& { return c.data.velocity_amplitude; }),
        text_key("data.snapshot", [](RunConfig& c) -> auto& { return c.data.snapshot; }),
        real_key("data.sobolev_index", [](RunConfig& c) -> auto& { return c.data.sobolev_index; }),
        int_key<std::uint64_t>("data.phase_seed", [](RunConfig& c) -> auto& { return c.data.phase_seed; }),

        text_key("randomization.kind", [](RunConfig& c) -> auto& { return c.randomization.kind; }),
        int_key<std::uint64_t>("randomization.seed", [](RunConfig& c) -> auto& { return c.randomization.seed; }),
        int_key<std::size_t>("randomization.ensemble", [](RunConfig& c) -> auto& { return c.randomization.ensemble; }),

        int_key<int>("solver.p", [](RunConfig& c) -> auto& { return c.solver.p; }),
        real_key("solver.mu", [](RunConfig& c) -> auto& { return c.solver.mu; }),
        real_key("solver.dt", [](RunConfig& c) -> auto& { return c.solver.dt; }),
        int_key<int>("solver.substeps", [](RunConfig& c) -> auto& { return c.solver.substeps; }),
        {"solver.quadrature",
         [](RunConfig& c, const std::string& v) {
             if (v == "midpoint") c.solver.quadrature = Quadrature::Midpoint;
             else if (v == "gauss2") c.solver.quadrature = Quadrature::Gauss2;
             else if (v == "trapezoid") c.solver.quadrature = Quadrature::Trapezoid;
             else return false;
             return true;
         },
         [](const RunConfig& c) -> std::string {
             switch (c.solver.quadrature) {
             case Quadrature::Gauss2: return "gauss2";
             case Quadrature::Trapezoid: return "trapezoid";
             default: return "midpoint";
             }
         }},
        int_key<int>("solver.padding", [](RunConfig& c) -> auto& { return c.solver.padding; }),
        real_key("solver.picard_tol", [](RunConfig& c) -> auto& { return c.solver.picard_tol; }),
        int_key<int>("solver.picard_max_iter", [](RunConfig& c) -> auto& { return c.solver.picard_max_iter; }),
        int_key<int>("solver.snapshot_every", [](RunConfig& c) -> auto& { return c.solver.snapshot_every; }),
        real_key("solver.blowup_factor", [](RunConfig& c) -> auto& { return c.solver.blowup_factor; }),
        real_key("solver.delta", [](RunConfig& c) -> auto& { return c.solver.delta; }),
        {"solver.linear_only",
         [](RunConfig& c, const std::string& v) {
             if (v == "true") c.solver.linear_only = true;
             else if (v == "false") c.solver.linear_only = false;
             else return false;
             return true;
         },
         [](const RunConfig& c) -> std::string { return c.solver.linear_only ? "true" : "false"; }},

        real_key("experiment.T", [](RunConfig& c) -> auto& { return c.experiment.T; }),
        real_key("experiment.T0", [](RunConfig& c) -> auto& { return c.experiment.T0; }),
        int_key<std::size_t>("experiment.lambda_points", [](RunConfig& c) -> auto& { return c.experiment.lambda_points; }),
        real_key("experiment.C0", [](RunConfig& c) -> auto& { return c.experiment.C0; }),
        real_key("experiment.q", [](RunConfig& c) -> auto& { return c.experiment.q; }),
        real_key("experiment.r", [](RunConfig& c) -> auto& { return c.experiment.r; }),
        real_key("experiment.alpha", [](RunConfig& c) -> auto& { return c.experiment.alpha; }),
        real_key("experiment.lebesgue_p", [](RunConfig& c) -> auto& { return c.experiment.lebesgue_p; }),
        real_key("experiment.lebesgue_q", [](RunConfig& c) -> auto& { return c.experiment.lebesgue_q; }),
        real_key("experiment.s1", [](RunConfig& c) -> auto& { return c.experiment.s1; }),
        list_key("experiment.cutoffs", [](RunConfig& c) -> auto& { return c.experiment.cutoffs; }),
        list_key("experiment.epsilons", [](RunConfig& c) -> auto& { return c.experiment.epsilons; }),
        list_key("experiment.frequencies", [](RunConfig& c) -> auto& { return c.experiment.frequencies; }),
        int_key<std::size_t>("experiment.time_samples", [](RunConfig& c) -> auto& { return c.experiment.time_samples; }),

        text_key("output.directory", [](RunConfig& c) -> auto& { return c.output_directory; }),
    };
    return table;
}

void collect_errors(const RunConfig& c, std::vector<std::string>& errors)
{
    const auto check = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };
    const std::size_t n = c.grid.n_points;
    check(n >= 8 && (n & (n - 1)) == 0, "grid.n_points: must be a power of two >= 8 (got " + std::to_string(n) + ")");
    check(c.grid.side_length > 0.0 && std::isfinite(c.grid.side_length), "grid.side_length: must be finite and > 0");

    const std::string& prof = c.data.profile;
    check(prof == "gaussian" || prof == "bubble" || prof == "cosine" || prof == "power_law" || prof == "zero" ||
              prof == "snapshot",
          "data.profile: unknown profile '" + prof + "'");
    check(std::isfinite(c.data.amplitude), "data.amplitude: must be finite");
    check(c.data.width > 0.0 && std::isfinite(c.data.width), "data.width: must be finite and > 0");
    check(std::isfinite(c.data.mode), "data.mode: must be finite");
    check(std::isfinite(c.data.exponent), "data.exponent: must be finite");
    check(std::isfinite(c.data.velocity_amplitude), "data.velocity_amplitude: must be finite");
    check(std::isfinite(c.data.sobolev_index), "data.sobolev_index: must be finite");
    if (prof == "snapshot") {
        check(!c.data.snapshot.empty() && std::filesystem::exists(c.data.snapshot),
              "data.snapshot: file '" + c.data.snapshot + "' does not exist");
    }

    const std::string& kind = c.randomization.kind;
    check(kind == "gaussian" || kind == "bernoulli" || kind == "none",
          "randomization.kind: must be gaussian, bernoulli or none (got '" + kind + "')");
    check(c.randomization.ensemble >= 1, "randomization.ensemble: must be >= 1");

    try {
        c.solver.validate();
    } catch (const std::invalid_argument& e) {
        errors.push_back(e.what());
    }

    const ExperimentConfig& x = c.experiment;
    check(x.T > 0.0 && std::isfinite(x.T), "experiment.T: must be finite and > 0");
    check(x.T0 >= 0.0 && x.T0 < x.T, "experiment.T0: must satisfy 0 <= T0 < T");
    check(x.lambda_points >= 3, "experiment.lambda_points: must be >= 3");
    check(x.C0 > 0.0, "experiment.C0: must be > 0");
    check(x.q >= 1.0, "experiment.q: must be >= 1");
    check(x.r >= 1.0, "experiment.r: must be >= 1");
    check(x.alpha >= 0.0 && std::isfinite(x.alpha), "experiment.alpha: must be finite and >= 0");
    check(x.lebesgue_p >= 1.0, "experiment.lebesgue_p: must be >= 1");
    check(x.lebesgue_q >= x.lebesgue_p, "experiment.lebesgue_q: must be >= experiment.lebesgue_p");
    check(x.s1 >= 0.0 && std::isfinite(x.s1), "experiment.s1: must be finite and >= 0");
    for (double v : x.cutoffs) check(v > 0.0 && std::isfinite(v), "experiment.cutoffs: entries must be finite and > 0");
    for (double v : x.epsilons) check(v > 0.0 && std::isfinite(v), "experiment.epsilons: entries must be finite and > 0");
    for (double v : x.frequencies) check(v > 0.0 && std::isfinite(v), "experiment.frequencies: entries must be finite and > 0");
    check(x.time_samples >= 4, "experiment.time_samples: must be >= 4");
    check(!c.output_directory.empty(), "output.directory: must not be empty");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::invalid_argument(join_errors(errors)), errors_(std::move(errors))
{
}

void validate_config(const RunConfig& config)
{
    std::vector<std::string> errors;
    collect_errors(config, errors);
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

RunConfig parse_config(const std::string& text)
{
    RunConfig config;
    std::vector<std::string> errors;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& table = keys();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return key == k.name; });
        if (it == table.end()) {
            errors.push_back(key + ": unknown key (line " + std::to_string(lineno) + ")");
            continue;
        }
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            errors.push_back(key + ": duplicate key (line " + std::to_string(lineno) + ")");
            continue;
        }
        seen.push_back(key);
        if (!it->set(config, value)) {
            errors.push_back(key + ": cannot parse '" + value + "' (line " + std::to_string(lineno) + ")");
        }
    }
    collect_errors(config, errors);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return config;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const RunConfig& config)
{
    std::string out;
    for (const Key& k : keys()) out += std::string(k.name) + " = " + k.get(config) + "\n";
    return out;
}

bool operator==(const RunConfig& a, const RunConfig& b) { return emit_config(a) == emit_config(b); }

namespace {

StatePair power_law_pair(const Grid& g, const DataConfig& d)
{
    const auto component = [&](std::uint64_t key, double amplitude, double s) {
        if (amplitude == 0.0) return RealField(g);
        CounterStream stream(key);
        std::vector<double> noise(g.size());
        for (double& x : noise) x = stream.normal();
        SpectralField spectrum = forward_transform(RealField(g, std::move(noise)));
        for (std::size_t i = 0; i < g.n(); ++i) {
            for (std::size_t j = 0; j < g.n(); ++j) {
                Complex& c = spectrum.at(i, j);
                const double mag = std::abs(c);
                const double weight = std::pow(g.frequency(i, j).bracket(), -d.exponent);
                c = mag > 0.0 ? c / mag * weight : Complex(weight, 0.0);
            }
        }
        RealField f = inverse_transform(spectrum);
        f *= amplitude / sobolev_norm(f, s);
        return f;
    };
    return StatePair(component(mix64(d.phase_seed), d.amplitude, d.sobolev_index),
                     component(mix64(d.phase_seed ^ 0x5bd1e995ULL), d.velocity_amplitude, d.sobolev_index - 1.0));
}

}  // namespace

StatePair build_data(const RunConfig& config)
{
    const Grid g = config.make_grid();
    const DataConfig& d = config.data;
    const double centre = 0.5 * g.side_length();
    const double k = d.mode * g.wavenumber_unit();
    std::function<double(double, double)> shape;
    if (d.profile == "zero") return StatePair::zero(g);
    if (d.profile == "snapshot") {
        StatePair pair = read_state_pair(d.snapshot);
        if (!(pair.grid() == g)) throw ConfigError({"data.snapshot: grid does not match grid.*"});
        return pair;
    }
    if (d.profile == "power_law") return power_law_pair(g, d);
    if (d.profile == "gaussian") {
        shape = [&](double x, double y) {
            const double r2 = (x - centre) * (x - centre) + (y - centre) * (y - centre);
            return std::exp(-r2 / (2.0 * d.width * d.width));
        };
    } else if (d.profile == "bubble") {
        shape = [&](double x, double y) {
            const double r2 = (x - centre) * (x - centre) + (y - centre) * (y - centre);
            return std::exp(-r2 / (2.0 * d.width * d.width)) * std::cos(k * x);
        };
    } else if (d.profile == "cosine") {
        shape = [&](double x, double) { return std::cos(k * x); };
    } else {
        throw ConfigError({"data.profile: unknown profile '" + d.profile + "'"});
    }
    return StatePair(RealField::from_function(g, [&](double x, double y) { return d.amplitude * shape(x, y); }),
                     RealField::from_function(g, [&](double x, double y) { return d.velocity_amplitude * shape(x, y); }));
}

}  // namespace vnlw

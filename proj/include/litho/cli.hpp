#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "litho/deposition.hpp"
#include "litho/io.hpp"
#include "litho/parallel.hpp"
#include "litho/pattern.hpp"
#include "litho/verify.hpp"

namespace litho::cli {

enum class Command { deposition, matrix_element, resonant, resolution, pattern, fit, figure1, verify };
enum class Format { csv, json, svg };

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,             // unknown command, unknown key, bad format, malformed config file
    kMissingParameter = 3,
    kMalformedNumber = 4,
    kPrecondition = 5,      // a value violates a documented invariant
    kVerificationFailed = 6,
    kIoFailure = 7,
};

class CliError : public std::runtime_error {
public:
    CliError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
    int code() const { return code_; }

private:
    int code_;
};

/// Thrown when --help is requested; what() carries the help text.
struct HelpRequested : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Grid {
    double min = 0.0;
    double max = 2 * std::numbers::pi;
    std::size_t samples = 512;

    std::vector<double> points() const { return uniform_grid(min, max, samples); }
};

struct OutputSpec {
    Format format = Format::csv;
    std::string path;  // empty or "-" means stdout; a directory for figure1
};

struct RunConfig {
    Command command = Command::deposition;
    std::map<std::string, double> parameters;
    Grid grid;
    OutputSpec output;
    std::string recipe_path;
    std::string target_path;

    bool has(const std::string& key) const { return parameters.count(key) != 0; }
    double value(const std::string& key) const { return parameters.at(key); }
    unsigned integer(const std::string& key) const { return static_cast<unsigned>(parameters.at(key)); }
};

namespace detail {

inline const std::vector<std::string>& real_keys() {
    static const std::vector<std::string> keys{"gamma", "theta", "theta-prime", "lambda", "t", "phi-min", "phi-max"};
    return keys;
}

inline const std::vector<std::string>& integer_keys() {
    static const std::vector<std::string> keys{"n", "m", "m-prime", "k", "n-max", "samples"};
    return keys;
}

inline const std::vector<std::string>& text_keys() {
    static const std::vector<std::string> keys{"format", "output", "recipe", "target"};
    return keys;
}

inline bool contains(const std::vector<std::string>& keys, const std::string& key) {
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

inline bool known_key(const std::string& key) {
    return contains(real_keys(), key) || contains(integer_keys(), key) || contains(text_keys(), key);
}

inline std::optional<Command> command_from_name(std::string_view name) {
    static const std::map<std::string_view, Command> names{
        {"deposition", Command::deposition}, {"matrix-element", Command::matrix_element},
        {"resonant", Command::resonant},     {"resolution", Command::resolution},
        {"pattern", Command::pattern},       {"fit", Command::fit},
        {"figure1", Command::figure1},       {"verify", Command::verify}};
    auto it = names.find(name);
    if (it == names.end()) return std::nullopt;
    return it->second;
}

inline double parse_real(const std::string& key, const std::string& text) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty() || !std::isfinite(value)) {
        throw CliError(kMalformedNumber, "malformed number for --" + key + ": '" + text + "'");
    }
    return value;
}

inline double parse_integer(const std::string& key, const std::string& text) {
    long long value = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw CliError(kMalformedNumber, "malformed integer for --" + key + ": '" + text + "'");
    }
    if (value < 0) throw CliError(kPrecondition, "--" + key + " must be a nonnegative integer");
    return static_cast<double>(value);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(kIoFailure, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Flattens a JSON config object onto the same string map the flags populate.
inline void merge_config_text(const std::string& text, std::map<std::string, std::string>& raw,
                              std::optional<std::string>& command) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CliError(kUsage, std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CliError(kUsage, "config file must hold a JSON object");
    for (const auto& [key, val] : j.items()) {
        if (key == "command") {
            if (!val.is_string()) throw CliError(kUsage, "config key 'command' must be a string");
            command = val.get<std::string>();
            continue;
        }
        if (!known_key(key)) throw CliError(kUsage, "unknown config key '" + key + "'");
        if (val.is_string()) {
            raw[key] = val.get<std::string>();
        } else if (val.is_number_integer()) {
            raw[key] = std::to_string(val.get<long long>());
        } else if (val.is_number()) {
            raw[key] = io::format_double(val.get<double>());
        } else {
            throw CliError(kMalformedNumber, "config key '" + key + "' must be a number or string");
        }
    }
}

inline std::vector<std::string> required_keys(Command c) {
    switch (c) {
        case Command::deposition: return {"n"};
        case Command::matrix_element: return {"n", "m", "m-prime"};
        case Command::resonant: return {"n", "k"};
        case Command::resolution: return {"n", "k"};
        default: return {};
    }
}

}  // namespace detail

/// Builds a RunConfig from command-line arguments (program name excluded).
/// `config_text`, when given, is a JSON object with the same keys as the
/// flags; a `--config PATH` argument loads one from disk. Flags win.
inline RunConfig parse_config(const std::vector<std::string>& args,
                              std::optional<std::string> config_text = std::nullopt) {
    CLI::App app{"Entangled-light photolithography simulator", "litho_sim"};
    std::string command_name;
    app.add_option("command", command_name,
                   "deposition | matrix-element | resonant | resolution | pattern | fit | figure1 | verify");
    std::map<std::string, std::string> flags;
    for (const auto* keys : {&detail::real_keys(), &detail::integer_keys(), &detail::text_keys()}) {
        for (const auto& key : *keys) app.add_option("--" + key, flags[key]);
    }
    std::string config_path;
    app.add_option("--config", config_path, "JSON file with the same keys as the flags");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw CliError(kUsage, e.what());
    }

    std::map<std::string, std::string> raw;
    std::optional<std::string> command_text;
    if (!config_path.empty()) config_text = detail::read_file(config_path);
    if (config_text) detail::merge_config_text(*config_text, raw, command_text);
    for (const auto& [key, text] : flags) {
        if (app.count("--" + key) > 0) raw[key] = text;
    }
    if (!command_name.empty()) command_text = command_name;

    if (!command_text) throw CliError(kUsage, "no command given");
    const auto command = detail::command_from_name(*command_text);
    if (!command) throw CliError(kUsage, "unknown command '" + *command_text + "'");

    RunConfig config;
    config.command = *command;
    config.parameters = {{"gamma", std::numbers::pi / 4}, {"t", 1.0}, {"lambda", 1.0}};
    for (const auto& [key, text] : raw) {
        if (detail::contains(detail::real_keys(), key)) {
            config.parameters[key] = detail::parse_real(key, text);
        } else if (detail::contains(detail::integer_keys(), key)) {
            config.parameters[key] = detail::parse_integer(key, text);
        }
    }

    if (config.has("phi-min")) config.grid.min = config.value("phi-min");
    if (config.has("phi-max")) config.grid.max = config.value("phi-max");
    if (config.has("samples")) config.grid.samples = config.integer("samples");
    if (config.grid.samples < 2) throw CliError(kPrecondition, "grid invariant violated: samples >= 2");
    if (!(config.grid.min < config.grid.max)) {
        throw CliError(kPrecondition, "grid invariant violated: phi-min < phi-max");
    }

    if (raw.count("format")) {
        const auto& f = raw["format"];
        if (f == "csv") config.output.format = Format::csv;
        else if (f == "json") config.output.format = Format::json;
        else if (f == "svg") config.output.format = Format::svg;
        else throw CliError(kUsage, "unknown format '" + f + "' (csv, json or svg)");
    }
    if (raw.count("output")) config.output.path = raw["output"];
    if (raw.count("recipe")) config.recipe_path = raw["recipe"];
    if (raw.count("target")) config.target_path = raw["target"];

    if (config.output.format == Format::svg &&
        (config.command == Command::resolution || config.command == Command::verify)) {
        throw CliError(kUsage, "svg output is only available for curve commands");
    }

    for (const auto& key : detail::required_keys(config.command)) {
        if (!config.has(key)) throw CliError(kMissingParameter, "missing required parameter --" + key);
    }
    if (config.command == Command::pattern && config.recipe_path.empty() && !config.has("n-max")) {
        throw CliError(kMissingParameter, "pattern needs --recipe or --n-max");
    }
    if (config.command == Command::fit && config.target_path.empty() && !config.has("n-max")) {
        throw CliError(kMissingParameter, "fit needs --target or --n-max");
    }
    return config;
}

namespace detail {

inline std::string extension(Format f) {
    switch (f) {
        case Format::json: return ".json";
        case Format::svg: return ".svg";
        default: return ".csv";
    }
}

// Writes `body` to `path`, or to `stdout_stream` when path is empty or "-".
template <class Body>
void emit(const std::string& path, std::ostream& stdout_stream, Body&& body) {
    if (path.empty() || path == "-") {
        body(stdout_stream);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(kIoFailure, "cannot open '" + path + "' for writing");
    body(out);
    out.flush();
    if (!out) throw CliError(kIoFailure, "write to '" + path + "' failed");
}

inline void emit_curve(const RunConfig& config, std::ostream& out, const DepositionCurve& curve,
                       const std::string& label, const std::string& path) {
    emit(path, out, [&](std::ostream& os) {
        switch (config.output.format) {
            case Format::csv: io::write_curve_csv(os, curve); break;
            case Format::json: os << io::curve_json(curve).dump(2) << '\n'; break;
            case Format::svg:
                io::write_svg(os, {{label, {curve.phi().begin(), curve.phi().end()},
                                    {curve.values().begin(), curve.values().end()}}},
                              label);
                break;
        }
    });
}

template <class Rate>
DepositionCurve sample_parallel(const Grid& grid, Rate&& rate) {
    auto phi = grid.points();
    std::vector<double> values(phi.size());
    parallel_for(phi.size(), [&](std::size_t i) { values[i] = rate(phi[i]); });
    return DepositionCurve(std::move(phi), std::move(values));
}

inline SuperpositionRecipe pattern_recipe(const RunConfig& config) {
    if (!config.recipe_path.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(config.recipe_path));
        } catch (const nlohmann::json::exception& e) {
            throw CliError(kUsage, std::string("recipe file is not valid JSON: ") + e.what());
        }
        return io::recipe_from_json(j);
    }
    return sinphi_recipe(config.integer("n-max"), config.value("gamma"), config.value("t"));
}

inline int run_resolution(const RunConfig& config, std::ostream& out) {
    const unsigned n = config.integer("n");
    const unsigned k = config.integer("k");
    const double lambda = config.value("lambda");
    struct Row {
        std::string scheme;
        unsigned photons;
        unsigned order;
        double resolution;
        double halfperiod;
    };
    const auto phi = config.grid.points();
    auto measure = [&](auto rate) { return fringe_halfperiod(DepositionCurve::sample(phi, rate)); };
    const std::vector<Row> rows{
        {"classical", 1, 0, effective_resolution({Classical{}, lambda}),
         measure([](double p) { return deposition_mes(1, p); })},
        {"mes", n, 0, effective_resolution({MaximallyEntangled{n}, lambda}),
         measure([n](double p) { return deposition_mes(n, p); })},
        {"resonant", n, k, effective_resolution({Resonant{n, k}, lambda}),
         measure([n, k](double p) { return deposition_resonant(n, k, p); })},
    };
    emit(config.output.path, out, [&](std::ostream& os) {
        if (config.output.format == Format::json) {
            auto arr = nlohmann::json::array();
            for (const auto& r : rows) {
                arr.push_back({{"scheme", r.scheme}, {"photons", r.photons}, {"order", r.order},
                               {"wavelength", lambda}, {"effective_resolution", r.resolution},
                               {"fringe_halfperiod", r.halfperiod}});
            }
            os << arr.dump(2) << '\n';
            return;
        }
        os << "scheme,photons,order,wavelength,effective_resolution,fringe_halfperiod\n";
        for (const auto& r : rows) {
            os << r.scheme << ',' << r.photons << ',' << r.order << ',' << io::format_double(lambda) << ','
               << io::format_double(r.resolution) << ',' << io::format_double(r.halfperiod) << '\n';
        }
    });
    return kOk;
}

inline int run_figure1(const RunConfig& config, std::ostream& out) {
    const auto phi = config.grid.points();
    const auto fits = figure_one(phi, config.value("gamma"), config.value("t"));
    std::vector<double> reference(phi.size());
    std::transform(phi.begin(), phi.end(), reference.begin(), [](double p) { return std::abs(std::sin(p)); });

    const std::string dir = config.output.path.empty() || config.output.path == "-" ? "." : config.output.path;
    const auto ext = extension(config.output.format);
    if (config.output.format == Format::svg) {
        std::vector<io::SvgSeries> series;
        series.push_back({"|sin phi| (normalized)", phi, normalize_shape(reference)});
        for (const auto& f : fits) {
            series.push_back({"N = " + std::to_string(f.max_harmonic), phi, normalize_shape(f.curve.values())});
        }
        emit(dir + "/figure1.svg", out, [&](std::ostream& os) { io::write_svg(os, series, "|sin phi| synthesis"); });
    } else {
        for (const auto& f : fits) {
            emit_curve(config, out, f.curve, "N = " + std::to_string(f.max_harmonic),
                       dir + "/figure1_n" + std::to_string(f.max_harmonic) + ext);
        }
        emit(dir + "/figure1_reference" + ext, out, [&](std::ostream& os) {
            if (config.output.format == Format::json) {
                os << io::curve_json(phi, reference).dump(2) << '\n';
            } else {
                io::write_curve_csv(os, phi, reference);
            }
        });
    }
    std::ostringstream summary;
    summary << "n_max,rms,sup\n";
    for (const auto& f : fits) {
        summary << f.max_harmonic << ',' << io::format_double(f.error.rms) << ','
                << io::format_double(f.error.sup) << '\n';
    }
    emit(dir + "/figure1_summary.csv", out, [&](std::ostream& os) { os << summary.str(); });
    out << summary.str();
    return kOk;
}

inline int run_verify(const RunConfig& config, std::ostream& out) {
    const auto report = verify_oracle_lattice();
    constexpr double tolerance = 1e-10;
    const bool ok = report.max_deposition_error <= tolerance && report.max_matrix_error <= tolerance;
    std::ostringstream text;
    text << "deposition checks: " << report.deposition_checks << '\n'
         << "max |closed-form - oracle| (deposition): " << io::format_double(report.max_deposition_error) << '\n'
         << "matrix element checks: " << report.matrix_checks << '\n'
         << "max |closed-form - oracle| (matrix element): " << io::format_double(report.max_matrix_error) << '\n'
         << "tolerance: " << io::format_double(tolerance) << '\n'
         << (ok ? "verify: PASS" : "verify: FAIL") << '\n';
    if (config.output.format == Format::json) {
        nlohmann::json j{{"deposition_checks", report.deposition_checks},
                         {"max_deposition_error", report.max_deposition_error},
                         {"matrix_checks", report.matrix_checks},
                         {"max_matrix_error", report.max_matrix_error},
                         {"tolerance", tolerance},
                         {"pass", ok}};
        emit(config.output.path, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    } else {
        emit(config.output.path, out, [&](std::ostream& os) { os << text.str(); });
    }
    return ok ? kOk : kVerificationFailed;
}

}  // namespace detail

/// Executes a parsed configuration. Diagnostics go to `err`; the returned
/// value is the process exit code.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.command) {
            case Command::deposition: {
                const NmesSpec spec{config.integer("n"), config.has("m") ? config.integer("m") : 0u,
                                    config.value("gamma"), config.has("theta") ? config.value("theta") : 0.0};
                if (spec.photons == 0) throw std::invalid_argument("photon number N must be >= 1");
                spec.validate();
                auto curve = detail::sample_parallel(config.grid, [&](double p) { return deposition_general(spec, p); });
                detail::emit_curve(config, out, curve, "deposition N = " + std::to_string(spec.photons),
                                   config.output.path);
                return kOk;
            }
            case Command::matrix_element: {
                const unsigned n = config.integer("n");
                const unsigned m = config.integer("m");
                const unsigned mp = config.integer("m-prime");
                const double gamma = config.value("gamma");
                const double theta = config.has("theta") ? config.value("theta") : 0.0;
                const double theta_p = config.has("theta-prime") ? config.value("theta-prime") : 0.0;
                const auto phi = config.grid.points();
                std::vector<Complex> values(phi.size());
                parallel_for(phi.size(), [&](std::size_t i) {
                    values[i] = matrix_element_general(n, m, mp, gamma, theta, theta_p, phi[i]);
                });
                detail::emit(config.output.path, out, [&](std::ostream& os) {
                    switch (config.output.format) {
                        case Format::csv: io::write_complex_csv(os, phi, values); break;
                        case Format::json: os << io::complex_json(phi, values).dump(2) << '\n'; break;
                        case Format::svg: {
                            std::vector<double> re, im;
                            for (const auto& v : values) re.push_back(v.real()), im.push_back(v.imag());
                            io::write_svg(os, {{"re", phi, re}, {"im", phi, im}}, "dosing matrix element");
                            break;
                        }
                    }
                });
                return kOk;
            }
            case Command::resonant: {
                const unsigned n = config.integer("n");
                const unsigned k = config.integer("k");
                auto curve = detail::sample_parallel(config.grid, [&](double p) { return deposition_resonant(n, k, p); });
                detail::emit_curve(config, out, curve, "resonant N = " + std::to_string(n) + ", k = " + std::to_string(k),
                                   config.output.path);
                return kOk;
            }
            case Command::resolution: return detail::run_resolution(config, out);
            case Command::pattern: {
                const auto recipe = detail::pattern_recipe(config);
                recipe.validate();
                auto curve = detail::sample_parallel(config.grid, [&](double p) { return exposure_at(recipe, p); });
                detail::emit_curve(config, out, curve, "exposure", config.output.path);
                return kOk;
            }
            case Command::fit: {
                TargetPattern target;
                if (!config.target_path.empty()) {
                    nlohmann::json j;
                    try {
                        j = nlohmann::json::parse(detail::read_file(config.target_path));
                    } catch (const nlohmann::json::exception& e) {
                        throw CliError(kUsage, std::string("target file is not valid JSON: ") + e.what());
                    }
                    target = io::target_from_json(j);
                } else {
                    const unsigned top = config.integer("n-max");
                    if (top < 2 || top % 2) throw std::invalid_argument("--n-max must be even and >= 2");
                    target = sinphi_target_coeffs(top / 2);
                }
                const auto recipe = fit_target(target, config.value("gamma"), config.value("t"));
                detail::emit(config.output.path, out,
                             [&](std::ostream& os) { os << io::recipe_to_json(recipe).dump(2) << '\n'; });
                return kOk;
            }
            case Command::figure1: return detail::run_figure1(config, out);
            case Command::verify: return detail::run_verify(config, out);
        }
    } catch (const CliError& e) {
        err << "error: " << e.what() << '\n';
        return e.code();
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kPrecondition;
    }
    return kUsage;
}

}  // namespace litho::cli

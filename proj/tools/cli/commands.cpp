// commands.cpp: propagate, expand, diagnose, resum

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cli/writers.hpp"
#include "dualseries/dualseries.hpp"

namespace dualseries::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kMaxCurvePoints = 1001;

HamiltonianModel load(const RunConfig& cfg) { return build_model(cfg.model, cfg.model_dir); }

NumericOptions numeric_options(const HamiltonianModel& model, const TimeGrid& grid) {
    NumericOptions opts;
    opts.substeps = required_substeps(model, grid, opts);
    return opts;
}

OracleKind oracle_for(const RunConfig& cfg, const HamiltonianModel& model) {
    return cfg.oracle == OracleChoice::Numeric ? OracleKind::NumericMidpoint : default_oracle(model);
}

std::vector<CMat> reference_path(const RunConfig& cfg, const HamiltonianModel& model, const TimeGrid& grid) {
    return oracle_path(model, grid, oracle_for(cfg, model), numeric_options(model, grid));
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out) {
        write_file(*cfg.out, text);
    } else {
        out << text;
    }
}

// [t, value] pairs, thinned to at most kMaxCurvePoints with both ends kept.
ordered_json curve_json(const TimeGrid& grid, const std::vector<double>& values) {
    ordered_json arr = ordered_json::array();
    const std::size_t n = values.size();
    const std::size_t stride = n <= kMaxCurvePoints ? 1 : (n - 2) / (kMaxCurvePoints - 1) + 1;
    for (std::size_t k = 0; k < n; k += stride) arr.push_back({grid.at(k), values[k]});
    if (n > 0 && (n - 1) % stride != 0) arr.push_back({grid.at(n - 1), values[n - 1]});
    return arr;
}

ordered_json pairs_json(const std::vector<std::pair<double, double>>& pairs) {
    ordered_json arr = ordered_json::array();
    for (const auto& [t, v] : pairs) arr.push_back({t, v});
    return arr;
}

ordered_json fit_json(const SecularFit& fit) {
    ordered_json j;
    j["slope"] = fit.slope;
    j["slope_stderr"] = fit.slope_stderr;
    j["intercept"] = fit.intercept;
    j["windows"] = fit.windows;
    j["detected"] = fit.detected;
    return j;
}

std::string render(const ordered_json& j) { return j.dump(2) + "\n"; }

bool is_driven_tls(const HamiltonianModel& model) {
    return model.kind() == ModelKind::DrivenTLS || model.kind() == ModelKind::DrivenTLSInteraction;
}

SeriesPropagator expand_series(const RunConfig& cfg, const HamiltonianModel& model, const TimeGrid& grid) {
    const ExpansionOptions opts = cfg.expansion_options();
    if (cfg.series == SeriesKind::Dyson) return dyson_expand(model, grid, cfg.order, cfg.lambda, opts);
    if (model.kind() == ModelKind::DrivenTLS) {
        if (cfg.lambda != 1.0) {
            throw ConfigError("the driven_tls dual series is built in the interaction picture; use lambda = 1");
        }
        return schroedinger_dual_series(model, grid, cfg.order, opts);
    }
    return dual_dyson_expand(model, grid, cfg.order, cfg.lambda, opts);
}

double resolved_window(const RunConfig& cfg, const HamiltonianModel& model) {
    if (!std::isnan(cfg.period)) return cfg.period;
    const double p = characteristic_period(model);
    if (!std::isfinite(p)) throw ConfigError("model has no natural period; pass --period");
    return 0.5 * p;
}

void add_common_options(CLI::App& sub, RunConfig& cfg, std::string& model_path, std::string& series,
                        std::string& oracle, std::string& out) {
    sub.add_option("--model", model_path, "Model descriptor file (key=value lines)")->required();
    sub.add_option("--t0", cfg.t0, "Start time")->capture_default_str();
    sub.add_option("--t1", cfg.t1, "End time")->capture_default_str();
    sub.add_option("--steps", cfg.steps, "Grid intervals")->capture_default_str();
    sub.add_option("--order", cfg.order, "Highest series order")->capture_default_str();
    sub.add_option("--series", series, "Series kind")
        ->check(CLI::IsMember({"dyson", "dual"}))
        ->capture_default_str();
    sub.add_option("--oracle", oracle, "Reference propagator")
        ->check(CLI::IsMember({"auto", "numeric"}))
        ->capture_default_str();
    sub.add_option("--lambda", cfg.lambda, "Bookkeeping parameter of the expansion")->capture_default_str();
    sub.add_option("--period", cfg.period, "Envelope window length (default: from the model)");
    sub.add_option("--gap-tol", cfg.gap_tol, "Relative level-gap threshold")->capture_default_str();
    sub.add_option("--self-check-tol", cfg.self_check_tol, "Half-grid self-check tolerance")
        ->capture_default_str();
    sub.add_flag("!--no-self-check", cfg.self_check, "Skip the half-grid self-check");
    sub.add_option("--out", out, "Output file (directory for expand)");
}

}  // namespace

void cmd_propagate(const RunConfig& cfg, std::ostream& out) {
    const HamiltonianModel model = load(cfg);
    const TimeGrid grid = cfg.grid();
    const auto path = reference_path(cfg, model, grid);
    emit(cfg, matrix_path_csv(config_hash_hex(cfg), grid, path), out);
}

void cmd_expand(const RunConfig& cfg, std::ostream& out) {
    const HamiltonianModel model = load(cfg);
    const TimeGrid grid = cfg.grid();
    const SeriesPropagator series = expand_series(cfg, model, grid);
    const std::string hash = config_hash_hex(cfg);

    std::vector<std::pair<std::string, std::string>> files;
    for (std::size_t j = 0; j < series.orders.size(); ++j) {
        files.emplace_back("order_" + std::to_string(j) + ".csv", matrix_path_csv(hash, grid, series.orders[j]));
    }
    ordered_json summary;
    summary["kind"] = std::string(to_string(series.kind));
    summary["lambda"] = series.lambda;
    summary["orders"] = series.max_order;
    summary["sup_norm_per_order"] = order_sup_norms(series);
    summary["model"] = cfg.model.kind;
    summary["config_hash"] = hash;
    files.emplace_back("summary.json", render(summary));

    std::error_code ec;
    std::filesystem::create_directories(*cfg.out, ec);
    if (ec) throw IoError("cannot create directory " + cfg.out->string() + ": " + ec.message());
    for (const auto& [name, text] : files) write_file(*cfg.out / name, text);
    out << "wrote " << files.size() << " files to " << cfg.out->string() << "\n";
}

void cmd_diagnose(const RunConfig& cfg, std::ostream& out) {
    const HamiltonianModel model = load(cfg);
    const TimeGrid grid = cfg.grid();
    ReportOptions opts;
    opts.expansion = cfg.expansion_options();
    opts.numeric_oracle = cfg.oracle == OracleChoice::Numeric;
    opts.period_hint = cfg.period;
    opts.max_curve_samples = kMaxCurvePoints;
    const DiagnosticsReport r = validity_report(model, grid, cfg.order, opts);

    ordered_json j;
    j["condition_lhs"] = pairs_json(r.condition_lhs);
    j["secular_slope"] = r.secular_slope;
    j["slope_stderr"] = r.slope_stderr;
    j["verdict"] = std::string(to_string(r.verdict));
    j["recovered_parameter"] = r.recovered_parameter;
    j["error_curve"] = pairs_json(r.error_curve);
    j["config_hash"] = config_hash_hex(cfg);
    j["model"] = std::string(to_string(r.model));
    j["order"] = r.order;
    j["oracle"] = std::string(to_string(r.oracle));
    j["regime"] = r.regime;
    j["condition_lhs_max"] = r.condition_lhs_max;
    j["error_max"] = r.error_max;
    j["secular_order"] = r.secular_order;
    j["recovered_parameter_alt"] = r.recovered_parameter_alt;
    ordered_json per_order = ordered_json::array();
    for (const auto& fit : r.per_order) per_order.push_back(fit_json(fit));
    j["per_order"] = per_order;
    j["resummed_error_curve"] = pairs_json(r.resummed_error_curve);
    j["resummed_error_max"] = r.resummed_error_max;
    emit(cfg, render(j), out);
}

void cmd_resum(const RunConfig& cfg, std::ostream& out) {
    const HamiltonianModel model = load(cfg);
    const TimeGrid grid = cfg.grid();
    std::vector<double> before(grid.size()), after(grid.size());
    std::string method;

    if (model.kind() == ModelKind::JaynesCummings) {
        if (cfg.order < 1 || cfg.order > 2) throw ConfigError("JC resummation is defined for order 1 or 2");
        const ExpansionOptions opts = cfg.expansion_options();
        const auto dyson = dyson_expand(model, grid, cfg.order, 1.0, opts);
        const auto resummed = resummed_jc_dyson(resum_jc_shift(model), grid, cfg.order, opts);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const CMat exact = exact_jc_propagator(model, grid.at(k));
            before[k] = max_abs_diff(partial_sum(dyson, cfg.order, k), exact);
            after[k] = max_abs_diff(resummed[k], exact);
        }
        method = "detuning_shift";
    } else if (is_driven_tls(model)) {
        const auto exact = reference_path(cfg, model, grid);
        const SeriesPropagator series = model.kind() == ModelKind::DrivenTLS
                                            ? schroedinger_dual_series(model, grid, cfg.order, cfg.expansion_options())
                                            : dual_dyson_expand(model, grid, cfg.order, 1.0, cfg.expansion_options());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            before[k] = max_abs_diff(partial_sum(series, cfg.order, k), exact[k]);
            after[k] = max_abs_diff(resummed_driven_tls_propagator(model, grid.at(k)), exact[k]);
        }
        method = "bessel_j0";
    } else {
        throw ConfigError("resum supports jaynes_cummings and driven_tls models, not " + cfg.model.kind);
    }

    const double window = resolved_window(cfg, model);
    const SecularFit fb = secular_slope(before, grid, window);
    const SecularFit fa = secular_slope(after, grid, window);

    ordered_json j;
    j["before"] = curve_json(grid, before);
    j["after"] = curve_json(grid, after);
    j["slopes"] = {{"before", fb.slope}, {"after", fa.slope}};
    j["config_hash"] = config_hash_hex(cfg);
    j["method"] = method;
    j["window"] = window;
    j["fits"] = {{"before", fit_json(fb)}, {"after", fit_json(fa)}};
    j["max_error"] = {{"before", *std::max_element(before.begin(), before.end())},
                      {"after", *std::max_element(after.begin(), after.end())}};
    emit(cfg, render(j), out);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dyson and adiabatic (dual) series for time-dependent propagators", "dualseries"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string model_path, series = "dual", oracle = "auto", out_path;
    struct Entry {
        const char* name;
        const char* help;
        void (*fn)(const RunConfig&, std::ostream&);
    };
    const Entry entries[] = {
        {"propagate", "Reference propagator on the grid as CSV", cmd_propagate},
        {"expand", "Series orders as CSV plus a JSON summary (--out is a directory)", cmd_expand},
        {"diagnose", "Validity report as JSON", cmd_diagnose},
        {"resum", "Error curves before and after resummation as JSON", cmd_resum},
    };
    for (const auto& e : entries) add_common_options(*app.add_subcommand(e.name, e.help), cfg, model_path, series, oracle, out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::Config);
    }

    const Entry* chosen = nullptr;
    for (const auto& e : entries)
        if (app.got_subcommand(e.name)) chosen = &e;

    try {
        cfg.command = chosen->name;
        cfg.series = series == "dyson" ? SeriesKind::Dyson : SeriesKind::DualDyson;
        cfg.oracle = oracle == "numeric" ? OracleChoice::Numeric : OracleChoice::Auto;
        if (!out_path.empty()) cfg.out = out_path;
        cfg.model = read_model_file(model_path);
        cfg.model_dir = std::filesystem::path(model_path).parent_path();
        validate(cfg);
        chosen->fn(cfg, out);
        return static_cast<int>(ExitCode::Ok);
    } catch (const ConfigError& e) {
        err << "dualseries: configuration error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Config);
    } catch (const IoError& e) {
        err << "dualseries: I/O error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Io);
    } catch (const Error& e) {
        err << "dualseries: " << (e.is_configuration_error() ? "configuration error: " : "numeric failure: ")
            << e.what() << "\n";
        return static_cast<int>(e.is_configuration_error() ? ExitCode::Config : ExitCode::Numeric);
    } catch (const std::exception& e) {
        err << "dualseries: numeric failure: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Numeric);
    }
}

}  // namespace dualseries::cli

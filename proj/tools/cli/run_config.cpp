// run_config.cpp: descriptor parsing, model construction, validation, provenance hash

#include "cli/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "cli/writers.hpp"

namespace dualseries::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct KindInfo {
    const char* name;
    std::vector<std::pair<const char*, const char*>> numeric;  // key, default
    bool takes_samples;
};

const std::vector<KindInfo>& kinds() {
    static const std::vector<KindInfo> table = {
        {"schwinger", {{"omega0", "1"}, {"omega", "0.2"}, {"theta", "1"}, {"hbar", "1"}}, false},
        {"jaynes_cummings", {{"g", "1"}, {"delta", "0.2"}, {"n", "0"}, {"hbar", "1"}}, false},
        {"driven_tls", {{"epsilon", "0.1"}, {"V", "5"}, {"omega0", "1"}, {"hbar", "1"}}, false},
        {"driven_tls_interaction", {{"epsilon", "0.1"}, {"V", "5"}, {"omega0", "1"}, {"hbar", "1"}}, false},
        {"sampled", {{"hbar", "1"}, {"period", "nan"}}, true},
    };
    return table;
}

const KindInfo& kind_info(const std::string& kind) {
    for (const auto& k : kinds())
        if (kind == k.name) return k;
    std::string names;
    for (const auto& k : kinds()) names += std::string(names.empty() ? "" : ", ") + k.name;
    throw ConfigError("unknown model kind '" + kind + "' (expected one of: " + names + ")");
}

double number(const ModelSpec& spec, const std::string& key) {
    const auto& text = spec.entries.at(key);
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    if (!parse_double(text, v)) throw ConfigError("model key '" + key + "' is not a number: " + text);
    return v;
}

// Samples in the propagate CSV layout: t, then Re/Im of each entry, row-major.
HamiltonianModel read_sampled(const std::filesystem::path& file, double hbar, double period) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot read samples file " + file.string());
    std::vector<double> times;
    std::vector<CMat> samples;
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#' || line.front() == 't') continue;
        std::vector<double> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            if (!parse_double(trim(cell), v)) {
                throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": not a number: " + cell);
            }
            cols.push_back(v);
        }
        const std::size_t entries = cols.size() < 3 ? 0 : (cols.size() - 1) / 2;
        const auto d = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(entries))));
        if (entries == 0 || d * d != entries || cols.size() != 1 + 2 * entries) {
            throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": expected 1 + 2 dim^2 columns");
        }
        if (dim == 0) dim = d;
        if (d != dim) throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": dimension changes");
        CMat h(dim);
        for (std::size_t e = 0; e < entries; ++e) h(e / dim, e % dim) = cplx(cols[1 + 2 * e], cols[2 + 2 * e]);
        times.push_back(cols[0]);
        samples.push_back(std::move(h));
    }
    if (times.size() < 2) throw ConfigError("samples file needs at least two rows");
    const TimeGrid grid(times.front(), times.back(), times.size() - 1);
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (std::abs(times[k] - grid.at(k)) > 1e-9 * grid.dt()) {
            throw ConfigError("sample times must be uniformly spaced");
        }
    }
    return make_sampled(grid, std::move(samples), hbar, period);
}

}  // namespace

ModelSpec parse_model_text(const std::string& text) {
    ModelSpec spec;
    std::set<std::string> seen;
    std::stringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("model line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("model line " + std::to_string(line_no) + ": empty key or value");
        }
        if (!seen.insert(key).second) throw ConfigError("model key '" + key + "' given twice");
        if (key == "kind") {
            spec.kind = value;
        } else {
            spec.entries[key] = value;
        }
    }
    if (spec.kind.empty()) throw ConfigError("model file has no 'kind' line");
    const KindInfo& info = kind_info(spec.kind);

    std::map<std::string, std::string> canonical;
    for (const auto& [key, fallback] : info.numeric) {
        const auto it = spec.entries.find(key);
        std::string text = it == spec.entries.end() ? fallback : it->second;
        if (text != "nan") {
            double v = 0.0;
            if (!parse_double(text, v)) throw ConfigError("model key '" + std::string(key) + "' is not a number: " + text);
            text = format_double(v);
        }
        canonical[key] = text;
    }
    if (info.takes_samples) {
        const auto it = spec.entries.find("samples");
        if (it == spec.entries.end()) throw ConfigError("sampled model needs a 'samples' file");
        canonical["samples"] = it->second;
    }
    for (const auto& [key, value] : spec.entries) {
        if (!canonical.count(key)) throw ConfigError("unknown key '" + key + "' for kind " + spec.kind);
    }
    spec.entries = std::move(canonical);
    return spec;
}

ModelSpec read_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read model file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_text(ss.str());
}

HamiltonianModel build_model(const ModelSpec& spec, const std::filesystem::path& base_dir) {
    const double hbar = number(spec, "hbar");
    if (spec.kind == "schwinger") {
        return make_schwinger_spin(number(spec, "omega0"), number(spec, "omega"), number(spec, "theta"), hbar);
    }
    if (spec.kind == "jaynes_cummings") {
        const double n = number(spec, "n");
        if (n < 0.0 || n != std::floor(n) || n > 1e9) throw ConfigError("photon number n must be a non-negative integer");
        return make_jaynes_cummings(number(spec, "g"), number(spec, "delta"), static_cast<int>(n), hbar);
    }
    if (spec.kind == "driven_tls" || spec.kind == "driven_tls_interaction") {
        const Picture picture = spec.kind == "driven_tls" ? Picture::Schroedinger : Picture::Interaction;
        return make_driven_tls(number(spec, "epsilon"), number(spec, "V"), number(spec, "omega0"), picture, hbar);
    }
    if (spec.kind == "sampled") {
        std::filesystem::path file = spec.entries.at("samples");
        if (file.is_relative()) file = base_dir / file;
        return read_sampled(file, hbar, number(spec, "period"));
    }
    kind_info(spec.kind);
    throw ConfigError("unsupported model kind " + spec.kind);
}

ExpansionOptions RunConfig::expansion_options() const {
    ExpansionOptions opts;
    opts.spectral.gap_tol = gap_tol;
    opts.self_check = self_check;
    opts.self_check_tol = self_check_tol;
    return opts;
}

void validate(const RunConfig& cfg) {
    if (!std::isfinite(cfg.t0) || !std::isfinite(cfg.t1) || !(cfg.t1 > cfg.t0)) {
        throw ConfigError("need finite t0 < t1");
    }
    if (cfg.steps < kMinSteps) throw ConfigError("steps must be at least " + std::to_string(kMinSteps));
    if (cfg.order > kMaxSeriesOrder) {
        throw ConfigError("order must be at most " + std::to_string(kMaxSeriesOrder));
    }
    if (!std::isfinite(cfg.lambda) || cfg.lambda == 0.0) throw ConfigError("lambda must be finite and non-zero");
    if (!(cfg.gap_tol > 0.0) || !(cfg.self_check_tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (!std::isnan(cfg.period) && !(cfg.period > 0.0)) throw ConfigError("period must be positive");
    if (cfg.command == "expand" && !cfg.out) throw ConfigError("expand needs --out <directory>");
}

std::uint64_t config_hash(const RunConfig& cfg) {
    std::string text = "command=" + cfg.command + "\nkind=" + cfg.model.kind + "\n";
    for (const auto& [k, v] : cfg.model.entries) text += k + "=" + v + "\n";
    text += "t0=" + format_double(cfg.t0) + "\nt1=" + format_double(cfg.t1) + "\nsteps=" +
            std::to_string(cfg.steps) + "\norder=" + std::to_string(cfg.order) + "\nseries=" +
            std::string(to_string(cfg.series)) + "\noracle=" + (cfg.oracle == OracleChoice::Auto ? "auto" : "numeric") +
            "\nlambda=" + format_double(cfg.lambda) + "\nperiod=" + format_double(cfg.period) +
            "\ngap_tol=" + format_double(cfg.gap_tol) + "\nself_check_tol=" + format_double(cfg.self_check_tol) +
            "\nself_check=" + (cfg.self_check ? "1" : "0") + "\n";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash_hex(const RunConfig& cfg) {
    static constexpr char digits[] = "0123456789abcdef";
    const std::uint64_t h = config_hash(cfg);
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) out[static_cast<std::size_t>(15 - i)] = digits[(h >> (4 * i)) & 0xF];
    return out;
}

}  // namespace dualseries::cli

// run_config.hpp: model descriptor files and the per-run configuration

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "dualseries/expansion.hpp"
#include "dualseries/models.hpp"

namespace dualseries::cli {

// Exit statuses of the dualseries tool.
enum class ExitCode : int { Ok = 0, Config = 2, Numeric = 3, Io = 4 };

// Bad flags, bad model files, unsupported combinations.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable inputs or unwritable outputs.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parsed key=value model descriptor. `entries` keeps every key with its canonical text,
// sorted, so the descriptor hashes the same regardless of line order or spacing.
struct ModelSpec {
    std::string kind;
    std::map<std::string, std::string> entries;
};

// One "key = value" per line; '#' starts a comment; keys are case-sensitive lowercase.
ModelSpec parse_model_text(const std::string& text);
ModelSpec read_model_file(const std::filesystem::path& path);

// Builds the library model. Relative paths inside the spec resolve against `base_dir`.
HamiltonianModel build_model(const ModelSpec& spec, const std::filesystem::path& base_dir = {});

enum class OracleChoice { Auto, Numeric };

struct RunConfig {
    std::string command;
    ModelSpec model;
    std::filesystem::path model_dir;
    double t0{0.0};
    double t1{10.0};
    std::size_t steps{1000};
    std::size_t order{2};
    SeriesKind series{SeriesKind::DualDyson};
    OracleChoice oracle{OracleChoice::Auto};
    double lambda{1.0};
    double period{std::numeric_limits<double>::quiet_NaN()};
    double gap_tol{1e-9};
    double self_check_tol{0.01};
    bool self_check{true};
    std::optional<std::filesystem::path> out;

    TimeGrid grid() const { return TimeGrid(t0, t1, steps); }
    ExpansionOptions expansion_options() const;
};

inline constexpr std::size_t kMinSteps = 16;

// Rejects configurations the commands cannot run.
void validate(const RunConfig& cfg);

// FNV-1a over a canonical rendering of everything that affects the output.
std::uint64_t config_hash(const RunConfig& cfg);
std::string config_hash_hex(const RunConfig& cfg);

}  // namespace dualseries::cli

// CLI: descriptor parsing, provenance hash, and end-to-end runs of the installed binary.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/run_config.hpp"
#include "cli/writers.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace dualseries;
using namespace dualseries::cli;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("dualseries_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 std::to_string(counter++) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    fs::path file(const std::string& name, const std::string& content) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << content;
        return p;
    }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_binary(const std::vector<std::string>& args) {
    std::string cmd = std::string("\"") + DUALSERIES_CLI_PATH + "\"";
    for (const auto& a : args) cmd += " \"" + a + "\"";
    cmd += " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_inline(std::vector<std::string> args, std::string& out, std::string& err) {
    args.insert(args.begin(), "dualseries");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = run(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str();
    err = e.str();
    return code;
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string& header) {
    std::vector<std::vector<double>> rows;
    std::stringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line[0] == 't') {
            header = line;
            continue;
        }
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST(ModelDescriptor, ParsesKeysCommentsAndDefaults) {
    const auto spec = parse_model_text("# spin in a rotating field\nkind = schwinger\nomega0=1.0  # Larmor\n\ntheta=0.5\n");
    EXPECT_EQ(spec.kind, "schwinger");
    EXPECT_EQ(spec.entries.at("omega0"), "1");
    EXPECT_EQ(spec.entries.at("theta"), "0.5");
    EXPECT_EQ(spec.entries.at("omega"), "0.2");
    EXPECT_EQ(spec.entries.at("hbar"), "1");
}

TEST(ModelDescriptor, RejectsMalformedInput) {
    EXPECT_THROW(parse_model_text("kind=harmonic\n"), ConfigError);
    EXPECT_THROW(parse_model_text("omega0=1\n"), ConfigError);
    EXPECT_THROW(parse_model_text("kind=schwinger\nomega0\n"), ConfigError);
    EXPECT_THROW(parse_model_text("kind=schwinger\nomega0=fast\n"), ConfigError);
    EXPECT_THROW(parse_model_text("kind=schwinger\nomega0=1\nomega0=2\n"), ConfigError);
    EXPECT_THROW(parse_model_text("kind=schwinger\ng=1\n"), ConfigError);
    EXPECT_THROW(parse_model_text("kind=sampled\n"), ConfigError);
}

TEST(ModelDescriptor, BuildsEveryKind) {
    EXPECT_EQ(build_model(parse_model_text("kind=schwinger")).kind(), ModelKind::SchwingerSpin);
    EXPECT_EQ(build_model(parse_model_text("kind=jaynes_cummings\nn=2")).jaynes_cummings().photon_n, 2);
    EXPECT_EQ(build_model(parse_model_text("kind=driven_tls")).kind(), ModelKind::DrivenTLS);
    EXPECT_EQ(build_model(parse_model_text("kind=driven_tls_interaction")).kind(), ModelKind::DrivenTLSInteraction);
    EXPECT_THROW(build_model(parse_model_text("kind=jaynes_cummings\nn=1.5")), ConfigError);
}

TEST(ModelDescriptor, SampledReadsPropagateLayout) {
    TempDir dir;
    std::string csv = "# samples\nt,h00_re,h00_im,h01_re,h01_im,h10_re,h10_im,h11_re,h11_im\n";
    for (int k = 0; k <= 20; ++k) {
        const double t = 0.1 * k;
        csv += format_double(t) + ",0.5,0,0.25,0,0.25,0,-0.5,0\n";
    }
    dir.file("h.csv", csv);
    const auto model = build_model(parse_model_text("kind=sampled\nsamples=h.csv"), dir.path());
    EXPECT_EQ(model.kind(), ModelKind::GenericSampled);
    EXPECT_EQ(model.dim(), 2u);
    EXPECT_NEAR(eval_hamiltonian(model, 0.35)(0, 1).real(), 0.25, 1e-12);
}

TEST(NumberText, ShortestRoundTrip) {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1.0}) {
        double back = 0.0;
        ASSERT_TRUE(parse_double(format_double(x), back));
        EXPECT_EQ(back, x);
    }
    EXPECT_EQ(format_double(1.0), "1");
    double v = 0.0;
    EXPECT_FALSE(parse_double("1.0x", v));
    EXPECT_FALSE(parse_double("", v));
}

TEST(RunConfigCheck, ValidateRejectsOutOfRange) {
    RunConfig cfg;
    cfg.command = "propagate";
    cfg.model = parse_model_text("kind=schwinger");
    EXPECT_NO_THROW(validate(cfg));
    cfg.steps = 15;
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg.steps = 16;
    cfg.order = 5;
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg.order = 4;
    cfg.t1 = cfg.t0;
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg.t1 = 1.0;
    cfg.command = "expand";
    EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(RunConfigCheck, HashTracksEveryInput) {
    RunConfig a;
    a.command = "propagate";
    a.model = parse_model_text("kind=schwinger\nomega0=1");
    RunConfig b = a;
    b.model = parse_model_text("omega0 = 1.0\nkind=schwinger");
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash_hex(a).size(), 16u);
    b.steps += 1;
    EXPECT_NE(config_hash(a), config_hash(b));
    b = a;
    b.model = parse_model_text("kind=schwinger\nomega0=1.5");
    EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Propagate, SchwingerDefaultsGiveIdentityFirstRow) {
    TempDir dir;
    const auto model = dir.file("spin.model", "kind=schwinger\n");
    const fs::path out = dir.path() / "u.csv";
    ASSERT_EQ(run_binary({"propagate", "--model", model.string(), "--steps", "1000", "--out", out.string()}), 0);
    const std::string text = slurp(out);
    EXPECT_EQ(text.rfind("# config-hash: ", 0), 0u);
    std::string header;
    const auto rows = csv_rows(text, header);
    EXPECT_EQ(header, "t,u00_re,u00_im,u01_re,u01_im,u10_re,u10_im,u11_re,u11_im");
    ASSERT_EQ(rows.size(), 1001u);
    EXPECT_EQ(rows[0][0], 0.0);
    EXPECT_EQ(rows[0][1], 1.0);
    EXPECT_EQ(rows[0][3], 0.0);
    EXPECT_DOUBLE_EQ(rows.back()[0], 10.0);
}

TEST(Propagate, ClosedFormMatchesNumericOracle) {
    TempDir dir;
    const auto model = dir.file("jc.model", "kind=jaynes_cummings\ng=1\ndelta=0.2\nn=1\n");
    const fs::path exact = dir.path() / "exact.csv", numeric = dir.path() / "numeric.csv";
    const std::vector<std::string> base = {"propagate", "--model", model.string(), "--t1", "20", "--steps", "2000"};
    auto a = base, b = base;
    a.insert(a.end(), {"--oracle", "auto", "--out", exact.string()});
    b.insert(b.end(), {"--oracle", "numeric", "--out", numeric.string()});
    ASSERT_EQ(run_binary(a), 0);
    ASSERT_EQ(run_binary(b), 0);
    std::string h1, h2;
    const auto ra = csv_rows(slurp(exact), h1), rb = csv_rows(slurp(numeric), h2);
    ASSERT_EQ(ra.size(), rb.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < ra.size(); ++k)
        for (std::size_t c = 1; c < ra[k].size(); ++c) worst = std::max(worst, std::abs(ra[k][c] - rb[k][c]));
    EXPECT_LE(worst, 1e-8);
}

TEST(Propagate, MalformedKindExitsTwoWithoutFile) {
    TempDir dir;
    const auto model = dir.file("bad.model", "kind=harmonic_oscillator\n");
    const fs::path out = dir.path() / "u.csv";
    EXPECT_EQ(run_binary({"propagate", "--model", model.string(), "--out", out.string()}), 2);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Propagate, IdenticalConfigIsByteIdentical) {
    TempDir dir;
    const auto model = dir.file("tls.model", "kind=driven_tls\n");
    const fs::path a = dir.path() / "a.csv", b = dir.path() / "b.csv";
    for (const auto& out : {a, b}) {
        ASSERT_EQ(run_binary({"propagate", "--model", model.string(), "--t1", "5", "--steps", "500", "--out", out.string()}), 0);
    }
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST(ExitCodes, ConfigNumericAndIo) {
    TempDir dir;
    const auto model = dir.file("spin.model", "kind=schwinger\n");
    std::string out, err;
    EXPECT_EQ(run_inline({"propagate", "--model", model.string(), "--steps", "8"}, out, err), 2);
    EXPECT_NE(err.find("steps"), std::string::npos);
    EXPECT_EQ(run_inline({"propagate", "--model", model.string(), "--series", "taylor"}, out, err), 2);
    EXPECT_EQ(run_inline({"propagate"}, out, err), 2);
    EXPECT_EQ(run_inline({"propagate", "--model", (dir.path() / "missing.model").string()}, out, err), 4);
    EXPECT_EQ(run_inline({"propagate", "--model", model.string(), "--out", (dir.path() / "no/such/dir/u.csv").string()},
                         out, err),
              4);
    std::string zeros = "t,h00_re,h00_im,h01_re,h01_im,h10_re,h10_im,h11_re,h11_im\n";
    for (int k = 0; k <= 40; ++k) zeros += std::to_string(k) + ",0,0,0,0,0,0,0,0\n";
    dir.file("zero.csv", zeros);
    const auto flat = dir.file("flat.model", "kind=sampled\nsamples=zero.csv\n");
    EXPECT_EQ(run_inline({"expand", "--model", flat.string(), "--t1", "40", "--steps", "40", "--out", (dir.path() / "x").string()}, out, err), 3);
    EXPECT_NE(err.find("numeric"), std::string::npos);
}

TEST(Expand, WritesOrdersAndSummary) {
    TempDir dir;
    const auto model = dir.file("spin.model", "kind=schwinger\n");
    const fs::path out = dir.path() / "series";
    std::string o, e;
    ASSERT_EQ(run_inline({"expand", "--model", model.string(), "--order", "2", "--steps", "400", "--out", out.string()}, o, e), 0)
        << e;
    for (int j = 0; j <= 2; ++j) EXPECT_TRUE(fs::exists(out / ("order_" + std::to_string(j) + ".csv")));
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    EXPECT_EQ(summary["kind"], "dual");
    EXPECT_EQ(summary["lambda"], 1.0);
    EXPECT_EQ(summary["orders"], 2);
    ASSERT_EQ(summary["sup_norm_per_order"].size(), 3u);
    EXPECT_NEAR(summary["sup_norm_per_order"][0].get<double>(), 1.0, 1e-9);
}

TEST(Expand, DrivenTlsDualSeriesNeedsUnitLambda) {
    TempDir dir;
    const auto model = dir.file("tls.model", "kind=driven_tls\n");
    std::string o, e;
    EXPECT_EQ(run_inline({"expand", "--model", model.string(), "--lambda", "0.5", "--out", (dir.path() / "s").string()}, o, e), 2);
}

TEST(Diagnose, FieldsInFixedOrder) {
    TempDir dir;
    const auto model = dir.file("jc.model", "kind=jaynes_cummings\ng=0.1\ndelta=1\n");
    std::string out, err;
    ASSERT_EQ(run_inline({"diagnose", "--model", model.string(), "--t1", "60", "--steps", "6000", "--order", "2"}, out, err), 0)
        << err;
    const auto j = nlohmann::ordered_json::parse(out);
    const std::vector<std::string> leading = {"condition_lhs", "secular_slope", "slope_stderr",
                                              "verdict",       "recovered_parameter", "error_curve"};
    auto it = j.begin();
    for (const auto& key : leading) {
        ASSERT_NE(it, j.end());
        EXPECT_EQ(it.key(), key);
        ++it;
    }
    EXPECT_TRUE(j["condition_lhs"].is_array());
    EXPECT_EQ(j["condition_lhs"][0].size(), 2u);
    EXPECT_TRUE(j["verdict"].is_string());
    std::string again, err2;
    ASSERT_EQ(run_inline({"diagnose", "--model", model.string(), "--t1", "60", "--steps", "6000", "--order", "2"}, again, err2), 0);
    EXPECT_EQ(out, again);
}

TEST(Resum, JcShiftFlattensFirstOrderDrift) {
    TempDir dir;
    const auto model = dir.file("jc.model", "kind=jaynes_cummings\ng=0.1\ndelta=1\n");
    std::string out, err;
    ASSERT_EQ(run_inline({"resum", "--model", model.string(), "--t1", "50", "--steps", "20000", "--order", "1"}, out, err), 0)
        << err;
    const auto j = nlohmann::json::parse(out);
    ASSERT_TRUE(j.contains("before") && j.contains("after") && j.contains("slopes"));
    EXPECT_GT(j["slopes"]["before"].get<double>(), 10.0 * std::abs(j["slopes"]["after"].get<double>()));
    EXPECT_LE(j["before"].size(), 1002u);
}

TEST(Resum, RejectsModelsWithoutResummation) {
    TempDir dir;
    const auto model = dir.file("spin.model", "kind=schwinger\n");
    std::string out, err;
    EXPECT_EQ(run_inline({"resum", "--model", model.string()}, out, err), 2);
}

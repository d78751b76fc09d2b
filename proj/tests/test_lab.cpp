#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "floqgap/lab.hpp"

using namespace floqgap;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<RunRecord> records_of(const std::string& csv) {
    std::istringstream in(csv);
    return read_records(in);
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("floqgap_test_" + name)).string();
}

}  // namespace

TEST(Grid, GammaForms) {
    EXPECT_EQ(parse_gamma_grid("0.1,0.5, 1"), (std::vector<double>{0.1, 0.5, 1.0}));
    const auto r = parse_gamma_grid("0:1:0.25");
    ASSERT_EQ(r.size(), 5u);
    EXPECT_DOUBLE_EQ(r.back(), 1.0);
    EXPECT_EQ(parse_gamma_grid("0.1:0.3:0.1").size(), 3u);
    EXPECT_THROW(parse_gamma_grid(""), ConfigError);
    EXPECT_THROW(parse_gamma_grid("1:0:0.1"), ConfigError);
    EXPECT_THROW(parse_gamma_grid("0:1:0"), ConfigError);
    EXPECT_THROW(parse_gamma_grid("0.1,,2"), ConfigError);
    EXPECT_THROW(parse_gamma_grid("abc"), ConfigError);
    EXPECT_EQ(parse_int_list("4,6"), (std::vector<int>{4, 6}));
    EXPECT_EQ(parse_int_list("1-3"), (std::vector<int>{1, 2, 3}));
}

TEST(Records, RoundTrip) {
    RunRecord r;
    r.command = "gap";
    r.n = 6;
    r.gamma = 0.1;
    r.pattern = "xoxoxo";
    r.seed = 18446744073709551615ull;
    r.delta = 1.0 / 3.0;
    r.label = "a,b \"quoted\"";
    r.config_hash = hash_hex("x");
    const RunRecord back = parse_record(format_record(r));
    EXPECT_EQ(back.n, r.n);
    EXPECT_EQ(back.gamma, r.gamma);
    EXPECT_EQ(back.seed, r.seed);
    EXPECT_EQ(back.delta, r.delta);
    EXPECT_EQ(back.label, r.label);
    EXPECT_FALSE(back.k.has_value());
    EXPECT_EQ(split_csv_line(record_header()).size(), record_columns().size());
    EXPECT_EQ(hash_hex("x").size(), 16u);
}

TEST(Cli, UndopedGapRecords) {
    const CliRun r = run({"gap", "--n", "4,6", "--gamma", "0.1,1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
    int deltas = 0;
    for (const auto& rec : records_of(r.out)) {
        if (rec.quantity != "delta") continue;
        ++deltas;
        EXPECT_NEAR(*rec.delta, *rec.n * *rec.gamma / 2, 1e-6);
        EXPECT_EQ(rec.status, "ok");
        EXPECT_EQ(rec.config_hash.size(), 16u);
    }
    EXPECT_EQ(deltas, 4);
}

TEST(Cli, ConfigFileMergedUnderFlags) {
    const std::string cfg = temp_path("merge.cfg");
    {
        std::ofstream f(cfg);
        f << "# sweep\nn = 4\ngamma=1\npattern=full\nrealizations=2\nseed=5\n";
    }
    const CliRun r = run({"gap", "--config", cfg, "--gamma", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto recs = records_of(r.out);
    ASSERT_FALSE(recs.empty());
    for (const auto& rec : recs) {
        EXPECT_EQ(*rec.gamma, 3.0);
        EXPECT_EQ(rec.pattern, "xxxx");
    }
    const CliRun again = run({"gap", "--n", "4", "--gamma", "3", "--pattern", "full", "--realizations", "2", "--seed", "5"});
    EXPECT_EQ(records_of(again.out).front().config_hash, recs.front().config_hash);
    EXPECT_EQ(again.out, r.out);
    std::remove(cfg.c_str());
}

TEST(Cli, HashTracksConfig) {
    const auto a = records_of(run({"gap", "--n", "4", "--gamma", "1", "--pattern", "full", "--seed", "1"}).out);
    const auto b = records_of(run({"gap", "--n", "4", "--gamma", "1", "--pattern", "full", "--seed", "2"}).out);
    EXPECT_NE(a.front().config_hash, b.front().config_hash);
}

TEST(Cli, ConfigErrors) {
    EXPECT_EQ(run({"gap", "--n", "4", "--gamma", ""}).code, kExitConfig);
    EXPECT_EQ(run({"gap", "--n", "4"}).code, kExitConfig);
    EXPECT_EQ(run({"gap", "--n", "5", "--gamma", "1"}).code, kExitConfig);
    EXPECT_EQ(run({"gap", "--n", "8", "--gamma", "1", "--method", "dense"}).code, kExitConfig);
    EXPECT_EQ(run({"gap", "--n", "4", "--gamma", "1", "--method", "lanczos"}).code, kExitConfig);
    EXPECT_EQ(run({"weight-dist", "--n", "4", "--gamma", "-1"}).code, kExitConfig);
    EXPECT_EQ(run({"cycles", "--k", "2", "--n", "8"}).code, kExitConfig);
    EXPECT_EQ(run({"gap", "--bogus", "1"}).code, kExitConfig);
    EXPECT_EQ(run({}).code, kExitConfig);
    const std::string cfg = temp_path("bad.cfg");
    {
        std::ofstream f(cfg);
        f << "colour=blue\n";
    }
    EXPECT_EQ(run({"gap", "--config", cfg, "--n", "4", "--gamma", "1"}).code, kExitConfig);
    std::remove(cfg.c_str());
}

TEST(Cli, PartialFailureExitCode) {
    const CliRun r = run({"gap", "--n", "6", "--gamma", "0.05,4", "--pattern", "full", "--method", "power", "--max-periods", "3"});
    EXPECT_EQ(r.code, kExitPartial);
    bool unconverged = false;
    for (const auto& rec : records_of(r.out)) unconverged |= rec.status == "unconverged";
    EXPECT_TRUE(unconverged);
}

TEST(Cli, AppendKeepsOneHeader) {
    const std::string out = temp_path("append.csv");
    std::remove(out.c_str());
    ASSERT_EQ(run({"gap", "--n", "4", "--gamma", "1", "--out", out}).code, 0);
    ASSERT_EQ(run({"gap", "--n", "4", "--gamma", "2", "--out", out}).code, 0);
    std::ifstream in(out);
    const auto recs = read_records(in);
    EXPECT_EQ(recs.size(), 8u);
    std::remove(out.c_str());
}

TEST(Cli, Orbits) {
    const CliRun r = run({"orbits", "--n", "4", "--gates", "identity,fixed"});
    ASSERT_EQ(r.code, 0) << r.err;
    int identity_rows = 0;
    for (const auto& rec : records_of(r.out)) {
        if (rec.label == "identity" && rec.quantity == "orbit_wbar") {
            ++identity_rows;
            EXPECT_EQ(rec.detail.substr(0, 4), "L=1;");
        }
        if (rec.label == "fixed" && rec.quantity == "orbit_min_wbar") EXPECT_EQ(*rec.value, 0.5);
    }
    EXPECT_EQ(identity_rows, 255);
    EXPECT_EQ(run({"orbits", "--n", "12"}).code, kExitConfig);
}

TEST(Cli, CyclesAndReport) {
    const std::string rep = temp_path("cycles.txt");
    const CliRun r = run({"cycles", "--k", "1,2", "--report", rep});
    ASSERT_EQ(r.code, 0) << r.err;
    std::map<int, double> wstar;
    for (const auto& rec : records_of(r.out))
        if (rec.quantity == "w_star") wstar[*rec.k] = *rec.value;
    EXPECT_EQ(wstar[1], 2);
    EXPECT_EQ(wstar[2], 5);
    std::ifstream in(rep);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_NE(text.str().find("w_star 5"), std::string::npos);
    std::remove(rep.c_str());
    const CliRun none = run({"cycles", "--k", "2", "--w-max", "3"});
    EXPECT_EQ(none.code, 0);
    EXPECT_EQ(records_of(none.out).front().status, "not_found");
}

TEST(Cli, BoundsUndopedHasNoUpper) {
    const CliRun r = run({"bounds", "--n", "4", "--gamma", "2", "--strong"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const auto& rec : records_of(r.out)) {
        EXPECT_EQ(rec.quantity.find("upper"), std::string::npos);
        if (rec.quantity == "undoped_exact") EXPECT_EQ(*rec.value, 4.0);
    }
}

TEST(Cli, HaarStats) {
    const CliRun r = run({"haar-stats", "--samples", "20000", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::map<std::string, double> v;
    for (const auto& rec : records_of(r.out)) v[rec.quantity] = *rec.value;
    EXPECT_NEAR(v["mc_log_entry_mean"], -1.0, 5 * v["mc_log_entry_stderr"]);
    EXPECT_NEAR(v["mc_log_bilinear_mean"], std::log(2.0) - 2.0, 5 * v["mc_log_bilinear_stderr"]);
}

TEST(Cli, WeightDistFlagsModalWeight) {
    const CliRun r = run({"weight-dist", "--n", "4", "--gamma", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    double total = 0;
    for (const auto& rec : records_of(r.out)) {
        if (rec.quantity == "p_w") total += *rec.value;
        if (rec.quantity == "modal_weight") EXPECT_EQ(*rec.value, 2.0);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

#ifdef FLOQGAP_GOLDEN_DIR
// Golden record files were produced by the CLI; the numeric columns must
// agree to 1e-9 and everything else exactly.
TEST(Golden, RecordsReproduce) {
    const std::pair<const char*, std::vector<std::string>> cases[] = {
        {"gap_n4.csv", {"gap", "--n", "4", "--gamma", "0.5,2,6", "--pattern", "full", "--realizations", "3", "--seed", "7"}},
        {"gap_undoped.csv", {"gap", "--n", "4,6", "--gamma", "0.1:0.5:0.2"}},
        {"orbits_n4.csv", {"orbits", "--n", "4", "--gates", "fixed"}},
        {"cycles_k123.csv", {"cycles", "--k", "1,2,3"}},
    };
    for (const auto& [file, args] : cases) {
        std::ifstream in(std::string(FLOQGAP_GOLDEN_DIR) + "/" + file);
        ASSERT_TRUE(in) << file;
        const auto want = read_records(in);
        const CliRun r = run(args);
        ASSERT_EQ(r.code, 0) << r.err;
        const auto got = records_of(r.out);
        ASSERT_EQ(got.size(), want.size()) << file;
        for (size_t i = 0; i < got.size(); ++i) {
            auto near = [](const std::optional<double>& a, const std::optional<double>& b) {
                return a.has_value() == b.has_value() && (!a || std::abs(*a - *b) <= 1e-9 * std::max(1.0, std::abs(*b)));
            };
            EXPECT_TRUE(near(got[i].delta, want[i].delta)) << file << " row " << i;
            EXPECT_TRUE(near(got[i].value, want[i].value)) << file << " row " << i;
            EXPECT_EQ(got[i].quantity, want[i].quantity);
            EXPECT_EQ(got[i].pattern, want[i].pattern);
            EXPECT_EQ(got[i].seed, want[i].seed);
            EXPECT_EQ(got[i].label, want[i].label);
            EXPECT_EQ(got[i].config_hash, want[i].config_hash);
        }
    }
}
#endif

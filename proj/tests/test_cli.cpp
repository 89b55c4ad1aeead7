// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "fockhom");
    std::ostringstream out, err;
    const int code = fockhom::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> data_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) {
        if (!l.empty() && l[0] != '#') lines.push_back(l);
    }
    return lines;
}

std::vector<double> split_row(const std::string& row) {
    std::vector<double> v;
    std::stringstream ss(row);
    for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
    return v;
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("fockhom_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

TEST_F(CliTest, HomSweepDegenerateGrid) {
    auto r = run({"hom-sweep", "--theta-min", "1", "--theta-max", "1", "--theta-steps", "1", "--phi-steps", "1",
                  "--m", "1", "-o", path("a")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = data_lines(dir_ / "a" / "hom_surface.csv");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "theta,phi,m,g2_k0,g2_k1,g2_kfar,vhom,c1,ratio");
    auto v = split_row(rows[1]);
    EXPECT_NEAR(v[4], 0.75, 1e-9);
    EXPECT_NEAR(v[3], 0.0, 1e-9);

    std::ifstream csv(dir_ / "a" / "hom_surface.csv");
    std::string l1, l2, l3;
    std::getline(csv, l1);
    std::getline(csv, l2);
    std::getline(csv, l3);
    EXPECT_EQ(l1.rfind("# fockhom ", 0), 0u);
    EXPECT_EQ(l2.rfind("# config {", 0), 0u);
    EXPECT_EQ(l3.rfind("# circuit_constants_sha1 ", 0), 0u);

    auto summary = json::parse(slurp(dir_ / "a" / "hom_summary.json"));
    EXPECT_TRUE(summary.contains("content_sha1"));
    EXPECT_TRUE(summary.contains("generated_at"));
}

TEST_F(CliTest, HomSweepIsDeterministic) {
    const std::vector<std::string> base{"hom-sweep", "--theta-steps", "3", "--phi-steps", "4", "--m", "1", "0.7",
                                        "-o"};
    auto a = base;
    a.push_back(path("x"));
    auto b = base;
    b.push_back(path("x2"));
    ASSERT_EQ(run(a).code, 0);
    auto first = slurp(dir_ / "x" / "hom_surface.csv");
    auto first_avg = slurp(dir_ / "x" / "hom_phase_avg.csv");
    auto first_sum = json::parse(slurp(dir_ / "x" / "hom_summary.json"));
    ASSERT_EQ(run(a).code, 0);
    EXPECT_EQ(slurp(dir_ / "x" / "hom_surface.csv"), first);
    EXPECT_EQ(slurp(dir_ / "x" / "hom_phase_avg.csv"), first_avg);
    EXPECT_EQ(json::parse(slurp(dir_ / "x" / "hom_summary.json"))["content_sha1"], first_sum["content_sha1"]);
    ASSERT_EQ(run(b).code, 0);
    EXPECT_EQ(data_lines(dir_ / "x2" / "hom_surface.csv"), data_lines(dir_ / "x" / "hom_surface.csv"));
}

TEST_F(CliTest, ConfigPrecedence) {
    {
        std::ofstream f(path("cfg.json"));
        f << R"({"theta_steps": 7, "window": 6})";
    }
    auto r = run({"--print-config", "hom-sweep", "-c", path("cfg.json"), "--window", "8"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto cfg = json::parse(r.out);
    EXPECT_EQ(cfg["theta_steps"], 7);
    EXPECT_EQ(cfg["window"], 8);
    EXPECT_EQ(cfg["phi_steps"], 25);
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
    {
        std::ofstream f(path("bad.json"));
        f << R"({"theta_stepz": 7})";
    }
    EXPECT_EQ(run({"hom-sweep", "-c", path("bad.json")}).code, fockhom::cli::kExitConfig);
    {
        std::ofstream f(path("broken.json"));
        f << "{not json";
    }
    EXPECT_EQ(run({"hom-sweep", "-c", path("broken.json")}).code, fockhom::cli::kExitConfig);
    EXPECT_EQ(run({"hom-sweep", "-c", path("missing.json")}).code, fockhom::cli::kExitConfig);
    EXPECT_EQ(run({"hom-sweep", "--theta-steps", "0", "-o", path("o")}).code, fockhom::cli::kExitConfig);
    EXPECT_EQ(run({"hom-sweep", "--p2", "2", "-o", path("o")}).code, fockhom::cli::kExitConfig);
    EXPECT_EQ(run({"no-such-command"}).code, fockhom::cli::kExitConfig);
    EXPECT_EQ(run({}).code, fockhom::cli::kExitConfig);
}

TEST_F(CliTest, TimetagPipeline) {
    const std::string stream = path("s.bin");
    auto g = run({"timetag-gen", "--theta", "0.3", "-n", "200000", "--seed", "5", "-o", stream});
    ASSERT_EQ(g.code, 0) << g.err;
    auto side = json::parse(slurp(stream + ".json"));
    EXPECT_GT(side["records"].get<int>(), 0);

    auto a1 = run({"timetag-analyze", "-i", stream, "-o", path("r1.json")});
    ASSERT_EQ(a1.code, 0) << a1.err;
    auto a2 = run({"timetag-analyze", "-i", stream, "-o", path("r2.json")});
    ASSERT_EQ(a2.code, 0);
    auto r1 = json::parse(slurp(path("r1.json")));
    auto r2 = json::parse(slurp(path("r2.json")));
    EXPECT_EQ(r1["estimate"], r2["estimate"]);
    EXPECT_TRUE(r1.contains("report_sha1"));
    EXPECT_EQ(r1["inputs"]["parallel"]["sha1"], side["stream_sha1"]);
}

TEST_F(CliTest, AnalyzeRejectsBadInput) {
    {
        std::ofstream f(path("empty.csv"));
    }
    {
        std::ofstream f(path("header.csv"));
        f << "detector_id,timestamp_ps\n";
    }
    auto e = run({"timetag-analyze", "-i", path("empty.csv"), "-o", path("r.json")});
    EXPECT_EQ(e.code, fockhom::cli::kExitConfig);
    EXPECT_FALSE(e.err.empty());
    EXPECT_EQ(run({"timetag-analyze", "-i", path("header.csv"), "-o", path("r.json")}).code,
              fockhom::cli::kExitConfig);
    EXPECT_EQ(run({"timetag-analyze", "-i", path("nothing.bin"), "-o", path("r.json")}).code,
              fockhom::cli::kExitConfig);
    EXPECT_FALSE(fs::exists(path("r.json")));
}

TEST_F(CliTest, CnotBayesColumnMatchesFidelity) {
    auto r = run({"cnot", "--theta-steps", "5", "--optimize", "false", "-o", path("c")});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* name : {"cnot_sweep.csv", "cnot_incoherent.csv"}) {
        auto rows = data_lines(dir_ / "c" / name);
        ASSERT_EQ(rows.size(), 6u) << name;
        EXPECT_EQ(rows[0], "theta,alpha1,alpha2,alpha3,alpha4,p_herald,fidelity,p4,bayes_f");
        for (std::size_t i = 1; i < rows.size(); ++i) {
            auto v = split_row(rows[i]);
            EXPECT_NEAR(v[6], v[8], 1e-9) << rows[i];
        }
    }
    auto s = json::parse(slurp(dir_ / "c" / "cnot_summary.json"));
    EXPECT_LT(s["extrema"]["cnot_sweep.csv"]["bayes_max_abs_deviation"].get<double>(), 1e-9);
}

TEST_F(CliTest, ConcurrenceOutputs) {
    auto r = run({"concurrence", "--phi", "0.4", "--theta", "0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = json::parse(r.out);
    EXPECT_NEAR(j["concurrence_pure"].get<double>(), 2.0 / 3, 1e-12);
    EXPECT_NEAR(j["concurrence_mixed"].get<double>(), j["concurrence_from_s"].get<double>(), 1e-9);
    EXPECT_EQ(run({"concurrence", "--s", "0.5", "--theta", "0.5"}).code, fockhom::cli::kExitConfig);
}

TEST_F(CliTest, VersionAndHelp) {
    auto v = run({"--version"});
    EXPECT_EQ(v.code, 0);
    EXPECT_FALSE(v.out.empty());
    EXPECT_EQ(run({"hom-sweep", "--help"}).code, 0);
}

}  // namespace

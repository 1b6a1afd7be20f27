// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pxmap/brdf.h"
#include "pxmap/datagen.h"
#include "pxmap/pstereo.h"
#include "test_util.h"

namespace pxmap {
namespace {

struct CliRun {
    int status;
    std::string out;
};

// Runs the CLI through the shell, capturing stdout and stderr together.
CliRun Cli(const std::string &args) {
    std::string cmd = std::string(PXMAP_CLI) + " " + args + " 2>&1";
    FILE *pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string Slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

TEST(Cli, GenerateIsDeterministic) {
    testing::TempDir dir("cligen");
    std::string a = dir / "a.pxom", b = dir / "b.pxom";
    ASSERT_EQ(Cli("generate --preset dense --count 1000 --seed 7 --out " + a).status, 0);
    ASSERT_EQ(Cli("generate --preset dense --count 1000 --seed 7 --workers 3 --out " + b).status, 0);
    std::string x = Slurp(a);
    EXPECT_EQ(x.size(), 24u + 1000 * (32 * 32 * 4 + 3) * 4);
    EXPECT_EQ(x, Slurp(b));
    ASSERT_EQ(Cli("generate --count 10 --seed 8 --out " + b).status, 0);
    EXPECT_NE(Slurp(a).substr(24, 4096), Slurp(b).substr(24, 4096));
}

TEST(Cli, UsageErrorsExitTwo) {
    testing::TempDir dir("cliusage");
    std::string out = dir / "x.pxom";
    EXPECT_EQ(Cli("generate --count 0 --out " + out).status, 2);
    EXPECT_EQ(Cli("generate --count 10").status, 2);
    EXPECT_EQ(Cli("generate --count 10 --preset medium --out " + out).status, 2);
    EXPECT_EQ(Cli("generate --count 10 --preset dense --preset sparse --out " + out).status, 2);
    EXPECT_EQ(Cli("generate --count 10 --no-such-flag --out " + out).status, 2);
    EXPECT_EQ(Cli("generate --count 10 --p-ambient 2 --out " + out).status, 2);
    EXPECT_EQ(Cli("").status, 2);
    EXPECT_EQ(Cli("frobnicate").status, 2);
    std::ofstream(dir / "bad.cfg") << "lights_min = 5\nwhat = 1\n";
    CliRun r = Cli("generate --count 10 --config " + (dir / "bad.cfg") + " --out " + out);
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("what"), std::string::npos);
}

TEST(Cli, ConfigFileAndOverrides) {
    testing::TempDir dir("clicfg");
    std::ofstream(dir / "c.cfg") << "lights_min = 10\nlights_max = 10\nd = 16\n";
    ASSERT_EQ(Cli("generate --quiet --count 5 --config " + (dir / "c.cfg") + " --d 8 --out " +
                  (dir / "a.pxom"))
                  .status,
              0);
    std::ifstream in(dir / "a.pxom", std::ios::binary);
    auto records = ReadDataset(in);
    ASSERT_EQ(records.size(), 5u);
    EXPECT_EQ(records[0].map.d(), 8);  // the flag wins over the file
}

TEST(Cli, HelpShowsDefaults) {
    CliRun r = Cli("generate --help");
    EXPECT_EQ(r.status, 0);
    for (const char *s : {"--p-ambient", "[default: 0.75]", "--p-discontinuity", "[default: 0.15]",
                          "--merl-fraction", "[default: 0.25]", "[default: 0.28]", "[default: 3.2]",
                          "--workers"})
        EXPECT_NE(r.out.find(s), std::string::npos) << s;
    for (const char *cmd : {"render-sphere", "solve-baseline", "extract-maps", "evaluate",
                            "merl-info", "predict"})
        EXPECT_EQ(Cli(std::string(cmd) + " --help").status, 0) << cmd;
}

TEST(Cli, SphereSolveEvaluate) {
    testing::TempDir dir("clisphere");
    std::string stack = dir / "stack";
    ASSERT_EQ(Cli("render-sphere --out " + stack + " --resolution 48 --lights 20 --seed 2").status, 0);
    std::string truth = stack + "/normals.pxnm";

    CliRun solve = Cli("solve-baseline --stack " + stack + " --out " + (dir / "b.pxnm") +
                    " --truth " + truth);
    ASSERT_EQ(solve.status, 0) << solve.out;
    EXPECT_NE(solve.out.find("MAE 0.0"), std::string::npos) << solve.out;

    CliRun same = Cli("evaluate " + truth + " " + truth + " --csv " + (dir / "m.csv") +
                   " --error-png " + (dir / "e.png") + " --error-csv " + (dir / "e.csv"));
    ASSERT_EQ(same.status, 0);
    EXPECT_NE(same.out.find("MAE 0.000"), std::string::npos) << same.out;
    EXPECT_NE(Slurp(dir / "m.csv").find("mae_deg,0"), std::string::npos);
    EXPECT_EQ(Slurp(dir / "e.png").substr(1, 3), "PNG");
    EXPECT_EQ(Slurp(dir / "e.csv").substr(0, 18), "row,col,error_deg\n");

    CliRun subsets = Cli("solve-baseline --stack " + stack + " --out " + (dir / "s") +
                      " --subsets 3 --subset-size 10 --truth " + truth);
    EXPECT_EQ(subsets.status, 0);
    EXPECT_NE(subsets.out.find("+-"), std::string::npos);
    EXPECT_FALSE(Slurp(dir / "s_02.pxnm").empty());

    // Data errors exit 1.
    EXPECT_EQ(Cli("evaluate " + truth + " " + (dir / "missing.pxnm")).status, 1);
    EXPECT_EQ(Cli("solve-baseline --stack " + (dir / "nowhere") + " --out x").status, 1);
}

TEST(Cli, RenderIsIdempotent) {
    testing::TempDir dir("cliidem");
    for (const char *name : {"a", "b"})
        ASSERT_EQ(Cli("render-sphere --effects --material disney --out " + (dir / name) +
                      " --resolution 16 --lights 5 --seed 9")
                      .status,
                  0);
    EXPECT_EQ(Slurp(dir / "a/003.png"), Slurp(dir / "b/003.png"));
    EXPECT_EQ(Slurp(dir / "a/normals.pxnm"), Slurp(dir / "b/normals.pxnm"));
}

TEST(Cli, ExtractMaps) {
    testing::TempDir dir("cliextract");
    std::string stack = dir / "stack";
    ASSERT_EQ(Cli("render-sphere --out " + stack + " --resolution 16 --lights 12").status, 0);
    std::ofstream(dir / "px.txt") << "8 8\n3 7\n";
    ASSERT_EQ(Cli("extract-maps --stack " + stack + " --pixels " + (dir / "px.txt") + " --normals " +
                  stack + "/normals.pxnm --out " + (dir / "m.pxom"))
                  .status,
              0);
    std::ifstream in(dir / "m.pxom", std::ios::binary);
    auto records = ReadDataset(in);
    ASSERT_EQ(records.size(), 2u);
    EXPECT_NEAR(records[0].normal.z, SphereNormal(8, 8, 16)->z, 1e-6);

    ASSERT_EQ(Cli("extract-maps --stack " + stack + " --out " + (dir / "all.pxom")).status, 0);
    std::ifstream all(dir / "all.pxom", std::ios::binary);
    int disk = 0;
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) disk += SphereNormal(r, c, 16).has_value();
    EXPECT_EQ(ReadDataset(all).size(), size_t(disk));

    std::ofstream(dir / "off.txt") << "0 0\n";
    EXPECT_EQ(Cli("extract-maps --stack " + stack + " --pixels " + (dir / "off.txt") + " --out " +
                  (dir / "o.pxom"))
                  .status,
              1);
}

TEST(Cli, MerlInfo) {
    testing::TempDir dir("climerl");
    {
        std::ofstream out(dir / "fake-gold.binary", std::ios::binary);
        WriteMerl(out, *testing::SyntheticMerl("fake-gold", 1, 1000));
    }
    CliRun r = Cli("merl-info " + dir.path().string());
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("fake-gold,"), std::string::npos) << r.out;
    std::ofstream(dir / "broken.binary") << "xx";
    EXPECT_EQ(Cli("merl-info " + (dir / "broken.binary")).status, 1);
}

TEST(Cli, RenderWithMerlTable) {
    testing::TempDir dir("climerlrender");
    {
        std::ofstream out(dir / "m.binary", std::ios::binary);
        WriteMerl(out, *testing::SyntheticMerl("m"));
    }
    EXPECT_EQ(Cli("render-sphere --material merl:0 --merl-dir " + dir.path().string() + " --out " +
                  (dir / "s") + " --resolution 16 --lights 4")
                  .status,
              0);
    EXPECT_EQ(Cli("render-sphere --material merl:3 --merl-dir " + dir.path().string() + " --out " +
                  (dir / "s") + " --resolution 16 --lights 4")
                  .status,
              1);
    // The MERL directory can come from the environment.
    setenv("PXMAP_MERL_DIR", dir.path().c_str(), 1);
    CliRun with_env = Cli("generate --count 400 --out " + (dir / "g.pxom"));
    unsetenv("PXMAP_MERL_DIR");
    EXPECT_EQ(with_env.status, 0);
    EXPECT_EQ(with_env.out.find("no MERL tables"), std::string::npos) << with_env.out;
    EXPECT_EQ(with_env.out.find("merl 0.0000"), std::string::npos) << with_env.out;
}

TEST(Cli, PredictThroughSubprocess) {
    testing::TempDir dir("clipredict");
    std::string stack = dir / "stack";
    ASSERT_EQ(Cli("render-sphere --out " + stack + " --resolution 16 --lights 30").status, 0);
    CliRun r = Cli("predict --stack " + stack + " --k 4 --predictor '" + PXMAP_FAKE_PREDICTOR +
                " up' --out " + (dir / "p.pxnm"));
    ASSERT_EQ(r.status, 0) << r.out;
    NormalMap p = ReadNormalMapFile(dir / "p.pxnm");
    EXPECT_GT(p.ValidCount(), 100);
    EXPECT_EQ(Cli("predict --stack " + stack + " --predictor '" + PXMAP_FAKE_PREDICTOR +
                  " fail' --out " + (dir / "q.pxnm"))
                  .status,
              1);
}

}  // namespace
}  // namespace pxmap

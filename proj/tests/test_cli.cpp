// Copyright 2026 The Composer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the built driver as a subprocess.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include "composer/pipeline.hpp"
#include "composer/serialize.hpp"

using namespace composer;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("composer_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string &f) const { return (dir_ / f).string(); }

  int run(const std::string &args) const {
    const std::string cmd = std::string(COMPOSER_CLI) + " " + args + " 2>" + path("stderr.txt");
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  }

  std::string stderr_text() const { return read_text_file(path("stderr.txt")); }

  // factorize -> compile -> dial on a seeded synthetic instance
  void pipeline(const std::string &tag = "") {
    ASSERT_EQ(run("factorize --synth 2,2 --seed 11 --out " + path("pool" + tag + ".json") +
                  " --t2-out " + path("t2" + tag + ".json")),
              0);
    ASSERT_EQ(run("compile --pool " + path("pool" + tag + ".json") + " --headroom 1.5 --out " +
                  path("skel" + tag + ".json")),
              0);
    ASSERT_EQ(run("dial --skel " + path("skel" + tag + ".json") + " --pool " +
                  path("pool" + tag + ".json") + " --out " + path("dial" + tag + ".json")),
              0);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, CompileDialVerifyExitsZero) {
  pipeline();
  EXPECT_EQ(run("verify --skel " + path("skel.json") + " --dial " + path("dial.json") +
                " --out " + path("report.json")),
            0);
  EXPECT_NE(read_text_file(path("report.json")).find("\"pass\": true"), std::string::npos);
}

TEST_F(Cli, OutputsAreByteIdentical) {
  pipeline("a");
  pipeline("b");
  for (const char *f : {"pool", "t2", "skel", "dial"})
    EXPECT_EQ(read_text_file(path(std::string(f) + "a.json")),
              read_text_file(path(std::string(f) + "b.json")))
        << f;
  ASSERT_EQ(run("estimate --skel " + path("skela.json") + " --out " + path("e1.json")), 0);
  ASSERT_EQ(run("estimate --skel " + path("skelb.json") + " --out " + path("e2.json")), 0);
  EXPECT_EQ(read_text_file(path("e1.json")), read_text_file(path("e2.json")));
}

TEST_F(Cli, FactorizeMatchesLibraryOnFcidump) {
  const auto ints = synth_instance(21, 2, 2);
  write_text_file(path("h.fcidump"), write_fcidump(ints));
  ASSERT_EQ(run("factorize --ints " + path("h.fcidump") + " --out " + path("pool.json")), 0);
  const auto golden = factorize_instance(parse_fcidump_text(write_fcidump(ints)));
  EXPECT_EQ(read_text_file(path("pool.json")), pool_to_json(golden.pools) + "\n");
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("factorize --ints " + path("missing.fcidump") + " --out " + path("p.json")), 2);
  EXPECT_NE(stderr_text().find("missing.fcidump"), std::string::npos);
  EXPECT_EQ(run("factorize --synth 2,2 --tau-chol 0 --out " + path("p.json")), 2);
  EXPECT_EQ(run("factorize --synth 2,2 --tau-chol -1e-3 --out " + path("p.json")), 2);
  EXPECT_EQ(run("nonsense"), 2);
  EXPECT_EQ(run("compile --pool " + path("missing.json")), 2);
}

TEST_F(Cli, TamperedDialIsTopologyViolation) {
  pipeline();
  std::string d = read_text_file(path("dial.json"));
  const std::string key = "\"skeleton_fingerprint\": \"";
  const auto pos = d.find(key);
  ASSERT_NE(pos, std::string::npos);
  char &c = d[pos + key.size()];
  c = c == '0' ? '1' : '0';
  write_text_file(path("bad.json"), d);
  EXPECT_EQ(run("verify --skel " + path("skel.json") + " --dial " + path("bad.json")), 3);
  EXPECT_NE(stderr_text().find("topology violation"), std::string::npos);
  EXPECT_EQ(run("estimate --skel " + path("skel.json") + " --dial " + path("bad.json")), 3);
}

TEST_F(Cli, ZeroBudgetFailsVerification) {
  pipeline();
  EXPECT_EQ(run("verify --skel " + path("skel.json") + " --dial " + path("dial.json") +
                " --eps-poly 0 --out " + path("r.json")),
            1);
}

TEST_F(Cli, MaskedDialAndDiagnose) {
  pipeline();
  ASSERT_EQ(run("dial --skel " + path("skel.json") + " --pool " + path("pool.json") +
                " --mask none --out " + path("dial0.json")),
            0);
  EXPECT_EQ(run("verify --skel " + path("skel.json") + " --dial " + path("dial0.json")), 0);
  ASSERT_EQ(run("diagnose --t2 " + path("t2.json") + " --t2-ref " + path("t2.json") +
                " --pool " + path("pool.json") + " --eta 0.9 --csv " + path("c.csv") +
                " --out " + path("diag.json")),
            0);
  EXPECT_NE(read_text_file(path("diag.json")).find("\"wauc\": 1.0"), std::string::npos);
  EXPECT_EQ(read_text_file(path("c.csv")).rfind("r,ov,w\n", 0), 0u);
  EXPECT_EQ(run("dial --skel " + path("skel.json") + " --pool " + path("pool.json") +
                " --mask 99 --out " + path("x.json")),
            2);
}

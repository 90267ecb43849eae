#include "stereocorr/image_io.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>

using testing_support::read_file;
using testing_support::TempDir;
using testing_support::write_file;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args, const TempDir& dir) {
  const auto out = dir / "stdout.txt";
  const std::string cmd = std::string(STEREOCORR_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(out)};
}

void write_pair(const TempDir& dir) {
  const auto t = oracle::random_image(40, 40, 1);
  stereocorr::save_gray(dir / "t.pgm", t);
  stereocorr::save_gray(dir / "r.pgm", oracle::translate(t, 2, 0));
}

}  // namespace

TEST(Cli, PowerTable) {
  TempDir dir;
  const Outcome o = run("power 64", dir);
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("179.2000"), std::string::npos);
  EXPECT_NE(o.out.find("215.1626"), std::string::npos);
  EXPECT_EQ(run("power 0", dir).code, 0);
  EXPECT_EQ(run("power 63", dir).code, 1);
}

TEST(Cli, UsageErrors) {
  TempDir dir;
  EXPECT_EQ(run("", dir).code, 1);
  EXPECT_EQ(run("frobnicate", dir).code, 1);
  EXPECT_EQ(run("match --no-such-flag 3", dir).code, 1);
  EXPECT_EQ(run("--help", dir).code, 0);
}

TEST(Cli, ValidateConfig) {
  TempDir dir;
  write_pair(dir);
  write_file(dir / "good.ini", "[images]\ntemplate = t.pgm\nreference = r.pgm\n[sweep]\nblock = 5, 7\noverlap = 0..block-1\n");
  const Outcome ok = run("validate-config " + (dir / "good.ini").string(), dir);
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("12 runs"), std::string::npos);

  write_file(dir / "typo.ini", "[images]\ntemplate = t.pgm\nreference = r.pgm\n[match]\nblok = 5\n");
  const Outcome bad = run("validate-config " + (dir / "typo.ini").string(), dir);
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("match.blok"), std::string::npos);

  write_file(dir / "nofile.ini", "[images]\ntemplate = t.pgm\nreference = missing.pgm\n");
  EXPECT_EQ(run("validate-config " + (dir / "nofile.ini").string(), dir).code, 1);
  EXPECT_EQ(run("validate-config " + (dir / "good.ini").string() + " --overlap 15", dir).code, 1);
}

TEST(Cli, ShippedExampleConfigValidates) {
  TempDir dir;
  const auto ini = std::filesystem::path(STEREOCORR_TEST_DATA) / ".." / ".." / "configs" / "motorcycle.ini";
  const Outcome o = run("validate-config " + ini.string(), dir);
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("5 runs"), std::string::npos);
}

TEST(Cli, MatchWritesArtifactsAndFlagsOverride) {
  TempDir dir;
  write_pair(dir);
  write_file(dir / "exp.ini", "[images]\ntemplate = t.pgm\nreference = r.pgm\n[match]\nblock = 8\n");
  const std::string out_dir = (dir / "out").string();
  const Outcome o = run("match -c " + (dir / "exp.ini").string() + " --overlap 0 --max-vertical 0 --max-disparity 3 " +
                            "--set match.variant=full_ncc -o " + out_dir,
                        dir);
  ASSERT_EQ(o.code, 0) << o.out;
  const std::string kv = read_file(dir / "out" / "report.kv");
  EXPECT_NE(kv.find("variant=full_ncc"), std::string::npos);
  EXPECT_NE(kv.find("overlap=0\n"), std::string::npos);
  EXPECT_NE(kv.find("window.v_max=0\n"), std::string::npos);
  const std::string csv = read_file(dir / "out" / "disparity.csv");
  EXPECT_NE(csv.find(",2,0,1,1\n"), std::string::npos);
}

TEST(Cli, DataErrorsExitTwo) {
  TempDir dir;
  write_pair(dir);
  write_file(dir / "broken.pgm", "P5\n40 40\n255\nshort");
  EXPECT_EQ(run("match --template " + (dir / "broken.pgm").string() + " --reference " + (dir / "r.pgm").string() +
                    " -o " + (dir / "o").string(),
                dir)
                .code,
            2);
  EXPECT_EQ(run("match --template " + (dir / "t.pgm").string() + " --reference " + (dir / "r.pgm").string() +
                    " --block 41 --overlap 0 -o " + (dir / "o").string(),
                dir)
                .code,
            2);
  EXPECT_EQ(run("sweep --template " + (dir / "t.pgm").string() + " --reference " + (dir / "r.pgm").string() +
                    " --sweep-block 50,60 --overlap 0 -o " + (dir / "s").string(),
                dir)
                .code,
            2);
}

TEST(Cli, SweepWritesAggregate) {
  TempDir dir;
  write_pair(dir);
  const Outcome o = run("sweep --template " + (dir / "t.pgm").string() + " --reference " + (dir / "r.pgm").string() +
                            " --sweep-block 5,7 --sweep-overlap 0,2 --max-disparity 3 --max-vertical 0 -o " +
                            (dir / "s").string(),
                        dir);
  ASSERT_EQ(o.code, 0) << o.out;
  const std::string csv = read_file(dir / "s" / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "pdkernel/kernel_io.hpp"
#include "support.hpp"

using namespace pdkernel;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome cli(const std::string& args, const std::filesystem::path& dir) {
  const auto out = dir / "stdout.txt";
  const std::string cmd = std::string(PDKERNEL_CLI) + " " + args + " > " + out.string() +
                          " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  std::ifstream is(out);
  std::stringstream ss;
  ss << is.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::filesystem::path write_config(const std::filesystem::path& dir, const std::string& text) {
  const auto p = dir / "config.ini";
  std::ofstream(p) << text;
  return p;
}

const std::string kReference = PDKERNEL_SOURCE_DIR "/configs/reference_bar.ini";

}  // namespace

TEST(Cli, DerivePrintsPublishedTableAndWritesKernel) {
  const auto dir = gen::scratch_dir();
  const auto r = cli("derive --config " + kReference + " --order 2 --out " +
                         (dir / "k.txt").string(),
                     dir);
  ASSERT_EQ(r.code, 0);
  for (const char* v : {"161.34", "-11.4752", "0.8162", "-0.0580"}) {
    EXPECT_NE(r.out.find(v), std::string::npos) << v;
  }
  EXPECT_EQ(load_kernel(dir / "k.txt").max_offset(), 6);
}

TEST(Cli, SimulateWithZeroPulseWritesZeros) {
  const auto dir = gen::scratch_dir();
  const auto cfg = write_config(dir, "[pulse]\nu0 = 0\n[solver]\nt_end = 2e-5\nprobes = 0.5, 0.9\n");
  const auto csv = dir / "fem.csv";
  ASSERT_EQ(cli("simulate --config " + cfg.string() + " --method fem --out " + csv.string(), dir)
                .code,
            0);
  std::istringstream is(read_file(csv));
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,u@0.5,u@0.90000000000000002");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.find(',')), ",0,0");
  }
  EXPECT_GT(rows, 10);
}

TEST(Cli, SimulateDerivedWithSuppliedKernel) {
  const auto dir = gen::scratch_dir();
  const auto cfg = write_config(dir, "[solver]\nt_end = 1e-4\n");
  ASSERT_EQ(cli("derive --config " + cfg.string() + " --out " + (dir / "k.txt").string(), dir)
                .code,
            0);
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  ASSERT_EQ(cli("simulate --config " + cfg.string() + " --method derived --kernel " +
                    (dir / "k.txt").string() + " --out " + a.string(),
                dir)
                .code,
            0);
  ASSERT_EQ(cli("simulate --config " + cfg.string() + " --method derived --out " + b.string(),
                dir)
                .code,
            0);
  EXPECT_EQ(read_file(a), read_file(b));
  EXPECT_EQ(cli("simulate --config " + cfg.string() + " --method fem --kernel " +
                    (dir / "k.txt").string() + " --out " + a.string(),
                dir)
                .code,
            1);
}

TEST(Cli, CompareWritesSeriesReportAndPlot) {
  const auto dir = gen::scratch_dir();
  const auto cfg = write_config(dir, "[geometry]\nbar_length = 0.4\n[solver]\nt_end = 3e-4\nprobes = 0.2\n");
  const auto r = cli("compare --config " + cfg.string() + " --out " + (dir / "c.csv").string() +
                         " --report " + (dir / "r.txt").string() + " --plot " +
                         (dir / "c.gp").string(),
                     dir);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(read_file(dir / "c.csv").rfind("t,fem,standard_pd,derived_o2,derived_o4\n", 0), 0u);
  EXPECT_NE(read_file(dir / "r.txt").find("standard_pd.relative_l2"), std::string::npos);
  EXPECT_NE(read_file(dir / "c.gp").find("using 1:5"), std::string::npos);
}

TEST(Cli, DispersionAndSweep) {
  const auto dir = gen::scratch_dir();
  ASSERT_EQ(cli("dispersion --config " + kReference + " --out " + (dir / "d.csv").string(), dir)
                .code,
            0);
  EXPECT_EQ(read_file(dir / "d.csv").rfind("xi,xi_l,", 0), 0u);
  const auto r = cli("sweep-alpha --config " + kReference +
                         " --target 161.3418,-11.4752,0.8162,-0.058",
                     dir);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("alpha = 0.250"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("residual = "), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto dir = gen::scratch_dir();
  const auto out = (dir / "x").string();
  EXPECT_EQ(cli("", dir).code, 1);
  EXPECT_EQ(cli("derive --config " + kReference, dir).code, 1);  // missing --out
  EXPECT_EQ(cli("derive --config /nonexistent.ini --out " + out, dir).code, 1);
  const auto bad = write_config(dir, "[geometry]\nwidth = 2\n");
  EXPECT_EQ(cli("derive --config " + bad.string() + " --out " + out, dir).code, 1);
  EXPECT_EQ(cli("derive --config " + kReference + " --order 3 --out " + out, dir).code, 1);
  EXPECT_EQ(cli("simulate --config " + kReference + " --method magic --out " + out, dir).code, 1);
  EXPECT_EQ(cli("sweep-alpha --config " + kReference + " --target 1,x", dir).code, 1);
  // A kernel with the wrong sign grows without bound and overflows.
  const auto unstable = dir / "unstable.txt";
  std::ofstream(unstable) << "cell_length 0.02\norder 2\nprefactor 1e20\ntruncation_tol 0\n"
                             "-1, -1\n0, 2\n1, -1\n";
  EXPECT_EQ(cli("simulate --config " + kReference + " --method derived --kernel " +
                    unstable.string() + " --out " + out,
                dir)
                .code,
            2);
  EXPECT_EQ(cli("--help", dir).code, 0);
}

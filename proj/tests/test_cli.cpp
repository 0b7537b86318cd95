#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "orbitlab/circle/measure_io.hpp"

using namespace orbitlab;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(ORBITLAB_BIN) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp_without_timestamp(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line))
    if (line.rfind("generated_at", 0) != 0) os << line << "\n";
  return os.str();
}

}  // namespace

TEST_CASE("criteria subcommand verdicts and exit codes") {
  // negative verdicts exit 1, consistent runs exit 0
  CHECK(run("criteria --family unweighted --stat super --kmax 3 --horizon 1000") == 1);
  CHECK(run("criteria --family chan-sanders --stat hyper --kmax 3 --horizon 2000") == 1);
  CHECK(run("criteria --family prop19 --p 3 --stat super --kmax 2 --horizon 500") == 1);
  CHECK(run("criteria --family chan-sanders --stat super --kmax 3 --horizon 1000") == 0);
  // usage errors exit 2
  CHECK(run("criteria --family not-a-family") == 2);
  CHECK(run("criteria --bogus-flag") == 2);
  CHECK(run("") == 2);
}

TEST_CASE("certify subcommand") {
  CHECK(run("certify --kind shift-cert --family unweighted --cert lnlog --p 3 "
            "--horizon 20000") == 0);
  CHECK(run("certify --kind shift-cert --family unweighted --cert lnlog --p 2 "
            "--horizon 20000") == 1);
  CHECK(run("certify --kind closedness --norms pow2 --space banach --horizon 200") == 0);
  CHECK(run("certify --kind closedness --norms sqrt --space hilbert --horizon 20000") == 1);
  CHECK(run("certify --kind divergence --exponent 0.2 --q 2 --horizon 20000") == 0);
  CHECK(run("certify --kind nonsense") == 2);
}

TEST_CASE("criteria report and CSV are deterministic modulo the timestamp") {
  std::string base = "criteria --family chan-sanders --stat super --kmax 2 --horizon 200";
  REQUIRE(run(base + " --out cli_r1.txt --csv cli_s1.csv") == 0);
  REQUIRE(run(base + " --out cli_r2.txt --csv cli_s2.csv") == 0);
  CHECK(slurp_without_timestamp("cli_r1.txt") == slurp_without_timestamp("cli_r2.txt"));
  std::ifstream a("cli_s1.csv"), b("cli_s2.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().substr(0, 15) == "k,n,log2_stat\n0");
}

TEST_CASE("measure subcommand writes a reloadable measure and a stage report") {
  REQUIRE(run("measure --stages 3 --h-count 4 --out-prefix cli_m") == 0);
  StoredMeasure m = load_measure_file("cli_m.measure.txt");
  REQUIRE(std::holds_alternative<SpectralDensity>(m));
  CHECK(std::abs(stored_fourier(m, 0) - cplx{1.0, 0.0}) < 1e-12);
  std::string rep = slurp_without_timestamp("cli_m.report.txt");
  CHECK(rep.find("stage3_P6 = pass") != std::string::npos);
  CHECK(rep.find("pass = true") != std::string::npos);
  std::ifstream csv("cli_m.fourier.csv");
  REQUIRE(csv);
}

TEST_CASE("config file mirrors the flags") {
  {
    std::ofstream cfg("cli_cfg.ini");
    cfg << "family=chan-sanders\nstat=super\nkmax=2\nhorizon=200\n";
  }
  CHECK(run("criteria --config cli_cfg.ini --out cli_cfg_out.txt") == 0);
  std::string rep = slurp_without_timestamp("cli_cfg_out.txt");
  CHECK(rep.find("family = chan_sanders") != std::string::npos);
  CHECK(rep.find("outcome = consistent_at_horizon") != std::string::npos);
}

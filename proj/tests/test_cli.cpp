#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>
#include <string>

#include "magsim/config.hpp"
#include "magsim/csv.hpp"
#include "magsim/run.hpp"

using namespace magsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
  const fs::path d = fs::temp_directory_path() / ("magsim_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_exe(const std::string& args)
{
  const std::string cmd = std::string(MAGSIM_EXE) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string run_exe_stderr(const std::string& args, const fs::path& dir)
{
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(MAGSIM_EXE) + " " + args + " >/dev/null 2>" + err.string();
  if (std::system(cmd.c_str()) == -1)
    return {};
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

} // namespace

TEST_SUITE("cli")
{
  TEST_CASE("config text parsing")
  {
    std::istringstream in("# comment\nphysics.gamma0 = 2e-4   # trailing\n\ngeometry.eta = 0.5, 0.2\n");
    const auto v = parse_config_text(in, "test.cfg");
    CHECK(v.at("physics.gamma0") == "2e-4");
    CHECK(v.at("geometry.eta") == "0.5, 0.2");

    std::istringstream bad("physics.gamma_zero = 1\n");
    try {
      parse_config_text(bad, "bad.cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "physics.gamma_zero");
    }
  }

  TEST_CASE("defaults, file and overrides are layered")
  {
    const auto cfg = resolve_config("figure4", {{"physics.gamma0", "3e-4"}},
                                    {"physics.gamma0=5e-4", "mc.seed=7"});
    CHECK(cfg.physics.gamma0 == 5e-4);
    CHECK(cfg.mc_seed == 7);
    CHECK(cfg.physics.delta_eff == 1e3);
    CHECK(cfg.eta_list == std::vector<double>{0.8, 0.1, 0.01});
    CHECK(cfg.power_grid.size() == 181);
    CHECK(cfg.snr_rabi_sq == 0.0);
  }

  TEST_CASE("typed validation names the key")
  {
    auto key_of = [](const std::vector<std::string>& sets) {
      try {
        resolve_config("figure4", {}, sets);
      } catch (const ConfigError& e) {
        return e.key();
      }
      return std::string("<none>");
    };
    CHECK(key_of({"detection.power_grid="}) == "detection.power_grid");
    CHECK(key_of({"physics.gamma0=abc"}) == "physics.gamma0");
    CHECK(key_of({"geometry.eta=0.5,1.0"}) == "geometry.eta");
    CHECK(key_of({"mc.seed=-3"}) == "mc.seed");
    CHECK(key_of({"opm.stark_term=maybe"}) == "opm.stark_term");
    CHECK(key_of({"lineshape.model=gaussian"}) == "lineshape.model");
    CHECK(key_of({"nokey"}) == "nokey");
    CHECK_THROWS_AS(resolve_config("plot", {}, {}), ConfigError);
  }

  TEST_CASE("grids")
  {
    const auto g = parse_grid("k", "log:1:1000:4");
    REQUIRE(g.size() == 4);
    CHECK(g[1] == doctest::Approx(10.0));
    CHECK(g[3] == 1000.0);
    CHECK(parse_grid("k", "1, 2.5,4") == std::vector<double>{1.0, 2.5, 4.0});
    CHECK_THROWS_AS(parse_grid("k", "log:1:2"), ConfigError);
    CHECK_THROWS_AS(parse_grid("k", ""), ConfigError);
  }

  TEST_CASE("configuration round-trips through the CSV header")
  {
    const auto cfg = resolve_config("sql_table", {}, {"physics.delta_eff=2500", "sql.eta=0.1,0.3"});
    std::ostringstream os;
    os << "# magsim something\n";
    for (const auto& l : config_header_lines(cfg))
      os << l << '\n';
    os << "eta,f\n0.1,1\n";
    std::istringstream in(os.str());
    const auto back = parse_config_header(in);
    CHECK(back == cfg);
    CHECK(back.physics.delta_eff == 2500.0);
  }

  TEST_CASE("number formatting is exact and locale independent")
  {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(-2.5e-7)) == -2.5e-7);
    CHECK(format_double(2.0) == "2");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    const std::locale saved = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
    CHECK(format_double(1234.5) == "1234.5");
    std::locale::global(saved);
  }

  TEST_CASE("in-process run writes CSV, schema and plot script")
  {
    const fs::path dir = scratch_dir("inproc");
    const auto cfg = resolve_config("sql_table", {}, {"output.dir=" + dir.string()});
    std::ostringstream log;
    const auto out = run(cfg, log);
    REQUIRE(out.files.size() >= 1);
    CHECK(fs::exists(dir / "sql_table.csv"));
    CHECK(fs::exists(dir / "SCHEMA.md"));
    CHECK(fs::exists(dir / "plot.gp"));
    std::ifstream in(dir / "sql_table.csv");
    CHECK(parse_config_header(in) == cfg);
    const auto data = csv_data_section(dir / "sql_table.csv");
    CHECK(data.size() == 1 + cfg.sql_eta.size());
  }

  TEST_CASE("executable exit codes")
  {
    const fs::path dir = scratch_dir("exe");
    const fs::path cfgfile = dir / "run.cfg";
    {
      std::ofstream f(cfgfile);
      f << "detection.power_grid = log:1e-2:1e7:31\n";
    }
    const std::string out = " --out " + (dir / "out").string();
    CHECK(run_exe("figure4 --config " + cfgfile.string() + out) == 0);
    CHECK(fs::exists(dir / "out" / "figure4_opm.csv"));

    CHECK(run_exe("figure4 --config " + (dir / "missing.cfg").string() + out) == 1);
    CHECK(run_exe("figure4 --set physics.gamma0=-1" + out) == 1);
    CHECK(run_exe("unknown_mode" + out) == 1);
    CHECK(run_exe("figure4 --bogus-flag") == 1);
    const std::string msg = run_exe_stderr("figure4 --set detection.power_grid=" + out, dir);
    CHECK(msg.find("detection.power_grid") != std::string::npos);

    // A constant-intensity resonance is 2 gamma0 wide; 16 points across the
    // default window cannot resolve it.
    CHECK(run_exe("lineshape --set lineshape.model=constant --set lineshape.detuning_points=16" +
                  out) == 2);
  }

  TEST_CASE("repeated runs give byte-identical data sections")
  {
    const fs::path dir = scratch_dir("determinism");
    const std::string sets = " --set detection.power_grid=log:1e-2:1e7:41";
    REQUIRE(run_exe("figure4" + sets + " --out " + (dir / "a").string()) == 0);
    REQUIRE(run_exe("figure4" + sets + " --out " + (dir / "b").string()) == 0);
    std::size_t compared = 0;
    for (const auto& e : fs::directory_iterator(dir / "a")) {
      if (e.path().extension() != ".csv")
        continue;
      CHECK(csv_data_section(e.path()) == csv_data_section(dir / "b" / e.path().filename()));
      ++compared;
    }
    CHECK(compared >= 3);
  }
}

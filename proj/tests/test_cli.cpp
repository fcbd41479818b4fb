#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kBase = fs::temp_directory_path() / "ramansim_cli_test";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RAMANSIM_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

fs::path write_config(const std::string& name, const std::string& text) {
    fs::create_directories(kBase);
    const fs::path p = kBase / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("simulate writes the trace schema and an index, exit 0") {
    fs::remove_all(kBase / "sim");
    const fs::path cfg = write_config("sim.conf",
                                      "[drive]\ntype = constant\np = 2.0\n"
                                      "[integrator]\nt_end = 50\nsample_interval = 5\n");
    const int code = run_cli("simulate --config " + cfg.string() + " --out " +
                             (kBase / "sim").string());
    CHECK(code == 0);
    const std::string trace = read_file(kBase / "sim" / "trace.csv");
    CHECK(first_line(trace) == "t_us,p1_mW,q,a,intensity");
    CHECK(trace.find("\r") == std::string::npos);  // plain \n endings
    const std::string index = read_file(kBase / "sim" / "index.txt");
    CHECK(index.find("trace.csv") != std::string::npos);
}

TEST_CASE("repeat invocations produce byte-identical CSV output") {
    const fs::path cfg = write_config("det.conf", "[analysis]\nf_list = 1200\n");
    fs::remove_all(kBase / "det1");
    fs::remove_all(kBase / "det2");
    REQUIRE(run_cli("hysteresis --config " + cfg.string() + " --out " +
                    (kBase / "det1").string()) == 0);
    REQUIRE(run_cli("hysteresis --config " + cfg.string() + " --out " +
                    (kBase / "det2").string()) == 0);
    for (const char* name : {"thresholds.csv", "loops_1200.csv", "index.txt"}) {
        CHECK(read_file(kBase / "det1" / name) == read_file(kBase / "det2" / name));
    }
    const std::string thr = read_file(kBase / "det1" / "thresholds.csv");
    CHECK(first_line(thr) == "f_mod_Hz,p_on_mW,p_off_mW,width_mW,area");
    CHECK(first_line(read_file(kBase / "det1" / "loops_1200.csv")) ==
          "p1_mW,intensity_up,intensity_down");
}

TEST_CASE("config problems exit with code 2") {
    const fs::path bad = write_config("bad.conf", "[params]\ndelta = -1\n");
    CHECK(run_cli("simulate --config " + bad.string()) == 2);
    const fs::path unk = write_config("unk.conf", "[params]\nnonsense = 1\n");
    CHECK(run_cli("simulate --config " + unk.string()) == 2);
    CHECK(run_cli("simulate --config " + (kBase / "missing.conf").string()) == 2);
    CHECK(run_cli("bogus-subcommand --config whatever") == 2);
    CHECK(run_cli("simulate") == 2);  // --config is required
}

TEST_CASE("hysteresis keeps going on partial failure, exit 1 only when all fail") {
    // 1 MHz modulation leaves no time to ignite: that row fails, 1200 Hz works
    const fs::path part = write_config("part.conf", "[analysis]\nf_list = 1200, 1e6\n");
    fs::remove_all(kBase / "part");
    CHECK(run_cli("hysteresis --config " + part.string() + " --out " +
                  (kBase / "part").string()) == 0);
    const std::string thr = read_file(kBase / "part" / "thresholds.csv");
    CHECK(thr.find("1200,1.") != std::string::npos);
    CHECK(thr.find("nan,nan,nan,nan,\"") != std::string::npos);  // quoted error row

    // entire band below threshold: every frequency fails -> exit 1
    const fs::path all = write_config("allfail.conf",
                                      "[drive]\ntype = triangle\np_min = 0.2\n"
                                      "p_max = 0.8\n[analysis]\nf_list = 1200, 4000\n");
    fs::remove_all(kBase / "allfail");
    CHECK(run_cli("hysteresis --config " + all.string() + " --out " +
                  (kBase / "allfail").string()) == 1);
}

TEST_CASE("spectrum and switch commands write their documented files") {
    const fs::path cfg = write_config("empty.conf", "");
    fs::remove_all(kBase / "spec");
    CHECK(run_cli("spectrum --config " + cfg.string() + " --out " +
                  (kBase / "spec").string()) == 0);
    CHECK(first_line(read_file(kBase / "spec" / "spectrum.csv")) ==
          "delta_GHz,intensity");

    fs::remove_all(kBase / "sw");
    CHECK(run_cli("switch --config " + cfg.string() + " --out " +
                  (kBase / "sw").string()) == 0);
    CHECK(first_line(read_file(kBase / "sw" / "switch.csv")) ==
          "pulse,kind,state_before,state_after,transition_us");
    CHECK(fs::exists(kBase / "sw" / "switch_summary.csv"));
    CHECK(fs::exists(kBase / "sw" / "switch_trace.csv"));
}

TEST_CASE("the plots flag adds SVG files next to the CSVs") {
    const fs::path cfg = write_config("plot.conf",
                                      "[drive]\ntype = constant\np = 2.0\n"
                                      "[integrator]\nt_end = 50\nsample_interval = 5\n");
    fs::remove_all(kBase / "plot");
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " +
                  (kBase / "plot").string() + " --plots") == 0);
    const std::string svg = read_file(kBase / "plot" / "trace.svg");
    CHECK(svg.find("<svg") == 0);
    CHECK(read_file(kBase / "plot" / "index.txt").find("trace.svg") !=
          std::string::npos);
}

TEST_CASE("the output section directory is used when --out is absent") {
    fs::remove_all(kBase / "from_config");
    const fs::path cfg = write_config(
        "outdir.conf",
        "[drive]\ntype = constant\np = 2.0\n"
        "[integrator]\nt_end = 20\nsample_interval = 5\n"
        "[output]\ndir = " + (kBase / "from_config").string() + "\n");
    CHECK(run_cli("simulate --config " + cfg.string()) == 0);
    CHECK(fs::exists(kBase / "from_config" / "trace.csv"));
}

TEST_CASE("fit writes scaling results with the documented schemas") {
    const fs::path cfg = write_config("fit.conf",
                                      "[analysis]\nf_list = 100, 400, 1600, 3600\n");
    fs::remove_all(kBase / "fit");
    CHECK(run_cli("fit --config " + cfg.string() + " --out " +
                  (kBase / "fit").string()) == 0);
    CHECK(first_line(read_file(kBase / "fit" / "fit.csv")) == "branch,p_th_mW,coeff,r2");
    CHECK(first_line(read_file(kBase / "fit" / "exponents.csv")) == "branch,exponent");
    const std::string index = read_file(kBase / "fit" / "index.txt");
    CHECK(index.find("thresholds.csv") != std::string::npos);
    CHECK(index.find("fit.csv") != std::string::npos);
}

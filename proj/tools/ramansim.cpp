// ramansim: deterministic simulator and analysis toolchain for dynamic
// bistability in resonantly enhanced Raman generation.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "raman/commands.hpp"
#include "raman/config.hpp"
#include "raman/errors.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw raman::ConfigurationError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulator and analysis tools for dynamic Raman bistability"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool plots = false;

    int (*handler)(const raman::RunConfig&) = nullptr;
    const auto add = [&](const std::string& name, const std::string& help,
                         int (*fn)(const raman::RunConfig&)) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_flag("--plots", plots, "also write SVG plots");
        sub->callback([&, fn] { handler = fn; });
    };
    add("simulate", "integrate one drive protocol and write the time series", raman::run_simulate);
    add("hysteresis", "sweep modulation frequencies, extract loops and thresholds",
        raman::run_hysteresis);
    add("spectrum", "steady output versus two-photon detuning", raman::run_spectrum);
    add("switch", "pulse-train latching test with state classification", raman::run_switch);
    add("fit", "square-root frequency scaling fit of onset/extinction thresholds",
        raman::run_fit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        raman::RunConfig cfg = raman::parse_config(slurp(config_path));
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (plots) cfg.plots = true;
        return handler(cfg);
    } catch (const raman::ConfigurationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#ifndef RAMAN_CONFIG_HPP
#define RAMAN_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "raman/drive.hpp"
#include "raman/dynamics.hpp"
#include "raman/errors.hpp"
#include "raman/model.hpp"

namespace raman {

// Everything a batch run needs. Unset document keys keep these defaults;
// f_list/delta_list stay empty optionals so each command can apply its own
// documented default grid.
struct RunConfig {
    PhysicalParams params;
    DriveProtocol drive = TriangleDrive{};
    IntegratorConfig integrator;
    double t_end = 0.0;   // us; 0 selects the per-command automatic duration
    double init_a = 0.0;
    double init_q = 0.0;
    double detection_level = 0.05;
    std::optional<std::vector<double>> f_list;      // Hz
    std::optional<std::vector<double>> delta_list;  // GHz
    std::string out_dir = "out";
    bool plots = false;

    bool operator==(const RunConfig&) const = default;
};

// Parses the sectioned key-value format:
//   [params] / [drive] / [integrator] / [analysis] / [output] headers,
//   `key = value` lines, `#` comments, blank lines.
// Values are decimal numbers with an optional unit suffix that must match the
// key's documented unit (`delta = 4.0` and `delta = 4.0 GHz` both parse).
// Lists (f_list, delta_list) are comma-separated; delta_list also accepts
// `lo:hi:step`. Pulse trains use `pulses = t_start:duration:level, ...`.
// Unknown sections or keys, malformed numbers, duplicate keys and invariant
// violations throw ConfigurationError naming the line and key.
RunConfig parse_config(const std::string& text);

// Canonical document: every section and key written out at full precision.
// parse_config(render_config(c)) == c for every valid c.
std::string render_config(const RunConfig& config);

// The pulse train used when the switch command gets a non-pulsed drive:
// baseline inside the static bistable window, three 40 us write pulses at
// 2.5 mW alternating with three 40 us erase pulses at 0.2 mW, 500 us apart.
PulseTrainDrive default_switch_train();

}  // namespace raman

#endif  // RAMAN_CONFIG_HPP

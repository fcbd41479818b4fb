#include "raman/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace raman {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigurationError("config error: line " + std::to_string(line) + ": " + what);
}

struct Entry {
    std::string key;
    std::string value;
    int line;
};

struct Section {
    int header_line = 0;
    std::vector<Entry> entries;
};

// One raw `key = value` occurrence per key, with duplicate detection.
class KeyView {
public:
    explicit KeyView(const Section& section) {
        for (const Entry& e : section.entries) {
            if (!map_.emplace(e.key, &e).second) {
                fail(e.line, "duplicate key '" + e.key + "'");
            }
        }
    }

    const Entry* find(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) return nullptr;
        used_.insert(key);
        return it->second;
    }

    // Any key never asked for is unknown in this section.
    void reject_unused(const char* section_name) const {
        for (const auto& [key, entry] : map_) {
            if (!used_.count(key)) {
                fail(entry->line, std::string("unknown key '") + key + "' in [" +
                                      section_name + "]");
            }
        }
    }

private:
    std::map<std::string, const Entry*> map_;
    std::set<std::string> used_;
};

double parse_number(const Entry& e, const char* unit) {
    // Optional whitespace-separated unit suffix; it must match the documented one.
    std::istringstream in(e.value);
    std::string num_tok, suffix_tok, extra;
    in >> num_tok >> suffix_tok >> extra;
    if (num_tok.empty() || !extra.empty()) {
        fail(e.line, "malformed value for '" + e.key + "'");
    }
    if (!suffix_tok.empty() && suffix_tok != unit) {
        fail(e.line, "unit mismatch for '" + e.key + "': expected '" + unit + "'");
    }
    const char* begin = num_tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + num_tok.size() || !std::isfinite(v)) {
        fail(e.line, "malformed number for '" + e.key + "'");
    }
    return v;
}

double parse_positive(const Entry& e, const char* unit) {
    const double v = parse_number(e, unit);
    if (!(v > 0.0)) fail(e.line, "'" + e.key + "' must be strictly positive");
    return v;
}

bool parse_bool(const Entry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail(e.line, "'" + e.key + "' must be true or false");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_list_number(const Entry& e, const std::string& tok) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (tok.empty() || end != begin + tok.size() || !std::isfinite(v)) {
        fail(e.line, "malformed number '" + tok + "' in '" + e.key + "'");
    }
    return v;
}

std::vector<double> parse_double_list(const Entry& e) {
    // Comma list, or lo:hi:step for an inclusive arithmetic range.
    std::vector<double> out;
    if (e.value.find(':') != std::string::npos && e.value.find(',') == std::string::npos) {
        const auto parts = split(e.value, ':');
        if (parts.size() != 3) fail(e.line, "range for '" + e.key + "' must be lo:hi:step");
        const double lo = parse_list_number(e, parts[0]);
        const double hi = parse_list_number(e, parts[1]);
        const double step = parse_list_number(e, parts[2]);
        if (!(step > 0.0) || !(hi >= lo)) {
            fail(e.line, "range for '" + e.key + "' must have hi >= lo and step > 0");
        }
        for (long k = 0;; ++k) {
            const double v = lo + static_cast<double>(k) * step;
            if (v > hi + 1e-12 * std::max(1.0, std::abs(hi))) break;
            out.push_back(v);
        }
        return out;
    }
    for (const std::string& tok : split(e.value, ',')) {
        out.push_back(parse_list_number(e, tok));
    }
    return out;
}

std::vector<Pulse> parse_pulses(const Entry& e) {
    std::vector<Pulse> out;
    if (trim(e.value).empty()) return out;
    for (const std::string& tok : split(e.value, ',')) {
        const auto parts = split(tok, ':');
        if (parts.size() != 3) {
            fail(e.line, "pulse '" + tok + "' must be t_start:duration:level");
        }
        out.push_back({parse_list_number(e, parts[0]), parse_list_number(e, parts[1]),
                       parse_list_number(e, parts[2])});
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, Section> sections;
    for (const char* name : {"params", "drive", "integrator", "analysis", "output"}) {
        sections[name];
    }

    Section* current = nullptr;
    int line_no = 0;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const size_t hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            auto it = sections.find(name);
            if (it == sections.end()) fail(line_no, "unknown section '" + name + "'");
            if (it->second.header_line != 0) fail(line_no, "repeated section '" + name + "'");
            it->second.header_line = line_no;
            current = &it->second;
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        if (current == nullptr) fail(line_no, "key outside any [section]");
        Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        if (e.key.empty()) fail(line_no, "empty key");
        current->entries.push_back(std::move(e));
    }

    RunConfig cfg;

    {
        KeyView keys(sections["params"]);
        PhysicalParams& p = cfg.params;
        const auto num = [&](const char* key, const char* unit, double& field) {
            if (const Entry* e = keys.find(key)) field = parse_positive(*e, unit);
        };
        num("delta", "GHz", p.delta);
        num("gamma", "MHz", p.gamma);
        num("t2", "us", p.t2);
        num("p2", "mW", p.p2);
        num("c_r", "", p.c_r);
        num("c_s", "", p.c_s);
        num("q_max", "", p.q_max);
        num("p_q", "mW", p.p_q);
        num("g0", "", p.g0);
        num("kappa", "", p.kappa);
        num("s0", "", p.s0);
        num("a_sat", "", p.a_sat);
        num("a_d", "", p.a_d);
        num("c_read", "", p.c_read);
        num("p_opt", "mW", p.p_opt);
        num("w_pm", "mW", p.w_pm);
        num("gamma_abs", "GHz", p.gamma_abs);
        num("delta_cut", "GHz", p.delta_cut);
        if (const Entry* e = keys.find("m_cut")) {
            const double v = parse_positive(*e, "");
            if (v != std::floor(v) || v > 1e6) fail(e->line, "'m_cut' must be an integer");
            p.m_cut = static_cast<int>(v);
        }
        keys.reject_unused("params");
        try {
            validate(p);
        } catch (const std::invalid_argument& err) {
            const int line = std::max(sections["params"].header_line, 1);
            fail(line, std::string("[params]: ") + err.what());
        }
    }

    {
        const Section& section = sections["drive"];
        KeyView keys(section);
        std::string type = "triangle";
        if (const Entry* e = keys.find("type")) {
            type = e->value;
        }
        const auto reject_key = [&](const char* key) {
            if (const Entry* e = keys.find(key)) {
                fail(e->line, "key '" + std::string(key) + "' not valid for drive type '" +
                                  type + "'");
            }
        };
        if (type == "constant") {
            ConstantDrive d;
            if (const Entry* e = keys.find("p")) d.p = parse_number(*e, "mW");
            reject_key("p_min");
            reject_key("p_max");
            reject_key("f_mod");
            reject_key("phase");
            reject_key("baseline");
            reject_key("pulses");
            cfg.drive = d;
        } else if (type == "triangle" || type == "sine") {
            double p_min = 0.2, p_max = 3.0, f_mod = 1200.0, phase = 0.0;
            if (const Entry* e = keys.find("p_min")) p_min = parse_number(*e, "mW");
            if (const Entry* e = keys.find("p_max")) p_max = parse_number(*e, "mW");
            if (const Entry* e = keys.find("f_mod")) f_mod = parse_number(*e, "Hz");
            if (const Entry* e = keys.find("phase")) phase = parse_number(*e, "");
            reject_key("p");
            reject_key("baseline");
            reject_key("pulses");
            if (type == "triangle") {
                cfg.drive = TriangleDrive{p_min, p_max, f_mod, phase};
            } else {
                cfg.drive = SineDrive{p_min, p_max, f_mod, phase};
            }
        } else if (type == "pulse_train") {
            PulseTrainDrive d;
            d.pulses.clear();
            if (const Entry* e = keys.find("baseline")) d.baseline = parse_number(*e, "mW");
            if (const Entry* e = keys.find("pulses")) d.pulses = parse_pulses(*e);
            reject_key("p");
            reject_key("p_min");
            reject_key("p_max");
            reject_key("f_mod");
            reject_key("phase");
            cfg.drive = d;
        } else {
            const Entry* e = keys.find("type");
            fail(e != nullptr ? e->line : std::max(section.header_line, 1),
                 "unknown drive type '" + type + "'");
        }
        keys.reject_unused("drive");
        try {
            validate(cfg.drive);
        } catch (const std::invalid_argument& err) {
            fail(std::max(section.header_line, 1), std::string("[drive]: ") + err.what());
        }
    }

    {
        KeyView keys(sections["integrator"]);
        IntegratorConfig& ic = cfg.integrator;
        if (const Entry* e = keys.find("method")) {
            if (e->value == "fixed_rk4") {
                ic.method = Method::FixedRk4;
            } else if (e->value == "adaptive_rk45") {
                ic.method = Method::AdaptiveRk45;
            } else {
                fail(e->line, "method must be fixed_rk4 or adaptive_rk45");
            }
        }
        if (const Entry* e = keys.find("dt")) ic.dt = parse_positive(*e, "us");
        if (const Entry* e = keys.find("rel_tol")) {
            ic.rel_tol = parse_positive(*e, "");
            if (!(ic.rel_tol < 1.0)) fail(e->line, "'rel_tol' must lie in (0,1)");
        }
        if (const Entry* e = keys.find("abs_tol")) {
            ic.abs_tol = parse_positive(*e, "");
            if (!(ic.abs_tol < 1.0)) fail(e->line, "'abs_tol' must lie in (0,1)");
        }
        if (const Entry* e = keys.find("sample_interval")) {
            ic.sample_interval = parse_positive(*e, "us");
        }
        if (const Entry* e = keys.find("t_end")) {
            cfg.t_end = parse_number(*e, "us");
            if (!(cfg.t_end >= 0.0)) fail(e->line, "'t_end' must be >= 0 (0 = automatic)");
        }
        if (const Entry* e = keys.find("init_a")) {
            cfg.init_a = parse_number(*e, "");
            if (!(cfg.init_a >= 0.0)) fail(e->line, "'init_a' must be >= 0");
        }
        if (const Entry* e = keys.find("init_q")) {
            cfg.init_q = parse_number(*e, "");
            if (!(cfg.init_q >= 0.0 && cfg.init_q <= cfg.params.q_max)) {
                fail(e->line, "'init_q' must lie in [0, q_max]");
            }
        }
        keys.reject_unused("integrator");
    }

    {
        KeyView keys(sections["analysis"]);
        if (const Entry* e = keys.find("detection_level")) {
            cfg.detection_level = parse_number(*e, "");
            if (!(cfg.detection_level > 0.0 && cfg.detection_level < 1.0)) {
                fail(e->line, "'detection_level' must lie in (0,1)");
            }
        }
        if (const Entry* e = keys.find("f_list")) {
            auto list = parse_double_list(*e);
            if (list.empty()) fail(e->line, "'f_list' must not be empty");
            for (double f : list) {
                if (!(f > 0.0)) fail(e->line, "'f_list' entries must be > 0");
            }
            cfg.f_list = std::move(list);
        }
        if (const Entry* e = keys.find("delta_list")) {
            auto list = parse_double_list(*e);
            if (list.empty()) fail(e->line, "'delta_list' must not be empty");
            for (size_t i = 1; i < list.size(); ++i) {
                if (!(list[i] > list[i - 1])) {
                    fail(e->line, "'delta_list' must be strictly increasing");
                }
            }
            cfg.delta_list = std::move(list);
        }
        keys.reject_unused("analysis");
    }

    {
        KeyView keys(sections["output"]);
        if (const Entry* e = keys.find("dir")) {
            if (e->value.empty()) fail(e->line, "'dir' must not be empty");
            cfg.out_dir = e->value;
        }
        if (const Entry* e = keys.find("plots")) cfg.plots = parse_bool(*e);
        keys.reject_unused("output");
    }

    return cfg;
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream out;
    const PhysicalParams& p = cfg.params;
    out << "[params]\n";
    out << "delta = " << fmt(p.delta) << "\n";
    out << "gamma = " << fmt(p.gamma) << "\n";
    out << "t2 = " << fmt(p.t2) << "\n";
    out << "p2 = " << fmt(p.p2) << "\n";
    out << "c_r = " << fmt(p.c_r) << "\n";
    out << "c_s = " << fmt(p.c_s) << "\n";
    out << "q_max = " << fmt(p.q_max) << "\n";
    out << "p_q = " << fmt(p.p_q) << "\n";
    out << "g0 = " << fmt(p.g0) << "\n";
    out << "kappa = " << fmt(p.kappa) << "\n";
    out << "s0 = " << fmt(p.s0) << "\n";
    out << "a_sat = " << fmt(p.a_sat) << "\n";
    out << "a_d = " << fmt(p.a_d) << "\n";
    out << "c_read = " << fmt(p.c_read) << "\n";
    out << "p_opt = " << fmt(p.p_opt) << "\n";
    out << "w_pm = " << fmt(p.w_pm) << "\n";
    out << "gamma_abs = " << fmt(p.gamma_abs) << "\n";
    out << "delta_cut = " << fmt(p.delta_cut) << "\n";
    out << "m_cut = " << p.m_cut << "\n";

    out << "\n[drive]\n";
    std::visit(
        [&out](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDrive>) {
                out << "type = constant\n";
                out << "p = " << fmt(d.p) << "\n";
            } else if constexpr (std::is_same_v<T, TriangleDrive> ||
                                 std::is_same_v<T, SineDrive>) {
                out << "type = " << (std::is_same_v<T, TriangleDrive> ? "triangle" : "sine")
                    << "\n";
                out << "p_min = " << fmt(d.p_min) << "\n";
                out << "p_max = " << fmt(d.p_max) << "\n";
                out << "f_mod = " << fmt(d.f_mod_hz) << "\n";
                out << "phase = " << fmt(d.phase) << "\n";
            } else {
                out << "type = pulse_train\n";
                out << "baseline = " << fmt(d.baseline) << "\n";
                out << "pulses = ";
                for (size_t i = 0; i < d.pulses.size(); ++i) {
                    if (i > 0) out << ",";
                    out << fmt(d.pulses[i].t_start) << ":" << fmt(d.pulses[i].duration) << ":"
                        << fmt(d.pulses[i].level);
                }
                out << "\n";
            }
        },
        cfg.drive);

    out << "\n[integrator]\n";
    out << "method = "
        << (cfg.integrator.method == Method::FixedRk4 ? "fixed_rk4" : "adaptive_rk45") << "\n";
    out << "dt = " << fmt(cfg.integrator.dt) << "\n";
    out << "rel_tol = " << fmt(cfg.integrator.rel_tol) << "\n";
    out << "abs_tol = " << fmt(cfg.integrator.abs_tol) << "\n";
    out << "sample_interval = " << fmt(cfg.integrator.sample_interval) << "\n";
    out << "t_end = " << fmt(cfg.t_end) << "\n";
    out << "init_a = " << fmt(cfg.init_a) << "\n";
    out << "init_q = " << fmt(cfg.init_q) << "\n";

    out << "\n[analysis]\n";
    out << "detection_level = " << fmt(cfg.detection_level) << "\n";
    const auto emit_list = [&out](const char* key, const std::optional<std::vector<double>>& v) {
        if (!v.has_value()) return;
        out << key << " = ";
        for (size_t i = 0; i < v->size(); ++i) {
            if (i > 0) out << ",";
            out << fmt((*v)[i]);
        }
        out << "\n";
    };
    emit_list("f_list", cfg.f_list);
    emit_list("delta_list", cfg.delta_list);

    out << "\n[output]\n";
    out << "dir = " << cfg.out_dir << "\n";
    out << "plots = " << (cfg.plots ? "true" : "false") << "\n";
    return out.str();
}

PulseTrainDrive default_switch_train() {
    PulseTrainDrive train;
    train.baseline = 1.0042;
    train.pulses.clear();
    for (int k = 0; k < 6; ++k) {
        train.pulses.push_back(
            {200.0 + 500.0 * static_cast<double>(k), 40.0, k % 2 == 0 ? 2.5 : 0.2});
    }
    return train;
}

}  // namespace raman

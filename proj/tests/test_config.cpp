#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "raman/config.hpp"

using namespace raman;

namespace {

// Parse must fail with a ConfigurationError whose message carries `needle`.
void expect_error(const std::string& text, const std::string& needle) {
    try {
        (void)parse_config(text);
        FAIL_CHECK("expected ConfigurationError for:\n" << text);
    } catch (const ConfigurationError& e) {
        const std::string what = e.what();
        if (what.find(needle) == std::string::npos) {
            FAIL_CHECK("message '" << what << "' lacks '" << needle << "'");
        }
    }
}

}  // namespace

TEST_CASE("empty document parses to the default configuration") {
    CHECK(parse_config("") == RunConfig{});
    CHECK(parse_config("# nothing but a comment\n\n") == RunConfig{});
}

TEST_CASE("sections override individual fields") {
    const RunConfig cfg = parse_config(
        "[params]\n"
        "delta = 5.0 GHz\n"
        "kappa = 1.5\n"
        "\n"
        "[drive]\n"
        "type = sine\n"
        "p_min = 0.5 mW\n"
        "f_mod = 800 Hz\n"
        "\n"
        "[integrator]\n"
        "method = adaptive_rk45\n"
        "rel_tol = 1e-9\n"
        "t_end = 1234 us\n"
        "init_q = 0.25\n"
        "\n"
        "[analysis]\n"
        "detection_level = 0.1\n"
        "f_list = 100, 200, 400\n"
        "\n"
        "[output]\n"
        "dir = results\n"
        "plots = true\n");
    CHECK(cfg.params.delta == 5.0);
    CHECK(cfg.params.kappa == 1.5);
    CHECK(cfg.params.t2 == PhysicalParams{}.t2);  // untouched fields keep defaults
    const auto* sine = std::get_if<SineDrive>(&cfg.drive);
    REQUIRE(sine != nullptr);
    CHECK(sine->p_min == 0.5);
    CHECK(sine->p_max == 3.0);
    CHECK(sine->f_mod_hz == 800.0);
    CHECK(cfg.integrator.method == Method::AdaptiveRk45);
    CHECK(cfg.integrator.rel_tol == 1e-9);
    CHECK(cfg.t_end == 1234.0);
    CHECK(cfg.init_q == 0.25);
    CHECK(cfg.detection_level == 0.1);
    REQUIRE(cfg.f_list.has_value());
    CHECK(*cfg.f_list == std::vector<double>{100.0, 200.0, 400.0});
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.plots);
}

TEST_CASE("comments, blank lines and CRLF endings are tolerated") {
    const RunConfig cfg = parse_config(
        "# header comment\r\n"
        "[drive]\r\n"
        "type = constant  # inline comment\r\n"
        "p = 2.5 mW\r\n");
    const auto* c = std::get_if<ConstantDrive>(&cfg.drive);
    REQUIRE(c != nullptr);
    CHECK(c->p == 2.5);
}

TEST_CASE("detuning range shorthand expands inclusively") {
    const RunConfig cfg = parse_config("[analysis]\ndelta_list = 0:1:0.25\n");
    REQUIRE(cfg.delta_list.has_value());
    CHECK(*cfg.delta_list == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("pulse trains parse from start:duration:level triplets") {
    const RunConfig cfg = parse_config(
        "[drive]\n"
        "type = pulse_train\n"
        "baseline = 1.0042 mW\n"
        "pulses = 200:40:2.5, 700:40:0.2\n");
    const auto* train = std::get_if<PulseTrainDrive>(&cfg.drive);
    REQUIRE(train != nullptr);
    CHECK(train->baseline == 1.0042);
    REQUIRE(train->pulses.size() == 2);
    CHECK(train->pulses[0] == Pulse{200.0, 40.0, 2.5});
    CHECK(train->pulses[1] == Pulse{700.0, 40.0, 0.2});
}

TEST_CASE("rendering then parsing is the identity on varied configs") {
    RunConfig a;
    CHECK(parse_config(render_config(a)) == a);

    RunConfig b;
    b.params.delta = 3.7;
    b.params.m_cut = 3;
    b.drive = ConstantDrive{1.75};
    b.integrator.method = Method::AdaptiveRk45;
    b.integrator.rel_tol = 2.5e-9;
    b.t_end = 777.25;
    b.init_a = 0.125;
    b.init_q = 0.3;
    b.detection_level = 0.07;
    b.f_list = std::vector<double>{10.0, 150.0, 1200.0};
    b.delta_list = std::vector<double>{0.0, 0.05, 4.0};
    b.out_dir = "elsewhere";
    b.plots = true;
    CHECK(parse_config(render_config(b)) == b);

    RunConfig c;
    c.drive = default_switch_train();
    CHECK(parse_config(render_config(c)) == c);

    RunConfig d;
    d.drive = SineDrive{0.4, 2.9, 333.5, 0.75};
    CHECK(parse_config(render_config(d)) == d);

    // rendering is itself deterministic
    CHECK(render_config(b) == render_config(b));
}

TEST_CASE("errors carry the line number and the offending key") {
    expect_error("[params]\ndelta = -1\n", "line 2");
    expect_error("[params]\ndelta = -1\n", "delta");
    expect_error("[params]\nbogus = 3\n", "unknown key 'bogus'");
    expect_error("[widgets]\nx = 1\n", "unknown section 'widgets'");
    expect_error("[params]\ndelta = 4\ndelta = 5\n", "duplicate key");
    expect_error("[params]\ndelta = abc\n", "malformed");
    expect_error("[params]\ndelta = 4 GHz extra\n", "malformed");
    expect_error("[params]\ndelta = 4 mW\n", "unit mismatch");
    expect_error("[params]\nm_cut = 2.5\n", "integer");
    expect_error("[params]\n[params]\n", "repeated section");
    expect_error("delta = 4\n", "outside any [section]");
    expect_error("[params]\njust words\n", "expected 'key = value'");
    expect_error("[analysis]\ndetection_level = 1.5\n", "detection_level");
    expect_error("[analysis]\nf_list = 100, -5\n", "f_list");
    expect_error("[analysis]\ndelta_list = 3, 2, 1\n", "strictly increasing");
    expect_error("[integrator]\nt_end = -10\n", "t_end");
    expect_error("[integrator]\ninit_q = 0.9\n", "init_q");  // above q_max
    expect_error("[integrator]\nmethod = euler\n", "method");
    expect_error("[output]\nplots = yes\n", "plots");
    expect_error("[drive]\ntype = square\n", "unknown drive type");
    expect_error("[drive]\ntype = triangle\np = 2\n", "not valid for drive type");
    expect_error("[drive]\ntype = constant\nf_mod = 100\n", "not valid for drive type");
    expect_error("[drive]\ntype = pulse_train\npulses = 10:20\n",
                 "t_start:duration:level");
}

TEST_CASE("invariant violations cite the section they come from") {
    expect_error("[params]\nq_max = 1.5\n", "[params]");
    expect_error("[drive]\ntype = triangle\np_min = 3\np_max = 1\n", "[drive]");
    expect_error("[drive]\ntype = pulse_train\npulses = 100:60:2.5,120:40:0.2\n",
                 "[drive]");
}

TEST_CASE("default switch train sits inside the static bistable window") {
    const PulseTrainDrive train = default_switch_train();
    CHECK(train.baseline > 1.0035);
    CHECK(train.baseline < 1.0049);
    REQUIRE(train.pulses.size() == 6);
    for (size_t k = 0; k < train.pulses.size(); ++k) {
        CHECK(train.pulses[k].duration == 40.0);
        CHECK(train.pulses[k].level == (k % 2 == 0 ? 2.5 : 0.2));
        if (k > 0) {
            CHECK(train.pulses[k].t_start - train.pulses[k - 1].t_start == 500.0);
        }
    }
    CHECK_NOTHROW(validate(DriveProtocol{train}));
    // write pulses push power up, erase pulses pull it down
    CHECK(train.pulses[0].level > train.baseline);
    CHECK(train.pulses[1].level < train.baseline);
}

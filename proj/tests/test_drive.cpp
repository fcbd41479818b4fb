#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "raman/drive.hpp"

using namespace raman;

TEST_CASE("constant drive is flat with zero sweep rate") {
    const DriveProtocol d = ConstantDrive{1.7};
    CHECK_NOTHROW(validate(d));
    for (double t : {0.0, 0.3, 10.0, 1e6}) {
        CHECK(evaluate(d, t) == 1.7);
        CHECK(sweep_rate(d, t) == 0.0);
    }
    CHECK(!period_us(d).has_value());
    CHECK(max_power(d) == 1.7);
}

TEST_CASE("triangle drive hits its corners and midpoints") {
    const TriangleDrive tri{0.2, 3.0, 1000.0, 0.0};  // period 1000 us
    const DriveProtocol d = tri;
    CHECK(evaluate(d, 0.0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(evaluate(d, 250.0) == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(evaluate(d, 500.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(evaluate(d, 750.0) == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(evaluate(d, 1000.0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(period_us(d).value() == doctest::Approx(1000.0).epsilon(1e-14));
    CHECK(max_power(d) == 3.0);
}

TEST_CASE("triangle sweep rate is piecewise constant with sign by half") {
    const DriveProtocol d = TriangleDrive{0.2, 3.0, 1000.0, 0.0};
    const double slope = 2.0 * (3.0 - 0.2) * 1000.0 * 1e-6;  // mW/us
    CHECK(sweep_rate(d, 100.0) == doctest::Approx(slope).epsilon(1e-14));
    CHECK(sweep_rate(d, 600.0) == doctest::Approx(-slope).epsilon(1e-14));
    // corners take the right-hand derivative
    CHECK(sweep_rate(d, 0.0) > 0.0);
    CHECK(sweep_rate(d, 500.0) < 0.0);
    CHECK(sweep_rate(d, 1000.0) > 0.0);
}

TEST_CASE("sine drive spans [p_min, p_max] starting at the minimum") {
    const DriveProtocol d = SineDrive{0.2, 3.0, 1000.0, 0.0};
    CHECK(evaluate(d, 0.0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(evaluate(d, 500.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(evaluate(d, 250.0) == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(sweep_rate(d, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    // d/dt of p_min + span*(1 - cos(2*pi*f*t))/2 peaks at span*pi*f
    CHECK(sweep_rate(d, 250.0) ==
          doctest::Approx(2.8 * M_PI * 1000.0 * 1e-6).epsilon(1e-12));
    CHECK(sweep_rate(d, 100.0) > 0.0);
    CHECK(sweep_rate(d, 600.0) < 0.0);
}

TEST_CASE("periodic drives repeat to rounding accuracy") {
    for (const DriveProtocol d : {DriveProtocol{TriangleDrive{0.2, 3.0, 777.0, 0.25}},
                                  DriveProtocol{SineDrive{0.5, 2.5, 777.0, 0.125}}}) {
        const double period = period_us(d).value();
        for (double t = 0.0; t < period; t += period / 97.0) {
            CHECK(std::abs(evaluate(d, t) - evaluate(d, t + 5.0 * period)) <=
                  1e-12 * max_power(d));
        }
    }
}

TEST_CASE("periodic drives stay inside their band") {
    for (const DriveProtocol d : {DriveProtocol{TriangleDrive{0.2, 3.0, 777.0, 0.6}},
                                  DriveProtocol{SineDrive{0.2, 3.0, 777.0, 0.6}}}) {
        for (int i = 0; i < 5000; ++i) {
            const double v = evaluate(d, i * 0.9);
            CHECK(v >= 0.2 - 1e-12);
            CHECK(v <= 3.0 + 1e-12);
        }
    }
}

TEST_CASE("phase shifts the waveform by a period fraction") {
    const DriveProtocol base = TriangleDrive{0.2, 3.0, 1000.0, 0.0};
    const DriveProtocol shifted = TriangleDrive{0.2, 3.0, 1000.0, 0.25};
    for (double t = 0.0; t < 2000.0; t += 13.0) {
        CHECK(evaluate(shifted, t) ==
              doctest::Approx(evaluate(base, t + 250.0)).epsilon(1e-12));
    }
}

TEST_CASE("pulse train returns levels inside pulses and baseline elsewhere") {
    PulseTrainDrive train;
    train.baseline = 1.0;
    train.pulses = {{100.0, 40.0, 2.5}, {600.0, 40.0, 0.2}};
    const DriveProtocol d = train;
    CHECK_NOTHROW(validate(d));
    CHECK(evaluate(d, 0.0) == 1.0);
    CHECK(evaluate(d, 99.999) == 1.0);
    CHECK(evaluate(d, 100.0) == 2.5);   // closed left edge
    CHECK(evaluate(d, 139.999) == 2.5);
    CHECK(evaluate(d, 140.0) == 1.0);   // open right edge
    CHECK(evaluate(d, 610.0) == 0.2);
    CHECK(evaluate(d, 1e6) == 1.0);
    CHECK(sweep_rate(d, 110.0) == 0.0);
    CHECK(!period_us(d).has_value());
    CHECK(max_power(d) == 2.5);
}

TEST_CASE("validate rejects malformed drives") {
    CHECK_THROWS_AS(validate(DriveProtocol{ConstantDrive{-0.1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(DriveProtocol{TriangleDrive{3.0, 0.2, 1000.0, 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(DriveProtocol{TriangleDrive{0.2, 3.0, 0.0, 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(DriveProtocol{TriangleDrive{0.2, 3.0, 1000.0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(DriveProtocol{SineDrive{0.2, 0.2, 1000.0, 0.0}}),
                    std::invalid_argument);

    PulseTrainDrive overlap;
    overlap.pulses = {{100.0, 60.0, 2.5}, {150.0, 40.0, 0.2}};
    CHECK_THROWS_AS(validate(DriveProtocol{overlap}), std::invalid_argument);

    PulseTrainDrive unsorted;
    unsorted.pulses = {{600.0, 40.0, 2.5}, {100.0, 40.0, 0.2}};
    CHECK_THROWS_AS(validate(DriveProtocol{unsorted}), std::invalid_argument);

    PulseTrainDrive zero_len;
    zero_len.pulses = {{100.0, 0.0, 2.5}};
    CHECK_THROWS_AS(validate(DriveProtocol{zero_len}), std::invalid_argument);

    PulseTrainDrive negative_level;
    negative_level.pulses = {{100.0, 40.0, -2.5}};
    CHECK_THROWS_AS(validate(DriveProtocol{negative_level}), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "schedule.hpp"

using namespace ratiolim;

TEST_CASE("next_scale matches the brute-force scan") {
    CHECK(next_scale(1, 2) == 12);
    CHECK(next_scale(2, 2) == 44);
    CHECK(next_scale(1, 12) == 72);
    CHECK(next_scale(1, 2) == oracle::brute_next_scale(1, 2));
    CHECK(next_scale(2, 2) == oracle::brute_next_scale(2, 2));
    CHECK(next_scale(1, 12) == oracle::brute_next_scale(1, 12));
    oracle::SplitMix rng(4242);
    for (int i = 0; i < 200; ++i) {
        const std::int64_t g = rng.range(1, 6);
        const std::int64_t a_prev = 2 * rng.range(1, 40);
        CHECK(next_scale(g, a_prev) == oracle::brute_next_scale(g, a_prev));
    }
}

TEST_CASE("next_scale output is minimal") {
    oracle::SplitMix rng(11);
    for (int i = 0; i < 300; ++i) {
        const std::int64_t g = rng.range(1, 5);
        const std::int64_t a_prev = 2 * rng.range(1, 30);
        const std::int64_t a = next_scale(g, a_prev);
        CHECK(a % 2 == 0);
        CHECK((a / 2) % a_prev == 0);
        CHECK(a > 2 * g * g * g * g + 4 * a_prev);
        // one stride down violates the growth bound or positivity
        const std::int64_t smaller = a - 2 * a_prev;
        const bool violates = smaller <= 0 || smaller <= 2 * g * g * g * g + 4 * a_prev;
        CHECK(violates);
    }
}

TEST_CASE("gamma_from_constants is the ceiling of the max") {
    CHECK(gamma_from_constants(1.0, 1.0) == 1);
    CHECK(gamma_from_constants(2.3, 1.1) == 3);
    CHECK(gamma_from_constants(0.4, 0.2) == 1);
    CHECK_THROWS_AS(gamma_from_constants(std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gamma_from_constants(1.0, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(gamma_from_constants(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("extend_schedule reproduces the small inductive steps") {
    ScaleSchedule sched = ScaleSchedule::seed(2, 2, 1);
    CHECK(sched.a == std::vector<std::int64_t>{2});
    CHECK(sched.b == std::vector<std::int64_t>{2});

    ConstantsReport r;
    r.alpha = 1.0;
    r.beta = 1.0;
    sched = extend_schedule(sched, r);
    CHECK(sched.a == std::vector<std::int64_t>{2, 12});
    CHECK(sched.b == std::vector<std::int64_t>{2, 14});
    CHECK(sched.t_checkpoints == std::vector<std::int64_t>{0, 1});

    sched = extend_schedule(sched, r);
    CHECK(sched.a == std::vector<std::int64_t>{2, 12, 72});
    CHECK(sched.b == std::vector<std::int64_t>{2, 14, 86});
}

TEST_CASE("gamma_cap clamps the round constant") {
    ScaleSchedule sched = ScaleSchedule::seed(2, 2, 1);
    ConstantsReport r;
    r.alpha = 7.9;
    r.beta = 2.0;
    const ScaleSchedule uncapped = extend_schedule(sched, r);
    CHECK(uncapped.gamma.back() == 8);
    const ScaleSchedule capped = extend_schedule(sched, r, 1);
    CHECK(capped.gamma.back() == 1);
    CHECK(capped.a.back() == 12);
}

TEST_CASE("schedule invariants hold over randomized extensions") {
    oracle::SplitMix rng(20260809);
    int extensions = 0;
    while (extensions < 1000) {
        ScaleSchedule sched = ScaleSchedule::seed(2 * rng.range(1, 3), 4, 2);
        const int chain = static_cast<int>(rng.range(1, 5));
        std::int64_t prev_gamma = 0;
        std::int64_t prev_t = 0;
        for (int i = 0; i < chain && extensions < 1000; ++i, ++extensions) {
            ConstantsReport r;
            r.alpha = 0.05 + 8.0 * rng.unit();
            r.beta = 0.05 + 8.0 * rng.unit();
            sched = extend_schedule(sched, r);
            CHECK_NOTHROW(sched.validate());
            // checkpoints strictly increase while gamma is non-decreasing
            const std::int64_t g = sched.gamma.back();
            const std::int64_t t = sched.t_checkpoints.back();
            if (prev_gamma > 0 && g >= prev_gamma) CHECK(t >= prev_t);
            prev_gamma = g;
            prev_t = t;
        }
    }
}

TEST_CASE("serialization is one line per scale and round-trips") {
    ScaleSchedule sched = ScaleSchedule::seed(2, 2, 1);
    ConstantsReport r;
    r.alpha = 1.0;
    r.beta = 1.0;
    sched = extend_schedule(sched, r);
    const std::string text = serialize_schedule(sched);
    CHECK(text == "1 2 2 0 0\n2 12 14 1 1\n");
    const ScaleSchedule back = parse_schedule(text, 2, 1);
    CHECK(back.a == sched.a);
    CHECK(back.b == sched.b);
    CHECK(back.gamma == sched.gamma);
    CHECK(back.t_checkpoints == sched.t_checkpoints);
    CHECK_THROWS(parse_schedule("1 2 2 0\n", 2, 1));
    CHECK_THROWS(parse_schedule("", 2, 1));
}

TEST_CASE("seed validation") {
    CHECK_THROWS_AS(ScaleSchedule::seed(3, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(ScaleSchedule::seed(2, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(ScaleSchedule::seed(0, 2, 1), std::invalid_argument);
}

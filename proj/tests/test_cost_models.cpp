#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cranplan/cost_models.hpp"
#include "support/generators.hpp"

using namespace cranplan;
namespace ct = cranplan::testing;

namespace {

CostModelParams example_params() {
    CostModelParams params;
    params.alpha_prb = {{25, 700.0}, {50, 1000.0}, {100, 1600.0}};
    params.beta_mcs = {{0, 20.0}, {10, 50.0}, {27, 100.0}};
    return params;
}

}  // namespace

TEST_CASE("frequency classification bands") {
    CHECK(CpuFrequency(2.0).classification() == FreqClass::kInvalid);
    CHECK(CpuFrequency(2.49).classification() == FreqClass::kInvalid);
    CHECK(CpuFrequency(2.5).classification() == FreqClass::kMarginal);
    CHECK(CpuFrequency(2.79).classification() == FreqClass::kMarginal);
    CHECK(CpuFrequency(2.8).classification() == FreqClass::kValidated);
    CHECK(CpuFrequency(3.5).classification() == FreqClass::kValidated);
    CHECK(CpuFrequency(3.51).classification() == FreqClass::kExtrapolated);
    CHECK_THROWS_AS(CpuFrequency(0.0), InvalidScenario);
    CHECK_THROWS_AS(CpuFrequency(-1.0), InvalidScenario);
    CHECK(name(FreqClass::kValidated) == "VALIDATED");
}

TEST_CASE("subframe time evaluates alpha/f + beta + const") {
    const auto params = example_params();
    CHECK(subframe_time_us(params, CpuFrequency(3.5), PrbAllocation(25), McsIndex(27)) ==
          doctest::Approx(302.508).epsilon(1e-14));
    // Large-f limit approaches beta + t_const.
    CHECK(subframe_time_us(params, CpuFrequency(1e12), PrbAllocation(25), McsIndex(27)) ==
          doctest::Approx(102.508).epsilon(1e-9));
    CHECK_THROWS_AS(
        subframe_time_us(params, CpuFrequency(2.0), PrbAllocation(25), McsIndex(27)),
        FrequencyBelowMinimum);
    CHECK_THROWS_WITH_AS(
        subframe_time_us(params, CpuFrequency(2.0), PrbAllocation(25), McsIndex(27)),
        doctest::Contains("2.5"), FrequencyBelowMinimum);
    CHECK_THROWS_AS(
        subframe_time_us(params, CpuFrequency(3.0), PrbAllocation::extended(33), McsIndex(27)),
        UnknownParameter);
    CHECK_THROWS_AS(subframe_time_us(params, CpuFrequency(3.0), PrbAllocation(25), McsIndex(5)),
                    UnknownParameter);
}

TEST_CASE("subframe time is strictly decreasing in frequency") {
    std::mt19937_64 rng(7001);
    for (int trial = 0; trial < 50; ++trial) {
        const auto params = ct::random_params(rng);
        double prev = 1e30;
        for (double f = 2.8; f <= 3.5 + 1e-12; f += 0.05) {
            const double t =
                subframe_time_us(params, CpuFrequency(f), PrbAllocation(50), McsIndex(13));
            CHECK(t < prev);
            prev = t;
        }
    }
}

TEST_CASE("halving rule: T(f) - T(2f) == alpha/(2f)") {
    std::mt19937_64 rng(7002);
    for (int trial = 0; trial < 100; ++trial) {
        const auto params = ct::random_params(rng);
        const double f = ct::uniform(rng, 2.8, 3.5);
        const PrbAllocation p(25 * (1 << ct::uniform_int(rng, 0, 2)));
        const McsIndex m(ct::uniform_int(rng, 0, 27));
        const double lhs = subframe_time_us(params, CpuFrequency(f), p, m) -
                           subframe_time_us(params, CpuFrequency(2 * f), p, m);
        const double rhs = params.alpha_prb.at(p.value()) / (2 * f);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("subframe time is non-decreasing in PRB and MCS for valid tables") {
    std::mt19937_64 rng(7003);
    for (int trial = 0; trial < 50; ++trial) {
        const auto params = ct::random_params(rng);
        const CpuFrequency f(ct::uniform(rng, 2.8, 3.5));
        double prev = 0.0;
        for (const int prb : PrbAllocation::kStrictValues) {
            const double t = subframe_time_us(params, f, PrbAllocation(prb), McsIndex(13));
            CHECK(t >= prev);
            prev = t;
        }
        prev = 0.0;
        for (int m = 0; m <= 27; ++m) {
            const double t = subframe_time_us(params, f, PrbAllocation(50), McsIndex(m));
            CHECK(t >= prev);
            prev = t;
        }
    }
}

TEST_CASE("cpu line evaluates the printed coefficients") {
    const CostModelParams params;  // defaults carry the fitted line
    CHECK(cpu_percent(params, 0.0).percent == 21.3544);
    CHECK(cpu_percent(params, 100.8).percent == 0.6237 * 100.8 + 21.3544);
    CHECK(cpu_percent(params, 8.4).percent == doctest::Approx(26.59348).epsilon(1e-12));
    CHECK_FALSE(cpu_percent(params, 100.8).overload);
    CHECK(cpu_percent(params, 200.0).overload);
    CHECK(cpu_percent(params, 200.0).percent > 100.0);  // returned as-is, not clamped
    CHECK_THROWS_AS(cpu_percent(params, -1.0), NegativeThroughput);
}

TEST_CASE("cpu line is affine") {
    const CostModelParams params;
    std::mt19937_64 rng(7004);
    for (int i = 0; i < 100; ++i) {
        const double a = ct::uniform(rng, 0.0, 120.0);
        const double b = ct::uniform(rng, 0.0, 120.0);
        const double lhs =
            cpu_percent(params, a).percent + cpu_percent(params, b).percent -
            cpu_percent(params, 0.0).percent;
        CHECK(lhs == doctest::Approx(cpu_percent(params, a + b).percent).epsilon(1e-9));
    }
}

TEST_CASE("link throughput matches the measured table exactly at 80 dB") {
    const auto& table = LinkQualityTable::reference();
    CHECK(*link_throughput_mbps(table, 80.0, PrbAllocation(25)) == 0.98);
    CHECK(*link_throughput_mbps(table, 80.0, PrbAllocation(50)) == 1.64);
    CHECK(*link_throughput_mbps(table, 80.0, PrbAllocation(100)) == 3.40);
    CHECK(*link_throughput_mbps(table, 60.0, PrbAllocation(100)) == 20.0);
    CHECK(*link_throughput_mbps(table, 60.0, PrbAllocation(25)) == 5.0);
}

TEST_CASE("link throughput interpolates linearly in dB") {
    const auto& table = LinkQualityTable::reference();
    CHECK(*link_throughput_mbps(table, 70.0, PrbAllocation(25)) ==
          doctest::Approx((5.0 + 0.98) / 2.0).epsilon(1e-12));
}

TEST_CASE("link drops above the threshold and clamps below the table") {
    const auto& table = LinkQualityTable::reference();
    CHECK_FALSE(link_throughput_mbps(table, 80.001, PrbAllocation(25)).has_value());
    CHECK_FALSE(link_throughput_mbps(table, 81.0, PrbAllocation(50)).has_value());
    CHECK_FALSE(link_throughput_mbps(table, 120.0, PrbAllocation(100)).has_value());
    CHECK(*link_throughput_mbps(table, 40.0, PrbAllocation(25)) == 5.0);  // clamp low
    CHECK_THROWS_AS(link_throughput_mbps(table, 70.0, PrbAllocation::extended(30)), UnknownPrb);
}

TEST_CASE("link throughput is non-increasing in attenuation") {
    const auto& table = LinkQualityTable::reference();
    for (const int prb : PrbAllocation::kStrictValues) {
        double prev = 1e30;
        for (double a = 55.0; a <= 80.0 + 1e-9; a += 0.5) {
            const auto v = link_throughput_mbps(table, a, PrbAllocation(prb));
            REQUIRE(v.has_value());
            CHECK(*v <= prev);
            prev = *v;
        }
    }
}

TEST_CASE("link table construction validates its invariants") {
    CHECK_THROWS_AS(LinkQualityTable({{60.0, 25, 5.0}}), SchemaViolation);  // one point
    CHECK_THROWS_AS(LinkQualityTable({{60.0, 25, 5.0}, {80.0, 25, 6.0}}),
                    SchemaViolation);  // increasing
    CHECK_THROWS_AS(LinkQualityTable({{60.0, 25, 5.0}, {80.0, 25, 0.0}}),
                    SchemaViolation);  // non-positive at threshold
    CHECK_THROWS_AS(LinkQualityTable({{60.0, 25, 5.0}, {60.0, 25, 5.0}}),
                    SchemaViolation);  // duplicate point
    // Points above the drop threshold may be zero; they are unreachable.
    CHECK_NOTHROW(LinkQualityTable({{60.0, 25, 5.0}, {80.0, 25, 1.0}, {90.0, 25, 0.0}}, 80.0));
}

TEST_CASE("parameter document loading") {
    const char* doc = R"({
  "alpha_prb": {"25": 700.0, "50": 1000.0, "100": 1600.0},
  "beta_mcs": {"0": 20.0, "10": 50.0, "27": 100.0},
  "t_const_us": 2.508,
  "cpu_slope": 0.7,
  "cpu_intercept": 20.0
})";
    const auto params = load_params(doc);
    CHECK(params.alpha_prb.at(50) == 1000.0);
    CHECK(params.beta_mcs.at(27) == 100.0);
    CHECK(params.cpu_slope == 0.7);

    SUBCASE("defaults applied when optional keys are absent") {
        const auto defaulted = load_params(R"({
  "alpha_prb": {"25": 700.0},
  "beta_mcs": {"0": 20.0}
})");
        CHECK(defaulted.cpu_slope == 0.6237);
        CHECK(defaulted.cpu_intercept == 21.3544);
        CHECK(defaulted.t_const_us == 2.508);
    }
    SUBCASE("monotonicity violations are rejected") {
        CHECK_THROWS_AS(load_params(R"({
  "alpha_prb": {"25": 700.0, "50": 600.0},
  "beta_mcs": {"0": 20.0}
})"),
                        MonotonicityViolation);
        CHECK_THROWS_AS(load_params(R"({
  "alpha_prb": {"25": 700.0},
  "beta_mcs": {"0": 20.0, "1": 10.0}
})"),
                        MonotonicityViolation);
    }
    SUBCASE("schema violations") {
        CHECK_THROWS_AS(load_params("{}"), SchemaViolation);
        CHECK_THROWS_AS(load_params("[]"), SchemaViolation);
        CHECK_THROWS_AS(load_params(R"({"alpha_prb": {"25": 1.0}})"), SchemaViolation);
        CHECK_THROWS_AS(load_params(R"({"alpha_prb": {}, "beta_mcs": {"0": 1.0}})"),
                        SchemaViolation);
        CHECK_THROWS_AS(
            load_params(R"({"alpha_prb": {"25x": 1.0}, "beta_mcs": {"0": 1.0}})"),
            SchemaViolation);
        CHECK_THROWS_AS(
            load_params(R"({"alpha_prb": {"25": 1.0}, "beta_mcs": {"0": 1.0}, "bogus": 1})"),
            SchemaViolation);
        CHECK_THROWS_AS(
            load_params(R"({"alpha_prb": {"25": -1.0}, "beta_mcs": {"0": 1.0}})"),
            SchemaViolation);
        CHECK_THROWS_AS(
            load_params(R"({"alpha_prb": {"25": 1.0}, "beta_mcs": {"28": 1.0}})"),
            SchemaViolation);
    }
    SUBCASE("parse errors carry line and column") {
        try {
            load_params("{\n  \"alpha_prb\": }\n");
            FAIL("expected SchemaViolation");
        } catch (const SchemaViolation& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("fit_meta is accepted and ignored") {
        CHECK_NOTHROW(load_params(R"({
  "alpha_prb": {"25": 700.0},
  "beta_mcs": {"0": 20.0},
  "fit_meta": {"flags": ["SYNTHETIC_DEFAULTS"]}
})"));
    }
}

TEST_CASE("parameter document round-trips through serialization") {
    auto params = example_params();
    params.cpu_slope = 0.5512;
    params.cpu_intercept = 19.25;
    params.t_const_us = 3.125;
    const auto reloaded = load_params(params_to_json(params));
    CHECK(reloaded.alpha_prb == params.alpha_prb);
    CHECK(reloaded.beta_mcs == params.beta_mcs);
    CHECK(reloaded.t_const_us == params.t_const_us);
    CHECK(reloaded.cpu_slope == params.cpu_slope);
    CHECK(reloaded.cpu_intercept == params.cpu_intercept);

    // Link table round-trip, including a custom drop threshold.
    const LinkQualityTable table({{50.0, 25, 8.0}, {75.0, 25, 2.0}}, 75.0);
    const auto doc = load_model_document(params_to_json(params, &table));
    CHECK(doc.link_table.drop_threshold_db() == 75.0);
    CHECK(*link_throughput_mbps(doc.link_table, 50.0, PrbAllocation(25)) == 8.0);
    CHECK_FALSE(link_throughput_mbps(doc.link_table, 76.0, PrbAllocation(25)).has_value());
}

TEST_CASE("model document falls back to the reference link table") {
    const auto doc = load_model_document(R"({
  "alpha_prb": {"25": 700.0},
  "beta_mcs": {"0": 20.0}
})");
    CHECK(*link_throughput_mbps(doc.link_table, 80.0, PrbAllocation(100)) == 3.40);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>

#include "cranplan/scenario_io.hpp"
#include "support/generators.hpp"

using namespace cranplan;

namespace {

const char* kScenarioText = R"({
  "schema_version": 1,
  "topology": "per_rrh",
  "rrhs": [
    {"id": "rrh-1", "prb": 25, "mcs": 0, "activity": 1.0},
    {"id": "rrh-2", "prb": 100, "mcs": 27, "activity": 0.5, "attenuation_db": 70.0}
  ],
  "vms": [
    {"id": "vm-1", "cores": 1, "f_ghz": 3.5},
    {"id": "vm-2", "cores": 4, "f_ghz": 3.0}
  ],
  "assignment": {"rrh-1": "vm-1", "rrh-2": "vm-2"},
  "duration_ttis": 100,
  "seed": 42,
  "params": {
    "alpha_prb": {"25": 700.0, "50": 1000.0, "100": 1600.0},
    "beta_mcs": {"0": 20.0, "27": 100.0}
  }
})";

}  // namespace

TEST_CASE("scenario loading") {
    const auto s = load_scenario(kScenarioText);
    CHECK(s.topology == Topology::kPerRrh);
    REQUIRE(s.rrhs.size() == 2);
    CHECK(s.rrhs[0].prb.value() == 25);
    CHECK(s.rrhs[0].activity == 1.0);
    CHECK_FALSE(s.rrhs[0].attenuation_db.has_value());
    CHECK(s.rrhs[1].attenuation_db == 70.0);
    REQUIRE(s.vms.size() == 2);
    CHECK(s.vms[1].cores == 4);
    CHECK(s.deadline_us == 2000.0);  // default applied
    CHECK(s.seed == 42);
    REQUIRE(s.params.has_value());
    CHECK(s.params->alpha_prb.at(100) == 1600.0);
    // Reference link table is the default.
    CHECK(*link_throughput_mbps(s.link_table, 80.0, PrbAllocation(25)) == 0.98);
    CHECK_NOTHROW(validate(s));
}

TEST_CASE("scenario schema rejections") {
    CHECK_THROWS_AS(load_scenario("{}"), SchemaViolation);
    CHECK_THROWS_AS(load_scenario("[1,2]"), SchemaViolation);

    std::string text(kScenarioText);
    SUBCASE("unknown top-level field") {
        text.insert(text.rfind('}'), ", \"note\": \"x\"");
        CHECK_THROWS_AS(load_scenario(text), SchemaViolation);
    }
    SUBCASE("wrong schema version") {
        const auto pos = text.find("\"schema_version\": 1");
        text.replace(pos, 19, "\"schema_version\": 2");
        CHECK_THROWS_AS(load_scenario(text), SchemaViolation);
    }
    SUBCASE("bad topology") {
        const auto pos = text.find("per_rrh");
        text.replace(pos, 7, "twisted");
        CHECK_THROWS_AS(load_scenario(text), SchemaViolation);
    }
    SUBCASE("missing seed") {
        const auto pos = text.find("  \"seed\": 42,\n");
        text.erase(pos, std::string("  \"seed\": 42,\n").size());
        CHECK_THROWS_AS(load_scenario(text), SchemaViolation);
    }
    SUBCASE("negative seed") {
        const auto pos = text.find("\"seed\": 42");
        text.replace(pos, 10, "\"seed\": -1");
        CHECK_THROWS_AS(load_scenario(text), SchemaViolation);
    }
    SUBCASE("unknown rrh field") {
        const auto pos = text.find("\"mcs\": 0,");
        text.insert(pos, "\"power\": 3, ");
        CHECK_THROWS_AS(load_scenario(text), SchemaViolation);
    }
}

TEST_CASE("extended PRB counts need the flag") {
    std::string text(kScenarioText);
    const auto pos = text.find("\"prb\": 25");
    text.replace(pos, 9, "\"prb\": 33");
    CHECK_THROWS_AS(load_scenario(text), SchemaViolation);

    text.insert(text.find("\"topology\""), "\"extended_prb\": true,\n  ");
    const auto s = load_scenario(text);
    CHECK(s.rrhs[0].prb.value() == 33);
    CHECK(s.rrhs[0].prb.is_extended());
    CHECK_FALSE(s.rrhs[1].prb.is_extended());  // 100 stays strict
}

TEST_CASE("parse errors carry line and column") {
    try {
        load_scenario("{\n  \"schema_version\": ,\n}");
        FAIL("expected SchemaViolation");
    } catch (const SchemaViolation& e) {
        const std::string what = e.what();
        CHECK(what.find("line 2") != std::string::npos);
        CHECK(what.find("column") != std::string::npos);
    }
}

TEST_CASE("canonical form round-trips") {
    const auto s = load_scenario(kScenarioText);
    const auto canonical = scenario_to_json(s);
    const auto reloaded = load_scenario(canonical);
    CHECK(scenario_to_json(reloaded) == canonical);
    CHECK(scenario_hash(reloaded) == scenario_hash(s));

    auto noisy = s;
    noisy.service_noise_std = 0.05;
    const auto noisy_reloaded = load_scenario(scenario_to_json(noisy));
    CHECK(noisy_reloaded.service_noise_std == 0.05);
    CHECK(scenario_hash(noisy) != scenario_hash(s));
}

TEST_CASE("scenario hash tracks effective fields") {
    const auto s = load_scenario(kScenarioText);
    const auto base = scenario_hash(s);
    CHECK(base.size() == 16);
    CHECK(base == scenario_hash(s));  // stable

    auto seeded = s;
    seeded.seed = 43;
    CHECK(scenario_hash(seeded) != base);

    auto retuned = s;
    retuned.params->alpha_prb[25] = 701.0;
    CHECK(scenario_hash(retuned) != base);

    auto moved = s;
    moved.rrhs[0].mcs = McsIndex(1);
    CHECK(scenario_hash(moved) != base);
}

TEST_CASE("metrics serialization carries seed and hash") {
    auto s = load_scenario(kScenarioText);
    s.topology = Topology::kConsolidated;  // allow uneven load for variety
    const auto metrics = run(s);
    const auto hash = scenario_hash(s);

    const auto csv = metrics_to_csv(metrics, s);
    CHECK(csv.find("kind,id,cores,f_ghz,busy_us,subframes_processed,deadline_misses,"
                   "accounted_util,predicted_cpu_pct,overload,offered_subframes,missed,"
                   "phi_mbps,seed,scenario_hash\n") == 0);
    CHECK(csv.find("vm,vm-1,") != std::string::npos);
    CHECK(csv.find("rrh,rrh-1,") != std::string::npos);
    CHECK(csv.find(hash) != std::string::npos);
    CHECK(csv.find(",42,") != std::string::npos);
    // One header plus one row per VM and per RRH.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 + 2);

    const auto json_text = metrics_to_json(metrics, s);
    CHECK(json_text.find("\"scenario_hash\": \"" + hash + "\"") != std::string::npos);
    CHECK(json_text.find("\"per_vm\"") != std::string::npos);
    CHECK(json_text.find("\"per_rrh\"") != std::string::npos);
    CHECK(json_text.find("\"totals\"") != std::string::npos);
    CHECK(json_text.find("cpu_model_note") != std::string::npos);
    CHECK(json_text.find("\"f_class\": \"VALIDATED\"") != std::string::npos);
}

TEST_CASE("file helpers") {
    CHECK_THROWS_AS(read_file("/nonexistent/path/params.json"), IoError);
    const auto tmp = std::filesystem::temp_directory_path() / "cranplan_io_test.txt";
    write_file(tmp, "payload");
    CHECK(read_file(tmp) == "payload");
    std::filesystem::remove(tmp);
}

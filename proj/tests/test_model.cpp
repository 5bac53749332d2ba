#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "opsel/model.hpp"
#include "opsel/scenario_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

using namespace opsel;

namespace
{
    bool mentions(const std::vector<Violation> &vs, std::string_view field, std::string_view text = {})
    {
        return std::any_of(vs.begin(), vs.end(), [&](const Violation &v) {
            return v.field.find(field) != std::string::npos &&
                   (text.empty() || v.message.find(text) != std::string::npos);
        });
    }

    const std::filesystem::path kSource{OPSEL_SOURCE_DIR};
} // namespace

TEST_CASE("reference scenario carries the published network and price constants")
{
    const Scenario s = default_scenario();
    REQUIRE(s.operators.size() == 3);

    CHECK(s.operators[0].capacity_kbps == 1700.0);
    CHECK(s.operators[1].capacity_kbps == 11000.0);
    CHECK(s.operators[2].capacity_kbps == 5500.0);
    CHECK(s.operators[0].technology == Technology::UMTS);
    CHECK(s.operators[1].technology == Technology::WLAN);
    CHECK(s.operators[2].technology == Technology::WLAN);

    CHECK(s.operators[0].jitter_ms == 6.0);
    CHECK(s.operators[1].jitter_ms == 10.0);
    CHECK(s.operators[2].jitter_ms == 10.0);
    CHECK(s.operators[0].delay_ms == 19.0);
    CHECK(s.operators[1].delay_ms == 30.0);
    CHECK(s.operators[2].delay_ms == 45.0);
    CHECK(s.operators[0].ber == 1e-3);
    CHECK(s.operators[1].ber == 1e-5);
    CHECK(s.operators[2].ber == 1e-5);

    CHECK(s.operators[0].sp == 0.9);
    CHECK(s.operators[1].sp == 0.1);
    CHECK(s.operators[2].sp == 0.2);
    for (const auto &op : s.operators)
    {
        CHECK(op.cs == op.sp);
        CHECK(op.w_u == 1.0);
        CHECK(op.w_op == 1.0);
        CHECK(op.used_kbps == 0.0);
    }

    const auto *rt = s.find_class(ServiceKind::Conversational);
    const auto *nrt = s.find_class(ServiceKind::Interactive);
    REQUIRE(rt != nullptr);
    REQUIRE(nrt != nullptr);
    CHECK(rt->service_class.qos_weights == QosWeights{0.05, 0.45, 0.45, 0.05});
    CHECK(nrt->service_class.qos_weights == QosWeights{0.16, 0.04, 0.16, 0.64});
    CHECK(rt->jitter_req == 10.0);
    CHECK(rt->delay_req == 100.0);
    CHECK(rt->ber_req == 1e-3);
    CHECK(nrt->jitter_req == 20.0);
    CHECK(nrt->delay_req == 150.0);
    CHECK(nrt->ber_req == 1e-5);

    CHECK(s.mean_interarrival_s == 2.5);
    CHECK(s.mean_service_s == 240.0);
    CHECK(s.duration_s == 1200.0);
    CHECK(s.replications == 20);
    CHECK(s.cooperation);

    REQUIRE(s.profile_mix.size() == 4);
    for (const auto &p : s.profile_mix)
        CHECK(p.probability == 0.25);
    CHECK(s.sp_max() == 0.9);
}

TEST_CASE("reference sweep covers the four published loads")
{
    const auto sweep = default_sweep();
    REQUIRE(sweep.size() == 4);
    CHECK(sweep[0] == doctest::Approx(2.5));
    CHECK(sweep[1] == doctest::Approx(25.0 / 9.0));
    CHECK(sweep[2] == doctest::Approx(10.0 / 3.0));
    CHECK(sweep[3] == doctest::Approx(5.0));
}

TEST_CASE("default scenario validates and is reproducible")
{
    CHECK(validate_scenario(default_scenario()).empty());
    CHECK(default_scenario() == default_scenario());
    CHECK_NOTHROW(checked(default_scenario()));
}

TEST_CASE("requirements combine class constants with the technology demand")
{
    const Scenario s = default_scenario();
    const auto wlan = s.requirements(ServiceKind::Interactive, Technology::WLAN);
    CHECK(wlan.bw_req == s.demand.rate(ServiceKind::Interactive, Technology::WLAN));
    CHECK(wlan.ber_req == 1e-5);
    const auto umts = s.requirements(ServiceKind::Conversational, Technology::UMTS);
    CHECK(umts.bw_req == s.demand.rate(ServiceKind::Conversational, Technology::UMTS));
    CHECK(umts.jitter_req == 10.0);
}

TEST_CASE("validation errors")
{
    SUBCASE("qos weights summing to two")
    {
        Scenario s = default_scenario();
        s.service_classes[0].service_class.qos_weights = {0.5, 0.5, 0.5, 0.5};
        const auto vs = validate_scenario(s);
        CHECK(mentions(vs, "service_classes[0].qos_weights", "weight-sum violation"));
    }
    SUBCASE("empty operator list names the operators field")
    {
        Scenario s = default_scenario();
        s.operators.clear();
        s.home_weights.clear();
        CHECK(mentions(validate_scenario(s), "operators"));
    }
    SUBCASE("missing demand entry")
    {
        Scenario s = default_scenario();
        DemandTable d;
        d.set(ServiceKind::Conversational, Technology::UMTS, 64);
        d.set(ServiceKind::Conversational, Technology::WLAN, 64);
        d.set(ServiceKind::Interactive, Technology::UMTS, 128);
        s.demand = d;
        CHECK(mentions(validate_scenario(s), "demand.Interactive.WLAN", "missing demand entry"));
    }
    SUBCASE("non-positive capacity")
    {
        Scenario s = default_scenario();
        s.operators[1].capacity_kbps = 0.0;
        CHECK(mentions(validate_scenario(s), "operators[1].capacity_kbps", "non-positive capacity"));
    }
    SUBCASE("all violations are reported, not only the first")
    {
        Scenario s = default_scenario();
        s.operators[0].capacity_kbps = -1.0;
        s.operators[2].sp = 0.0;
        s.replications = 0;
        s.profile_mix[0].probability = 0.5;
        const auto vs = validate_scenario(s);
        CHECK(mentions(vs, "operators[0].capacity_kbps"));
        CHECK(mentions(vs, "operators[2].sp"));
        CHECK(mentions(vs, "replications"));
        CHECK(mentions(vs, "profile_mix", "weight-sum violation"));
        CHECK_THROWS_AS(checked(s), ScenarioError);
    }
    SUBCASE("preference weights must sum to one")
    {
        Scenario s = default_scenario();
        s.profile_mix[1].prefs = {0.7, 0.7};
        CHECK(mentions(validate_scenario(s), "profile_mix[1].prefs", "weight-sum violation"));
    }
}

TEST_CASE("property: every seeded violation is caught, valid perturbations pass")
{
    struct Mutation
    {
        std::string field;
        std::function<void(Scenario &, std::mt19937_64 &)> apply;
    };
    std::uniform_real_distribution<double> pos(0.01, 100.0);
    std::uniform_int_distribution<int> pick_op(0, 2);

    const std::vector<Mutation> breaking{
        {"capacity_kbps", [&](Scenario &s, auto &g) { s.operators[pick_op(g)].capacity_kbps = -pos(g); }},
        {"sp", [&](Scenario &s, auto &g) { s.operators[pick_op(g)].sp = -pos(g); }},
        {"cs", [&](Scenario &s, auto &g) { s.operators[pick_op(g)].cs = 0.0 * pos(g); }},
        {"w_u", [&](Scenario &s, auto &g) { s.operators[pick_op(g)].w_u = -pos(g); }},
        {"w_op", [&](Scenario &s, auto &g) { s.operators[pick_op(g)].w_op = -pos(g); }},
        {"ber", [&](Scenario &s, auto &g) { s.operators[pick_op(g)].ber = 1.0 + pos(g); }},
        {"used_kbps",
         [&](Scenario &s, auto &g) {
             auto &op = s.operators[pick_op(g)];
             op.used_kbps = op.capacity_kbps + pos(g);
         }},
        {"qos_weights", [&](Scenario &s, auto &g) { s.service_classes[0].service_class.qos_weights.bw += pos(g); }},
        {"demand",
         [&](Scenario &s, auto &g) { s.demand.set(ServiceKind::Interactive, Technology::UMTS, -pos(g)); }},
        {"mean_interarrival_s", [&](Scenario &s, auto &g) { s.mean_interarrival_s = -pos(g); }},
        {"mean_service_s", [&](Scenario &s, auto &) { s.mean_service_s = 0.0; }},
        {"duration_s", [&](Scenario &s, auto &g) { s.duration_s = -pos(g); }},
        {"replications", [&](Scenario &s, auto &) { s.replications = 0; }},
        {"profile_mix", [&](Scenario &s, auto &g) { s.profile_mix[0].probability += pos(g); }},
        {"home_weights", [&](Scenario &s, auto &g) { s.home_weights = {pos(g), 1.0, 1.0}; }},
        {"jitter_req", [&](Scenario &s, auto &g) { s.service_classes[1].jitter_req = -pos(g); }},
    };

    std::mt19937_64 g{20240101};
    for (int iter = 0; iter < 500; ++iter)
    {
        Scenario s = default_scenario();
        // A valid random perturbation first: prices, capacities and loads.
        for (auto &op : s.operators)
        {
            op.capacity_kbps = pos(g) * 100.0;
            op.used_kbps = op.capacity_kbps * std::uniform_real_distribution<double>(0.0, 1.0)(g);
            op.sp = pos(g);
            op.cs = pos(g);
        }
        s.mean_interarrival_s = pos(g);
        REQUIRE(validate_scenario(s).empty());

        std::vector<std::size_t> chosen;
        const std::size_t k = 1 + g() % 3;
        for (std::size_t i = 0; i < k; ++i)
            chosen.push_back(g() % breaking.size());
        for (auto idx : chosen)
            breaking[idx].apply(s, g);

        const auto vs = validate_scenario(s);
        for (auto idx : chosen)
        {
            INFO("mutation " << breaking[idx].field << " iteration " << iter);
            CHECK(mentions(vs, breaking[idx].field));
        }
    }
}

TEST_CASE("JSON round trip preserves the scenario")
{
    Scenario s = default_scenario();
    s.operators[2].cs = 0.15;
    s.operators[0].w_op = 0.5;
    s.home_weights = {0.5, 0.25, 0.25};
    s.pricing = PricingMode::Flat;
    s.snapshot_interval_s = 60.0;
    CHECK(scenario_from_json(to_json(s)) == s);
}

TEST_CASE("shipped scenario files")
{
    SUBCASE("default.json mirrors the built-in reference scenario")
    {
        CHECK(load_scenario(kSource / "scenarios" / "default.json") == default_scenario());
    }
    SUBCASE("heavy_demand.json differs only in its demand table")
    {
        Scenario heavy = load_scenario(kSource / "scenarios" / "heavy_demand.json");
        CHECK(heavy.demand.rate(ServiceKind::Interactive, Technology::WLAN) == 1024.0);
        CHECK(heavy.demand.rate(ServiceKind::Conversational, Technology::UMTS) == 256.0);
        heavy.demand = DemandTable::defaults();
        CHECK(heavy == default_scenario());
    }
    SUBCASE("schema document is present and well-formed")
    {
        std::ifstream in(kSource / "docs" / "scenario.schema.json");
        REQUIRE(in.good());
        const auto schema = nlohmann::json::parse(in);
        CHECK(schema.at("type") == "object");
        for (const char *field : {"operators", "service_classes", "demand", "mean_interarrival_s", "mean_service_s",
                                  "duration_s", "replications", "base_seed", "cooperation", "profile_mix"})
        {
            INFO(field);
            CHECK(schema.at("properties").contains(field));
        }
    }
}

TEST_CASE("malformed JSON reports field paths")
{
    SUBCASE("missing and mistyped fields are collected together")
    {
        auto j = to_json(default_scenario());
        j.erase("duration_s");
        j["operators"][1]["capacity_kbps"] = "lots";
        j["operators"][0]["technology"] = "LTE";
        try
        {
            scenario_from_json(j);
            FAIL("expected ScenarioError");
        }
        catch (const ScenarioError &e)
        {
            CHECK(mentions(e.violations(), "duration_s", "missing field"));
            CHECK(mentions(e.violations(), "operators[1].capacity_kbps", "expected a number"));
            CHECK(mentions(e.violations(), "operators[0].technology", "unknown value"));
        }
    }
    SUBCASE("invariants are checked after parsing")
    {
        auto j = to_json(default_scenario());
        j["service_classes"][0]["qos_weights"] = {0.5, 0.5, 0.5, 0.5};
        CHECK_THROWS_AS(scenario_from_json(j), ScenarioError);
    }
    SUBCASE("optional fields take their defaults")
    {
        auto j = to_json(default_scenario());
        for (auto &op : j["operators"])
        {
            op.erase("cs");
            op.erase("w_u");
            op.erase("w_op");
            op.erase("used_kbps");
        }
        j.erase("home_weights");
        j.erase("pricing");
        j.erase("snapshot_interval_s");
        CHECK(scenario_from_json(j) == default_scenario());
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "opsel/analytics.hpp"
#include "opsel/engine.hpp"

#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <set>

using namespace opsel;

namespace
{
    Scenario random_scenario(std::mt19937_64 &g)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Scenario s = default_scenario();
        for (auto &op : s.operators)
        {
            op.capacity_kbps = std::round(200.0 + 6000.0 * u(g));
            op.sp = 0.05 + u(g);
            op.cs = 0.05 + u(g);
            op.w_op = u(g);
        }
        s.mean_interarrival_s = 0.5 + 5.0 * u(g);
        s.mean_service_s = 20.0 + 400.0 * u(g);
        s.duration_s = 50.0 + 600.0 * u(g);
        s.cooperation = u(g) < 0.7;
        s.replications = 1;
        return s;
    }

    struct Trace
    {
        std::vector<TraceRecord> records;
        std::vector<std::vector<OperatorNetwork>> states;

        TraceObserver observer()
        {
            return [this](const TraceRecord &r) {
                records.push_back(r);
                states.emplace_back(r.networks.begin(), r.networks.end());
            };
        }
    };
} // namespace

TEST_CASE("event queue ordering")
{
    std::priority_queue<Event, std::vector<Event>, EventLater> q;
    q.push(Event{5.0, 0, ArrivalPayload{}});
    q.push(Event{5.0, 1, Session{}});
    q.push(Event{1.0, 2, ArrivalPayload{}});
    q.push(Event{5.0, 3, ArrivalPayload{}});
    q.push(Event{5.0, 4, Session{}});

    std::vector<std::pair<double, std::uint64_t>> order;
    while (!q.empty())
    {
        order.emplace_back(q.top().time_s, q.top().seq);
        q.pop();
    }
    const std::vector<std::pair<double, std::uint64_t>> expected{{1.0, 2}, {5.0, 1}, {5.0, 4}, {5.0, 0}, {5.0, 3}};
    CHECK(order == expected);
}

TEST_CASE("arrival generation statistics over twenty replications")
{
    const Scenario s = default_scenario();
    std::uint64_t arrivals = 0;
    double gap_sum = 0.0;
    std::map<std::pair<ServiceKind, double>, std::uint64_t> profiles;
    std::vector<std::uint64_t> homes(3, 0);

    for (std::uint64_t i = 0; i < 20; ++i)
    {
        RngStreams streams{s.base_seed + i};
        double clock = 0.0;
        for (std::uint64_t user = 0;; ++user)
        {
            const auto d = generate_arrival(clock, s, streams, user);
            if (d.time_s > s.duration_s)
                break;
            CHECK(d.time_s > clock);
            CHECK(d.service_s > 0.0);
            CHECK(d.request.user_id == user);
            CHECK(d.request.price_paid == s.operators[d.request.home_op].sp);
            gap_sum += d.time_s - clock;
            clock = d.time_s;
            ++arrivals;
            ++profiles[{d.request.service_class.kind, d.request.prefs.w_qos}];
            ++homes[d.request.home_op];
        }
    }

    const double n = static_cast<double>(arrivals);
    // Poisson count with mean 480 per run: 3 sigma of the 20-run mean.
    CHECK(std::abs(n / 20.0 - 480.0) < 3.0 * std::sqrt(480.0 / 20.0));
    CHECK(std::abs(gap_sum / n - 2.5) < 0.05 * 2.5);

    REQUIRE(profiles.size() == 4);
    const double se4 = std::sqrt(0.25 * 0.75 / n);
    for (const auto &[key, count] : profiles)
        CHECK(std::abs(static_cast<double>(count) / n - 0.25) < 4.0 * se4);
    const double se3 = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / n);
    for (auto count : homes)
        CHECK(std::abs(static_cast<double>(count) / n - 1.0 / 3.0) < 4.0 * se3);
}

TEST_CASE("home weights steer the home draw")
{
    Scenario s = default_scenario();
    s.home_weights = {0.0, 1.0, 0.0};
    RngStreams streams{42};
    for (int i = 0; i < 200; ++i)
        CHECK(generate_arrival(0.0, s, streams, 0).request.home_op == 1);
}

TEST_CASE("degenerate scenarios")
{
    SUBCASE("zero duration generates nothing")
    {
        Scenario s = default_scenario();
        s.duration_s = 0.0;
        const auto m = run_replication(s, 1);
        CHECK(m.global().arrivals == 0);
    }
    SUBCASE("zero capacity everywhere blocks every arrival")
    {
        Scenario s = default_scenario();
        for (auto &op : s.operators)
            op.capacity_kbps = 0.0;
        const auto m = run_replication(s, 1);
        CHECK(m.global().arrivals > 0);
        CHECK(m.global().blocked == m.global().arrivals);
    }
    SUBCASE("a single slot blocks the overlapping second arrival")
    {
        Scenario s = default_scenario();
        s.operators.resize(1);
        s.operators[0].technology = Technology::WLAN;
        s.operators[0].capacity_kbps = s.demand.rate(ServiceKind::Conversational, Technology::WLAN);
        s.profile_mix = {{ServiceKind::Conversational, UserPreferences::high_qos(), 1.0}};
        s.mean_interarrival_s = 1.0;
        s.mean_service_s = 1e7;
        s.duration_s = 20.0;
        REQUIRE(validate_scenario(s).empty());

        for (bool coop : {false, true})
        {
            s.cooperation = coop;
            Trace t;
            const auto m = run_replication(s, 9, t.observer());
            std::vector<Outcome> arrivals;
            for (const auto &r : t.records)
                if (r.kind == EventKind::Arrival)
                    arrivals.push_back(r.outcome);
            REQUIRE(arrivals.size() >= 2);
            CHECK(arrivals[0] == Outcome::ServedHome);
            CHECK(arrivals[1] == Outcome::Blocked);
            CHECK(m.per_operator[0].served_home == 1);
            CHECK(m.final_used_kbps[0] == 0.0);
            // The one session runs far past the horizon and is billed for 20 s at most.
            const double max_volume = s.operators[0].capacity_kbps * s.duration_s / 8.0;
            CHECK(m.ledgers[0].income_own.units() <= s.operators[0].sp * max_volume + 1e-6);
        }
    }
}

TEST_CASE("property: capacity conservation and event ordering")
{
    std::mt19937_64 g{2024};
    for (int i = 0; i < 60; ++i)
    {
        const Scenario s = random_scenario(g);
        REQUIRE(validate_scenario(s).empty());
        Trace t;
        const auto m = run_replication(s, g(), t.observer());

        for (std::size_t k = 0; k < t.records.size(); ++k)
        {
            for (const auto &net : t.states[k])
            {
                CHECK(net.used_kbps >= 0.0);
                CHECK(net.used_kbps <= net.capacity_kbps);
            }
            if (k > 0)
            {
                const auto &prev = t.records[k - 1];
                const auto &cur = t.records[k];
                CHECK(prev.time_s <= cur.time_s);
                if (prev.time_s == cur.time_s)
                    CHECK_FALSE((prev.kind == EventKind::Arrival && cur.kind == EventKind::Departure));
            }
        }
        for (double used : m.final_used_kbps)
            CHECK(used == 0.0);
        CHECK(counts_conserved(m));
        CHECK(payments_balance(m));

        std::uint64_t departures = 0;
        for (const auto &r : t.records)
            departures += r.kind == EventKind::Departure;
        const auto gl = m.global();
        CHECK(departures == gl.served_home + gl.served_transferred);
    }
}

TEST_CASE("property: a replication is a pure function of scenario and seed")
{
    std::mt19937_64 g{77};
    for (int i = 0; i < 20; ++i)
    {
        const Scenario s = random_scenario(g);
        const std::uint64_t seed = g();
        CHECK(run_replication(s, seed) == run_replication(s, seed));
    }
}

TEST_CASE("experiments")
{
    Scenario s = default_scenario();
    SUBCASE("results do not depend on the worker count")
    {
        s.replications = 7;
        const auto a = run_experiment(s, 1);
        const auto b = run_experiment(s, 3);
        const auto c = run_experiment(s, 16);
        CHECK(a == b);
        CHECK(a == c);
        for (std::size_t i = 0; i < a.replications.size(); ++i)
            CHECK(a.replications[i].seed == s.base_seed + i);
    }
    SUBCASE("a single replication has zero spread")
    {
        s.replications = 1;
        const auto r = run_experiment(s);
        const auto &rep = r.replications.front();
        for (const auto &name : metric_names())
        {
            INFO(name);
            CHECK(r.global().at(name).mean == metric_value(rep, std::nullopt, name));
            CHECK(r.global().at(name).stddev == 0.0);
        }
    }
    SUBCASE("cooperation lowers mean global blocking at every reference load")
    {
        for (double load : default_sweep())
        {
            s.mean_interarrival_s = load;
            s.cooperation = false;
            const double off = run_experiment(s).global().at("blocking_probability").mean;
            s.cooperation = true;
            const double on = run_experiment(s).global().at("blocking_probability").mean;
            CHECK(on < off);
        }
    }
}

TEST_CASE("common random numbers: both policies see the same arrivals")
{
    Scenario s = default_scenario();
    std::vector<std::tuple<double, std::uint64_t, OperatorId>> seen[2];
    for (bool coop : {false, true})
    {
        s.cooperation = coop;
        run_replication(s, 5, [&](const TraceRecord &r) {
            if (r.kind == EventKind::Arrival)
                seen[coop].emplace_back(r.time_s, r.user_id, r.home_op);
        });
    }
    CHECK(seen[0] == seen[1]);
    CHECK(!seen[0].empty());
}

// Cooperation can displace a user: a guest admitted earlier may still hold the
// capacity that user's home operator would otherwise have had free. The served
// set without cooperation is therefore not always a subset of the set with it,
// but every exception must be blocked at a home operator hosting guests, and
// the blocked count never rises.
TEST_CASE("property: cooperation only displaces users through guest occupancy")
{
    std::uint64_t displaced = 0;
    for (double load : default_sweep())
        for (std::uint64_t seed = 1; seed <= 50; ++seed)
        {
            Scenario s = default_scenario();
            s.mean_interarrival_s = load;
            std::set<std::uint64_t> served_off;
            std::map<std::uint64_t, bool> blocked_on; // user -> home hosted guests at that instant
            std::uint64_t blocked[2] = {0, 0};

            for (bool coop : {false, true})
            {
                s.cooperation = coop;
                std::vector<int> guests(s.operators.size(), 0);
                std::map<std::uint64_t, OperatorId> live_guests;
                run_replication(s, seed, [&](const TraceRecord &r) {
                    if (r.kind == EventKind::Departure)
                    {
                        if (auto it = live_guests.find(r.user_id); it != live_guests.end())
                        {
                            --guests[it->second];
                            live_guests.erase(it);
                        }
                        return;
                    }
                    if (r.outcome == Outcome::Blocked)
                    {
                        ++blocked[coop];
                        if (coop)
                            blocked_on[r.user_id] = guests[r.home_op] > 0;
                        return;
                    }
                    if (!coop)
                        served_off.insert(r.user_id);
                    if (r.outcome == Outcome::ServedTransfer)
                    {
                        ++guests[*r.serving_op];
                        live_guests[r.user_id] = *r.serving_op;
                    }
                });
            }

            INFO("load " << load << " seed " << seed);
            CHECK(blocked[1] <= blocked[0]);
            for (auto user : served_off)
                if (auto it = blocked_on.find(user); it != blocked_on.end())
                {
                    ++displaced;
                    CHECK(it->second);
                }
        }
    // The exceptions are real; this guards against the test going vacuous.
    CHECK(displaced > 0);
}

#include "opsel/engine.hpp"

#include "opsel/analytics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <queue>
#include <thread>

namespace opsel
{
    namespace
    {
        enum class Stream : std::uint32_t
        {
            Interarrival = 1,
            Service = 2,
            Profile = 3,
            Home = 4,
        };

        std::mt19937_64 make_stream(std::uint64_t seed, Stream s)
        {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(s)};
            return std::mt19937_64{seq};
        }

        // Bandwidth is tracked in integer bit/s so that allocations and releases
        // cancel exactly.
        std::int64_t to_bps(double kbps) noexcept
        {
            return std::llround(kbps * 1000.0);
        }

        class World
        {
        public:
            explicit World(const Scenario &s) : networks_(s.operators)
            {
                used_bps_.reserve(networks_.size());
                for (auto &n : networks_)
                    used_bps_.push_back(to_bps(n.used_kbps));
            }

            std::span<const OperatorNetwork> networks() const noexcept { return networks_; }

            void allocate(OperatorId op, double rate_kbps)
            {
                used_bps_[op] += to_bps(rate_kbps);
                sync(op);
                if (networks_[op].used_kbps > networks_[op].capacity_kbps)
                    throw EngineInvariantError("allocation exceeded capacity of " + networks_[op].name);
            }

            void release(OperatorId op, double rate_kbps)
            {
                const auto bps = to_bps(rate_kbps);
                if (used_bps_[op] < bps)
                    throw EngineInvariantError("release would drive load negative on " + networks_[op].name);
                used_bps_[op] -= bps;
                sync(op);
            }

        private:
            void sync(OperatorId op) noexcept
            {
                networks_[op].used_kbps = static_cast<double>(used_bps_[op]) / 1000.0;
            }

            std::vector<OperatorNetwork> networks_;
            std::vector<std::int64_t> used_bps_;
        };
    } // namespace

    bool EventLater::operator()(const Event &a, const Event &b) const noexcept
    {
        if (a.time_s != b.time_s)
            return a.time_s > b.time_s;
        if (a.kind() != b.kind())
            return a.kind() > b.kind();
        return a.seq > b.seq;
    }

    RngStreams::RngStreams(std::uint64_t seed)
        : interarrival_(make_stream(seed, Stream::Interarrival)), service_(make_stream(seed, Stream::Service)),
          profile_(make_stream(seed, Stream::Profile)), home_(make_stream(seed, Stream::Home))
    {
    }

    double RngStreams::open_unit(std::mt19937_64 &g) noexcept
    {
        // 53 random bits, shifted half a step off zero: strictly inside (0, 1).
        return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
    }

    double RngStreams::exponential(std::mt19937_64 &g, double mean) noexcept
    {
        return -mean * std::log(open_unit(g));
    }

    std::size_t RngStreams::categorical(std::mt19937_64 &g, std::span<const double> weights) noexcept
    {
        double total = 0.0;
        for (double w : weights)
            total += w;
        const double target = open_unit(g) * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
        {
            acc += weights[i];
            if (target < acc)
                return i;
        }
        // Rounding can leave target at the very top; pick the last non-empty bucket.
        for (std::size_t i = weights.size(); i-- > 0;)
            if (weights[i] > 0.0)
                return i;
        return 0;
    }

    double RngStreams::interarrival(double mean) { return exponential(interarrival_, mean); }

    double RngStreams::service_time(double mean) { return exponential(service_, mean); }

    std::size_t RngStreams::profile(std::span<const ProfileShare> mix)
    {
        std::vector<double> w;
        w.reserve(mix.size());
        for (const auto &p : mix)
            w.push_back(p.probability);
        return categorical(profile_, w);
    }

    OperatorId RngStreams::home(std::size_t operators, std::span<const double> weights)
    {
        if (weights.empty())
        {
            const auto idx = static_cast<std::size_t>(open_unit(home_) * static_cast<double>(operators));
            return std::min(idx, operators - 1);
        }
        return categorical(home_, weights);
    }

    ArrivalDraw generate_arrival(double clock, const Scenario &scenario, RngStreams &streams, std::uint64_t user_id)
    {
        ArrivalDraw d;
        d.time_s = clock + streams.interarrival(scenario.mean_interarrival_s);
        const OperatorId home = streams.home(scenario.operators.size(), scenario.home_weights);
        const ProfileShare &profile = scenario.profile_mix[streams.profile(scenario.profile_mix)];
        d.service_s = streams.service_time(scenario.mean_service_s);

        d.request.user_id = user_id;
        d.request.home_op = home;
        d.request.service_class = scenario.find_class(profile.kind)->service_class;
        d.request.prefs = profile.prefs;
        d.request.price_paid = scenario.operators[home].sp;
        return d;
    }

    ReplicationMetrics run_replication(const Scenario &scenario, std::uint64_t seed, const TraceObserver &observer)
    {
        const std::size_t n = scenario.operators.size();
        const double horizon = scenario.duration_s;

        ReplicationMetrics m;
        m.seed = seed;
        m.per_operator.assign(n, {});
        m.ledgers.assign(n, {});
        m.exchange = ExchangeMatrix{n};

        World world{scenario};
        RngStreams streams{seed};
        std::priority_queue<Event, std::vector<Event>, EventLater> queue;
        std::uint64_t seq = 0;
        std::uint64_t next_user = 0;
        double last_arrival = 0.0;

        auto schedule_arrival = [&](double clock) {
            if (n == 0 || scenario.profile_mix.empty())
                return;
            ArrivalDraw d = generate_arrival(clock, scenario, streams, next_user++);
            if (d.time_s <= horizon)
                queue.push(Event{d.time_s, seq++, ArrivalPayload{d.request, d.service_s}});
        };

        const bool snapshots = scenario.snapshot_interval_s > 0.0;
        double next_snapshot = snapshots ? scenario.snapshot_interval_s : horizon + 1.0;
        auto take_snapshots_until = [&](double t) {
            while (snapshots && next_snapshot <= horizon && next_snapshot < t)
            {
                const auto g = m.global();
                m.snapshots.push_back({next_snapshot, g.arrivals, g.blocked});
                next_snapshot += scenario.snapshot_interval_s;
            }
        };

        schedule_arrival(0.0);

        while (!queue.empty())
        {
            Event ev = queue.top();
            queue.pop();
            take_snapshots_until(ev.time_s);

            TraceRecord rec;
            rec.time_s = ev.time_s;

            if (auto *arrival = std::get_if<ArrivalPayload>(&ev.payload))
            {
                const ServiceRequest &req = arrival->request;
                auto &home_counts = m.per_operator[req.home_op];
                ++home_counts.arrivals;
                m.interarrival_sum_s += ev.time_s - last_arrival;
                last_arrival = ev.time_s;

                const AdmissionDecision decision = admit(req, world.networks(), scenario, scenario.cooperation);
                rec.kind = EventKind::Arrival;
                rec.user_id = req.user_id;
                rec.home_op = req.home_op;
                rec.service = req.service_class.kind;
                rec.outcome = decision.outcome;
                rec.serving_op = decision.serving_op;

                if (decision.outcome == Outcome::Blocked)
                {
                    ++home_counts.blocked;
                }
                else
                {
                    const OperatorId serving = *decision.serving_op;
                    const double rate =
                        scenario.demand.rate(req.service_class.kind, scenario.operators[serving].technology);
                    world.allocate(serving, rate);
                    Session session{req, serving, rate, ev.time_s, arrival->service_s};
                    if (decision.outcome == Outcome::ServedHome)
                    {
                        ++home_counts.served_home;
                    }
                    else
                    {
                        ++home_counts.served_transferred;
                        ++m.per_operator[serving].guests_served;
                        m.exchange.add(req.home_op, serving, req.service_class.kind);
                    }
                    queue.push(Event{ev.time_s + session.duration_s, seq++, std::move(session)});
                }
                schedule_arrival(ev.time_s);
            }
            else
            {
                const Session &session = std::get<Session>(ev.payload);
                world.release(session.serving_op, session.rate_kbps);
                accrue(session, scenario.operators, scenario.pricing, horizon, m.ledgers);
                rec.kind = EventKind::Departure;
                rec.user_id = session.request.user_id;
                rec.home_op = session.request.home_op;
                rec.service = session.request.service_class.kind;
                rec.outcome = session.transferred() ? Outcome::ServedTransfer : Outcome::ServedHome;
                rec.serving_op = session.serving_op;
            }

            if (observer)
            {
                rec.networks = world.networks();
                observer(rec);
            }
        }
        take_snapshots_until(std::numeric_limits<double>::infinity());

        for (const auto &net : world.networks())
            m.final_used_kbps.push_back(net.used_kbps);
        return m;
    }

    MetricsReport run_experiment(const Scenario &scenario, unsigned threads)
    {
        MetricsReport report;
        report.mean_interarrival_s = scenario.mean_interarrival_s;
        report.cooperation = scenario.cooperation;
        for (const auto &op : scenario.operators)
            report.operator_names.push_back(op.name);

        const std::size_t reps = scenario.replications;
        report.replications.resize(reps);

        if (threads == 0)
            threads = std::max(1u, std::thread::hardware_concurrency());
        threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t i = next++; i < reps; i = next++)
            {
                try
                {
                    report.replications[i] = run_replication(scenario, scenario.base_seed + i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        };

        if (threads <= 1)
        {
            worker();
        }
        else
        {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back(worker);
        }
        if (failure)
            std::rethrow_exception(failure);

        aggregate(report);
        return report;
    }
} // namespace opsel

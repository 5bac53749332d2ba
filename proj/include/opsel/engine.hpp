#pragma once

#include "opsel/metrics.hpp"
#include "opsel/model.hpp"
#include "opsel/selection.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <variant>

namespace opsel
{
    // Departures sort before arrivals at equal times so capacity is freed first.
    enum class EventKind : std::uint8_t
    {
        Departure = 0,
        Arrival = 1,
    };

    struct ArrivalPayload
    {
        ServiceRequest request;
        double service_s = 0.0; // drawn at arrival so both admission policies see the same value
    };

    struct Event
    {
        double time_s = 0.0;
        std::uint64_t seq = 0; // insertion order, last tie-breaker
        std::variant<ArrivalPayload, Session> payload;

        EventKind kind() const noexcept
        {
            return std::holds_alternative<Session>(payload) ? EventKind::Departure : EventKind::Arrival;
        }
    };

    /// Min-heap ordering on (time, kind, seq).
    struct EventLater
    {
        bool operator()(const Event &a, const Event &b) const noexcept;
    };

    /// Independent substreams, one per random quantity, so that changing how
    /// arrivals are handled never shifts later draws.
    class RngStreams
    {
    public:
        explicit RngStreams(std::uint64_t seed);

        double interarrival(double mean);
        double service_time(double mean);
        std::size_t profile(std::span<const ProfileShare> mix);
        OperatorId home(std::size_t operators, std::span<const double> weights);

    private:
        static double open_unit(std::mt19937_64 &g) noexcept;
        static double exponential(std::mt19937_64 &g, double mean) noexcept;
        static std::size_t categorical(std::mt19937_64 &g, std::span<const double> weights) noexcept;

        std::mt19937_64 interarrival_;
        std::mt19937_64 service_;
        std::mt19937_64 profile_;
        std::mt19937_64 home_;
    };

    struct ArrivalDraw
    {
        double time_s = 0.0;
        ServiceRequest request;
        double service_s = 0.0;
    };

    /// Next arrival after `clock`: exponential gap, home operator from
    /// home_weights (uniform if empty), class and preferences from profile_mix,
    /// price paid = the home operator's advertised price.
    ArrivalDraw generate_arrival(double clock, const Scenario &scenario, RngStreams &streams, std::uint64_t user_id);

    struct TraceRecord
    {
        double time_s = 0.0;
        EventKind kind = EventKind::Arrival;
        std::uint64_t user_id = 0;
        OperatorId home_op = 0;
        ServiceKind service = ServiceKind::Conversational;
        Outcome outcome = Outcome::Blocked;  // arrivals only
        std::optional<OperatorId> serving_op; // empty for a blocked arrival
        std::span<const OperatorNetwork> networks; // state after the event
    };

    using TraceObserver = std::function<void(const TraceRecord &)>;

    /// Thrown when the engine detects a violation of its own bookkeeping.
    class EngineInvariantError : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    /// One replication up to the horizon, then drains in-flight sessions.
    /// Revenue accrues at departure; volume is truncated at the horizon.
    /// `scenario` is assumed valid.
    ReplicationMetrics run_replication(const Scenario &scenario, std::uint64_t seed,
                                       const TraceObserver &observer = {});

    /// Replications seeded base_seed + index, run on up to `threads` workers
    /// (0 = hardware concurrency). Output does not depend on the thread count.
    MetricsReport run_experiment(const Scenario &scenario, unsigned threads = 0);
} // namespace opsel

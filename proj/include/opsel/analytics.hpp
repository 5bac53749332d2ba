#pragma once

#include "opsel/metrics.hpp"
#include "opsel/model.hpp"

#include <span>
#include <vector>

namespace opsel
{
    /// kBytes carried up to the horizon (volume pricing) or 1 (flat pricing).
    double billable_volume(const Session &session, PricingMode pricing, double horizon_s);

    /// Books one finished or truncated session. The home operator bills its
    /// client p per unit; a transfer additionally costs the home operator the
    /// serving operator's cs per unit, which the serving operator receives.
    void accrue(const Session &session, std::span<const OperatorNetwork> operators, PricingMode pricing,
                double horizon_s, std::span<OperatorLedger> ledgers);

    /// Counts transferred sessions only.
    ExchangeMatrix exchange_matrix(std::span<const Session> sessions, std::size_t operators);

    struct BlockingEstimate
    {
        Stat stat;
        double ci95_half_width = 0.0; // Student t; 0 with a single replication
    };

    struct BlockingStats
    {
        double mean_interarrival_s = 0.0;
        BlockingEstimate global;
        std::vector<BlockingEstimate> per_operator; // by home operator
    };

    BlockingStats blocking_stats(const MetricsReport &report);

    struct ScopeDelta
    {
        std::string scope;
        Stat blocking_off, blocking_on;
        Stat profit_off, profit_on;
        Stat served_off, served_on;

        double blocking_delta() const noexcept { return blocking_on.mean - blocking_off.mean; }
        double profit_delta() const noexcept { return profit_on.mean - profit_off.mean; }
        double served_delta() const noexcept { return served_on.mean - served_off.mean; }
    };

    struct CooperationComparison
    {
        double mean_interarrival_s = 0.0;
        MetricsReport off;
        MetricsReport on;
        std::vector<ScopeDelta> deltas; // global first, then operators
    };

    /// Runs both admission policies over the same seeds for every load in
    /// `sweep` (the scenario's own load if empty).
    std::vector<CooperationComparison> compare_cooperation(const Scenario &scenario, std::span<const double> sweep = {},
                                                           unsigned threads = 0);

    /// Sum of payments made equals sum of payments received, exactly.
    bool payments_balance(const ReplicationMetrics &r) noexcept;

    /// arrivals = blocked + served_home + served_transferred for every scope,
    /// and each exchange row total matches the operator's transferred count.
    bool counts_conserved(const ReplicationMetrics &r);
} // namespace opsel

#pragma once

#include "opsel/model.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace opsel
{
    /// Price units held as integer micro-units so that sums of payments are
    /// exact and independent of accumulation order.
    class Money
    {
    public:
        static constexpr std::int64_t kMicrosPerUnit = 1'000'000;

        constexpr Money() noexcept = default;
        static Money from_units(double units) noexcept
        {
            return Money{static_cast<std::int64_t>(std::llround(units * static_cast<double>(kMicrosPerUnit)))};
        }
        static constexpr Money from_micros(std::int64_t micros) noexcept { return Money{micros}; }

        constexpr std::int64_t micros() const noexcept { return micros_; }
        constexpr double units() const noexcept
        {
            return static_cast<double>(micros_) / static_cast<double>(kMicrosPerUnit);
        }

        constexpr Money &operator+=(Money o) noexcept
        {
            micros_ += o.micros_;
            return *this;
        }
        constexpr Money &operator-=(Money o) noexcept
        {
            micros_ -= o.micros_;
            return *this;
        }
        friend constexpr Money operator+(Money a, Money b) noexcept { return a += b; }
        friend constexpr Money operator-(Money a, Money b) noexcept { return a -= b; }
        friend constexpr auto operator<=>(Money, Money) noexcept = default;

    private:
        constexpr explicit Money(std::int64_t m) noexcept : micros_(m) {}
        std::int64_t micros_ = 0;
    };

    /// Counts for one scope. Arrivals and blocks are attributed to the user's
    /// home operator; guests_served counts sessions hosted for other operators.
    struct OperatorCounts
    {
        std::uint64_t arrivals = 0;
        std::uint64_t blocked = 0;
        std::uint64_t served_home = 0;
        std::uint64_t served_transferred = 0;
        std::uint64_t guests_served = 0;

        double blocking_probability() const noexcept
        {
            return arrivals == 0 ? 0.0 : static_cast<double>(blocked) / static_cast<double>(arrivals);
        }
        OperatorCounts &operator+=(const OperatorCounts &o) noexcept;
        bool operator==(const OperatorCounts &) const = default;
    };

    struct OperatorLedger
    {
        Money income_own;         // own clients served at home
        Money income_transferred; // own clients served elsewhere, still billed by the home operator
        Money income_guests;      // received from other operators for hosting their clients
        Money cost_paid;          // paid to other operators for hosting own clients

        Money profit() const noexcept { return income_own + income_transferred + income_guests - cost_paid; }
        bool operator==(const OperatorLedger &) const = default;
    };

    /// Transferred-session counts indexed by (home operator, serving operator, class).
    class ExchangeMatrix
    {
    public:
        ExchangeMatrix() = default;
        explicit ExchangeMatrix(std::size_t operators);

        std::size_t operators() const noexcept { return n_; }
        void add(OperatorId from, OperatorId to, ServiceKind kind, std::uint64_t count = 1);
        std::uint64_t count(OperatorId from, OperatorId to, ServiceKind kind) const;
        std::uint64_t row_total(OperatorId from, ServiceKind kind) const;
        /// All transfers out of `from`, both classes.
        std::uint64_t transferred_from(OperatorId from) const;
        /// Share of the (from, kind) row going to `to`; nullopt on the diagonal or an empty row.
        std::optional<double> row_share(OperatorId from, OperatorId to, ServiceKind kind) const;

        ExchangeMatrix &operator+=(const ExchangeMatrix &o);
        bool operator==(const ExchangeMatrix &) const = default;

    private:
        std::size_t slot(OperatorId from, OperatorId to, ServiceKind kind) const;
        std::size_t n_ = 0;
        std::vector<std::uint64_t> counts_;
    };

    struct Snapshot
    {
        double time_s = 0.0;
        std::uint64_t arrivals = 0;
        std::uint64_t blocked = 0;
        bool operator==(const Snapshot &) const = default;
    };

    /// Raw output of one replication.
    struct ReplicationMetrics
    {
        std::uint64_t seed = 0;
        std::vector<OperatorCounts> per_operator;
        ExchangeMatrix exchange;
        std::vector<OperatorLedger> ledgers;
        std::vector<Snapshot> snapshots;
        // Sum of the inter-arrival gaps of the admitted arrival process.
        double interarrival_sum_s = 0.0;
        // used_kbps of each operator once every departure has been processed.
        std::vector<double> final_used_kbps;

        OperatorCounts global() const noexcept;
        bool operator==(const ReplicationMetrics &) const = default;
    };

    struct Stat
    {
        double mean = 0.0;
        double stddev = 0.0; // sample standard deviation; 0 for a single value
        bool operator==(const Stat &) const = default;
    };

    Stat summarize(const std::vector<double> &values);

    struct MetricStat
    {
        std::string metric;
        Stat stat;
        bool operator==(const MetricStat &) const = default;
    };

    /// Aggregates for one scope: "global" or an operator name.
    struct ScopeSummary
    {
        std::string scope;
        std::vector<MetricStat> metrics;

        const Stat &at(std::string_view metric) const;
        bool operator==(const ScopeSummary &) const = default;
    };

    struct MetricsReport
    {
        double mean_interarrival_s = 0.0;
        bool cooperation = true;
        std::vector<std::string> operator_names;
        std::vector<ReplicationMetrics> replications;
        std::vector<ScopeSummary> summary; // global first, then operators in id order
        ExchangeMatrix exchange_total;     // summed over replications

        const ScopeSummary &global() const { return summary.front(); }
        const ScopeSummary &op(OperatorId id) const { return summary.at(id + 1); }
        bool operator==(const MetricsReport &) const = default;
    };

    /// Metric names in the order they appear in summaries and CSV output.
    const std::vector<std::string> &metric_names();

    /// Value of metric `name` for `scope` (nullopt = global) in one replication.
    double metric_value(const ReplicationMetrics &r, std::optional<OperatorId> scope, std::string_view name);

    /// Fills summary and exchange_total from replications.
    void aggregate(MetricsReport &report);
} // namespace opsel

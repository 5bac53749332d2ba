#include "opsel/metrics.hpp"

#include <numeric>
#include <stdexcept>

namespace opsel
{
    OperatorCounts &OperatorCounts::operator+=(const OperatorCounts &o) noexcept
    {
        arrivals += o.arrivals;
        blocked += o.blocked;
        served_home += o.served_home;
        served_transferred += o.served_transferred;
        guests_served += o.guests_served;
        return *this;
    }

    ExchangeMatrix::ExchangeMatrix(std::size_t operators)
        : n_(operators), counts_(operators * operators * kServiceKindCount, 0)
    {
    }

    std::size_t ExchangeMatrix::slot(OperatorId from, OperatorId to, ServiceKind kind) const
    {
        if (from >= n_ || to >= n_)
            throw std::out_of_range("ExchangeMatrix: operator id out of range");
        return (from * n_ + to) * kServiceKindCount + index_of(kind);
    }

    void ExchangeMatrix::add(OperatorId from, OperatorId to, ServiceKind kind, std::uint64_t count)
    {
        if (from == to)
            throw std::invalid_argument("ExchangeMatrix: a transfer cannot stay at home");
        counts_[slot(from, to, kind)] += count;
    }

    std::uint64_t ExchangeMatrix::count(OperatorId from, OperatorId to, ServiceKind kind) const
    {
        return counts_[slot(from, to, kind)];
    }

    std::uint64_t ExchangeMatrix::row_total(OperatorId from, ServiceKind kind) const
    {
        std::uint64_t total = 0;
        for (OperatorId to = 0; to < n_; ++to)
            total += count(from, to, kind);
        return total;
    }

    std::uint64_t ExchangeMatrix::transferred_from(OperatorId from) const
    {
        std::uint64_t total = 0;
        for (auto kind : kAllServiceKinds)
            total += row_total(from, kind);
        return total;
    }

    std::optional<double> ExchangeMatrix::row_share(OperatorId from, OperatorId to, ServiceKind kind) const
    {
        if (from == to)
            return std::nullopt;
        const auto total = row_total(from, kind);
        if (total == 0)
            return std::nullopt;
        return static_cast<double>(count(from, to, kind)) / static_cast<double>(total);
    }

    ExchangeMatrix &ExchangeMatrix::operator+=(const ExchangeMatrix &o)
    {
        if (n_ == 0 && counts_.empty())
        {
            *this = o;
            return *this;
        }
        if (o.n_ != n_)
            throw std::invalid_argument("ExchangeMatrix: size mismatch");
        for (std::size_t i = 0; i < counts_.size(); ++i)
            counts_[i] += o.counts_[i];
        return *this;
    }

    OperatorCounts ReplicationMetrics::global() const noexcept
    {
        OperatorCounts total;
        for (const auto &c : per_operator)
            total += c;
        return total;
    }

    Stat summarize(const std::vector<double> &values)
    {
        if (values.empty())
            return {};
        const double n = static_cast<double>(values.size());
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
        if (values.size() == 1)
            return {mean, 0.0};
        double ss = 0.0;
        for (double v : values)
            ss += (v - mean) * (v - mean);
        return {mean, std::sqrt(ss / (n - 1.0))};
    }

    const Stat &ScopeSummary::at(std::string_view metric) const
    {
        for (const auto &m : metrics)
            if (m.metric == metric)
                return m.stat;
        throw std::out_of_range("no metric " + std::string(metric) + " in scope " + scope);
    }

    const std::vector<std::string> &metric_names()
    {
        static const std::vector<std::string> names{
            "arrivals",      "blocked",           "served_home",   "served_transferred",
            "guests_served", "blocking_probability", "income_own", "income_transferred",
            "income_guests", "cost_paid",         "profit",
        };
        return names;
    }

    double metric_value(const ReplicationMetrics &r, std::optional<OperatorId> scope, std::string_view name)
    {
        const OperatorCounts c = scope ? r.per_operator.at(*scope) : r.global();
        OperatorLedger l;
        if (scope)
            l = r.ledgers.at(*scope);
        else
            for (const auto &x : r.ledgers)
            {
                l.income_own += x.income_own;
                l.income_transferred += x.income_transferred;
                l.income_guests += x.income_guests;
                l.cost_paid += x.cost_paid;
            }

        if (name == "arrivals")
            return static_cast<double>(c.arrivals);
        if (name == "blocked")
            return static_cast<double>(c.blocked);
        if (name == "served_home")
            return static_cast<double>(c.served_home);
        if (name == "served_transferred")
            return static_cast<double>(c.served_transferred);
        if (name == "guests_served")
            return static_cast<double>(c.guests_served);
        if (name == "blocking_probability")
            return c.blocking_probability();
        if (name == "income_own")
            return l.income_own.units();
        if (name == "income_transferred")
            return l.income_transferred.units();
        if (name == "income_guests")
            return l.income_guests.units();
        if (name == "cost_paid")
            return l.cost_paid.units();
        if (name == "profit")
            return l.profit().units();
        throw std::out_of_range("unknown metric " + std::string(name));
    }

    void aggregate(MetricsReport &report)
    {
        report.summary.clear();
        report.exchange_total = ExchangeMatrix{report.operator_names.size()};
        for (const auto &r : report.replications)
            report.exchange_total += r.exchange;

        auto scope_summary = [&](std::optional<OperatorId> scope, std::string label) {
            ScopeSummary s{std::move(label), {}};
            for (const auto &name : metric_names())
            {
                std::vector<double> values;
                values.reserve(report.replications.size());
                for (const auto &r : report.replications)
                    values.push_back(metric_value(r, scope, name));
                s.metrics.push_back({name, summarize(values)});
            }
            return s;
        };

        report.summary.push_back(scope_summary(std::nullopt, "global"));
        for (OperatorId id = 0; id < report.operator_names.size(); ++id)
            report.summary.push_back(scope_summary(id, report.operator_names[id]));
    }
} // namespace opsel

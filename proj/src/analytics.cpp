#include "opsel/analytics.hpp"

#include "opsel/engine.hpp"

#include <algorithm>

#include <boost/math/distributions/students_t.hpp>

namespace opsel
{
    namespace
    {
        BlockingEstimate estimate(const MetricsReport &report, std::optional<OperatorId> scope)
        {
            std::vector<double> values;
            for (const auto &r : report.replications)
                values.push_back(metric_value(r, scope, "blocking_probability"));
            BlockingEstimate e{summarize(values), 0.0};
            if (values.size() > 1)
            {
                const double df = static_cast<double>(values.size() - 1);
                const boost::math::students_t dist(df);
                const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
                e.ci95_half_width = t * e.stat.stddev / std::sqrt(static_cast<double>(values.size()));
            }
            return e;
        }

        ScopeDelta delta(const MetricsReport &off, const MetricsReport &on, std::size_t scope_index)
        {
            const ScopeSummary &a = off.summary.at(scope_index);
            const ScopeSummary &b = on.summary.at(scope_index);
            ScopeDelta d;
            d.scope = a.scope;
            d.blocking_off = a.at("blocking_probability");
            d.blocking_on = b.at("blocking_probability");
            d.profit_off = a.at("profit");
            d.profit_on = b.at("profit");
            auto served = [](const ScopeSummary &s) {
                return Stat{s.at("served_home").mean + s.at("served_transferred").mean, 0.0};
            };
            d.served_off = served(a);
            d.served_on = served(b);
            return d;
        }
    } // namespace

    double billable_volume(const Session &session, PricingMode pricing, double horizon_s)
    {
        if (pricing == PricingMode::Flat)
            return 1.0;
        const double end = std::min(session.start_s + session.duration_s, horizon_s);
        const double effective = std::max(0.0, end - session.start_s);
        return session.rate_kbps * effective / 8.0;
    }

    void accrue(const Session &session, std::span<const OperatorNetwork> operators, PricingMode pricing,
                double horizon_s, std::span<OperatorLedger> ledgers)
    {
        const double volume = billable_volume(session, pricing, horizon_s);
        const OperatorId home = session.request.home_op;
        const Money billed = Money::from_units(session.request.price_paid * volume);
        if (!session.transferred())
        {
            ledgers[home].income_own += billed;
            return;
        }
        // One Money value books both sides so payments balance exactly.
        const Money charge = Money::from_units(operators[session.serving_op].cs * volume);
        ledgers[home].income_transferred += billed;
        ledgers[home].cost_paid += charge;
        ledgers[session.serving_op].income_guests += charge;
    }

    ExchangeMatrix exchange_matrix(std::span<const Session> sessions, std::size_t operators)
    {
        ExchangeMatrix m{operators};
        for (const auto &s : sessions)
            if (s.transferred())
                m.add(s.request.home_op, s.serving_op, s.request.service_class.kind);
        return m;
    }

    BlockingStats blocking_stats(const MetricsReport &report)
    {
        BlockingStats out;
        out.mean_interarrival_s = report.mean_interarrival_s;
        out.global = estimate(report, std::nullopt);
        for (OperatorId id = 0; id < report.operator_names.size(); ++id)
            out.per_operator.push_back(estimate(report, id));
        return out;
    }

    std::vector<CooperationComparison> compare_cooperation(const Scenario &scenario, std::span<const double> sweep,
                                                           unsigned threads)
    {
        std::vector<double> loads(sweep.begin(), sweep.end());
        if (loads.empty())
            loads.push_back(scenario.mean_interarrival_s);

        std::vector<CooperationComparison> out;
        for (double load : loads)
        {
            Scenario s = scenario;
            s.mean_interarrival_s = load;
            CooperationComparison c;
            c.mean_interarrival_s = load;
            s.cooperation = false;
            c.off = run_experiment(s, threads);
            s.cooperation = true;
            c.on = run_experiment(s, threads);
            for (std::size_t i = 0; i < c.off.summary.size(); ++i)
                c.deltas.push_back(delta(c.off, c.on, i));
            out.push_back(std::move(c));
        }
        return out;
    }

    bool payments_balance(const ReplicationMetrics &r) noexcept
    {
        Money paid, received;
        for (const auto &l : r.ledgers)
        {
            paid += l.cost_paid;
            received += l.income_guests;
        }
        return paid == received;
    }

    bool counts_conserved(const ReplicationMetrics &r)
    {
        auto balanced = [](const OperatorCounts &c) {
            return c.arrivals == c.blocked + c.served_home + c.served_transferred;
        };
        if (!balanced(r.global()))
            return false;
        std::uint64_t guests = 0;
        for (OperatorId id = 0; id < r.per_operator.size(); ++id)
        {
            const auto &c = r.per_operator[id];
            if (!balanced(c) || r.exchange.transferred_from(id) != c.served_transferred)
                return false;
            guests += c.guests_served;
        }
        return guests == r.global().served_transferred;
    }
} // namespace opsel

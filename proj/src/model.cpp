#include "opsel/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace opsel
{
    namespace
    {
        constexpr double kSumTolerance = 1e-9;

        std::string indexed(std::string_view base, std::size_t i, std::string_view leaf = {})
        {
            std::string out{base};
            out += '[';
            out += std::to_string(i);
            out += ']';
            if (!leaf.empty())
            {
                out += '.';
                out += leaf;
            }
            return out;
        }

        std::string num(double v)
        {
            std::ostringstream os;
            os.imbue(std::locale::classic());
            os << v;
            return os.str();
        }

        OperatorNetwork make_operator(OperatorId id, std::string name, Technology tech, double capacity,
                                      double jitter, double delay, double ber, double sp)
        {
            OperatorNetwork op;
            op.id = id;
            op.name = std::move(name);
            op.technology = tech;
            op.capacity_kbps = capacity;
            op.jitter_ms = jitter;
            op.delay_ms = delay;
            op.ber = ber;
            op.sp = sp;
            op.cs = sp;
            op.w_u = 1.0;
            op.w_op = 1.0;
            return op;
        }
    } // namespace

    std::string_view to_string(ServiceKind kind) noexcept
    {
        switch (kind)
        {
        case ServiceKind::Conversational:
            return "Conversational";
        case ServiceKind::Interactive:
            return "Interactive";
        }
        return "?";
    }

    std::string_view to_string(Technology tech) noexcept
    {
        switch (tech)
        {
        case Technology::UMTS:
            return "UMTS";
        case Technology::WLAN:
            return "WLAN";
        }
        return "?";
    }

    std::string_view to_string(PricingMode mode) noexcept
    {
        return mode == PricingMode::Flat ? "flat" : "volume";
    }

    std::optional<ServiceKind> parse_service_kind(std::string_view s) noexcept
    {
        for (auto k : kAllServiceKinds)
            if (to_string(k) == s)
                return k;
        return std::nullopt;
    }

    std::optional<Technology> parse_technology(std::string_view s) noexcept
    {
        for (auto t : kAllTechnologies)
            if (to_string(t) == s)
                return t;
        return std::nullopt;
    }

    std::optional<PricingMode> parse_pricing_mode(std::string_view s) noexcept
    {
        if (s == "volume")
            return PricingMode::Volume;
        if (s == "flat")
            return PricingMode::Flat;
        return std::nullopt;
    }

    ServiceClass ServiceClass::conversational() noexcept
    {
        return {ServiceKind::Conversational, {0.05, 0.45, 0.45, 0.05}};
    }

    ServiceClass ServiceClass::interactive() noexcept
    {
        return {ServiceKind::Interactive, {0.16, 0.04, 0.16, 0.64}};
    }

    void DemandTable::set(ServiceKind kind, Technology tech, double rate_kbps) noexcept
    {
        rates_[index_of(kind) * kTechnologyCount + index_of(tech)] = rate_kbps;
    }

    std::optional<double> DemandTable::find(ServiceKind kind, Technology tech) const noexcept
    {
        return rates_[index_of(kind) * kTechnologyCount + index_of(tech)];
    }

    double DemandTable::rate(ServiceKind kind, Technology tech) const
    {
        auto r = find(kind, tech);
        if (!r)
            throw std::out_of_range("no demand rate for " + std::string(to_string(kind)) + " on " +
                                    std::string(to_string(tech)));
        return *r;
    }

    DemandTable DemandTable::defaults()
    {
        DemandTable t;
        // Voice-rate conversational traffic everywhere; interactive traffic
        // costs twice that on UMTS and four times on WLAN.
        t.set(ServiceKind::Conversational, Technology::UMTS, 64.0);
        t.set(ServiceKind::Conversational, Technology::WLAN, 64.0);
        t.set(ServiceKind::Interactive, Technology::UMTS, 128.0);
        t.set(ServiceKind::Interactive, Technology::WLAN, 256.0);
        return t;
    }

    double Scenario::sp_max() const noexcept
    {
        double m = 0.0;
        for (const auto &op : operators)
            m = std::max(m, op.sp);
        return m;
    }

    const ServiceClassSpec *Scenario::find_class(ServiceKind kind) const noexcept
    {
        for (const auto &c : service_classes)
            if (c.service_class.kind == kind)
                return &c;
        return nullptr;
    }

    QoSRequirements Scenario::requirements(ServiceKind kind, Technology tech) const
    {
        const auto *spec = find_class(kind);
        if (spec == nullptr)
            throw std::out_of_range("no service class " + std::string(to_string(kind)));
        return {demand.rate(kind, tech), spec->jitter_req, spec->delay_req, spec->ber_req};
    }

    std::vector<double> default_sweep()
    {
        return {5.0 / 2.0, 25.0 / 9.0, 10.0 / 3.0, 5.0};
    }

    Scenario default_scenario()
    {
        Scenario s;
        s.operators = {
            make_operator(0, "Op1", Technology::UMTS, 1700.0, 6.0, 19.0, 1e-3, 0.9),
            make_operator(1, "Op2", Technology::WLAN, 11000.0, 10.0, 30.0, 1e-5, 0.1),
            make_operator(2, "Op3", Technology::WLAN, 5500.0, 10.0, 45.0, 1e-5, 0.2),
        };
        s.service_classes = {
            {ServiceClass::conversational(), 10.0, 100.0, 1e-3},
            {ServiceClass::interactive(), 20.0, 150.0, 1e-5},
        };
        s.demand = DemandTable::defaults();
        s.mean_interarrival_s = 2.5;
        s.mean_service_s = 240.0;
        s.duration_s = 1200.0;
        s.replications = 20;
        s.base_seed = 1;
        s.cooperation = true;
        for (auto kind : kAllServiceKinds)
            for (auto prefs : {UserPreferences::high_qos(), UserPreferences::high_price()})
                s.profile_mix.push_back({kind, prefs, 0.25});
        return s;
    }

    std::vector<Violation> validate_scenario(const Scenario &s)
    {
        std::vector<Violation> out;
        auto fail = [&out](std::string field, std::string message) {
            out.push_back({std::move(field), std::move(message)});
        };

        if (s.operators.empty())
            fail("operators", "empty operator list");

        for (std::size_t i = 0; i < s.operators.size(); ++i)
        {
            const auto &op = s.operators[i];
            if (op.id != i)
                fail(indexed("operators", i, "id"), "operator id must equal its position (" + std::to_string(i) + ")");
            if (!(op.capacity_kbps > 0.0) || !std::isfinite(op.capacity_kbps))
                fail(indexed("operators", i, "capacity_kbps"), "non-positive capacity: " + num(op.capacity_kbps));
            if (!(op.used_kbps >= 0.0) || op.used_kbps > op.capacity_kbps)
                fail(indexed("operators", i, "used_kbps"), "load outside [0, capacity_kbps]: " + num(op.used_kbps));
            if (!(op.jitter_ms > 0.0))
                fail(indexed("operators", i, "jitter_ms"), "non-positive jitter: " + num(op.jitter_ms));
            if (!(op.delay_ms > 0.0))
                fail(indexed("operators", i, "delay_ms"), "non-positive delay: " + num(op.delay_ms));
            if (!(op.ber > 0.0 && op.ber < 1.0))
                fail(indexed("operators", i, "ber"), "BER outside (0, 1): " + num(op.ber));
            if (!(op.sp > 0.0))
                fail(indexed("operators", i, "sp"), "non-positive service price: " + num(op.sp));
            if (!(op.cs > 0.0))
                fail(indexed("operators", i, "cs"), "non-positive service cost: " + num(op.cs));
            if (!(op.w_u >= 0.0))
                fail(indexed("operators", i, "w_u"), "negative strategy weight: " + num(op.w_u));
            if (!(op.w_op >= 0.0))
                fail(indexed("operators", i, "w_op"), "negative strategy weight: " + num(op.w_op));
        }

        std::set<ServiceKind> seen;
        for (std::size_t i = 0; i < s.service_classes.size(); ++i)
        {
            const auto &c = s.service_classes[i];
            const auto &w = c.service_class.qos_weights;
            if (!seen.insert(c.service_class.kind).second)
                fail(indexed("service_classes", i, "kind"),
                     "duplicate service class " + std::string(to_string(c.service_class.kind)));
            if (w.bw < 0.0 || w.jitter < 0.0 || w.delay < 0.0 || w.ber < 0.0)
                fail(indexed("service_classes", i, "qos_weights"), "negative QoS weight");
            if (std::abs(w.sum() - 1.0) > kSumTolerance)
                fail(indexed("service_classes", i, "qos_weights"),
                     "weight-sum violation: weights sum to " + num(w.sum()));
            if (!(c.jitter_req > 0.0))
                fail(indexed("service_classes", i, "jitter_req"), "non-positive requirement: " + num(c.jitter_req));
            if (!(c.delay_req > 0.0))
                fail(indexed("service_classes", i, "delay_req"), "non-positive requirement: " + num(c.delay_req));
            if (!(c.ber_req > 0.0 && c.ber_req < 1.0))
                fail(indexed("service_classes", i, "ber_req"), "BER requirement outside (0, 1): " + num(c.ber_req));
        }
        for (auto kind : kAllServiceKinds)
            if (!seen.contains(kind))
                fail("service_classes", "missing service class " + std::string(to_string(kind)));

        for (auto kind : kAllServiceKinds)
            for (auto tech : kAllTechnologies)
            {
                const std::string field =
                    "demand." + std::string(to_string(kind)) + "." + std::string(to_string(tech));
                auto r = s.demand.find(kind, tech);
                if (!r)
                    fail(field, "missing demand entry");
                else if (!(*r > 0.0) || !std::isfinite(*r))
                    fail(field, "non-positive demand rate: " + num(*r));
            }

        if (!(s.mean_interarrival_s > 0.0))
            fail("mean_interarrival_s", "non-positive mean inter-arrival time: " + num(s.mean_interarrival_s));
        if (!(s.mean_service_s > 0.0))
            fail("mean_service_s", "non-positive mean service time: " + num(s.mean_service_s));
        if (!(s.duration_s > 0.0) || !std::isfinite(s.duration_s))
            fail("duration_s", "non-positive duration: " + num(s.duration_s));
        if (s.replications < 1)
            fail("replications", "at least one replication required");
        if (!(s.snapshot_interval_s >= 0.0))
            fail("snapshot_interval_s", "negative snapshot interval: " + num(s.snapshot_interval_s));

        if (s.profile_mix.empty())
            fail("profile_mix", "empty profile mix");
        double mix_sum = 0.0;
        for (std::size_t i = 0; i < s.profile_mix.size(); ++i)
        {
            const auto &p = s.profile_mix[i];
            mix_sum += p.probability;
            if (p.probability < 0.0)
                fail(indexed("profile_mix", i, "probability"), "negative probability: " + num(p.probability));
            if (p.prefs.w_qos < 0.0 || p.prefs.w_qos > 1.0 || p.prefs.w_price < 0.0 || p.prefs.w_price > 1.0)
                fail(indexed("profile_mix", i, "prefs"), "preference weight outside [0, 1]");
            if (std::abs(p.prefs.w_qos + p.prefs.w_price - 1.0) > kSumTolerance)
                fail(indexed("profile_mix", i, "prefs"),
                     "weight-sum violation: w_qos + w_price = " + num(p.prefs.w_qos + p.prefs.w_price));
            if (s.find_class(p.kind) == nullptr)
                fail(indexed("profile_mix", i, "kind"), "unknown service class " + std::string(to_string(p.kind)));
        }
        if (!s.profile_mix.empty() && std::abs(mix_sum - 1.0) > kSumTolerance)
            fail("profile_mix", "weight-sum violation: probabilities sum to " + num(mix_sum));

        if (!s.home_weights.empty())
        {
            if (s.home_weights.size() != s.operators.size())
                fail("home_weights", "expected one weight per operator");
            double sum = 0.0;
            for (std::size_t i = 0; i < s.home_weights.size(); ++i)
            {
                sum += s.home_weights[i];
                if (s.home_weights[i] < 0.0)
                    fail(indexed("home_weights", i), "negative probability: " + num(s.home_weights[i]));
            }
            if (std::abs(sum - 1.0) > kSumTolerance)
                fail("home_weights", "weight-sum violation: probabilities sum to " + num(sum));
        }

        return out;
    }

    std::string format_violation(const Violation &v)
    {
        return v.field + ": " + v.message;
    }

    namespace
    {
        std::string join_violations(const std::vector<Violation> &vs)
        {
            std::string msg = "invalid scenario";
            for (const auto &v : vs)
            {
                msg += "\n  ";
                msg += format_violation(v);
            }
            return msg;
        }
    } // namespace

    ScenarioError::ScenarioError(std::vector<Violation> violations)
        : std::runtime_error(join_violations(violations)), violations_(std::move(violations))
    {
    }

    Scenario checked(Scenario s)
    {
        auto vs = validate_scenario(s);
        if (!vs.empty())
            throw ScenarioError(std::move(vs));
        return s;
    }
} // namespace opsel

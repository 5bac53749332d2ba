#include "opsel/selection.hpp"

#include <cmath>

namespace opsel
{
    bool feasible(const OperatorNetwork &net, const QoSRequirements &req_qos, double rate_kbps) noexcept
    {
        return net.jitter_ms <= req_qos.jitter_req && net.delay_ms <= req_qos.delay_req &&
               net.ber <= req_qos.ber_req && net.remaining_kbps() >= rate_kbps;
    }

    double transfer_objective(const OperatorNetwork &home, double s_u, double s_t, double p_norm, double cs_norm) noexcept
    {
        return home.w_u * std::abs(s_u - s_t) - home.w_op * (p_norm - cs_norm);
    }

    AdmissionDecision select_serving_operator(const ServiceRequest &request, std::span<const OperatorNetwork> networks,
                                              const Scenario &scenario)
    {
        const OperatorNetwork &home = networks[request.home_op];
        const double sp_max = scenario.sp_max();
        const ServiceKind kind = request.service_class.kind;

        std::vector<CandidateEvaluation> evals;
        evals.reserve(networks.size());
        std::optional<OperatorId> best;
        double best_objective = 0.0;

        for (const auto &cand : networks)
        {
            if (cand.id == request.home_op)
                continue;
            const QoSRequirements req_qos = scenario.requirements(kind, cand.technology);
            CandidateEvaluation ev{cand.id, feasible(cand, req_qos, req_qos.bw_req), std::nullopt, std::nullopt};
            if (ev.feasible)
            {
                const ScoreBreakdown b = score_candidate(request, cand, req_qos, sp_max);
                const double obj = transfer_objective(home, b.s_u, b.s_t, b.p_norm, b.cs_norm);
                ev.breakdown = b;
                ev.objective = obj;
                // Candidates are visited in id order, so only a strict improvement moves the choice.
                if (!best || obj < best_objective - kObjectiveTieTolerance)
                {
                    best = cand.id;
                    best_objective = obj;
                }
            }
            evals.push_back(ev);
        }

        if (!best)
            return AdmissionDecision::blocked(std::move(evals));
        return AdmissionDecision::transfer(*best, std::move(evals));
    }

    AdmissionDecision admit(const ServiceRequest &request, std::span<const OperatorNetwork> networks,
                            const Scenario &scenario, bool cooperation)
    {
        const OperatorNetwork &home = networks[request.home_op];
        const QoSRequirements home_qos = scenario.requirements(request.service_class.kind, home.technology);
        if (feasible(home, home_qos, home_qos.bw_req))
            return AdmissionDecision::home(home.id);
        if (!cooperation)
            return AdmissionDecision::blocked();
        return select_serving_operator(request, networks, scenario);
    }
} // namespace opsel

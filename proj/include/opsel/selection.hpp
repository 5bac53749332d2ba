#pragma once

#include "opsel/model.hpp"
#include "opsel/scoring.hpp"

#include <optional>
#include <span>
#include <vector>

namespace opsel
{
    enum class Outcome : std::uint8_t
    {
        ServedHome,
        ServedTransfer,
        Blocked,
    };

    struct CandidateEvaluation
    {
        OperatorId op = 0;
        bool feasible = false;
        std::optional<ScoreBreakdown> breakdown; // feasible candidates only
        std::optional<double> objective;
    };

    struct AdmissionDecision
    {
        Outcome outcome = Outcome::Blocked;
        std::optional<OperatorId> serving_op; // set unless Blocked
        std::vector<CandidateEvaluation> candidates;

        static AdmissionDecision home(OperatorId op) { return {Outcome::ServedHome, op, {}}; }
        static AdmissionDecision transfer(OperatorId op, std::vector<CandidateEvaluation> evals)
        {
            return {Outcome::ServedTransfer, op, std::move(evals)};
        }
        static AdmissionDecision blocked(std::vector<CandidateEvaluation> evals = {})
        {
            return {Outcome::Blocked, std::nullopt, std::move(evals)};
        }
    };

    /// Objective differences at or below this are ties, resolved toward the lowest id.
    inline constexpr double kObjectiveTieTolerance = 1e-12;

    /// Hard gate: every offered QoS constant meets the requirement and the
    /// remaining bandwidth covers `rate_kbps` (inclusive).
    bool feasible(const OperatorNetwork &net, const QoSRequirements &req_qos, double rate_kbps) noexcept;

    /// Profit-aware distance, weighted by the home operator's strategy:
    /// w_u * |s_u - s_t| - w_op * (p - cs), prices normalised.
    double transfer_objective(const OperatorNetwork &home, double s_u, double s_t, double p_norm, double cs_norm) noexcept;

    /// Argmin of the objective over feasible operators other than the home.
    AdmissionDecision select_serving_operator(const ServiceRequest &request, std::span<const OperatorNetwork> networks,
                                              const Scenario &scenario);

    /// Home-first admission. With cooperation off an infeasible home blocks.
    /// Never mutates the networks.
    AdmissionDecision admit(const ServiceRequest &request, std::span<const OperatorNetwork> networks,
                            const Scenario &scenario, bool cooperation);
} // namespace opsel

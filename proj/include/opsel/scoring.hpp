#pragma once

// Cost-function scores for nearest-performance selection. The user's ideal
// score is built from its own requirements; each candidate's score from the
// QoS it offers and its price. Prices are normalised by the largest
// advertised price in the scenario.

#include "opsel/model.hpp"

#include <stdexcept>

namespace opsel
{
    /// Offered QoS relative to a requirement. Cost-type criteria saturate at 1
    /// once the offer meets the requirement; bandwidth is spare capacity over
    /// the demand and is left uncapped so spare capacity keeps discriminating.
    struct NormalizedQoS
    {
        double n_bw = 0.0;
        double n_jitter = 0.0;
        double n_delay = 0.0;
        double n_ber = 0.0;
    };

    struct UserScore
    {
        double s_u = 0.0;
        double s_qos = 0.0;
        double p_norm = 0.0;
    };

    struct CandidateScore
    {
        double s_t = 0.0;
        double s_tqos = 0.0;
        double sp_norm = 0.0;
    };

    struct ScoreBreakdown
    {
        double s_u = 0.0;
        double s_qos = 0.0;
        double s_t = 0.0;
        double s_tqos = 0.0;
        double p_norm = 0.0;
        double sp_norm = 0.0;
        double cs_norm = 0.0;

        double distance() const noexcept;
    };

    class ScoringError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    /// Throws ScoringError if any divisor (requirement or offered constant) is zero.
    NormalizedQoS normalize_offer(const OperatorNetwork &net, const QoSRequirements &req);

    /// Weighted sum in the order bandwidth, jitter, delay, BER.
    double weighted_qos(const QosWeights &w, const NormalizedQoS &n) noexcept;

    /// Score of the ideal network: every requirement normalised against itself.
    UserScore user_score(const ServiceRequest &req, const QoSRequirements &req_qos, double sp_max);

    CandidateScore candidate_score(const OperatorNetwork &net, const ServiceClass &cls, const UserPreferences &prefs,
                                   const QoSRequirements &req_qos, double sp_max);

    /// Both scores plus the normalised inter-operator cost of `net`.
    ScoreBreakdown score_candidate(const ServiceRequest &req, const OperatorNetwork &net,
                                   const QoSRequirements &req_qos, double sp_max);
} // namespace opsel

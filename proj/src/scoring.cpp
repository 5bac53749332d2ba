#include "opsel/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace opsel
{
    namespace
    {
        double ratio(double num, double den, const char *what)
        {
            if (den == 0.0)
                throw ScoringError(std::string("normalize_offer: zero divisor for ") + what);
            return num / den;
        }
    } // namespace

    double ScoreBreakdown::distance() const noexcept
    {
        return std::abs(s_u - s_t);
    }

    NormalizedQoS normalize_offer(const OperatorNetwork &net, const QoSRequirements &req)
    {
        NormalizedQoS n;
        n.n_jitter = std::min(ratio(req.jitter_req, net.jitter_ms, "jitter"), 1.0);
        n.n_delay = std::min(ratio(req.delay_req, net.delay_ms, "delay"), 1.0);
        n.n_ber = std::min(ratio(req.ber_req, net.ber, "BER"), 1.0);
        n.n_bw = ratio(net.capacity_kbps - net.used_kbps, req.bw_req, "bandwidth");
        return n;
    }

    double weighted_qos(const QosWeights &w, const NormalizedQoS &n) noexcept
    {
        return w.bw * n.n_bw + w.jitter * n.n_jitter + w.delay * n.n_delay + w.ber * n.n_ber;
    }

    UserScore user_score(const ServiceRequest &req, const QoSRequirements & /*req_qos*/, double sp_max)
    {
        // Each requirement normalised against itself is exactly 1.
        const NormalizedQoS ideal{1.0, 1.0, 1.0, 1.0};
        UserScore u;
        u.s_qos = weighted_qos(req.service_class.qos_weights, ideal);
        u.p_norm = req.price_paid / sp_max;
        u.s_u = req.prefs.w_qos * u.s_qos + req.prefs.w_price * u.p_norm;
        return u;
    }

    CandidateScore candidate_score(const OperatorNetwork &net, const ServiceClass &cls, const UserPreferences &prefs,
                                   const QoSRequirements &req_qos, double sp_max)
    {
        CandidateScore c;
        c.s_tqos = weighted_qos(cls.qos_weights, normalize_offer(net, req_qos));
        c.sp_norm = net.sp / sp_max;
        c.s_t = prefs.w_qos * c.s_tqos + prefs.w_price * c.sp_norm;
        return c;
    }

    ScoreBreakdown score_candidate(const ServiceRequest &req, const OperatorNetwork &net,
                                   const QoSRequirements &req_qos, double sp_max)
    {
        const auto u = user_score(req, req_qos, sp_max);
        const auto c = candidate_score(net, req.service_class, req.prefs, req_qos, sp_max);
        return {u.s_u, u.s_qos, c.s_t, c.s_tqos, u.p_norm, c.sp_norm, net.cs / sp_max};
    }
} // namespace opsel

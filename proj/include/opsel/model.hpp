#pragma once

// Domain types for multi-operator access selection: service classes, user
// preferences, operator networks, admission requests and the scenario that
// ties them together.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace opsel
{
    using OperatorId = std::size_t;

    enum class ServiceKind : std::uint8_t
    {
        Conversational = 0, // real-time
        Interactive = 1,    // non-real-time
    };
    inline constexpr std::size_t kServiceKindCount = 2;
    inline constexpr std::array<ServiceKind, kServiceKindCount> kAllServiceKinds{
        ServiceKind::Conversational, ServiceKind::Interactive};

    enum class Technology : std::uint8_t
    {
        UMTS = 0,
        WLAN = 1,
    };
    inline constexpr std::size_t kTechnologyCount = 2;
    inline constexpr std::array<Technology, kTechnologyCount> kAllTechnologies{Technology::UMTS,
                                                                               Technology::WLAN};

    std::string_view to_string(ServiceKind kind) noexcept;
    std::string_view to_string(Technology tech) noexcept;
    std::optional<ServiceKind> parse_service_kind(std::string_view s) noexcept;
    std::optional<Technology> parse_technology(std::string_view s) noexcept;

    inline constexpr std::size_t index_of(ServiceKind k) noexcept { return static_cast<std::size_t>(k); }
    inline constexpr std::size_t index_of(Technology t) noexcept { return static_cast<std::size_t>(t); }

    /// Per-criterion weights, ordered bandwidth, jitter, delay, BER.
    struct QosWeights
    {
        double bw = 0.0;
        double jitter = 0.0;
        double delay = 0.0;
        double ber = 0.0;

        double sum() const noexcept { return bw + jitter + delay + ber; }
        bool operator==(const QosWeights &) const = default;
    };

    struct ServiceClass
    {
        ServiceKind kind = ServiceKind::Conversational;
        QosWeights qos_weights;

        static ServiceClass conversational() noexcept;
        static ServiceClass interactive() noexcept;
        bool operator==(const ServiceClass &) const = default;
    };

    /// What an application needs from a network. bw_req is the demand rate on the
    /// technology being evaluated, so one service maps to several of these.
    struct QoSRequirements
    {
        double bw_req = 0.0;     // kb/s
        double jitter_req = 0.0; // ms
        double delay_req = 0.0;  // ms
        double ber_req = 0.0;    // error probability
        bool operator==(const QoSRequirements &) const = default;
    };

    /// Scenario-level description of one service class: its weights plus the
    /// technology-independent requirements.
    struct ServiceClassSpec
    {
        ServiceClass service_class;
        double jitter_req = 0.0;
        double delay_req = 0.0;
        double ber_req = 0.0;
        bool operator==(const ServiceClassSpec &) const = default;
    };

    struct UserPreferences
    {
        double w_qos = 0.5;
        double w_price = 0.5;

        static constexpr UserPreferences high_qos() noexcept { return {0.7, 0.3}; }
        static constexpr UserPreferences high_price() noexcept { return {0.4, 0.6}; }
        bool operator==(const UserPreferences &) const = default;
    };

    struct OperatorNetwork
    {
        OperatorId id = 0;
        std::string name;
        Technology technology = Technology::WLAN;
        double capacity_kbps = 0.0;
        double used_kbps = 0.0;
        double jitter_ms = 0.0;
        double delay_ms = 0.0;
        double ber = 0.0;
        double sp = 0.0; // advertised service price, unit/kByte
        double cs = 0.0; // price charged to other operators for hosting their clients, unit/kByte
        double w_u = 1.0;
        double w_op = 1.0;

        double remaining_kbps() const noexcept { return capacity_kbps - used_kbps; }
        bool operator==(const OperatorNetwork &) const = default;
    };

    struct ServiceRequest
    {
        std::uint64_t user_id = 0;
        OperatorId home_op = 0;
        ServiceClass service_class;
        UserPreferences prefs;
        double price_paid = 0.0;
        bool operator==(const ServiceRequest &) const = default;
    };

    /// Constant bit rate per (service class, technology).
    class DemandTable
    {
    public:
        void set(ServiceKind kind, Technology tech, double rate_kbps) noexcept;
        std::optional<double> find(ServiceKind kind, Technology tech) const noexcept;
        /// Throws std::out_of_range when the entry is missing.
        double rate(ServiceKind kind, Technology tech) const;

        static DemandTable defaults();
        bool operator==(const DemandTable &) const = default;

    private:
        std::array<std::optional<double>, kServiceKindCount * kTechnologyCount> rates_{};
    };

    struct Session
    {
        ServiceRequest request;
        OperatorId serving_op = 0;
        double rate_kbps = 0.0;
        double start_s = 0.0;
        double duration_s = 0.0;

        bool transferred() const noexcept { return serving_op != request.home_op; }
    };

    struct ProfileShare
    {
        ServiceKind kind = ServiceKind::Conversational;
        UserPreferences prefs;
        double probability = 0.0;
        bool operator==(const ProfileShare &) const = default;
    };

    enum class PricingMode : std::uint8_t
    {
        Volume = 0, // price x kBytes carried
        Flat = 1,   // price x sessions
    };
    std::string_view to_string(PricingMode mode) noexcept;
    std::optional<PricingMode> parse_pricing_mode(std::string_view s) noexcept;

    struct Scenario
    {
        std::vector<OperatorNetwork> operators;
        std::vector<ServiceClassSpec> service_classes;
        DemandTable demand;
        double mean_interarrival_s = 2.5;
        double mean_service_s = 240.0;
        double duration_s = 1200.0;
        std::uint32_t replications = 20;
        std::uint64_t base_seed = 1;
        bool cooperation = true;
        std::vector<ProfileShare> profile_mix;
        // Probability of each operator being a user's home; empty means uniform.
        std::vector<double> home_weights;
        PricingMode pricing = PricingMode::Volume;
        // Cumulative arrival/blocking snapshots every this many seconds; 0 disables.
        double snapshot_interval_s = 0.0;

        /// Largest advertised price; the normaliser for every price entering a score.
        double sp_max() const noexcept;
        const ServiceClassSpec *find_class(ServiceKind kind) const noexcept;
        /// Requirements of `kind` with bw_req set to the demand on `tech`.
        QoSRequirements requirements(ServiceKind kind, Technology tech) const;

        bool operator==(const Scenario &) const = default;
    };

    /// Mean inter-arrival times (seconds) of the reference load sweep.
    std::vector<double> default_sweep();

    /// Three cooperating operators (UMTS, WLAN1, WLAN2) with the reference
    /// QoS constants, prices, AHP weight vectors and traffic settings.
    Scenario default_scenario();

    struct Violation
    {
        std::string field;
        std::string message;
    };

    /// Every invariant violation found, in field order. Empty means valid.
    std::vector<Violation> validate_scenario(const Scenario &s);

    class ScenarioError : public std::runtime_error
    {
    public:
        explicit ScenarioError(std::vector<Violation> violations);
        const std::vector<Violation> &violations() const noexcept { return violations_; }

    private:
        std::vector<Violation> violations_;
    };

    /// Returns `s` unchanged if valid; otherwise throws ScenarioError with all violations.
    Scenario checked(Scenario s);

    std::string format_violation(const Violation &v);
} // namespace opsel

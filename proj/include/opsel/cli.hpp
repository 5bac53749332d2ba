#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace opsel::cli
{
    enum class Command
    {
        Run,
        Sweep,
        Compare,
    };

    enum class CooperationMode
    {
        FromScenario,
        On,
        Off,
        Both,
    };

    struct RunConfig
    {
        Command command = Command::Run;
        std::filesystem::path scenario; // empty: built-in reference scenario
        std::filesystem::path out_dir = ".";
        std::vector<double> sweep;      // mean inter-arrival times, seconds
        std::optional<std::uint64_t> seed;
        std::optional<std::uint32_t> replications;
        bool svg = true;
        CooperationMode cooperation = CooperationMode::FromScenario;
        unsigned threads = 0;
    };

    inline constexpr int kExitOk = 0;
    inline constexpr int kExitIo = 1;
    inline constexpr int kExitInvalid = 2;

    /// Writes metrics.csv, summary.csv and exchange.csv (plus snapshots.csv when enabled).
    int cmd_run(const RunConfig &config, std::ostream &log, std::ostream &err);
    /// Writes sweep.csv and, unless disabled, blocking.svg and profits.svg.
    int cmd_sweep(const RunConfig &config, std::ostream &log, std::ostream &err);
    /// Writes compare.csv and exchange.csv.
    int cmd_compare(const RunConfig &config, std::ostream &log, std::ostream &err);

    /// Parses arguments and dispatches; returns the process exit code.
    int main(int argc, char **argv, std::ostream &log, std::ostream &err);
} // namespace opsel::cli

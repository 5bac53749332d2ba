#include "opsel/cli.hpp"

#include "opsel/analytics.hpp"
#include "opsel/engine.hpp"
#include "opsel/report.hpp"
#include "opsel/scenario_io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"

namespace opsel::cli
{
    namespace
    {
        struct Prepared
        {
            Scenario scenario;
            std::vector<bool> modes;
        };

        class IoError : public std::runtime_error
        {
        public:
            using std::runtime_error::runtime_error;
        };

        std::optional<Scenario> load(const RunConfig &config, std::ostream &err, int &exit_code)
        {
            try
            {
                Scenario s = config.scenario.empty() ? default_scenario() : load_scenario(config.scenario);
                if (config.seed)
                    s.base_seed = *config.seed;
                if (config.replications)
                    s.replications = *config.replications;
                return checked(std::move(s));
            }
            catch (const ScenarioError &e)
            {
                err << "scenario validation failed:\n";
                for (const auto &v : e.violations())
                    err << format_violation(v) << '\n';
                exit_code = kExitInvalid;
            }
            catch (const std::exception &e)
            {
                err << "error: " << e.what() << '\n';
                exit_code = kExitIo;
            }
            return std::nullopt;
        }

        std::vector<bool> modes_for(CooperationMode mode, bool scenario_default, bool default_both)
        {
            switch (mode)
            {
            case CooperationMode::On:
                return {true};
            case CooperationMode::Off:
                return {false};
            case CooperationMode::Both:
                return {false, true};
            case CooperationMode::FromScenario:
                break;
            }
            if (default_both)
                return {false, true};
            return {scenario_default};
        }

        bool valid_sweep(const std::vector<double> &sweep, std::ostream &err)
        {
            for (double v : sweep)
                if (!(v > 0.0))
                {
                    err << "scenario validation failed:\n"
                        << "sweep: non-positive mean inter-arrival time: " << report::format_number(v) << '\n';
                    return false;
                }
            return true;
        }

        using Writer = std::function<void(std::ostream &)>;

        // All content is rendered in memory first so that nothing is written
        // if rendering fails.
        void emit(const std::filesystem::path &dir, const std::vector<std::pair<std::string, Writer>> &files,
                  std::ostream &log)
        {
            std::vector<std::pair<std::filesystem::path, std::string>> rendered;
            for (const auto &[name, writer] : files)
            {
                std::ostringstream os;
                os.imbue(std::locale::classic());
                writer(os);
                rendered.emplace_back(dir / name, os.str());
            }

            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec)
                throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
            for (const auto &[path, content] : rendered)
            {
                std::ofstream out(path, std::ios::binary | std::ios::trunc);
                out << content;
                out.close();
                if (!out)
                    throw IoError("failed writing " + path.string());
                log << "wrote " << path.string() << '\n';
            }
        }

        template <class Body>
        int guarded(std::ostream &err, Body &&body)
        {
            try
            {
                return body();
            }
            catch (const IoError &e)
            {
                err << "error: " << e.what() << '\n';
                return kExitIo;
            }
        }
    } // namespace

    int cmd_run(const RunConfig &config, std::ostream &log, std::ostream &err)
    {
        int code = kExitOk;
        auto scenario = load(config, err, code);
        if (!scenario)
            return code;
        if (config.sweep.size() > 1)
        {
            err << "run takes a single load; use the sweep command for several\n";
            return kExitInvalid;
        }
        if (!valid_sweep(config.sweep, err))
            return kExitInvalid;
        if (!config.sweep.empty())
            scenario->mean_interarrival_s = config.sweep.front();

        std::vector<MetricsReport> reports;
        for (bool mode : modes_for(config.cooperation, scenario->cooperation, false))
        {
            Scenario s = *scenario;
            s.cooperation = mode;
            reports.push_back(run_experiment(s, config.threads));
        }

        std::vector<std::pair<std::string, Writer>> files{
            {"metrics.csv", [&](std::ostream &os) { report::write_metrics_csv(os, reports); }},
            {"summary.csv", [&](std::ostream &os) { report::write_summary_csv(os, reports); }},
            {"exchange.csv", [&](std::ostream &os) { report::write_exchange_csv(os, reports); }},
        };
        if (scenario->snapshot_interval_s > 0.0)
            files.emplace_back("snapshots.csv", [&](std::ostream &os) { report::write_snapshots_csv(os, reports); });

        return guarded(err, [&] {
            emit(config.out_dir, files, log);
            for (const auto &r : reports)
                log << "cooperation " << (r.cooperation ? "on " : "off") << ": global blocking "
                    << report::format_fixed(100.0 * r.global().at("blocking_probability").mean, 2) << "% over "
                    << r.replications.size() << " replications\n";
            return kExitOk;
        });
    }

    int cmd_sweep(const RunConfig &config, std::ostream &log, std::ostream &err)
    {
        int code = kExitOk;
        auto scenario = load(config, err, code);
        if (!scenario)
            return code;
        const std::vector<double> loads = config.sweep.empty() ? default_sweep() : config.sweep;
        if (!valid_sweep(loads, err))
            return kExitInvalid;

        std::vector<MetricsReport> reports;
        for (double load : loads)
            for (bool mode : modes_for(config.cooperation, scenario->cooperation, true))
            {
                Scenario s = *scenario;
                s.mean_interarrival_s = load;
                s.cooperation = mode;
                reports.push_back(run_experiment(s, config.threads));
            }

        std::vector<std::pair<std::string, Writer>> files{
            {"sweep.csv", [&](std::ostream &os) { report::write_sweep_csv(os, reports); }},
        };
        if (config.svg)
        {
            files.emplace_back("blocking.svg", [&](std::ostream &os) { report::write_blocking_svg(os, reports); });
            files.emplace_back("profits.svg", [&](std::ostream &os) { report::write_profits_svg(os, reports); });
        }
        return guarded(err, [&] {
            emit(config.out_dir, files, log);
            return kExitOk;
        });
    }

    int cmd_compare(const RunConfig &config, std::ostream &log, std::ostream &err)
    {
        int code = kExitOk;
        auto scenario = load(config, err, code);
        if (!scenario)
            return code;
        const std::vector<double> loads = config.sweep.empty() ? default_sweep() : config.sweep;
        if (!valid_sweep(loads, err))
            return kExitInvalid;

        const auto comparisons = compare_cooperation(*scenario, loads, config.threads);
        std::vector<MetricsReport> reports;
        for (const auto &c : comparisons)
        {
            reports.push_back(c.off);
            reports.push_back(c.on);
        }

        std::vector<std::pair<std::string, Writer>> files{
            {"compare.csv", [&](std::ostream &os) { report::write_compare_csv(os, comparisons); }},
            {"exchange.csv", [&](std::ostream &os) { report::write_exchange_csv(os, reports); }},
        };
        return guarded(err, [&] {
            emit(config.out_dir, files, log);
            for (const auto &c : comparisons)
                log << "1/lambda " << report::format_number(c.mean_interarrival_s) << " s: global blocking "
                    << report::format_fixed(100.0 * c.deltas.front().blocking_off.mean, 2) << "% -> "
                    << report::format_fixed(100.0 * c.deltas.front().blocking_on.mean, 2) << "%\n";
            return kExitOk;
        });
    }

    int main(int argc, char **argv, std::ostream &log, std::ostream &err)
    {
        CLI::App app{"Multi-operator access selection simulator"};
        app.require_subcommand(1);

        RunConfig config;
        std::string scenario_path, out_dir = ".", cooperation = "scenario";
        std::uint64_t seed = 0;
        std::uint32_t replications = 0;
        bool no_svg = false;

        auto add_common = [&](CLI::App *sub) {
            sub->add_option("--scenario", scenario_path, "Scenario JSON file (default: built-in reference scenario)");
            sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
            sub->add_option("--seed", seed, "Base seed override");
            sub->add_option("--sweep", config.sweep, "Comma-separated mean inter-arrival times in seconds")
                ->delimiter(',');
            sub->add_option("--replications", replications, "Replication count override");
            sub->add_flag("--no-svg", no_svg, "Do not emit SVG charts");
            sub->add_option("--cooperation", cooperation, "on, off or both")
                ->check(CLI::IsMember({"on", "off", "both", "scenario"}));
            sub->add_option("--threads", config.threads, "Worker threads (0 = all cores)");
        };

        CLI::App *run = app.add_subcommand("run", "Run one experiment at the scenario load");
        CLI::App *sweep = app.add_subcommand("sweep", "Run one experiment per load in the sweep list");
        CLI::App *compare = app.add_subcommand("compare", "Paired cooperation on/off comparison per load");
        for (auto *sub : {run, sweep, compare})
            add_common(sub);

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::ParseError &e)
        {
            std::ostream &stream = e.get_exit_code() == 0 ? log : err;
            const int code = app.exit(e, stream, stream);
            return code == 0 ? kExitOk : kExitInvalid;
        }

        CLI::App *chosen = app.get_subcommands().front();
        config.scenario = scenario_path;
        config.out_dir = out_dir;
        config.svg = !no_svg;
        if (chosen->count("--seed"))
            config.seed = seed;
        if (chosen->count("--replications"))
            config.replications = replications;
        if (cooperation == "on")
            config.cooperation = CooperationMode::On;
        else if (cooperation == "off")
            config.cooperation = CooperationMode::Off;
        else if (cooperation == "both")
            config.cooperation = CooperationMode::Both;

        if (chosen == run)
            return cmd_run(config, log, err);
        if (chosen == sweep)
            return cmd_sweep(config, log, err);
        return cmd_compare(config, log, err);
    }
} // namespace opsel::cli

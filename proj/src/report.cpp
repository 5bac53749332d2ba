#include "opsel/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <system_error>

namespace opsel::report
{
    const char *const kMetricsHeader =
        "cooperation,mean_interarrival_s,replication,seed,scope,arrivals,blocked,served_home,served_transferred,"
        "guests_served,blocking_probability,income_own,income_transferred,income_guests,cost_paid,profit";
    const char *const kSummaryHeader = "cooperation,mean_interarrival_s,scope,metric,mean,stddev";
    const char *const kSweepHeader = "mean_interarrival_s,cooperation,mean_arrivals,scope,blocking_mean,"
                                     "blocking_stddev,blocking_ci95,profit_mean,profit_stddev";
    const char *const kCompareHeader = "mean_interarrival_s,scope,blocking_off,blocking_on,blocking_delta,"
                                       "profit_off,profit_on,profit_delta,served_off,served_on,served_delta";
    const char *const kSnapshotsHeader = "cooperation,mean_interarrival_s,replication,time_s,arrivals,blocked";

    namespace
    {
        const char *onoff(bool cooperation) { return cooperation ? "on" : "off"; }

        std::string csv_field(const std::string &s)
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char c : s)
            {
                if (c == '"')
                    out += '"';
                out += c;
            }
            out += '"';
            return out;
        }

        std::string xml_escape(const std::string &s)
        {
            std::string out;
            for (char c : s)
            {
                switch (c)
                {
                case '&':
                    out += "&amp;";
                    break;
                case '<':
                    out += "&lt;";
                    break;
                case '>':
                    out += "&gt;";
                    break;
                case '"':
                    out += "&quot;";
                    break;
                default:
                    out += c;
                }
            }
            return out;
        }

        std::string scope_label(const MetricsReport &r, std::optional<OperatorId> scope)
        {
            return scope ? r.operator_names.at(*scope) : std::string("global");
        }
    } // namespace

    std::string format_number(double v)
    {
        if (v == 0.0)
            return "0"; // also folds -0
        std::array<char, 64> buf{};
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        if (ec != std::errc{})
            return "nan";
        return std::string(buf.data(), ptr);
    }

    std::string format_fixed(double v, int decimals)
    {
        if (v == 0.0)
            v = 0.0;
        std::array<char, 128> buf{};
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, decimals);
        if (ec != std::errc{})
            return "nan";
        return std::string(buf.data(), ptr);
    }

    std::string exchange_header(std::span<const std::string> operator_names)
    {
        std::string h = "mean_interarrival_s,cooperation,from,class";
        for (const auto &name : operator_names)
            h += ",to_" + csv_field(name);
        h += ",transfers";
        return h;
    }

    void write_metrics_csv(std::ostream &os, std::span<const MetricsReport> reports)
    {
        os << kMetricsHeader << '\n';
        for (const auto &rep : reports)
            for (std::size_t i = 0; i < rep.replications.size(); ++i)
            {
                const auto &r = rep.replications[i];
                std::vector<std::optional<OperatorId>> scopes{std::nullopt};
                for (OperatorId id = 0; id < rep.operator_names.size(); ++id)
                    scopes.emplace_back(id);
                for (const auto &scope : scopes)
                {
                    os << onoff(rep.cooperation) << ',' << format_number(rep.mean_interarrival_s) << ',' << i << ','
                       << r.seed << ',' << csv_field(scope_label(rep, scope));
                    for (const auto &name : metric_names())
                        os << ',' << format_number(metric_value(r, scope, name));
                    os << '\n';
                }
            }
    }

    void write_summary_csv(std::ostream &os, std::span<const MetricsReport> reports)
    {
        os << kSummaryHeader << '\n';
        for (const auto &rep : reports)
            for (const auto &scope : rep.summary)
                for (const auto &m : scope.metrics)
                    os << onoff(rep.cooperation) << ',' << format_number(rep.mean_interarrival_s) << ','
                       << csv_field(scope.scope) << ',' << m.metric << ',' << format_number(m.stat.mean) << ','
                       << format_number(m.stat.stddev) << '\n';
    }

    void write_snapshots_csv(std::ostream &os, std::span<const MetricsReport> reports)
    {
        os << kSnapshotsHeader << '\n';
        for (const auto &rep : reports)
            for (std::size_t i = 0; i < rep.replications.size(); ++i)
                for (const auto &s : rep.replications[i].snapshots)
                    os << onoff(rep.cooperation) << ',' << format_number(rep.mean_interarrival_s) << ',' << i << ','
                       << format_number(s.time_s) << ',' << s.arrivals << ',' << s.blocked << '\n';
    }

    void write_sweep_csv(std::ostream &os, std::span<const MetricsReport> reports)
    {
        os << kSweepHeader << '\n';
        for (const auto &rep : reports)
        {
            const BlockingStats b = blocking_stats(rep);
            const double arrivals = rep.global().at("arrivals").mean;
            for (std::size_t si = 0; si < rep.summary.size(); ++si)
            {
                const auto &scope = rep.summary[si];
                const BlockingEstimate &be = si == 0 ? b.global : b.per_operator[si - 1];
                const Stat &profit = scope.at("profit");
                os << format_number(rep.mean_interarrival_s) << ',' << onoff(rep.cooperation) << ','
                   << format_number(arrivals) << ',' << csv_field(scope.scope) << ',' << format_number(be.stat.mean)
                   << ',' << format_number(be.stat.stddev) << ',' << format_number(be.ci95_half_width) << ','
                   << format_number(profit.mean) << ',' << format_number(profit.stddev) << '\n';
            }
        }
    }

    void write_compare_csv(std::ostream &os, std::span<const CooperationComparison> comparisons)
    {
        os << kCompareHeader << '\n';
        for (const auto &c : comparisons)
            for (const auto &d : c.deltas)
                os << format_number(c.mean_interarrival_s) << ',' << csv_field(d.scope) << ','
                   << format_number(d.blocking_off.mean) << ',' << format_number(d.blocking_on.mean) << ','
                   << format_number(d.blocking_delta()) << ',' << format_number(d.profit_off.mean) << ','
                   << format_number(d.profit_on.mean) << ',' << format_number(d.profit_delta()) << ','
                   << format_number(d.served_off.mean) << ',' << format_number(d.served_on.mean) << ','
                   << format_number(d.served_delta()) << '\n';
    }

    void write_exchange_csv(std::ostream &os, std::span<const MetricsReport> reports)
    {
        if (reports.empty())
        {
            os << exchange_header({}) << '\n';
            return;
        }
        os << exchange_header(reports.front().operator_names) << '\n';
        for (const auto &rep : reports)
        {
            const ExchangeMatrix &m = rep.exchange_total;
            for (OperatorId from = 0; from < rep.operator_names.size(); ++from)
                for (auto kind : kAllServiceKinds)
                {
                    os << format_number(rep.mean_interarrival_s) << ',' << onoff(rep.cooperation) << ','
                       << csv_field(rep.operator_names[from]) << ',' << to_string(kind);
                    for (OperatorId to = 0; to < rep.operator_names.size(); ++to)
                    {
                        if (to == from)
                            os << ",-";
                        else
                            os << ',' << format_fixed(100.0 * m.row_share(from, to, kind).value_or(0.0), 2);
                    }
                    os << ',' << (m.operators() ? m.row_total(from, kind) : 0) << '\n';
                }
        }
    }

    void write_line_chart_svg(std::ostream &os, const std::string &title, const std::string &x_label,
                              const std::string &y_label, std::span<const Series> series)
    {
        constexpr double width = 640, height = 420;
        constexpr double left = 70, right = 170, top = 40, bottom = 60;
        const double plot_w = width - left - right, plot_h = height - top - bottom;
        static constexpr std::array<const char *, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                              "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

        double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
        double y_min = 0.0, y_max = -std::numeric_limits<double>::infinity();
        for (const auto &s : series)
            for (auto [x, y] : s.points)
            {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        if (!std::isfinite(x_min))
        {
            x_min = 0.0;
            x_max = 1.0;
        }
        if (!std::isfinite(y_max) || y_max <= y_min)
            y_max = y_min + 1.0;
        if (x_max <= x_min)
            x_max = x_min + 1.0;

        auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
        auto py = [&](double y) { return top + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };
        auto f = [](double v) { return format_fixed(v, 2); };

        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
           << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << f(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
           << xml_escape(title) << "</text>\n";
        os << "<line x1=\"" << f(left) << "\" y1=\"" << f(top + plot_h) << "\" x2=\"" << f(left + plot_w)
           << "\" y2=\"" << f(top + plot_h) << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << f(left) << "\" y1=\"" << f(top) << "\" x2=\"" << f(left) << "\" y2=\""
           << f(top + plot_h) << "\" stroke=\"black\"/>\n";

        constexpr int ticks = 5;
        for (int i = 0; i <= ticks; ++i)
        {
            const double xv = x_min + (x_max - x_min) * i / ticks;
            const double yv = y_min + (y_max - y_min) * i / ticks;
            os << "<text x=\"" << f(px(xv)) << "\" y=\"" << f(top + plot_h + 16)
               << "\" text-anchor=\"middle\">" << format_fixed(xv, 0) << "</text>\n";
            os << "<text x=\"" << f(left - 6) << "\" y=\"" << f(py(yv) + 4) << "\" text-anchor=\"end\">"
               << format_fixed(yv, 1) << "</text>\n";
            os << "<line x1=\"" << f(left) << "\" y1=\"" << f(py(yv)) << "\" x2=\"" << f(left + plot_w)
               << "\" y2=\"" << f(py(yv)) << "\" stroke=\"#dddddd\"/>\n";
        }
        os << "<text x=\"" << f(left + plot_w / 2) << "\" y=\"" << f(height - 18) << "\" text-anchor=\"middle\">"
           << xml_escape(x_label) << "</text>\n";
        os << "<text transform=\"translate(18," << f(top + plot_h / 2)
           << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(y_label) << "</text>\n";

        for (std::size_t i = 0; i < series.size(); ++i)
        {
            const auto &s = series[i];
            const char *colour = palette[i % palette.size()];
            auto pts = s.points;
            std::sort(pts.begin(), pts.end());
            os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
            for (std::size_t k = 0; k < pts.size(); ++k)
                os << (k ? " " : "") << f(px(pts[k].first)) << ',' << f(py(pts[k].second));
            os << "\"/>\n";
            for (auto [x, y] : pts)
                os << "<circle cx=\"" << f(px(x)) << "\" cy=\"" << f(py(y)) << "\" r=\"3\" fill=\"" << colour
                   << "\"/>\n";
            const double ly = top + 14 + 18.0 * static_cast<double>(i);
            os << "<line x1=\"" << f(left + plot_w + 12) << "\" y1=\"" << f(ly) << "\" x2=\""
               << f(left + plot_w + 32) << "\" y2=\"" << f(ly) << "\" stroke=\"" << colour
               << "\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << f(left + plot_w + 38) << "\" y=\"" << f(ly + 4) << "\">" << xml_escape(s.label)
               << "</text>\n";
        }
        os << "</svg>\n";
    }

    void write_blocking_svg(std::ostream &os, std::span<const MetricsReport> reports)
    {
        std::map<bool, Series> by_mode;
        for (const auto &rep : reports)
        {
            auto &s = by_mode[rep.cooperation];
            s.label = rep.cooperation ? "with cooperation" : "without cooperation";
            s.points.emplace_back(rep.global().at("arrivals").mean,
                                  100.0 * rep.global().at("blocking_probability").mean);
        }
        std::vector<Series> series;
        for (auto &[mode, s] : by_mode)
            series.push_back(std::move(s));
        write_line_chart_svg(os, "Global blocking probability", "number of users (mean arrivals)", "blocking (%)",
                             series);
    }

    void write_profits_svg(std::ostream &os, std::span<const MetricsReport> reports)
    {
        std::map<std::pair<std::size_t, bool>, Series> by_op;
        for (const auto &rep : reports)
            for (OperatorId id = 0; id < rep.operator_names.size(); ++id)
            {
                auto &s = by_op[{id, rep.cooperation}];
                s.label = rep.operator_names[id] + (rep.cooperation ? " (coop)" : " (alone)");
                s.points.emplace_back(rep.global().at("arrivals").mean, rep.op(id).at("profit").mean);
            }
        std::vector<Series> series;
        for (auto &[key, s] : by_op)
            series.push_back(std::move(s));
        write_line_chart_svg(os, "Operator profits", "number of users (mean arrivals)", "profit (price units)",
                             series);
    }
} // namespace opsel::report

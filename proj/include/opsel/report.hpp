#pragma once

// CSV and SVG renderers. Numbers are written with std::to_chars, so output is
// locale-independent and byte-stable for identical inputs.
//
// CSV format version 1; column layouts are documented in docs/csv_formats.md.

#include "opsel/analytics.hpp"
#include "opsel/metrics.hpp"

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace opsel::report
{
    inline constexpr int kCsvFormatVersion = 1;

    /// Shortest round-trip decimal representation.
    std::string format_number(double v);
    /// Fixed-point with `decimals` digits after the dot.
    std::string format_fixed(double v, int decimals);

    extern const char *const kMetricsHeader;
    extern const char *const kSummaryHeader;
    extern const char *const kSweepHeader;
    extern const char *const kCompareHeader;
    extern const char *const kSnapshotsHeader;
    /// Exchange header depends on the operator names.
    std::string exchange_header(std::span<const std::string> operator_names);

    void write_metrics_csv(std::ostream &os, std::span<const MetricsReport> reports);
    void write_summary_csv(std::ostream &os, std::span<const MetricsReport> reports);
    void write_snapshots_csv(std::ostream &os, std::span<const MetricsReport> reports);
    void write_sweep_csv(std::ostream &os, std::span<const MetricsReport> reports);
    void write_compare_csv(std::ostream &os, std::span<const CooperationComparison> comparisons);
    /// Table-style exchange directions: one row per (home operator, class),
    /// one column per serving operator, cells in percent of the row.
    void write_exchange_csv(std::ostream &os, std::span<const MetricsReport> reports);

    struct Series
    {
        std::string label;
        std::vector<std::pair<double, double>> points;
    };

    void write_line_chart_svg(std::ostream &os, const std::string &title, const std::string &x_label,
                              const std::string &y_label, std::span<const Series> series);

    /// Global blocking (%) against mean arrivals, one curve per cooperation mode.
    void write_blocking_svg(std::ostream &os, std::span<const MetricsReport> reports);
    /// Per-operator mean profit against mean arrivals, per cooperation mode.
    void write_profits_svg(std::ostream &os, std::span<const MetricsReport> reports);
} // namespace opsel::report

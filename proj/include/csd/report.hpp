#pragma once

#include "csd/experiment.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace csd {

enum class ReportFormat { Csv, Json };

ReportFormat parse_report_format(const std::string& name);
/// From the file extension (.csv or .json).
ReportFormat report_format_for(const std::filesystem::path& path);

struct ReportOptions {
    /// Runtimes differ between runs; leaving them out makes reports byte-comparable.
    bool include_runtime = true;
};

/// Record field names in emission order.
const std::vector<std::string>& record_columns();

std::string format_records(const std::vector<ExperimentRecord>& records, ReportFormat format,
                           const ReportOptions& options = {});
void emit_report(const std::vector<ExperimentRecord>& records, ReportFormat format,
                 const std::filesystem::path& path, const ReportOptions& options = {});

std::vector<ExperimentRecord> parse_records(const std::string& text, ReportFormat format);
std::vector<ExperimentRecord> read_report(const std::filesystem::path& path);

struct Statistic {
    std::size_t count = 0;
    std::optional<double> mean;
    std::optional<double> median;
};

/// Summary over the records sharing scenario, method and parameter point.
struct SummaryRow {
    std::string scenario;
    std::string method;
    std::optional<std::size_t> k;
    std::optional<std::size_t> tau_abs;
    std::optional<std::size_t> alternative_index;
    std::optional<double> timeout_s;
    std::size_t records = 0;
    std::size_t errors = 0;
    Statistic train_nwracc;
    Statistic test_nwracc;
    Statistic train_hamming;
    Statistic test_hamming;
    Statistic selected_feature_count;
    Statistic runtime_s;
};

std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records);
std::string format_summary(const std::vector<SummaryRow>& rows, ReportFormat format);

} // namespace csd

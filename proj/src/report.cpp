#include "csd/report.hpp"

#include "csd/bound.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace csd {

ReportFormat parse_report_format(const std::string& name) {
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    if (key == "csv") return ReportFormat::Csv;
    if (key == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format '" + name + "' (expected csv or json)");
}

ReportFormat report_format_for(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext.empty()) throw std::invalid_argument("cannot infer report format of " + path.string());
    return parse_report_format(ext.substr(1));
}

namespace {

// One column: its name plus how to read and write it as text or JSON.
struct Column {
    std::string name;
    std::function<std::optional<std::string>(const ExperimentRecord&)> text;
    std::function<nlohmann::json(const ExperimentRecord&)> json;
    std::function<void(ExperimentRecord&, const std::string&)> from_text;
    std::function<void(ExperimentRecord&, const nlohmann::json&)> from_json;
};

std::size_t parse_size(const std::string& s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

double parse_real(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw std::invalid_argument("not a boolean: '" + s + "'");
}

template <class T> nlohmann::json opt_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T> std::optional<T> opt_from_json(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

Column string_column(std::string name, std::string ExperimentRecord::*field) {
    return {name, [field](const ExperimentRecord& r) { return std::optional<std::string>(r.*field); },
            [field](const ExperimentRecord& r) { return nlohmann::json(r.*field); },
            [field](ExperimentRecord& r, const std::string& s) { r.*field = s; },
            [field](ExperimentRecord& r, const nlohmann::json& j) { r.*field = j.get<std::string>(); }};
}

Column opt_string_column(std::string name, std::optional<std::string> ExperimentRecord::*field) {
    return {name, [field](const ExperimentRecord& r) { return r.*field; },
            [field](const ExperimentRecord& r) { return opt_json(r.*field); },
            [field](ExperimentRecord& r, const std::string& s) {
                if (!s.empty()) r.*field = s;
            },
            [field](ExperimentRecord& r, const nlohmann::json& j) { r.*field = opt_from_json<std::string>(j); }};
}

Column opt_size_column(std::string name, std::optional<std::size_t> ExperimentRecord::*field) {
    return {name,
            [field](const ExperimentRecord& r) {
                return (r.*field) ? std::optional<std::string>(std::to_string(*(r.*field))) : std::nullopt;
            },
            [field](const ExperimentRecord& r) { return opt_json(r.*field); },
            [field](ExperimentRecord& r, const std::string& s) {
                if (!s.empty()) r.*field = parse_size(s);
            },
            [field](ExperimentRecord& r, const nlohmann::json& j) { r.*field = opt_from_json<std::size_t>(j); }};
}

Column opt_real_column(std::string name, std::optional<double> ExperimentRecord::*field) {
    return {name,
            [field](const ExperimentRecord& r) {
                return (r.*field) ? std::optional<std::string>(format_double(*(r.*field))) : std::nullopt;
            },
            [field](const ExperimentRecord& r) { return opt_json(r.*field); },
            [field](ExperimentRecord& r, const std::string& s) {
                if (!s.empty()) r.*field = parse_real(s);
            },
            [field](ExperimentRecord& r, const nlohmann::json& j) { r.*field = opt_from_json<double>(j); }};
}

const std::vector<Column>& columns() {
    using R = ExperimentRecord;
    static const std::vector<Column> cols = [] {
        std::vector<Column> c;
        c.push_back(string_column("dataset", &R::dataset));
        c.push_back({"fold", [](const R& r) { return std::optional<std::string>(std::to_string(r.fold)); },
                     [](const R& r) { return nlohmann::json(r.fold); },
                     [](R& r, const std::string& s) { r.fold = parse_size(s); },
                     [](R& r, const nlohmann::json& j) { r.fold = j.get<std::size_t>(); }});
        c.push_back(string_column("method", &R::method));
        c.push_back(string_column("scenario", &R::scenario));
        c.push_back(opt_size_column("k", &R::k));
        c.push_back(opt_size_column("alternative_index", &R::alternative_index));
        c.push_back(opt_size_column("tau_abs", &R::tau_abs));
        c.push_back(opt_real_column("timeout_s", &R::timeout_s));
        c.push_back(opt_real_column("train_nwracc", &R::train_nwracc));
        c.push_back(opt_real_column("test_nwracc", &R::test_nwracc));
        c.push_back(opt_real_column("train_hamming", &R::train_hamming));
        c.push_back(opt_real_column("test_hamming", &R::test_hamming));
        c.push_back(opt_real_column("train_jaccard", &R::train_jaccard));
        c.push_back(opt_real_column("test_jaccard", &R::test_jaccard));
        c.push_back(opt_size_column("selected_feature_count", &R::selected_feature_count));
        c.push_back(opt_real_column("runtime_s", &R::runtime_s));
        c.push_back(opt_string_column("solver_status", &R::solver_status));
        c.push_back({"degenerate",
                     [](const R& r) {
                         return r.degenerate ? std::optional<std::string>(*r.degenerate ? "true" : "false")
                                             : std::nullopt;
                     },
                     [](const R& r) { return opt_json(r.degenerate); },
                     [](R& r, const std::string& s) {
                         if (!s.empty()) r.degenerate = parse_bool(s);
                     },
                     [](R& r, const nlohmann::json& j) { r.degenerate = opt_from_json<bool>(j); }});
        c.push_back(string_column("status", &R::status));
        c.push_back(opt_string_column("error", &R::error));
        return c;
    }();
    return cols;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// RFC 4180 records: quoted fields may contain separators, doubled quotes and newlines.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

bool skip_column(const std::string& name, const ReportOptions& options) {
    return name == "runtime_s" && !options.include_runtime;
}

} // namespace

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& c : columns()) n.push_back(c.name);
        return n;
    }();
    return names;
}

std::string format_records(const std::vector<ExperimentRecord>& records, ReportFormat format,
                           const ReportOptions& options) {
    if (records.empty()) throw std::invalid_argument("no records to report");
    if (format == ReportFormat::Json) {
        nlohmann::ordered_json array = nlohmann::ordered_json::array();
        for (const auto& r : records) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (const auto& c : columns()) {
                obj[c.name] = skip_column(c.name, options) ? nlohmann::json(nullptr) : c.json(r);
            }
            array.push_back(std::move(obj));
        }
        return array.dump(2) + "\n";
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < columns().size(); ++i) out << (i ? "," : "") << columns()[i].name;
    out << "\n";
    for (const auto& r : records) {
        for (std::size_t i = 0; i < columns().size(); ++i) {
            const auto& c = columns()[i];
            if (i) out << ",";
            if (skip_column(c.name, options)) continue;
            if (auto v = c.text(r)) out << csv_escape(*v);
        }
        out << "\n";
    }
    return out.str();
}

void emit_report(const std::vector<ExperimentRecord>& records, ReportFormat format,
                 const std::filesystem::path& path, const ReportOptions& options) {
    const auto text = format_records(records, format, options);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report to " + path.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write report to " + path.string());
}

std::vector<ExperimentRecord> parse_records(const std::string& text, ReportFormat format) {
    std::vector<ExperimentRecord> records;
    if (format == ReportFormat::Json) {
        auto j = nlohmann::json::parse(text);
        if (!j.is_array()) throw std::invalid_argument("JSON report must be an array");
        for (const auto& obj : j) {
            ExperimentRecord r;
            for (const auto& c : columns()) {
                if (!obj.contains(c.name)) throw std::invalid_argument("JSON record lacks field " + c.name);
                c.from_json(r, obj.at(c.name));
            }
            records.push_back(std::move(r));
        }
        return records;
    }
    const auto rows = csv_rows(text);
    if (rows.empty()) throw std::invalid_argument("CSV report is empty");
    const auto& header = rows.front();
    std::vector<const Column*> order;
    for (const auto& name : header) {
        auto it = std::find_if(columns().begin(), columns().end(), [&](const Column& c) { return c.name == name; });
        if (it == columns().end()) throw std::invalid_argument("unknown CSV report column " + name);
        order.push_back(&*it);
    }
    for (std::size_t row = 1; row < rows.size(); ++row) {
        if (rows[row].size() != order.size()) {
            throw std::invalid_argument("CSV report row " + std::to_string(row + 1) + " has " +
                                        std::to_string(rows[row].size()) + " fields, expected " +
                                        std::to_string(order.size()));
        }
        ExperimentRecord r;
        for (std::size_t i = 0; i < order.size(); ++i) order[i]->from_text(r, rows[row][i]);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<ExperimentRecord> read_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open report " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_records(buf.str(), report_format_for(path));
}

namespace {

Statistic summarize(std::vector<double> values) {
    Statistic s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (auto v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    return s;
}

} // namespace

std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records) {
    using Key = std::tuple<std::string, std::size_t, std::optional<std::size_t>, std::optional<std::size_t>,
                           std::optional<std::size_t>, std::optional<double>>;
    struct Bucket {
        std::string scenario, method;
        std::size_t records = 0, errors = 0;
        std::vector<double> train, test, train_h, test_h, selected, runtime;
    };
    std::map<Key, Bucket> buckets;
    for (const auto& r : records) {
        Key key{r.scenario, static_cast<std::size_t>(parse_method(r.method)), r.k, r.tau_abs, r.alternative_index,
                r.timeout_s};
        auto& b = buckets[key];
        b.scenario = r.scenario;
        b.method = r.method;
        ++b.records;
        if (r.status != "ok") ++b.errors;
        if (r.train_nwracc) b.train.push_back(*r.train_nwracc);
        if (r.test_nwracc) b.test.push_back(*r.test_nwracc);
        if (r.train_hamming) b.train_h.push_back(*r.train_hamming);
        if (r.test_hamming) b.test_h.push_back(*r.test_hamming);
        if (r.selected_feature_count) b.selected.push_back(static_cast<double>(*r.selected_feature_count));
        if (r.runtime_s) b.runtime.push_back(*r.runtime_s);
    }
    std::vector<SummaryRow> rows;
    for (auto& [key, b] : buckets) {
        SummaryRow row;
        row.scenario = b.scenario;
        row.method = b.method;
        row.k = std::get<2>(key);
        row.tau_abs = std::get<3>(key);
        row.alternative_index = std::get<4>(key);
        row.timeout_s = std::get<5>(key);
        row.records = b.records;
        row.errors = b.errors;
        row.train_nwracc = summarize(b.train);
        row.test_nwracc = summarize(b.test);
        row.train_hamming = summarize(b.train_h);
        row.test_hamming = summarize(b.test_h);
        row.selected_feature_count = summarize(b.selected);
        row.runtime_s = summarize(b.runtime);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_summary(const std::vector<SummaryRow>& rows, ReportFormat format) {
    const std::vector<std::pair<std::string, Statistic SummaryRow::*>> stats = {
        {"train_nwracc", &SummaryRow::train_nwracc},
        {"test_nwracc", &SummaryRow::test_nwracc},
        {"train_hamming", &SummaryRow::train_hamming},
        {"test_hamming", &SummaryRow::test_hamming},
        {"selected_feature_count", &SummaryRow::selected_feature_count},
        {"runtime_s", &SummaryRow::runtime_s},
    };
    auto opt_num = [](const auto& v) -> std::string {
        if (!v) return "";
        if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, double>) {
            return format_double(*v);
        } else {
            return std::to_string(*v);
        }
    };

    if (format == ReportFormat::Json) {
        nlohmann::ordered_json array = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json obj;
            obj["scenario"] = r.scenario;
            obj["method"] = r.method;
            obj["k"] = opt_json(r.k);
            obj["tau_abs"] = opt_json(r.tau_abs);
            obj["alternative_index"] = opt_json(r.alternative_index);
            obj["timeout_s"] = opt_json(r.timeout_s);
            obj["records"] = r.records;
            obj["errors"] = r.errors;
            for (const auto& [name, field] : stats) {
                obj[name + "_mean"] = opt_json((r.*field).mean);
                obj[name + "_median"] = opt_json((r.*field).median);
            }
            array.push_back(std::move(obj));
        }
        return array.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "scenario,method,k,tau_abs,alternative_index,timeout_s,records,errors";
    for (const auto& [name, _] : stats) out << "," << name << "_mean," << name << "_median";
    out << "\n";
    for (const auto& r : rows) {
        out << r.scenario << "," << r.method << "," << opt_num(r.k) << "," << opt_num(r.tau_abs) << ","
            << opt_num(r.alternative_index) << "," << opt_num(r.timeout_s) << "," << r.records << "," << r.errors;
        for (const auto& [_, field] : stats) {
            out << "," << opt_num((r.*field).mean) << "," << opt_num((r.*field).median);
        }
        out << "\n";
    }
    return out.str();
}

} // namespace csd

#include "csd/smt.hpp"

#include "csd/detail/subprocess.hpp"
#include "csd/quality.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

namespace csd {

SolverOutputError::SolverOutputError(const std::string& reason, std::string output)
    : SolverError(reason + "; solver output:\n" + output), output_(std::move(output)) {}

std::string to_string(SolverStatus status) {
    switch (status) {
    case SolverStatus::Optimal: return "OPTIMAL";
    case SolverStatus::TimeoutWithModel: return "TIMEOUT_WITH_MODEL";
    case SolverStatus::TimeoutNoModel: return "TIMEOUT_NO_MODEL";
    case SolverStatus::Error: return "ERROR";
    }
    return "ERROR";
}

std::string smt_decimal(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("cannot emit a non-finite constant");
    if (value == 0.0) return "0.0";
    std::array<char, 512> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), std::fabs(value), std::chars_format::fixed);
    if (ec != std::errc{}) throw std::runtime_error("cannot format constant");
    std::string text(buf.data(), ptr);
    if (text.find('.') == std::string::npos) text += ".0";
    return value < 0 ? "(- " + text + ")" : text;
}

namespace {

std::string sum_of(const std::vector<std::string>& terms) {
    if (terms.empty()) return "0";
    if (terms.size() == 1) return terms.front();
    std::string out = "(+";
    for (const auto& t : terms) out += " " + t;
    return out + ")";
}

void require_both_classes(const Dataset& dataset) {
    if (dataset.positives() == 0 || dataset.positives() == dataset.rows()) {
        throw DegenerateTargetError("SMT encoding needs both classes in the target");
    }
}

/// Declarations and constraints shared by both problem kinds.
class Encoder {
  public:
    Encoder(const Dataset& dataset, SmtObjective kind) : data_(dataset) {
        problem_.objective_kind = kind;
        problem_.rows = dataset.rows();
        problem_.cols = dataset.cols();
    }

    void base() {
        using Role = SmtVariable::Role;
        out_ << "(set-option :produce-models true)\n";
        for (std::size_t j = 0; j < data_.cols(); ++j) {
            declare(SmtProblem::lower_name(j), "Real", {Role::Lower, j});
            declare(SmtProblem::upper_name(j), "Real", {Role::Upper, j});
        }
        for (std::size_t i = 0; i < data_.rows(); ++i) declare(SmtProblem::member_name(i), "Bool", {Role::Member, i});
        for (std::size_t j = 0; j < data_.cols(); ++j) {
            const auto lo = smt_decimal(data_.column_min(j));
            const auto hi = smt_decimal(data_.column_max(j));
            const auto lb = SmtProblem::lower_name(j);
            const auto ub = SmtProblem::upper_name(j);
            out_ << "(assert (and (<= " << lo << " " << lb << ") (<= " << lb << " " << hi << ")))\n";
            out_ << "(assert (and (<= " << lo << " " << ub << ") (<= " << ub << " " << hi << ")))\n";
            out_ << "(assert (<= " << lb << " " << ub << "))\n";
        }
        for (std::size_t i = 0; i < data_.rows(); ++i) {
            out_ << "(assert (= " << SmtProblem::member_name(i) << " (and";
            for (std::size_t j = 0; j < data_.cols(); ++j) {
                const auto x = smt_decimal(data_.at(i, j));
                out_ << " (<= " << SmtProblem::lower_name(j) << " " << x << ") (<= " << x << " "
                     << SmtProblem::upper_name(j) << ")";
            }
            out_ << ")))\n";
        }
    }

    void selection(std::optional<CardinalityConstraint> k) {
        using Role = SmtVariable::Role;
        problem_.has_selection = true;
        for (std::size_t j = 0; j < data_.cols(); ++j) {
            declare(SmtProblem::selected_name(j), "Bool", {Role::Selected, j});
            declare(SmtProblem::selected_lower_name(j), "Bool", {Role::SelectedLower, j});
            declare(SmtProblem::selected_upper_name(j), "Bool", {Role::SelectedUpper, j});
        }
        for (std::size_t j = 0; j < data_.cols(); ++j) {
            out_ << "(assert (= " << SmtProblem::selected_lower_name(j) << " (< "
                 << smt_decimal(data_.column_min(j)) << " " << SmtProblem::lower_name(j) << ")))\n";
            out_ << "(assert (= " << SmtProblem::selected_upper_name(j) << " (< "
                 << SmtProblem::upper_name(j) << " " << smt_decimal(data_.column_max(j)) << ")))\n";
            out_ << "(assert (= " << SmtProblem::selected_name(j) << " (or "
                 << SmtProblem::selected_lower_name(j) << " " << SmtProblem::selected_upper_name(j) << ")))\n";
        }
        if (k) {
            std::vector<std::string> terms;
            for (std::size_t j = 0; j < data_.cols(); ++j) {
                terms.push_back("(ite " + SmtProblem::selected_name(j) + " 1 0)");
            }
            out_ << "(assert (<= " << sum_of(terms) << " " << k->k << "))\n";
        }
    }

    void dissimilarity(const AlternativesContext& context) {
        for (const auto& old : context.existing()) {
            const std::size_t required = std::min(context.tau_abs(), old.selected_count);
            if (required == 0) continue;
            std::vector<std::string> terms;
            for (std::size_t j = 0; j < data_.cols(); ++j) {
                if (old.selection[j]) terms.push_back("(ite " + SmtProblem::selected_name(j) + " 0 1)");
            }
            out_ << "(assert (>= " << sum_of(terms) << " " << required << "))\n";
        }
    }

    void maximize(const std::string& objective) {
        out_ << "(maximize " << objective << ")\n(check-sat)\n(get-objectives)\n(get-model)\n";
    }

    SmtProblem& problem() { return problem_; }

    SmtProblem finish() {
        problem_.text = out_.str();
        return std::move(problem_);
    }

  private:
    void declare(const std::string& name, const char* sort, SmtVariable var) {
        out_ << "(declare-fun " << name << " () " << sort << ")\n";
        problem_.variable_map.emplace(name, var);
    }

    const Dataset& data_;
    SmtProblem problem_;
    std::ostringstream out_;
};

} // namespace

SmtProblem encode_subgroup_discovery(const Dataset& dataset, std::optional<CardinalityConstraint> k) {
    require_both_classes(dataset);
    Encoder enc(dataset, SmtObjective::WRAcc);
    enc.base();
    if (k) enc.selection(k);

    const auto m = static_cast<long long>(dataset.rows());
    const auto m_pos = static_cast<long long>(dataset.positives());
    std::vector<std::string> positives, all;
    auto& weights = enc.problem().objective_weights;
    for (std::size_t i = 0; i < dataset.rows(); ++i) {
        const auto term = "(ite " + SmtProblem::member_name(i) + " 1 0)";
        if (dataset.target()[i]) positives.push_back(term);
        all.push_back(term);
        weights.push_back((dataset.target()[i] ? m : 0) - m_pos);
    }
    enc.maximize("(- (* " + std::to_string(m) + " " + sum_of(positives) + ") (* " + std::to_string(m_pos) +
                 " " + sum_of(all) + "))");
    return enc.finish();
}

SmtProblem encode_alternative(const Dataset& dataset, const AlternativesContext& context,
                              std::optional<CardinalityConstraint> k) {
    require_both_classes(dataset);
    if (context.empty()) throw std::invalid_argument("alternatives context holds no original subgroup");
    if (context.features() != dataset.cols() || context.original().membership.size() != dataset.rows()) {
        throw std::invalid_argument("alternatives context does not match the dataset dimensions");
    }
    Encoder enc(dataset, SmtObjective::Hamming);
    enc.base();
    enc.selection(k);
    enc.dissimilarity(context);

    const auto& original = context.original().membership;
    std::vector<std::string> terms;
    auto& problem = enc.problem();
    for (std::size_t i = 0; i < dataset.rows(); ++i) {
        const auto b = SmtProblem::member_name(i);
        if (original[i]) {
            terms.push_back("(ite " + b + " 1 0)");
            problem.objective_weights.push_back(1);
        } else {
            terms.push_back("(ite " + b + " 0 1)");
            problem.objective_weights.push_back(-1);
            ++problem.objective_offset;
        }
    }
    enc.maximize(sum_of(terms));
    return enc.finish();
}

// ---------------------------------------------------------------------------
// solver output

namespace {

struct SExpr {
    std::string atom;
    std::vector<SExpr> items;
    bool is_list = false;
};

class SExprReader {
  public:
    explicit SExprReader(const std::string& text) : text_(text) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        while (skip_space(), pos_ < text_.size()) out.push_back(read());
        return out;
    }

  private:
    void skip_space() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_[pos_] == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip_space();
        if (pos_ >= text_.size()) throw std::runtime_error("unexpected end of output");
        const char c = text_[pos_];
        if (c == ')') throw std::runtime_error("unbalanced ')'");
        SExpr e;
        if (c == '(') {
            ++pos_;
            e.is_list = true;
            while (skip_space(), pos_ < text_.size() && text_[pos_] != ')') e.items.push_back(read());
            if (pos_ >= text_.size()) throw std::runtime_error("unterminated list");
            ++pos_;
            return e;
        }
        if (c == '"' || c == '|') {
            const std::size_t start = pos_++;
            while (pos_ < text_.size()) {
                if (text_[pos_] == c) {
                    if (c == '"' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                        pos_ += 2;
                        continue;
                    }
                    break;
                }
                ++pos_;
            }
            if (pos_ >= text_.size()) throw std::runtime_error("unterminated string");
            ++pos_;
            e.atom = text_.substr(start, pos_ - start);
            return e;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')') {
            ++pos_;
        }
        e.atom = text_.substr(start, pos_ - start);
        return e;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

std::optional<double> numeric_value(const SExpr& e) {
    if (!e.is_list) {
        double v = 0.0;
        const char* b = e.atom.data();
        const char* end = b + e.atom.size();
        auto [ptr, ec] = std::from_chars(b, end, v);
        if (ec != std::errc{} || ptr != end) return std::nullopt;
        return v;
    }
    if (e.items.empty() || e.items[0].is_list) return std::nullopt;
    const auto& op = e.items[0].atom;
    std::vector<double> args;
    for (std::size_t a = 1; a < e.items.size(); ++a) {
        auto v = numeric_value(e.items[a]);
        if (!v) return std::nullopt;
        args.push_back(*v);
    }
    if (args.empty()) return std::nullopt;
    if (op == "-") {
        if (args.size() == 1) return -args[0];
        double r = args[0];
        for (std::size_t a = 1; a < args.size(); ++a) r -= args[a];
        return r;
    }
    if (op == "+") {
        double r = 0.0;
        for (auto v : args) r += v;
        return r;
    }
    if (op == "*") {
        double r = 1.0;
        for (auto v : args) r *= v;
        return r;
    }
    if (op == "/" && args.size() == 2) return args[0] / args[1];
    return std::nullopt;
}

bool is_define_fun(const SExpr& e) {
    return e.is_list && !e.items.empty() && !e.items[0].is_list && e.items[0].atom == "define-fun";
}

bool looks_like_model(const SExpr& e) {
    if (!e.is_list) return false;
    std::size_t first = 0;
    if (!e.items.empty() && !e.items[0].is_list && e.items[0].atom == "model") first = 1;
    if (first == e.items.size()) return first == 0; // "()" is an empty model
    for (std::size_t k = first; k < e.items.size(); ++k) {
        if (!is_define_fun(e.items[k])) return false;
    }
    return true;
}

std::map<std::string, ModelValue> read_model(const SExpr& e, const std::string& output) {
    std::map<std::string, ModelValue> model;
    for (const auto& item : e.items) {
        if (!is_define_fun(item)) continue;
        if (item.items.size() != 5 || item.items[1].is_list) {
            throw SolverOutputError("malformed model entry", output);
        }
        const auto& name = item.items[1].atom;
        const auto& value = item.items[4];
        if (!value.is_list && (value.atom == "true" || value.atom == "false")) {
            model[name] = value.atom == "true";
        } else if (auto v = numeric_value(value)) {
            model[name] = *v;
        } else {
            throw SolverOutputError("cannot read value of '" + name + "'", output);
        }
    }
    return model;
}

std::optional<double> objective_from_model(const SmtProblem& problem,
                                           const std::map<std::string, ModelValue>& model) {
    long long total = problem.objective_offset;
    for (std::size_t i = 0; i < problem.rows; ++i) {
        auto it = model.find(SmtProblem::member_name(i));
        if (it == model.end() || !std::holds_alternative<bool>(it->second)) return std::nullopt;
        if (std::get<bool>(it->second)) total += problem.objective_weights.at(i);
    }
    return static_cast<double>(total);
}

std::vector<std::string> split_command(const std::string& command) {
    std::istringstream in(command);
    std::vector<std::string> parts;
    for (std::string token; in >> token;) parts.push_back(token);
    return parts;
}

void replace_all(std::string& text, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos; pos += to.size()) {
        text.replace(pos, from.size(), to);
    }
}

class TempFile {
  public:
    explicit TempFile(const std::string& contents) {
        auto pattern = (std::filesystem::temp_directory_path() / "csd_smt_XXXXXX.smt2").string();
        std::vector<char> buf(pattern.begin(), pattern.end());
        buf.push_back('\0');
        const int fd = ::mkstemps(buf.data(), 5);
        if (fd < 0) throw std::runtime_error("cannot create a temporary solver input file");
        ::close(fd);
        path_ = buf.data();
        std::ofstream out(path_, std::ios::binary);
        out << contents;
        if (!out) throw std::runtime_error("cannot write solver input to " + path_);
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

} // namespace

SolverOutcome parse_solver_output(const SmtProblem& problem, const std::string& output) {
    std::vector<SExpr> exprs;
    try {
        exprs = SExprReader(output).read_all();
    } catch (const std::exception& e) {
        throw SolverOutputError(std::string("unparseable solver output: ") + e.what(), output);
    }

    SolverOutcome outcome;
    outcome.raw_output = output;
    std::optional<std::string> verdict;
    bool saw_error = false;
    for (const auto& e : exprs) {
        if (!e.is_list) {
            if (!verdict && (e.atom == "sat" || e.atom == "unsat" || e.atom == "unknown" || e.atom == "timeout")) {
                verdict = e.atom;
                continue;
            }
            throw SolverOutputError("unexpected token '" + e.atom + "'", output);
        }
        if (!e.items.empty() && !e.items[0].is_list && e.items[0].atom == "objectives") {
            for (std::size_t k = 1; k < e.items.size() && !outcome.reported_objective; ++k) {
                const auto& entry = e.items[k];
                if (entry.is_list && entry.items.size() == 2) outcome.reported_objective = numeric_value(entry.items[1]);
            }
        } else if (!e.items.empty() && !e.items[0].is_list && e.items[0].atom == "error") {
            // z3 reports a cancelled check-sat as an error in place of the verdict
            const std::string message = e.items.size() > 1 && !e.items[1].is_list ? e.items[1].atom : "";
            if (!verdict && (message.find("canceled") != std::string::npos ||
                             message.find("timeout") != std::string::npos)) {
                verdict = "unknown";
            } else {
                saw_error = true;
            }
        } else if (looks_like_model(e)) {
            outcome.model = read_model(e, output);
        } else {
            throw SolverOutputError("unrecognized solver response", output);
        }
    }

    if (!verdict) {
        if (saw_error) {
            outcome.status = SolverStatus::Error;
            outcome.model.reset();
            return outcome;
        }
        throw SolverOutputError("solver printed no satisfiability verdict", output);
    }
    if (*verdict == "sat") {
        if (!outcome.model) throw SolverOutputError("solver reported sat without a model", output);
        outcome.status = SolverStatus::Optimal;
    } else if (*verdict == "unsat") {
        outcome.status = SolverStatus::Error;
        outcome.model.reset();
    } else {
        outcome.status = outcome.model ? SolverStatus::TimeoutWithModel : SolverStatus::TimeoutNoModel;
    }
    if (outcome.model) {
        outcome.objective_value = objective_from_model(problem, *outcome.model);
        if (!outcome.objective_value) throw SolverOutputError("model lacks membership variables", output);
    } else {
        outcome.objective_value = outcome.reported_objective;
    }
    return outcome;
}

SolverOutcome run_solver(const SmtProblem& problem, const std::string& solver_command, double timeout_s) {
    if (!(timeout_s > 0.0)) throw std::invalid_argument("solver timeout must be positive");
    auto argv = split_command(solver_command);
    if (argv.empty()) throw std::invalid_argument("empty solver command");

    TempFile input(problem.text);
    const long long timeout_ms = std::max<long long>(1, std::llround(timeout_s * 1000.0));
    bool has_file = false;
    for (auto& arg : argv) {
        if (arg.find("{file}") != std::string::npos) has_file = true;
        replace_all(arg, "{file}", input.path());
        replace_all(arg, "{timeout_ms}", std::to_string(timeout_ms));
        replace_all(arg, "{timeout_s}", format_double(timeout_s));
    }
    if (!has_file) argv.push_back(input.path());

    const double grace = std::max(2.0, 0.25 * timeout_s);
    detail::ProcessResult proc;
    try {
        proc = detail::run_process(argv, timeout_s + grace);
    } catch (const detail::ExecutableNotFound& e) {
        throw SolverNotFound(e.what());
    }

    SolverOutcome outcome;
    if (proc.killed) {
        try {
            outcome = parse_solver_output(problem, proc.out);
            if (outcome.status == SolverStatus::Optimal) outcome.status = SolverStatus::TimeoutWithModel;
        } catch (const SolverOutputError&) {
            outcome = SolverOutcome{};
            outcome.status = SolverStatus::TimeoutNoModel;
            outcome.raw_output = proc.out;
        }
    } else if (proc.out.find_first_not_of(" \t\r\n") == std::string::npos) {
        if (proc.signaled || proc.exit_code != 0) {
            throw SolverError("solver exited abnormally without output" +
                              (proc.err.empty() ? std::string() : ": " + proc.err));
        }
        throw SolverOutputError("solver produced no output", proc.err);
    } else {
        outcome = parse_solver_output(problem, proc.out);
    }
    outcome.wall_time = proc.wall_time;
    return outcome;
}

BitVector model_membership(const SolverOutcome& outcome, const SmtProblem& problem) {
    if (!outcome.model) throw SolverError("solver outcome carries no model");
    BitVector b(problem.rows, 0);
    for (std::size_t i = 0; i < problem.rows; ++i) {
        const auto name = SmtProblem::member_name(i);
        auto it = outcome.model->find(name);
        if (it == outcome.model->end() || !std::holds_alternative<bool>(it->second)) {
            throw SolverOutputError("model misses variable " + name, outcome.raw_output);
        }
        b[i] = std::get<bool>(it->second) ? 1 : 0;
    }
    return b;
}

SubgroupDescription decode_model(const SolverOutcome& outcome, const SmtProblem& problem,
                                 const Dataset& dataset) {
    if (problem.rows != dataset.rows() || problem.cols != dataset.cols()) {
        throw std::invalid_argument("problem and dataset dimensions differ");
    }
    const BitVector b = model_membership(outcome, problem);
    if (count_ones(b) == 0) return SubgroupDescription::empty_sentinel(dataset.cols());
    const auto& model = *outcome.model;

    auto flag = [&](const std::string& selected, const std::string& bound, bool lower, std::size_t j) {
        if (auto it = model.find(selected); it != model.end() && std::holds_alternative<bool>(it->second)) {
            return std::get<bool>(it->second);
        }
        auto it = model.find(bound);
        if (it == model.end() || !std::holds_alternative<double>(it->second)) {
            throw SolverOutputError("model misses variable " + bound, outcome.raw_output);
        }
        const double v = std::get<double>(it->second);
        return lower ? v > dataset.column_min(j) : v < dataset.column_max(j);
    };

    std::vector<Bound> lower(dataset.cols(), Bound::neg_inf());
    std::vector<Bound> upper(dataset.cols(), Bound::pos_inf());
    for (std::size_t j = 0; j < dataset.cols(); ++j) {
        const bool keep_lower = flag(SmtProblem::selected_lower_name(j), SmtProblem::lower_name(j), true, j);
        const bool keep_upper = flag(SmtProblem::selected_upper_name(j), SmtProblem::upper_name(j), false, j);
        if (!keep_lower && !keep_upper) continue;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        auto col = dataset.column(j);
        for (std::size_t i = 0; i < dataset.rows(); ++i) {
            if (!b[i]) continue;
            lo = std::min(lo, col[i]);
            hi = std::max(hi, col[i]);
        }
        if (keep_lower && lo > dataset.column_min(j)) lower[j] = Bound::finite(lo);
        if (keep_upper && hi < dataset.column_max(j)) upper[j] = Bound::finite(hi);
    }
    SubgroupDescription desc(std::move(lower), std::move(upper));
    if (membership(desc, dataset) != b) {
        throw SolverOutputError("model bounds and membership are inconsistent", outcome.raw_output);
    }
    return desc;
}

bool default_solver_available() {
    const char* path = std::getenv("PATH");
    if (!path) return false;
    std::istringstream dirs(path);
    for (std::string dir; std::getline(dirs, dir, ':');) {
        if (dir.empty()) continue;
        const auto candidate = std::filesystem::path(dir) / "z3";
        if (::access(candidate.c_str(), X_OK) == 0) return true;
    }
    return false;
}

} // namespace csd

#include "atr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "atr/atr_extra.hpp"
#include "atr/atr_local.hpp"
#include "atr/baselines.hpp"
#include "atr/errors.hpp"

namespace atr {

namespace {

const std::vector<std::string> kKnownMethods = {"V1",   "V2",    "Newton", "UTR1",
                                                "UTR2", "Cubic", "CubicA"};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value)
{
    double v = 0.0;
    const char* end = value.data() + value.size();
    auto [p, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || p != end)
        throw ConfigError(key, "expected a number, got '" + value + "'");
    return v;
}

long long to_int(const std::string& key, const std::string& value)
{
    long long v = 0;
    const char* end = value.data() + value.size();
    auto [p, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || p != end)
        throw ConfigError(key, "expected an integer, got '" + value + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw ConfigError(key, "expected a boolean, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : value) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value)
{
    if (key == "epsilon") {
        cfg.epsilon = to_double(key, value);
    } else if (key == "methods") {
        cfg.methods = split_list(value);
    } else if (key == "data") {
        cfg.data_path = value;
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "seed") {
        cfg.seed = static_cast<unsigned long long>(to_int(key, value));
    } else if (key == "gamma_reg") {
        cfg.gamma_reg = to_double(key, value);
    } else if (key == "m_policy") {
        if (value == "paper")
            cfg.m_policy = MPolicy::paper_estimate;
        else if (value == "half")
            cfg.m_policy = MPolicy::half_paper_estimate;
        else if (value == "explicit")
            cfg.m_policy = MPolicy::explicit_value;
        else
            throw ConfigError(key, "expected paper|half|explicit, got '" + value + "'");
    } else if (key == "m_value") {
        cfg.m_value = to_double(key, value);
    } else if (key == "jobs") {
        cfg.jobs = static_cast<int>(to_int(key, value));
    } else if (key == "max_outer") {
        cfg.max_outer = static_cast<int>(to_int(key, value));
    } else if (key == "synth_rows") {
        cfg.synth_rows = static_cast<int>(to_int(key, value));
    } else if (key == "synth_cols") {
        cfg.synth_cols = static_cast<int>(to_int(key, value));
    } else if (key == "strict") {
        cfg.strict = to_bool(key, value);
    } else if (key == "telemetry") {
        cfg.telemetry = to_bool(key, value);
    } else {
        cfg.warnings.push_back("unknown config key: " + key);
    }
}

void validate_config(const RunConfig& cfg)
{
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        throw ConfigError("epsilon", "must lie in (0,1)");
    if (cfg.methods.empty())
        throw ConfigError("methods", "at least one method is required");
    for (const auto& m : cfg.methods)
        if (std::find(kKnownMethods.begin(), kKnownMethods.end(), m) ==
            kKnownMethods.end())
            throw ConfigError("methods", "unknown method '" + m + "'");
    if (cfg.m_policy == MPolicy::explicit_value && !(cfg.m_value > 0.0))
        throw ConfigError("m_value", "explicit M policy requires m_value > 0");
    if (cfg.jobs < 1)
        throw ConfigError("jobs", "must be >= 1");
    if (cfg.max_outer < 1)
        throw ConfigError("max_outer", "must be >= 1");
    if (cfg.synth_rows < 1 || cfg.synth_cols < 2)
        throw ConfigError("synth_rows", "synthetic shape must be at least 1x2");
}

RunConfig parse_config(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides)
{
    RunConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("config", "cannot read '" + path + "'");
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config", "expected key = value, got '" + line + "'");
            apply_config_entry(cfg, trim(line.substr(0, eq)),
                               trim(line.substr(eq + 1)));
        }
    }
    for (const auto& [key, value] : overrides)
        apply_config_entry(cfg, key, value);
    if (cfg.out_dir.empty()) {
        if (const char* env = std::getenv("ATR_OUT_DIR"))
            cfg.out_dir = env;
    }
    validate_config(cfg);
    return cfg;
}

Report run_cell(const std::string& method, const RunConfig& cfg,
                std::shared_ptr<const Dataset> data, double m_hat)
{
    LogisticProblem problem(std::move(data), cfg.gamma_reg);
    const Vec x0(problem.dim(), 0.0);
    double m = m_hat;
    if (cfg.m_policy == MPolicy::half_paper_estimate)
        m = 0.5 * m_hat;
    else if (cfg.m_policy == MPolicy::explicit_value)
        m = cfg.m_value;

    if (method == "V1") {
        AtrLdConfig c;
        c.epsilon = cfg.epsilon;
        c.M = m;
        c.max_outer = cfg.max_outer;
        c.telemetry = cfg.telemetry;
        return run_variant1(problem, c, x0);
    }
    if (method == "V2") {
        AtrEgConfig c;
        c.epsilon = cfg.epsilon;
        c.M = m;
        c.max_outer = cfg.max_outer;
        c.telemetry = cfg.telemetry;
        return run_variant2(problem, c, x0);
    }
    BaselineConfig c;
    c.epsilon = cfg.epsilon;
    c.M = method == "UTR1" ? 0.5 * m : m;
    c.max_outer = cfg.max_outer;
    c.telemetry = cfg.telemetry;
    if (method == "Newton")
        return run_newton(problem, c, x0);
    if (method == "UTR1" || method == "UTR2")
        return run_utr(problem, c, x0, method);
    if (method == "Cubic")
        return run_cubic_newton(problem, c, x0);
    if (method == "CubicA")
        return run_cubic_accel(problem, c, x0);
    throw ConfigError("methods", "unknown method '" + method + "'");
}

std::vector<Report> run_suite(const RunConfig& cfg)
{
    auto data = std::make_shared<Dataset>(
        cfg.data_path.empty()
            ? synthetic_logistic_dataset(cfg.synth_rows, cfg.synth_cols, cfg.seed)
            : load_libsvm(cfg.data_path));
    const double m_hat =
        lipschitz_estimate(LogisticProblem(data, cfg.gamma_reg));

    std::vector<Report> reports(cfg.methods.size());
    auto work = [&](std::size_t i) {
        try {
            reports[i] = run_cell(cfg.methods[i], cfg, data, m_hat);
        } catch (const std::exception& e) {
            reports[i].method = cfg.methods[i];
            reports[i].reason = StopReason::error;
            reports[i].error_kind = e.what();
        }
    };
    const std::size_t jobs =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), reports.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < reports.size(); ++i)
            work(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (std::size_t t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < reports.size();
                     i = next.fetch_add(1))
                    work(i);
            });
        for (auto& th : pool)
            th.join();
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        for (const auto& r : reports)
            write_trace(r, (std::filesystem::path(cfg.out_dir) /
                            (r.method + "_trace.csv"))
                               .string());
    }
    return reports;
}

std::string fmt_double(double v)
{
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

namespace {

const char kTraceHeader[] =
    "method,outer_k,inner_calls,f,grad_norm,sigma,lambda,mu,step_norm,"
    "n_hessian,n_factorizations,phase,wall_ns";

double parse_field_double(const std::string& s)
{
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end)
        throw Error("bad numeric field in trace: '" + s + "'");
    return v;
}

long long parse_field_int(const std::string& s)
{
    long long v = 0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end)
        throw Error("bad integer field in trace: '" + s + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string serialize_trace(const Report& report)
{
    std::string out = kTraceHeader;
    out += '\n';
    for (const auto& r : report.trace) {
        out += r.method;
        out += ',' + std::to_string(r.outer_k);
        out += ',' + std::to_string(r.inner_calls);
        out += ',' + fmt_double(r.f);
        out += ',' + fmt_double(r.grad_norm);
        out += ',' + fmt_double(r.sigma);
        out += ',' + fmt_double(r.lambda);
        out += ',' + fmt_double(r.mu);
        out += ',' + fmt_double(r.step_norm);
        out += ',' + std::to_string(r.n_hessian);
        out += ',' + std::to_string(r.n_factorizations);
        out += ',';
        out += phase_name(r.phase);
        out += ',' + std::to_string(r.wall_ns);
        out += '\n';
    }
    return out;
}

void write_trace(const Report& report, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write trace file '" + path + "'");
    out << serialize_trace(report);
    if (!out)
        throw Error("write failure on trace file '" + path + "'");
}

std::vector<TraceRow> parse_trace(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != kTraceHeader)
        throw Error("trace header mismatch");
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        const auto f = split_csv(trim(line));
        if (f.size() != 13)
            throw Error("trace row has " + std::to_string(f.size()) +
                        " fields, expected 13");
        TraceRow r;
        r.method = f[0];
        r.outer_k = static_cast<int>(parse_field_int(f[1]));
        r.inner_calls = static_cast<int>(parse_field_int(f[2]));
        r.f = parse_field_double(f[3]);
        r.grad_norm = parse_field_double(f[4]);
        r.sigma = parse_field_double(f[5]);
        r.lambda = parse_field_double(f[6]);
        r.mu = parse_field_double(f[7]);
        r.step_norm = parse_field_double(f[8]);
        r.n_hessian = parse_field_int(f[9]);
        r.n_factorizations = parse_field_int(f[10]);
        r.phase = phase_from_name(f[11]);
        r.wall_ns = parse_field_int(f[12]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<TraceRow> read_trace(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read trace file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

namespace {

std::vector<const Report*> sorted_by_hessians(const std::vector<Report>& reports)
{
    std::vector<const Report*> ptrs;
    for (const auto& r : reports)
        ptrs.push_back(&r);
    std::stable_sort(ptrs.begin(), ptrs.end(), [](const Report* a, const Report* b) {
        return a->counters.n_hessian < b->counters.n_hessian;
    });
    return ptrs;
}

std::string reason_label(const Report& r)
{
    std::string s = stop_reason_name(r.reason);
    if (r.reason == StopReason::error && !r.error_kind.empty())
        s += "(" + r.error_kind + ")";
    return s;
}

}  // namespace

std::string summarize_text(const std::vector<Report>& reports)
{
    std::ostringstream out;
    out << std::left << std::setw(8) << "method" << std::right << std::setw(10)
        << "hessians" << std::setw(8) << "facts" << std::setw(7) << "iters"
        << std::setw(14) << "grad_norm" << std::setw(16) << "final_f"
        << "  reason\n";
    for (const Report* r : sorted_by_hessians(reports)) {
        out << std::left << std::setw(8) << r->method << std::right << std::setw(10)
            << r->counters.n_hessian << std::setw(8) << r->counters.n_factorizations
            << std::setw(7) << r->iterations << std::setw(14) << std::scientific
            << std::setprecision(3) << r->final_grad_norm << std::setw(16)
            << std::setprecision(8) << r->final_f << "  " << reason_label(*r)
            << "\n";
        out << std::defaultfloat;
    }
    return out.str();
}

std::string summarize_csv(const std::vector<Report>& reports)
{
    std::string out = "method,n_hessian,n_factorizations,iterations,final_grad_norm,"
                      "final_f,reason\n";
    for (const Report* r : sorted_by_hessians(reports)) {
        out += r->method;
        out += ',' + std::to_string(r->counters.n_hessian);
        out += ',' + std::to_string(r->counters.n_factorizations);
        out += ',' + std::to_string(r->iterations);
        out += ',' + fmt_double(r->final_grad_norm);
        out += ',' + fmt_double(r->final_f);
        out += ',' + reason_label(*r) + '\n';
    }
    return out;
}

}  // namespace atr

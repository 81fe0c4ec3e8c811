#pragma once

#include <memory>
#include <string>
#include <vector>

#include "atr/objective.hpp"
#include "atr/report.hpp"

namespace atr {

enum class MPolicy { paper_estimate, half_paper_estimate, explicit_value };

struct RunConfig {
    std::string data_path;       // LIBSVM file; empty means synthetic
    int synth_rows = 500;
    int synth_cols = 50;
    unsigned long long seed = 42;
    double gamma_reg = 1e-4;
    std::vector<std::string> methods;  // V1 V2 Newton UTR1 UTR2 Cubic CubicA
    double epsilon = 1e-8;
    MPolicy m_policy = MPolicy::paper_estimate;
    double m_value = 0.0;        // explicit_value only
    std::string out_dir;
    int jobs = 1;
    int max_outer = 10000;
    bool telemetry = true;
    bool strict = false;
    std::vector<std::string> warnings;  // unknown config keys
};

// Flat `key = value` file merged with overrides (overrides win). Either source
// may be empty; the merged config is validated.
RunConfig parse_config(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>&
                           overrides = {});
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);
void validate_config(const RunConfig& cfg);

// One (method x problem) execution: fresh problem instance per cell so the
// evaluation-counter deltas are exact.
Report run_cell(const std::string& method, const RunConfig& cfg,
                std::shared_ptr<const Dataset> data, double m_hat);
std::vector<Report> run_suite(const RunConfig& cfg);

// Shortest round-trip-exact decimal form.
std::string fmt_double(double v);

void write_trace(const Report& report, const std::string& path);
std::string serialize_trace(const Report& report);
std::vector<TraceRow> parse_trace(const std::string& text);
std::vector<TraceRow> read_trace(const std::string& path);

// Per-method cost table sorted by Hessian evaluations ascending.
std::string summarize_text(const std::vector<Report>& reports);
std::string summarize_csv(const std::vector<Report>& reports);

int cli_main(int argc, const char* const* argv);

}  // namespace atr

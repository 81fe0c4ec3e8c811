#pragma once

#include <string>
#include <vector>

#include "atr/objective.hpp"
#include "atr/vec.hpp"

namespace atr {

enum class Phase { global, direct_accept, diving, bisection };

const char* phase_name(Phase p);
Phase phase_from_name(const std::string& name);

enum class StopReason { grad_tol, early_terminate, max_iterations, error };

const char* stop_reason_name(StopReason r);

// One row per outer iteration.
struct TraceRow {
    std::string method;
    int outer_k = 0;
    int inner_calls = 0;  // TR-oracle / subproblem calls inside this iteration
    double f = 0.0;
    double grad_norm = 0.0;
    double sigma = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
    double step_norm = 0.0;
    long n_hessian = 0;         // cumulative within the run
    long n_factorizations = 0;  // cumulative within the run
    Phase phase = Phase::global;
    long wall_ns = 0;
};

struct Report {
    std::string method;
    Vec final_point;
    StopReason reason = StopReason::grad_tol;
    std::string error_kind;  // set when reason == error
    int iterations = 0;
    double final_f = 0.0;
    double final_grad_norm = 0.0;
    CounterSnapshot counters;  // deltas for this run
    std::vector<TraceRow> trace;
    std::vector<std::string> violations;  // telemetry invariant breaches
    // Gradient norms along each Newton-diving excursion (Variant I only).
    std::vector<std::vector<double>> diving_grads;
};

}  // namespace atr

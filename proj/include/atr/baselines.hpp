#pragma once

#include "atr/objective.hpp"
#include "atr/report.hpp"
#include "atr/vec.hpp"

// Unaccelerated reference methods: plain Newton, the trust-region schedule
// without acceleration (UTR), cubic regularized Newton, and its accelerated
// variant built on the same estimating-sequence scaffold as Variant I.

namespace atr {

struct BaselineConfig {
    double epsilon = 1e-8;
    double M = 1.0;
    int max_outer = 10000;
    bool telemetry = true;
};

// Cubic-model step at x: d = -(H + (M t / 2) I)^{-1} g with t = ||d||.
struct CubicStep {
    Vec d;
    double t = 0.0;
    int n_factorizations = 0;
};

CubicStep cubic_step(const Mat& h, const Vec& g, double m, double tol = 1e-12);

Report run_newton(const Objective& problem, const BaselineConfig& cfg, const Vec& x0);
// method_tag picks the reported name ("UTR1" / "UTR2"); the Lipschitz estimate
// difference between the two lives in cfg.M.
Report run_utr(const Objective& problem, const BaselineConfig& cfg, const Vec& x0,
               const std::string& method_tag = "UTR2");
Report run_cubic_newton(const Objective& problem, const BaselineConfig& cfg,
                        const Vec& x0);
Report run_cubic_accel(const Objective& problem, const BaselineConfig& cfg,
                       const Vec& x0);

}  // namespace atr

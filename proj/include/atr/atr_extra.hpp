#pragma once

#include <optional>

#include "atr/objective.hpp"
#include "atr/report.hpp"
#include "atr/vec.hpp"

// Variant II: accelerated trust-region extragradient method with bisection
// over the primal regularizer sigma along the extrapolation curve y(sigma).

namespace atr {

enum class G0Policy { user_supplied, from_d0, adaptive_doubling };

struct AtrEgConfig {
    double epsilon = 1e-8;
    double M = 1.0;
    double theta = 2.0;   // > 1
    double eta = 0.5;     // in (0,1)
    double gamma = 0.5;   // in (0, 1/theta]
    std::optional<double> d0;  // ||x0 - x*|| estimate for the from_d0 policy
    G0Policy g0_policy = G0Policy::adaptive_doubling;
    double g0_value = 0.0;     // used by user_supplied
    double kappa_h = 0.0;      // used by from_d0; <=0 means estimate at x0
    int max_outer = 100000;
    int bisection_max = 64;
    int max_restarts = 10;     // adaptive-doubling restarts per search
    double lambda_zero_tol = 1e-8;
    bool telemetry = true;
    bool use_sigma_hint = true;  // seed the bisection with the last accepted sigma
};

struct ExtraState {
    int k = 0;
    Vec x;
    Vec v;
    double A = 0.0;
    double sigma_hint = 0.0;
};

// a(sigma) = (1 + sqrt(1 + 4 A sigma)) / (2 sigma); satisfies sigma a^2 = A + a
double a_of_sigma(double A, double sigma);
// y(sigma) = A/(A+a) x + a/(A+a) v
Vec y_of_sigma(const Vec& x, const Vec& v, double A, double sigma);

struct Bracket {
    double sigma_minus;
    double sigma_plus;
};

Bracket bracket_init(const AtrEgConfig& cfg, double grad_norm_x0);

enum class SigmaClass { step_too_small, lambda_too_large, accept };

SigmaClass classify_sigma(double lambda, double d_norm, double sigma,
                          const AtrEgConfig& cfg);

struct RnbOutcome {
    Vec x_next;
    double sigma = 0.0;
    double lambda = 0.0;
    Vec d;
    bool early_terminate = false;
    int oracle_calls = 0;
    int restarts = 0;
};

RnbOutcome rnb_search(const Vec& x, const Vec& v, double A, const AtrEgConfig& cfg,
                      const Objective& problem, double sigma_hint = 0.0);

// psi(sigma, y) = ||(hess f(y) + sigma I)^{-1} grad f(y)|| / sigma (diagnostic)
double psi(double sigma, const Vec& y, const Objective& problem);

struct V2Step {
    bool terminated = false;
    StopReason reason = StopReason::grad_tol;
    ExtraState state;
    Vec point;
    TraceRow row;
    std::vector<std::string> violations;
    double f_next = 0.0;
};

V2Step step_variant2(const ExtraState& state, const AtrEgConfig& cfg,
                     const Objective& problem);

Report run_variant2(const Objective& problem, AtrEgConfig cfg, const Vec& x0);

}  // namespace atr

#pragma once

#include <vector>

#include "atr/objective.hpp"
#include "atr/report.hpp"
#include "atr/vec.hpp"

// Variant I: estimating-sequence accelerated trust-region method with the
// lambda=0 local-detection trigger (Newton diving + radius bisection).

namespace atr {

struct AtrLdConfig {
    double epsilon = 1e-8;
    double M = 1.0;                 // Hessian-Lipschitz constant
    double kappa_h = 0.0;           // Hessian norm bound; <=0 means estimate at x0
    int max_outer = 10000;
    double lambda_zero_tol = 1e-8;
    int bisection_max = 100;
    bool telemetry = true;
};

// Iterate bundle: x_k, estimating-sequence minimizer v_k, weighted gradient
// sum s_k and the scalar accumulator backing phi bookkeeping.
struct EstSeqState {
    int k = 0;
    Vec x;
    Vec v;
    Vec s;
    double c = 0.0;
    Vec x0;
};

// a_k = (k+1)(k+2)/2, A_k = k(k+1)(k+2)/6
double es_weight(int k);
double es_cumulative(int k);

// y_k = k/(k+3) x_k + 3/(k+3) v_k
Vec extrapolate(const Vec& x, const Vec& v, int k);

struct SigmaRadius {
    double sigma;
    double radius;
};

// (sigma, r) = (sqrt(2M)/2 * ||g||^{1/2}, 1/sqrt(2M) * ||g||^{1/2});
// note sigma = M * r identically.
SigmaRadius sigma_radius(double g_norm, double m);

EstSeqState make_est_seq_state(const Vec& x0);
EstSeqState update_dual_averaging(const EstSeqState& state, const Vec& grad_next,
                                  double f_next, const Vec& x_next, double m);
// phi_k(v_k) = (M/8)||v-x0||^3 + c + <s, v>
double phi_star(const EstSeqState& state, double m);

struct DivingResult {
    Vec z;
    bool success = false;
    int steps = 0;
    std::vector<double> grad_norms;  // includes the starting gradient norm
};

// Plain Newton from y; aborts on non-decreasing gradient or a degenerate
// Hessian and leaves the caller to fall through to the bisection track.
DivingResult local_diving(const Vec& y, double eps, int max_iters,
                          const Objective& problem);

struct LdOutcome {
    Vec point;
    bool early_terminate = false;
    Phase track = Phase::direct_accept;
    Vec step;
    double mu = 0.0;
    int oracle_calls = 0;  // TR-oracle calls spent inside LD
    std::vector<double> diving_grads;
};

LdOutcome local_detection(const Vec& y, const Mat& hess_y, const Vec& grad_y,
                          double mu_plus, const Vec& d_plus,
                          const AtrLdConfig& cfg, const Objective& problem);

struct V1Step {
    bool terminated = false;
    StopReason reason = StopReason::grad_tol;
    EstSeqState state;  // next state when not terminated
    Vec point;          // termination point when terminated
    TraceRow row;
    std::vector<double> diving_grads;
    std::vector<std::string> violations;
    double f_next = 0.0;
};

// One outer iteration; cfg.kappa_h must be resolved (>0) by the caller.
V1Step step_variant1(const EstSeqState& state, const Objective& problem,
                     const AtrLdConfig& cfg);

Report run_variant1(const Objective& problem, AtrLdConfig cfg, const Vec& x0);

}  // namespace atr

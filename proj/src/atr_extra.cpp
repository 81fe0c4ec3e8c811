#include "atr/atr_extra.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "atr/errors.hpp"
#include "atr/trs.hpp"

namespace atr {

double a_of_sigma(double A, double sigma)
{
    return (1.0 + std::sqrt(1.0 + 4.0 * A * sigma)) / (2.0 * sigma);
}

Vec y_of_sigma(const Vec& x, const Vec& v, double A, double sigma)
{
    const double a = a_of_sigma(A, sigma);
    const double denom = A + a;
    return lin_comb(A / denom, x, a / denom, v);
}

Bracket bracket_init(const AtrEgConfig& cfg, double grad_norm_x0)
{
    const double sigma_minus =
        std::sqrt(2.0 * cfg.M * cfg.epsilon / (1.0 + 2.0 * cfg.theta));
    double g0 = 0.0;
    switch (cfg.g0_policy) {
    case G0Policy::user_supplied:
        g0 = cfg.g0_value;
        break;
    case G0Policy::from_d0: {
        if (!cfg.d0)
            throw ConfigError("d0", "from_d0 policy requires a D0 value");
        const double c = 4.0 / std::sqrt(3.0 * cfg.gamma) + 1.0;
        const double d0 = *cfg.d0;
        g0 = c * cfg.kappa_h * d0 + 0.5 * cfg.M * c * c * d0 * d0;
        break;
    }
    case G0Policy::adaptive_doubling:
        g0 = std::max(grad_norm_x0, cfg.epsilon);
        break;
    }
    double sigma_plus = std::sqrt(cfg.M * g0 / cfg.eta);
    if (sigma_plus <= sigma_minus) {
        if (cfg.g0_policy == G0Policy::adaptive_doubling) {
            for (int i = 0; i < 60 && sigma_plus <= sigma_minus; ++i)
                sigma_plus *= 2.0;
        }
        if (sigma_plus <= sigma_minus)
            throw BracketError("sigma bracket is empty: sigma- >= sigma+");
    }
    return {sigma_minus, sigma_plus};
}

SigmaClass classify_sigma(double lambda, double d_norm, double sigma,
                          const AtrEgConfig& cfg)
{
    if (lambda <= cfg.lambda_zero_tol * sigma && d_norm < cfg.eta / cfg.M * sigma)
        return SigmaClass::step_too_small;
    if (lambda > (cfg.theta - 1.0) * sigma)
        return SigmaClass::lambda_too_large;
    return SigmaClass::accept;
}

RnbOutcome rnb_search(const Vec& x, const Vec& v, double A, const AtrEgConfig& cfg,
                      const Objective& problem, double sigma_hint)
{
    RnbOutcome out;
    double grad_norm_x = 0.0;
    if (cfg.g0_policy == G0Policy::adaptive_doubling)
        grad_norm_x = norm(problem.gradient(x));
    Bracket br = bracket_init(cfg, grad_norm_x);
    // the gradient-based upper end can shrink below the sigma the window
    // needs; the last accepted sigma is the right scale, so keep it bracketed
    if (cfg.use_sigma_hint && sigma_hint > 0.0)
        br.sigma_plus = std::max(br.sigma_plus, 2.0 * sigma_hint);

    // early-termination probe at sigma-
    {
        const double s = br.sigma_minus;
        const Vec y = y_of_sigma(x, v, A, s);
        const Vec g = problem.gradient(y);
        const Mat h = problem.hessian(y);
        TrsSolution sol = solve_trs(h, g, s, s / cfg.M);
        problem.counters().add_factorizations(sol.n_factorizations);
        out.oracle_calls += 1;
        if (sol.lambda <= (cfg.theta - 1.0) * s) {
            out.x_next = add(y, sol.d);
            out.sigma = s;
            out.lambda = sol.lambda;
            out.d = std::move(sol.d);
            out.early_terminate = true;
            return out;
        }
    }

    while (true) {
        double lo = br.sigma_minus;
        double hi = br.sigma_plus;
        bool first = true;
        for (int i = 0; i < cfg.bisection_max; ++i) {
            if (hi - lo <= 1e-12 * hi)
                break;  // bracket exhausted without acceptance; widen and retry
            double s = 0.5 * (lo + hi);
            if (first && cfg.use_sigma_hint && sigma_hint > lo && sigma_hint < hi)
                s = sigma_hint;
            first = false;
            const Vec y = y_of_sigma(x, v, A, s);
            const Vec g = problem.gradient(y);
            const Mat h = problem.hessian(y);
            TrsSolution sol = solve_trs(h, g, s, s / cfg.M);
            problem.counters().add_factorizations(sol.n_factorizations);
            out.oracle_calls += 1;
            const double dn = norm(sol.d);
            switch (classify_sigma(sol.lambda, dn, s, cfg)) {
            case SigmaClass::step_too_small:
                hi = s;
                break;
            case SigmaClass::lambda_too_large:
                lo = s;
                break;
            case SigmaClass::accept:
                out.x_next = add(y, sol.d);
                out.sigma = s;
                out.lambda = sol.lambda;
                out.d = std::move(sol.d);
                return out;
            }
        }
        if (cfg.g0_policy == G0Policy::adaptive_doubling &&
            out.restarts < cfg.max_restarts) {
            br.sigma_plus *= 2.0;
            out.restarts += 1;
            continue;
        }
        throw BisectionStall("sigma bisection exceeded " +
                             std::to_string(cfg.bisection_max) + " oracle calls");
    }
}

double psi(double sigma, const Vec& y, const Objective& problem)
{
    const Vec g = problem.gradient(y);
    if (norm(g) == 0.0)
        return 0.0;
    const Mat h = problem.hessian(y);
    int facts = 0;
    const Vec d = unconstrained_step(h, g, sigma, &facts);
    problem.counters().add_factorizations(facts);
    return norm(d) / sigma;
}

V2Step step_variant2(const ExtraState& state, const AtrEgConfig& cfg,
                     const Objective& problem)
{
    V2Step out;
    out.row.outer_k = state.k;

    RnbOutcome rnb =
        rnb_search(state.x, state.v, state.A, cfg, problem, state.sigma_hint);
    out.row.inner_calls = rnb.oracle_calls;
    out.row.sigma = rnb.sigma;
    out.row.lambda = rnb.lambda;
    out.row.mu = rnb.sigma + rnb.lambda;
    out.row.step_norm = norm(rnb.d);
    out.row.phase = rnb.early_terminate ? Phase::direct_accept : Phase::bisection;

    if (rnb.early_terminate) {
        const Vec g_end = problem.gradient(rnb.x_next);
        out.f_next = problem.value(rnb.x_next);
        out.row.f = out.f_next;
        out.row.grad_norm = norm(g_end);
        out.terminated = true;
        out.reason = StopReason::early_terminate;
        out.point = std::move(rnb.x_next);
        if (cfg.telemetry && out.row.grad_norm > cfg.epsilon)
            out.violations.push_back("R&B ET=true with grad above epsilon at k=" +
                                     std::to_string(state.k));
        return out;
    }

    if (cfg.telemetry) {
        const double dn = norm(rnb.d);
        if (rnb.lambda < 0.0 ||
            rnb.lambda > (cfg.theta - 1.0) * rnb.sigma * (1.0 + 1e-8) ||
            dn < cfg.eta / cfg.M * rnb.sigma * (1.0 - 1e-8))
            out.violations.push_back("acceptance window violated at k=" +
                                     std::to_string(state.k));
    }

    const double a = a_of_sigma(state.A, rnb.sigma);
    if (cfg.telemetry) {
        const double lhs = rnb.sigma * a * a;
        const double rhs = state.A + a;
        if (std::abs(lhs - rhs) > 1e-12 * (rhs + 1.0))
            out.violations.push_back("sigma a^2 = A + a identity violated at k=" +
                                     std::to_string(state.k));
    }

    const double f_next = problem.value(rnb.x_next);
    const Vec g_next = problem.gradient(rnb.x_next);
    const double gn = norm(g_next);
    out.f_next = f_next;
    out.row.f = f_next;
    out.row.grad_norm = gn;

    if (gn <= cfg.epsilon) {
        out.terminated = true;
        out.reason = StopReason::grad_tol;
        out.point = std::move(rnb.x_next);
        return out;
    }

    out.state = state;
    out.state.k = state.k + 1;
    out.state.x = std::move(rnb.x_next);
    axpy(out.state.v, -cfg.gamma * a, g_next);
    out.state.A = state.A + a;
    out.state.sigma_hint = rnb.sigma;
    return out;
}

Report run_variant2(const Objective& problem, AtrEgConfig cfg, const Vec& x0)
{
    Report report;
    report.method = "V2";
    if (cfg.g0_policy == G0Policy::from_d0 && cfg.kappa_h <= 0.0)
        cfg.kappa_h = hessian_norm_bound(problem, x0).value;
    const CounterSnapshot start = problem.counters().snapshot();

    const Vec g0 = problem.gradient(x0);
    if (norm(g0) <= cfg.epsilon) {
        report.final_point = x0;
        report.reason = StopReason::grad_tol;
        report.final_f = problem.value(x0);
        report.final_grad_norm = norm(g0);
        report.counters = problem.counters().snapshot() - start;
        return report;
    }

    ExtraState state;
    state.x = x0;
    state.v = x0;
    try {
        for (int k = 0; k < cfg.max_outer; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            V2Step step = step_variant2(state, cfg, problem);
            const auto t1 = std::chrono::steady_clock::now();

            TraceRow row = step.row;
            row.method = report.method;
            row.wall_ns =
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
            const CounterSnapshot now = problem.counters().snapshot() - start;
            row.n_hessian = now.n_hessian;
            row.n_factorizations = now.n_factorizations;
            report.trace.push_back(std::move(row));
            for (auto& v : step.violations)
                report.violations.push_back(std::move(v));
            report.iterations = k + 1;

            if (step.terminated) {
                report.final_point = std::move(step.point);
                report.reason = step.reason;
                report.final_f = step.f_next;
                report.final_grad_norm = report.trace.back().grad_norm;
                report.counters = problem.counters().snapshot() - start;
                return report;
            }
            state = std::move(step.state);
        }
        report.reason = StopReason::max_iterations;
    } catch (const Error& e) {
        report.reason = StopReason::error;
        report.error_kind = e.what();
    }
    report.final_point = state.x;
    report.final_f = problem.value(state.x);
    report.final_grad_norm = norm(problem.gradient(state.x));
    report.counters = problem.counters().snapshot() - start;
    return report;
}

}  // namespace atr

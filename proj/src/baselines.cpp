#include "atr/baselines.hpp"

#include <chrono>
#include <cmath>

#include "atr/atr_local.hpp"
#include "atr/errors.hpp"
#include "atr/linalg.hpp"
#include "atr/trs.hpp"

namespace atr {

namespace {

long elapsed_ns(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

void finish(Report& report, const CounterSnapshot& start, const Objective& problem,
            const Vec& x)
{
    report.final_point = x;
    report.final_f = problem.value(x);
    report.final_grad_norm = norm(problem.gradient(x));
    report.counters = problem.counters().snapshot() - start;
}

}  // namespace

CubicStep cubic_step(const Mat& h, const Vec& g, double m, double tol)
{
    CubicStep out;
    if (norm(g) == 0.0) {
        out.d.assign(g.size(), 0.0);
        return out;
    }
    // phi(t) = ||(H + (m t / 2) I)^{-1} g|| - t is strictly decreasing, so the
    // unique root is found by doubling out a bracket and bisecting.
    auto step_at = [&](double t) {
        int facts = 0;
        Vec d = unconstrained_step(h, g, 0.5 * m * t, &facts);
        out.n_factorizations += facts;
        return d;
    };
    double hi = 1.0;
    Vec d_hi = step_at(hi);
    int doublings = 0;
    while (norm(d_hi) > hi) {
        hi *= 2.0;
        d_hi = step_at(hi);
        if (++doublings > 200)
            throw MaxIterations("cubic step bracket doubling stalled");
    }
    double lo = 0.0;
    Vec best = d_hi;
    double best_t = hi;
    for (int i = 0; i < 200; ++i) {
        if (hi - lo <= tol * std::max(hi, 1.0))
            break;
        const double t = 0.5 * (lo + hi);
        Vec d = step_at(t);
        const double dn = norm(d);
        if (std::abs(dn - t) < std::abs(norm(best) - best_t)) {
            best = d;
            best_t = t;
        }
        if (dn > t)
            lo = t;
        else
            hi = t;
    }
    out.d = std::move(best);
    out.t = best_t;
    return out;
}

Report run_newton(const Objective& problem, const BaselineConfig& cfg, const Vec& x0)
{
    Report report;
    report.method = "Newton";
    const CounterSnapshot start = problem.counters().snapshot();
    Vec x = x0;
    try {
        double f_prev = problem.value(x);
        int increases = 0;
        for (int k = 0; k < cfg.max_outer; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            const Vec g = problem.gradient(x);
            const double gn = norm(g);
            if (gn <= cfg.epsilon) {
                report.reason = StopReason::grad_tol;
                finish(report, start, problem, x);
                return report;
            }
            const Mat h = problem.hessian(x);
            auto l = cholesky(h);
            problem.counters().add_factorizations(1);
            if (!l)
                throw SingularSystem("Newton step on a singular Hessian");
            const Vec d = negate(chol_solve(*l, g));
            axpy(x, 1.0, d);
            const double f = problem.value(x);
            increases = f > f_prev ? increases + 1 : 0;
            f_prev = f;

            TraceRow row;
            row.method = report.method;
            row.outer_k = k;
            row.inner_calls = 1;
            row.f = f;
            row.grad_norm = norm(problem.gradient(x));
            row.step_norm = norm(d);
            const CounterSnapshot now = problem.counters().snapshot() - start;
            row.n_hessian = now.n_hessian;
            row.n_factorizations = now.n_factorizations;
            row.wall_ns = elapsed_ns(t0);
            report.trace.push_back(std::move(row));
            report.iterations = k + 1;

            if (increases >= 3)
                throw Diverged("Diverged");
        }
        report.reason = StopReason::max_iterations;
    } catch (const Error& e) {
        report.reason = StopReason::error;
        report.error_kind = e.what();
    }
    finish(report, start, problem, x);
    return report;
}

Report run_utr(const Objective& problem, const BaselineConfig& cfg, const Vec& x0,
               const std::string& method_tag)
{
    Report report;
    report.method = method_tag;
    const CounterSnapshot start = problem.counters().snapshot();
    Vec x = x0;
    try {
        for (int k = 0; k < cfg.max_outer; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            const Vec g = problem.gradient(x);
            const double gn = norm(g);
            if (gn <= cfg.epsilon) {
                report.reason = StopReason::grad_tol;
                finish(report, start, problem, x);
                return report;
            }
            const auto [sigma, radius] = sigma_radius(gn, cfg.M);
            const Mat h = problem.hessian(x);
            TrsSolution sol = solve_trs(h, g, sigma, radius);
            problem.counters().add_factorizations(sol.n_factorizations);
            axpy(x, 1.0, sol.d);

            TraceRow row;
            row.method = report.method;
            row.outer_k = k;
            row.inner_calls = 1;
            row.f = problem.value(x);
            row.grad_norm = norm(problem.gradient(x));
            row.sigma = sigma;
            row.lambda = sol.lambda;
            row.mu = sigma + sol.lambda;
            row.step_norm = norm(sol.d);
            const CounterSnapshot now = problem.counters().snapshot() - start;
            row.n_hessian = now.n_hessian;
            row.n_factorizations = now.n_factorizations;
            row.wall_ns = elapsed_ns(t0);
            report.trace.push_back(std::move(row));
            report.iterations = k + 1;
        }
        report.reason = StopReason::max_iterations;
    } catch (const Error& e) {
        report.reason = StopReason::error;
        report.error_kind = e.what();
    }
    finish(report, start, problem, x);
    return report;
}

Report run_cubic_newton(const Objective& problem, const BaselineConfig& cfg,
                        const Vec& x0)
{
    Report report;
    report.method = "Cubic";
    const CounterSnapshot start = problem.counters().snapshot();
    Vec x = x0;
    try {
        for (int k = 0; k < cfg.max_outer; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            const Vec g = problem.gradient(x);
            const double gn = norm(g);
            if (gn <= cfg.epsilon) {
                report.reason = StopReason::grad_tol;
                finish(report, start, problem, x);
                return report;
            }
            const Mat h = problem.hessian(x);
            CubicStep step = cubic_step(h, g, cfg.M);
            problem.counters().add_factorizations(step.n_factorizations);
            axpy(x, 1.0, step.d);

            TraceRow row;
            row.method = report.method;
            row.outer_k = k;
            row.inner_calls = 1;
            row.f = problem.value(x);
            row.grad_norm = norm(problem.gradient(x));
            row.mu = 0.5 * cfg.M * step.t;
            row.step_norm = norm(step.d);
            const CounterSnapshot now = problem.counters().snapshot() - start;
            row.n_hessian = now.n_hessian;
            row.n_factorizations = now.n_factorizations;
            row.wall_ns = elapsed_ns(t0);
            report.trace.push_back(std::move(row));
            report.iterations = k + 1;
        }
        report.reason = StopReason::max_iterations;
    } catch (const Error& e) {
        report.reason = StopReason::error;
        report.error_kind = e.what();
    }
    finish(report, start, problem, x);
    return report;
}

Report run_cubic_accel(const Objective& problem, const BaselineConfig& cfg,
                       const Vec& x0)
{
    Report report;
    report.method = "CubicA";
    const CounterSnapshot start = problem.counters().snapshot();
    EstSeqState state = make_est_seq_state(x0);
    try {
        for (int k = 0; k < cfg.max_outer; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            const Vec y = extrapolate(state.x, state.v, k);
            const Vec gy = problem.gradient(y);
            if (norm(gy) <= cfg.epsilon) {
                report.reason = StopReason::grad_tol;
                finish(report, start, problem, y);
                return report;
            }
            const Mat h = problem.hessian(y);
            CubicStep step = cubic_step(h, gy, cfg.M);
            problem.counters().add_factorizations(step.n_factorizations);
            const Vec x_next = add(y, step.d);
            const double f_next = problem.value(x_next);
            const Vec g_next = problem.gradient(x_next);
            const double gn_next = norm(g_next);

            TraceRow row;
            row.method = report.method;
            row.outer_k = k;
            row.inner_calls = 1;
            row.f = f_next;
            row.grad_norm = gn_next;
            row.mu = 0.5 * cfg.M * step.t;
            row.step_norm = norm(step.d);
            const CounterSnapshot now = problem.counters().snapshot() - start;
            row.n_hessian = now.n_hessian;
            row.n_factorizations = now.n_factorizations;
            row.wall_ns = elapsed_ns(t0);
            report.trace.push_back(std::move(row));
            report.iterations = k + 1;

            if (gn_next <= cfg.epsilon) {
                report.reason = StopReason::grad_tol;
                finish(report, start, problem, x_next);
                return report;
            }
            state = update_dual_averaging(state, g_next, f_next, x_next, cfg.M);
            state.x = x_next;
            if (cfg.telemetry) {
                const double phi = phi_star(state, cfg.M);
                if (es_cumulative(state.k) * f_next > phi + 1e-7 * (1.0 + std::abs(phi)))
                    report.violations.push_back(
                        "estimating-sequence sandwich violated at k=" +
                        std::to_string(state.k));
            }
        }
        report.reason = StopReason::max_iterations;
    } catch (const Error& e) {
        report.reason = StopReason::error;
        report.error_kind = e.what();
    }
    finish(report, start, problem, state.x);
    return report;
}

}  // namespace atr

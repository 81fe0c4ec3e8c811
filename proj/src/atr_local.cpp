#include "atr/atr_local.hpp"

#include <chrono>
#include <cmath>

#include "atr/errors.hpp"
#include "atr/trs.hpp"

namespace atr {

double es_weight(int k)
{
    return 0.5 * static_cast<double>(k + 1) * static_cast<double>(k + 2);
}

double es_cumulative(int k)
{
    return static_cast<double>(k) * static_cast<double>(k + 1) *
           static_cast<double>(k + 2) / 6.0;
}

Vec extrapolate(const Vec& x, const Vec& v, int k)
{
    const double wx = static_cast<double>(k) / static_cast<double>(k + 3);
    const double wv = 3.0 / static_cast<double>(k + 3);
    return lin_comb(wx, x, wv, v);
}

SigmaRadius sigma_radius(double g_norm, double m)
{
    const double root = std::sqrt(g_norm);
    const double sq2m = std::sqrt(2.0 * m);
    return {0.5 * sq2m * root, root / sq2m};
}

EstSeqState make_est_seq_state(const Vec& x0)
{
    EstSeqState s;
    s.x = x0;
    s.v = x0;
    s.s.assign(x0.size(), 0.0);
    s.x0 = x0;
    return s;
}

EstSeqState update_dual_averaging(const EstSeqState& state, const Vec& grad_next,
                                  double f_next, const Vec& x_next, double m)
{
    EstSeqState next = state;
    const double a = es_weight(state.k);
    axpy(next.s, a, grad_next);
    next.c += a * (f_next - dot(grad_next, x_next));
    const double sn = norm(next.s);
    if (sn == 0.0) {
        next.v = state.x0;
    } else {
        next.v = state.x0;
        axpy(next.v, -std::sqrt(8.0 / (3.0 * m * sn)), next.s);
    }
    next.k = state.k + 1;
    return next;
}

double phi_star(const EstSeqState& state, double m)
{
    const double t = norm(sub(state.v, state.x0));
    return m / 8.0 * t * t * t + state.c + dot(state.s, state.v);
}

DivingResult local_diving(const Vec& y, double eps, int max_iters,
                          const Objective& problem)
{
    DivingResult out;
    out.z = y;
    Vec g = problem.gradient(out.z);
    double gn = norm(g);
    out.grad_norms.push_back(gn);
    if (gn <= eps) {
        out.success = true;
        return out;
    }
    for (int i = 1; i <= max_iters; ++i) {
        const Mat h = problem.hessian(out.z);
        auto l = cholesky(h);
        int facts = 1;
        if (!l) {
            // degenerate Hessian: a tiny shift may still give a usable step,
            // anything larger aborts the dive
            const double max_shift = 1e-8 * frobenius(h);
            double shift = 1e-14 * (1.0 + std::abs(h.trace()) / h.rows());
            while (!l && shift <= max_shift) {
                ++facts;
                Mat shifted = h;
                shifted.add_diagonal(shift);
                l = cholesky(shifted);
                shift *= 10.0;
            }
            if (!l) {
                problem.counters().add_factorizations(facts);
                return out;
            }
        }
        problem.counters().add_factorizations(facts);
        const Vec d = negate(chol_solve(*l, g));
        axpy(out.z, 1.0, d);
        g = problem.gradient(out.z);
        const double gn_new = norm(g);
        out.grad_norms.push_back(gn_new);
        out.steps = i;
        if (gn_new <= eps) {
            out.success = true;
            return out;
        }
        if (gn_new > 0.999 * gn)
            return out;  // not contracting; abort
        gn = gn_new;
    }
    return out;
}

LdOutcome local_detection(const Vec& y, const Mat& hess_y, const Vec& grad_y,
                          double mu_plus, const Vec& d_plus,
                          const AtrLdConfig& cfg, const Objective& problem)
{
    LdOutcome out;
    const double dpn = norm(d_plus);
    const double gyn = norm(grad_y);

    const double thresh =
        std::min(cfg.epsilon / (2.0 * cfg.kappa_h), std::sqrt(cfg.epsilon / cfg.M));
    if (dpn <= thresh) {
        Vec point = add(y, d_plus);
        // kappa_h is an estimate, so confirm the guarantee before terminating
        if (norm(problem.gradient(point)) <= cfg.epsilon) {
            out.point = std::move(point);
            out.early_terminate = true;
            out.track = Phase::direct_accept;
            out.step = d_plus;
            out.mu = mu_plus;
            return out;
        }
    }

    // Track 1: local diving
    int budget = 0;
    if (gyn > cfg.epsilon)
        budget = static_cast<int>(std::ceil(std::log2(gyn / cfg.epsilon)));
    DivingResult dive = local_diving(y, cfg.epsilon, budget, problem);
    out.diving_grads = dive.grad_norms;
    if (dive.success) {
        out.point = std::move(dive.z);
        out.early_terminate = true;
        out.track = Phase::diving;
        out.step = sub(out.point, y);
        out.mu = 0.0;
        return out;
    }

    // Track 2: ratio bracketing and bisection over the radius
    if (mu_plus / dpn <= 2.0 * cfg.M) {
        out.point = add(y, d_plus);
        out.early_terminate = false;
        out.track = Phase::direct_accept;
        out.step = d_plus;
        out.mu = mu_plus;
        return out;
    }
    double r_lo = dpn;
    int facts = 0;
    const Vec newton_reg = unconstrained_step(hess_y, grad_y, cfg.M * dpn, &facts);
    problem.counters().add_factorizations(facts);
    out.oracle_calls += 1;
    double r_hi = norm(newton_reg);
    for (int i = 0; i < cfg.bisection_max; ++i) {
        if (r_hi - r_lo < 1e-15 * r_hi)
            throw BisectionStall("LD radius bisection bracket collapsed at r=" +
                                 std::to_string(r_hi));
        const double r = 0.5 * (r_lo + r_hi);
        TrsSolution sol = solve_trs(hess_y, grad_y, 0.0, r);
        problem.counters().add_factorizations(sol.n_factorizations);
        out.oracle_calls += 1;
        const double ratio = sol.lambda / norm(sol.d);
        if (ratio < cfg.M) {
            r_hi = r;
        } else if (ratio > 2.0 * cfg.M) {
            r_lo = r;
        } else {
            out.point = add(y, sol.d);
            out.early_terminate = false;
            out.track = Phase::bisection;
            out.mu = sol.lambda;
            out.step = std::move(sol.d);
            return out;
        }
    }
    throw BisectionStall("LD radius bisection exceeded " +
                         std::to_string(cfg.bisection_max) + " oracle calls");
}

V1Step step_variant1(const EstSeqState& state, const Objective& problem,
                     const AtrLdConfig& cfg)
{
    V1Step out;
    const int k = state.k;
    const Vec y = extrapolate(state.x, state.v, k);
    const Vec gy = problem.gradient(y);
    const double gyn = norm(gy);

    out.row.outer_k = k;
    if (gyn <= cfg.epsilon) {
        out.terminated = true;
        out.reason = StopReason::grad_tol;
        out.point = y;
        out.f_next = problem.value(y);
        out.row.f = out.f_next;
        out.row.grad_norm = gyn;
        return out;
    }

    const auto [sigma, radius] = sigma_radius(gyn, cfg.M);
    const Mat hess_y = problem.hessian(y);
    TrsSolution sol = solve_trs(hess_y, gy, sigma, radius);
    problem.counters().add_factorizations(sol.n_factorizations);
    out.row.inner_calls = 1;
    out.row.sigma = sigma;
    out.row.lambda = sol.lambda;

    Vec x_next;
    Vec d = sol.d;
    double mu = sigma + sol.lambda;
    Phase phase = Phase::global;

    if (sol.lambda <= cfg.lambda_zero_tol * std::max(sigma, 1.0)) {
        LdOutcome ld = local_detection(y, hess_y, gy, sigma, sol.d, cfg, problem);
        out.row.inner_calls += ld.oracle_calls;
        out.diving_grads = ld.diving_grads;
        phase = ld.track;
        if (ld.early_terminate) {
            out.terminated = true;
            out.reason = StopReason::early_terminate;
            out.point = ld.point;
            const Vec g_end = problem.gradient(ld.point);
            out.f_next = problem.value(ld.point);
            out.row.f = out.f_next;
            out.row.grad_norm = norm(g_end);
            out.row.mu = ld.mu;
            out.row.step_norm = norm(ld.step);
            out.row.phase = phase;
            if (cfg.telemetry && out.row.grad_norm > cfg.epsilon)
                out.violations.push_back("LD ET=true with grad above epsilon at k=" +
                                         std::to_string(k));
            return out;
        }
        x_next = ld.point;
        d = ld.step;
        mu = ld.mu;
    } else {
        x_next = add(y, d);
    }

    const double dn = norm(d);
    if (cfg.telemetry) {
        // ratio invariant M||d|| <= mu <= 2M||d||
        if (mu < cfg.M * dn * (1.0 - 1e-8) || mu > 2.0 * cfg.M * dn * (1.0 + 1e-8))
            out.violations.push_back("ratio invariant violated at k=" + std::to_string(k) +
                                     " mu=" + std::to_string(mu) +
                                     " M||d||=" + std::to_string(cfg.M * dn));
    }

    const double f_next = problem.value(x_next);
    const Vec g_next = problem.gradient(x_next);
    const double gn_next = norm(g_next);

    out.row.f = f_next;
    out.row.grad_norm = gn_next;
    out.row.mu = mu;
    out.row.step_norm = dn;
    out.row.phase = phase;
    out.f_next = f_next;

    if (gn_next <= cfg.epsilon) {
        out.terminated = true;
        out.reason = StopReason::grad_tol;
        out.point = std::move(x_next);
        return out;
    }

    out.state = update_dual_averaging(state, g_next, f_next, x_next, cfg.M);
    out.state.x = std::move(x_next);
    if (cfg.telemetry) {
        const double phi = phi_star(out.state, cfg.M);
        const double lhs = es_cumulative(out.state.k) * f_next;
        if (lhs > phi + 1e-7 * (1.0 + std::abs(phi)))
            out.violations.push_back("estimating-sequence sandwich violated at k=" +
                                     std::to_string(out.state.k));
    }
    return out;
}

Report run_variant1(const Objective& problem, AtrLdConfig cfg, const Vec& x0)
{
    Report report;
    report.method = "V1";
    if (cfg.kappa_h <= 0.0)
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

    EstSeqState state = make_est_seq_state(x0);
    try {
        for (int k = 0; k < cfg.max_outer; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            V1Step step = step_variant1(state, problem, cfg);
            const auto t1 = std::chrono::steady_clock::now();

            TraceRow row = step.row;
            row.method = report.method;
            row.wall_ns =
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
            const CounterSnapshot now = problem.counters().snapshot() - start;
            row.n_hessian = now.n_hessian;
            row.n_factorizations = now.n_factorizations;
            report.trace.push_back(std::move(row));
            if (!step.diving_grads.empty())
                report.diving_grads.push_back(std::move(step.diving_grads));
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

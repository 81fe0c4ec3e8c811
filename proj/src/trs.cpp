#include "atr/trs.hpp"

#include <cmath>

#include "atr/linalg.hpp"

namespace atr {

namespace {

struct ConvexFactor {
    Mat l;
    int n_factorizations;
};

// Factorize a PSD matrix, shifting slightly when it is numerically singular.
// Throws NotConvex once the required shift exceeds the convexity tolerance.
ConvexFactor factor_psd(const Mat& b)
{
    const std::size_t n = b.rows();
    int count = 1;
    if (auto l = cholesky(b))
        return {std::move(*l), count};
    const double scale = 1.0 + std::abs(b.trace()) / static_cast<double>(n);
    const double max_shift = 1e-8 * (1.0 + frobenius(b));
    double shift = 1e-12 * scale;
    while (shift <= max_shift) {
        ++count;
        Mat shifted = b;
        shifted.add_diagonal(shift);
        if (auto l = cholesky(shifted))
            return {std::move(*l), count};
        shift *= 10.0;
    }
    throw NotConvex("matrix is indefinite beyond tolerance");
}

}  // namespace

double KktResidual::max_residual() const
{
    return std::max(std::max(stationarity, complementarity),
                    std::max(feasibility, dual_sign));
}

KktResidual verify_kkt(const Mat& h, const Vec& g, double sigma, double radius,
                       const TrsSolution& sol)
{
    KktResidual res;
    Vec r = matvec(h, sol.d);
    axpy(r, sigma + sol.lambda, sol.d);
    axpy(r, 1.0, g);
    res.stationarity = norm(r) / (1.0 + norm(g));
    const double dn = norm(sol.d);
    res.complementarity =
        std::abs(sol.lambda * (radius - dn)) / (radius * (1.0 + sol.lambda));
    res.feasibility = std::max(0.0, dn - radius) / radius;
    res.dual_sign = std::max(0.0, -sol.lambda);
    return res;
}

Vec unconstrained_step(const Mat& h, const Vec& g, double mu, int* n_fact)
{
    Mat b = h;
    b.add_diagonal(mu);
    const double scale = 1.0 + std::abs(b.trace()) / static_cast<double>(b.rows());
    const auto fac = cholesky_shifted(b, 1e-12 * scale);
    if (n_fact)
        *n_fact += fac.attempts;
    return negate(chol_solve(fac.l, g));
}

TrsSolution solve_trs(const Mat& h, const Vec& g, double sigma, double radius,
                      double tol)
{
    TrsSolution sol;
    const std::size_t n = g.size();
    const double gnorm = kern::nrm2(g.data(), n);
    if (gnorm == 0.0) {
        sol.d.assign(n, 0.0);
        return sol;
    }

    Mat b = h;
    b.add_diagonal(sigma);
    auto fac = factor_psd(b);
    sol.n_factorizations = fac.n_factorizations;

    Vec d = negate(chol_solve(fac.l, g));
    double dn = norm(d);
    if (dn <= radius * (1.0 + tol)) {
        sol.d = std::move(d);
        sol.lambda = 0.0;
        sol.on_boundary = dn >= radius * (1.0 - tol);
        sol.kkt_residual = verify_kkt(h, g, sigma, radius, sol).max_residual();
        return sol;
    }

    // Boundary case: Newton on 1/||d(lambda)|| - 1/r with a shrinking bracket.
    double lo = 0.0;
    double hi = gnorm / radius;
    double lambda = 0.0;
    Mat chol_l = std::move(fac.l);  // factor of b + lambda I for current lambda
    double best_gap = std::abs(dn - radius);
    TrsSolution best{d, lambda, true, sol.n_factorizations, 0.0};

    for (int iter = 0; iter < 100; ++iter) {
        // d, chol_l correspond to the current lambda here
        if (dn > radius)
            lo = std::max(lo, lambda);
        else
            hi = std::min(hi, lambda);

        const Vec w = chol_forward(chol_l, d);
        const double wn2 = dot(w, w);
        double next = lambda + (dn - radius) / radius * (dn * dn) / wn2;
        if (!(next > lo) || !(next < hi) || !std::isfinite(next))
            next = 0.5 * (lo + hi);

        lambda = next;
        Mat blam = b;
        blam.add_diagonal(lambda);
        auto flam = factor_psd(blam);
        sol.n_factorizations += flam.n_factorizations;
        chol_l = std::move(flam.l);
        d = negate(chol_solve(chol_l, g));
        dn = norm(d);

        const double gap = std::abs(dn - radius);
        if (gap < best_gap) {
            best_gap = gap;
            best = {d, lambda, true, sol.n_factorizations, 0.0};
        }
        if (gap <= tol * radius) {
            sol.d = std::move(d);
            sol.lambda = lambda;
            sol.on_boundary = true;
            sol.kkt_residual = verify_kkt(h, g, sigma, radius, sol).max_residual();
            return sol;
        }
    }
    best.n_factorizations = sol.n_factorizations;
    best.kkt_residual = verify_kkt(h, g, sigma, radius, best).max_residual();
    throw TrsIterationLimit("secular iteration exceeded 100 steps", std::move(best));
}

TrsSolution solve_trs(const TrsRequest& req)
{
    return solve_trs(req.hessian, req.gradient, req.sigma, req.radius, req.tol);
}

TrsSolution eigen_reference_solve(const Mat& h, const Vec& g, double sigma,
                                  double radius)
{
    const std::size_t n = g.size();
    TrsSolution sol;
    const double gnorm = norm(g);
    if (gnorm == 0.0) {
        sol.d.assign(n, 0.0);
        return sol;
    }
    const EigenSym eig = jacobi_eigen(h);
    Vec beta(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += eig.vectors(i, j) * g[i];
        beta[j] = acc;
    }
    auto step_norm = [&](double lambda) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double denom = eig.values[j] + sigma + lambda;
            if (beta[j] != 0.0)
                acc += beta[j] * beta[j] / (denom * denom);
        }
        return std::sqrt(acc);
    };
    double lambda = 0.0;
    if (step_norm(0.0) > radius) {
        double lo = 0.0, hi = gnorm / radius;
        for (int iter = 0; iter < 200; ++iter) {
            lambda = 0.5 * (lo + hi);
            const double r = step_norm(lambda);
            if (std::abs(r - radius) <= 1e-12 * radius)
                break;
            if (r > radius)
                lo = lambda;
            else
                hi = lambda;
        }
        sol.on_boundary = true;
    }
    sol.lambda = lambda;
    sol.d.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (beta[j] == 0.0)
            continue;  // null-space component: minimal-norm step
        const double coef = -beta[j] / (eig.values[j] + sigma + lambda);
        for (std::size_t i = 0; i < n; ++i)
            sol.d[i] += coef * eig.vectors(i, j);
    }
    sol.kkt_residual = verify_kkt(h, g, sigma, radius, sol).max_residual();
    return sol;
}

}  // namespace atr

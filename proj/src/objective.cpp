#include "atr/objective.hpp"

#include <cmath>

#include "atr/errors.hpp"

namespace atr {

double log1pexp(double t)
{
    if (t > 0.0)
        return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

double sigmoid(double t)
{
    if (t >= 0.0)
        return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

LogisticProblem::LogisticProblem(std::shared_ptr<const Dataset> data, double reg)
    : Objective(data->n_features), data_(std::move(data)), reg_(reg)
{
}

namespace {

double row_dot(const SparseRow& row, const Vec& x)
{
    double acc = 0.0;
    for (const auto& [idx, val] : row)
        acc += val * x[idx];
    return acc;
}

}  // namespace

double LogisticProblem::value_impl(const Vec& x) const
{
    const auto& d = *data_;
    const double n = static_cast<double>(d.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double margin = d.labels[i] * row_dot(d.rows[i], x);
        acc += log1pexp(-margin);
    }
    const double nx = norm(x);
    const double f = acc / n + 0.5 * reg_ * nx * nx;
    if (!std::isfinite(f))
        throw NumericalOverflow("logistic value is not finite");
    return f;
}

Vec LogisticProblem::gradient_impl(const Vec& x) const
{
    const auto& d = *data_;
    const double inv_n = 1.0 / static_cast<double>(d.size());
    Vec g = scaled(x, reg_);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double b = d.labels[i];
        const double margin = b * row_dot(d.rows[i], x);
        const double w = -b * sigmoid(-margin) * inv_n;
        for (const auto& [idx, val] : d.rows[i])
            g[idx] += w * val;
    }
    for (double v : g)
        if (!std::isfinite(v))
            throw NumericalOverflow("logistic gradient is not finite");
    return g;
}

Mat LogisticProblem::hessian_impl(const Vec& x) const
{
    const auto& d = *data_;
    const int n = dim();
    const double inv_n = 1.0 / static_cast<double>(d.size());
    Mat h(n, n);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double margin = d.labels[i] * row_dot(d.rows[i], x);
        const double s = sigmoid(margin);
        const double w = s * (1.0 - s) * inv_n;
        for (const auto& [p, vp] : d.rows[i]) {
            const double wvp = w * vp;
            for (const auto& [q, vq] : d.rows[i])
                h(p, q) += wvp * vq;
        }
    }
    h.add_diagonal(reg_);
    return h;
}

QuadraticProblem::QuadraticProblem(Mat h, Vec b)
    : Objective(static_cast<int>(h.rows())), h_(std::move(h)), b_(std::move(b))
{
    if (auto l = cholesky(h_))
        known_min_ = negate(chol_solve(*l, b_));
}

double QuadraticProblem::value_impl(const Vec& x) const
{
    return 0.5 * dot(x, matvec(h_, x)) + dot(b_, x);
}

Vec QuadraticProblem::gradient_impl(const Vec& x) const
{
    Vec g = matvec(h_, x);
    axpy(g, 1.0, b_);
    return g;
}

Mat QuadraticProblem::hessian_impl(const Vec&) const { return h_; }

double lipschitz_estimate(const LogisticProblem& problem)
{
    const auto& d = problem.data();
    if (d.size() == 0)
        throw EmptyData("lipschitz_estimate on empty dataset");
    const int n = problem.dim();
    const double inv_n = 1.0 / static_cast<double>(d.size());
    Mat c(n, n);
    double max_row_norm = 0.0;
    for (const auto& row : d.rows) {
        double sq = 0.0;
        for (const auto& [p, vp] : row) {
            sq += vp * vp;
            for (const auto& [q, vq] : row)
                c(p, q) += inv_n * vp * vq;
        }
        max_row_norm = std::max(max_row_norm, std::sqrt(sq));
    }
    const auto spec = power_norm(c, 1e-8, 2000);
    return spec.value * max_row_norm;
}

HessianNormBound hessian_norm_bound(const Objective& problem, const Vec& x0)
{
    const Mat h = problem.hessian(x0);
    const auto res = power_norm(h, 1e-6, 500);
    if (res.converged)
        return {res.value, true};
    return {frobenius(h), false};
}

}  // namespace atr

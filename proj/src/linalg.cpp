#include "atr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "atr/errors.hpp"

namespace atr {

std::optional<Mat> cholesky(const Mat& a)
{
    const std::size_t n = a.rows();
    Mat l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j) - kern::dot(l.row(j), l.row(j), j);
        if (!(diag > 0.0) || !std::isfinite(diag))
            return std::nullopt;
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i)
            l(i, j) = (a(i, j) - kern::dot(l.row(i), l.row(j), j)) / ljj;
    }
    return l;
}

ShiftedChol cholesky_shifted(const Mat& a, double base_shift, int max_attempts)
{
    if (auto l = cholesky(a))
        return {std::move(*l), 0.0, 1};
    double shift = base_shift;
    for (int attempt = 2; attempt <= max_attempts; ++attempt) {
        Mat shifted = a;
        shifted.add_diagonal(shift);
        if (auto l = cholesky(shifted))
            return {std::move(*l), shift, attempt};
        shift *= 10.0;
    }
    throw SingularSystem("Cholesky failed even with diagonal shift " +
                         std::to_string(shift / 10.0));
}

Vec chol_forward(const Mat& l, const Vec& b)
{
    const std::size_t n = l.rows();
    Vec w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = (b[i] - kern::dot(l.row(i), w.data(), i)) / l(i, i);
    return w;
}

Vec chol_solve(const Mat& l, const Vec& b)
{
    const std::size_t n = l.rows();
    Vec x = chol_forward(l, b);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = x[ii];
        for (std::size_t jj = ii + 1; jj < n; ++jj)
            acc -= l(jj, ii) * x[jj];
        x[ii] = acc / l(ii, ii);
    }
    return x;
}

PowerResult power_norm(const Mat& a, double tol, int max_iters)
{
    const std::size_t n = a.rows();
    if (n == 0)
        return {0.0, true, 0};
    Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    // deterministic perturbation so eigenvectors orthogonal to the all-ones
    // vector are still picked up
    for (std::size_t i = 0; i < n; ++i)
        v[i] += 1e-3 * static_cast<double>(i % 7) / static_cast<double>(n);
    double nv = norm(v);
    if (nv == 0.0)
        return {0.0, true, 0};
    scale(v, 1.0 / nv);
    double prev = 0.0;
    for (int it = 1; it <= max_iters; ++it) {
        Vec w = matvec(a, v);
        const double nw = norm(w);
        if (nw == 0.0)
            return {0.0, true, it};
        const double est = std::abs(dot(v, w));
        scale(w, 1.0 / nw);
        v = std::move(w);
        if (it > 1 && std::abs(est - prev) <= tol * std::max(1.0, est))
            return {est, true, it};
        prev = est;
    }
    return {prev, false, max_iters};
}

double frobenius(const Mat& a)
{
    return kern::nrm2(a.data(), a.rows() * a.cols());
}

EigenSym jacobi_eigen(Mat a, int max_sweeps)
{
    const std::size_t n = a.rows();
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += a(p, q) * a(p, q);
        if (off <= 1e-30 * std::max(1.0, frobenius(a)))
            break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                const double app = a(p, p), aqq = a(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    EigenSym out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = a(i, i);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return out.values[i] < out.values[j];
    });
    EigenSym sorted;
    sorted.values.resize(n);
    sorted.vectors = Mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        sorted.values[j] = out.values[order[j]];
        for (std::size_t i = 0; i < n; ++i)
            sorted.vectors(i, j) = v(i, order[j]);
    }
    return sorted;
}

}  // namespace atr

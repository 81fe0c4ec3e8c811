#pragma once

#include <cstddef>
#include <vector>

#include "atr/kernels.hpp"

namespace atr {

using Vec = std::vector<double>;

inline double dot(const Vec& x, const Vec& y)
{
    return kern::dot(x.data(), y.data(), x.size());
}

inline double norm(const Vec& x)
{
    return kern::nrm2(x.data(), x.size());
}

// y += a * x
inline void axpy(Vec& y, double a, const Vec& x)
{
    kern::axpy(a, x.data(), y.data(), x.size());
}

inline void scale(Vec& x, double a)
{
    kern::scal(a, x.data(), x.size());
}

inline Vec scaled(const Vec& x, double a)
{
    Vec r = x;
    scale(r, a);
    return r;
}

inline Vec add(const Vec& x, const Vec& y)
{
    Vec r = x;
    axpy(r, 1.0, y);
    return r;
}

inline Vec sub(const Vec& x, const Vec& y)
{
    Vec r = x;
    axpy(r, -1.0, y);
    return r;
}

inline Vec negate(const Vec& x)
{
    return scaled(x, -1.0);
}

// a*x + b*y
inline Vec lin_comb(double a, const Vec& x, double b, const Vec& y)
{
    Vec r = scaled(x, a);
    axpy(r, b, y);
    return r;
}

// Dense row-major matrix.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(std::size_t n)
    {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    void add_diagonal(double a)
    {
        for (std::size_t i = 0; i < rows_; ++i)
            (*this)(i, i) += a;
    }

    double trace() const
    {
        double t = 0.0;
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i)
            t += (*this)(i, i);
        return t;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Vec matvec(const Mat& a, const Vec& x)
{
    Vec y(a.rows());
    kern::matvec(a.data(), a.rows(), a.cols(), x.data(), y.data());
    return y;
}

}  // namespace atr

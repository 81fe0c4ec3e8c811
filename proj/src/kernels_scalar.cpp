#include "atr/kernels.hpp"

#include <cmath>

namespace atr::kern::scalar {

double dot(const double* x, const double* y, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i] * y[i];
    return acc;
}

double nrm2(const double* x, std::size_t n)
{
    return std::sqrt(dot(x, x, n));
}

void axpy(double a, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        x[i] *= a;
}

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y)
{
    for (std::size_t i = 0; i < rows; ++i)
        y[i] = dot(a + i * cols, x, cols);
}

}  // namespace atr::kern::scalar

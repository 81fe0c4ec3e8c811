#include "atr/kernels.hpp"

#include <cmath>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace atr::kern::avx2 {

bool compiled() { return true; }

static inline double hsum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot(const double* x, const double* y, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        acc += x[i] * y[i];
    return acc;
}

double nrm2(const double* x, std::size_t n)
{
    return std::sqrt(dot(x, x, n));
}

void axpy(double a, const double* x, double* y, std::size_t n)
{
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i)
        y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n)
{
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i)
        x[i] *= a;
}

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y)
{
    for (std::size_t i = 0; i < rows; ++i)
        y[i] = dot(a + i * cols, x, cols);
}

}  // namespace atr::kern::avx2

#else  // no AVX2 at compile time: forward to the scalar reference

namespace atr::kern::avx2 {

bool compiled() { return false; }

double dot(const double* x, const double* y, std::size_t n)
{
    return scalar::dot(x, y, n);
}

double nrm2(const double* x, std::size_t n) { return scalar::nrm2(x, n); }

void axpy(double a, const double* x, double* y, std::size_t n)
{
    scalar::axpy(a, x, y, n);
}

void scal(double a, double* x, std::size_t n) { scalar::scal(a, x, n); }

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y)
{
    scalar::matvec(a, rows, cols, x, y);
}

}  // namespace atr::kern::avx2

#endif

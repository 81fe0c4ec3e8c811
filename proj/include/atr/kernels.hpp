#pragma once

#include <cstddef>

// Data-parallel arithmetic kernels with a scalar reference implementation and
// an AVX2 variant selected at runtime. Set ATR_KERNELS=scalar|avx2 to force a
// lane; the default probes CPU support. All matrices are dense row-major.

namespace atr::kern {

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);

double dot(const double* x, const double* y, std::size_t n);
double nrm2(const double* x, std::size_t n);
// y += a * x
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
// y = A x, A is rows x cols row-major
void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double nrm2(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);
}  // namespace scalar

namespace avx2 {
bool compiled();  // true when this binary carries real AVX2 bodies
double dot(const double* x, const double* y, std::size_t n);
double nrm2(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);
}  // namespace avx2

}  // namespace atr::kern

#include "atr/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace atr::kern {

static Isa detect_isa()
{
    if (const char* env = std::getenv("ATR_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0)
            return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2::compiled())
            return Isa::avx2;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2::compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return Isa::avx2;
#endif
    return Isa::scalar;
}

Isa active_isa()
{
    static const Isa isa = detect_isa();
    return isa;
}

const char* isa_name(Isa isa)
{
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

double dot(const double* x, const double* y, std::size_t n)
{
    return active_isa() == Isa::avx2 ? avx2::dot(x, y, n) : scalar::dot(x, y, n);
}

double nrm2(const double* x, std::size_t n)
{
    return active_isa() == Isa::avx2 ? avx2::nrm2(x, n) : scalar::nrm2(x, n);
}

void axpy(double a, const double* x, double* y, std::size_t n)
{
    if (active_isa() == Isa::avx2)
        avx2::axpy(a, x, y, n);
    else
        scalar::axpy(a, x, y, n);
}

void scal(double a, double* x, std::size_t n)
{
    if (active_isa() == Isa::avx2)
        avx2::scal(a, x, n);
    else
        scalar::scal(a, x, n);
}

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y)
{
    if (active_isa() == Isa::avx2)
        avx2::matvec(a, rows, cols, x, y);
    else
        scalar::matvec(a, rows, cols, x, y);
}

}  // namespace atr::kern

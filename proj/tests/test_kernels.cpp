#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "atr/kernels.hpp"

using namespace atr;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> v(n);
    for (auto& x : v)
        x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar kernels against hand values")
{
    const std::vector<double> x = {1.0, 2.0, 3.0};
    const std::vector<double> y = {-1.0, 0.5, 2.0};
    CHECK(kern::scalar::dot(x.data(), y.data(), 3) == doctest::Approx(6.0));
    CHECK(kern::scalar::nrm2(x.data(), 3) == doctest::Approx(std::sqrt(14.0)));

    std::vector<double> z = y;
    kern::scalar::axpy(2.0, x.data(), z.data(), 3);
    CHECK(z[0] == doctest::Approx(1.0));
    CHECK(z[1] == doctest::Approx(4.5));
    CHECK(z[2] == doctest::Approx(8.0));

    kern::scalar::scal(-1.0, z.data(), 3);
    CHECK(z[0] == doctest::Approx(-1.0));

    // 2x3 row-major
    const std::vector<double> a = {1, 0, 0, 0, 2, 1};
    std::vector<double> out(2);
    kern::scalar::matvec(a.data(), 2, 3, x.data(), out.data());
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(7.0));
}

TEST_CASE("avx2 variant agrees with scalar on random inputs")
{
    if (!kern::avx2::compiled()) {
        MESSAGE("AVX2 bodies not compiled in; forwarding path only");
    }
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 33u, 1000u, 1001u}) {
        const auto x = random_vec(n, 11 + static_cast<unsigned>(n));
        const auto y = random_vec(n, 23 + static_cast<unsigned>(n));

        const double ds = kern::scalar::dot(x.data(), y.data(), n);
        const double da = kern::avx2::dot(x.data(), y.data(), n);
        CHECK(da == doctest::Approx(ds).epsilon(1e-13));

        CHECK(kern::avx2::nrm2(x.data(), n) ==
              doctest::Approx(kern::scalar::nrm2(x.data(), n)).epsilon(1e-13));

        auto ys = y;
        auto ya = y;
        kern::scalar::axpy(1.7, x.data(), ys.data(), n);
        kern::avx2::axpy(1.7, x.data(), ya.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(ya[i] == doctest::Approx(ys[i]).epsilon(1e-14));

        auto xs = x;
        auto xa = x;
        kern::scalar::scal(-0.3, xs.data(), n);
        kern::avx2::scal(-0.3, xa.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(xa[i] == doctest::Approx(xs[i]).epsilon(1e-14));
    }

    for (std::size_t rows : {1u, 3u, 17u}) {
        for (std::size_t cols : {1u, 5u, 32u, 37u}) {
            const auto a = random_vec(rows * cols, 7);
            const auto x = random_vec(cols, 9);
            std::vector<double> ys(rows), ya(rows);
            kern::scalar::matvec(a.data(), rows, cols, x.data(), ys.data());
            kern::avx2::matvec(a.data(), rows, cols, x.data(), ya.data());
            for (std::size_t i = 0; i < rows; ++i)
                CHECK(ya[i] == doctest::Approx(ys[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("runtime dispatch resolves to a usable lane")
{
    const kern::Isa isa = kern::active_isa();
    CHECK((isa == kern::Isa::scalar || isa == kern::Isa::avx2));
    const std::vector<double> x = {2.0, -1.0};
    CHECK(kern::dot(x.data(), x.data(), 2) == doctest::Approx(5.0));
    CHECK(kern::isa_name(isa) != nullptr);
}

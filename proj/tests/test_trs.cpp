#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "atr/errors.hpp"
#include "atr/objective.hpp"
#include "atr/trs.hpp"

using namespace atr;

namespace {

struct RandomInstance {
    Mat h;
    Vec g;
    double sigma;
    double radius;
};

// convex H with eigenvalues spanning up to ~1e8 of condition number
RandomInstance random_instance(unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(2, 30);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = dim(rng);
    Mat q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            q(i, j) = 2.0 * u(rng) - 1.0;
    // orthogonalize by Gram-Schmidt on rows
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += q(i, k) * q(j, k);
            for (int k = 0; k < n; ++k)
                q(i, k) -= s * q(j, k);
        }
        double nn = 0.0;
        for (int k = 0; k < n; ++k)
            nn += q(i, k) * q(i, k);
        nn = std::sqrt(nn);
        for (int k = 0; k < n; ++k)
            q(i, k) /= nn;
    }
    Vec eig(n);
    const double cond_exp = 8.0 * u(rng);
    for (int i = 0; i < n; ++i)
        eig[i] = std::pow(10.0, -cond_exp * u(rng));
    if (u(rng) < 0.2)
        eig[0] = 0.0;  // allow a singular direction
    RandomInstance inst;
    inst.h = Mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += q(k, i) * eig[k] * q(k, j);
            inst.h(i, j) = s;
        }
    inst.g = Vec(n);
    for (int i = 0; i < n; ++i)
        inst.g[i] = 2.0 * u(rng) - 1.0;
    inst.sigma = u(rng) < 0.3 ? 0.0 : u(rng);
    // mix interior and boundary cases; the upper end comfortably exceeds the
    // damped Newton step so a healthy fraction lands strictly inside
    inst.radius = std::pow(10.0, 6.0 * u(rng) - 3.0);
    return inst;
}

}  // namespace

TEST_CASE("closed-form fixtures")
{
    Mat h = Mat::identity(2);
    Vec g = {1.0, 0.0};

    SUBCASE("interior newton step")
    {
        const TrsSolution s = solve_trs(h, g, 0.0, 10.0);
        CHECK(s.d[0] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(s.d[1] == doctest::Approx(0.0));
        CHECK(s.lambda == doctest::Approx(0.0));
        CHECK_FALSE(s.on_boundary);
    }

    SUBCASE("boundary solution with H = I")
    {
        // (1+lambda) * 0.5 = 1  =>  lambda = 1
        const TrsSolution s = solve_trs(h, g, 0.0, 0.5);
        CHECK(s.d[0] == doctest::Approx(-0.5).epsilon(1e-9));
        CHECK(std::abs(s.d[1]) < 1e-12);
        CHECK(s.lambda == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(s.on_boundary);
    }
}

TEST_CASE("boundary case agrees with the eigen reference oracle")
{
    Mat h(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = 2.0;
    const Vec g = {1.0, 1.0};
    const TrsSolution s = solve_trs(h, g, 0.5, 0.3);
    const TrsSolution ref = eigen_reference_solve(h, g, 0.5, 0.3);
    CHECK(norm(s.d) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(s.lambda == doctest::Approx(ref.lambda).epsilon(1e-6));
}

TEST_CASE("zero gradient returns the zero step")
{
    const TrsSolution s = solve_trs(Mat::identity(3), Vec(3, 0.0), 0.5, 1.0);
    CHECK(norm(s.d) == 0.0);
    CHECK(s.lambda == 0.0);
}

TEST_CASE("kkt property suite on random convex instances")
{
    int boundary = 0, interior = 0;
    for (unsigned seed = 0; seed < 300; ++seed) {
        const RandomInstance inst = random_instance(seed);
        TrsSolution s;
        try {
            s = solve_trs(inst.h, inst.g, inst.sigma, inst.radius);
        } catch (const TrsIterationLimit& e) {
            s = e.best;
        }
        const KktResidual r = verify_kkt(inst.h, inst.g, inst.sigma, inst.radius, s);
        CHECK(r.max_residual() <= 1e-8);
        const TrsSolution ref =
            eigen_reference_solve(inst.h, inst.g, inst.sigma, inst.radius);
        CHECK(s.lambda == doctest::Approx(ref.lambda).epsilon(1e-6).scale(1.0 + s.lambda));
        (s.on_boundary ? boundary : interior)++;
    }
    CHECK(boundary > 20);
    CHECK(interior > 20);
}

TEST_CASE("step norm is monotone decreasing in the multiplier")
{
    const RandomInstance inst = random_instance(424242);
    int nf = 0;
    double prev = 1e300;
    for (double mu = 1e-6; mu < 1e3; mu *= 10.0) {
        const double dn = norm(unconstrained_step(inst.h, inst.g, mu, &nf));
        CHECK(dn <= prev * (1.0 + 1e-12));
        prev = dn;
    }
}

TEST_CASE("next-gradient bound and inner-product bridge on logistic steps")
{
    auto data = std::make_shared<Dataset>(synthetic_logistic_dataset(60, 10, 31));
    LogisticProblem p(data, 1e-3);
    const double m = lipschitz_estimate(p);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int trial = 0; trial < 25; ++trial) {
        Vec x(10);
        for (auto& v : x)
            v = u(rng);
        const Vec g = p.gradient(x);
        const Mat h = p.hessian(x);
        const double sigma = 0.5 * std::sqrt(2.0 * m) * std::sqrt(norm(g));
        const double radius = std::sqrt(norm(g)) / std::sqrt(2.0 * m);
        const TrsSolution s = solve_trs(h, g, sigma, radius);
        const double mu = sigma + s.lambda;
        const Vec xn = add(x, s.d);
        const Vec gn = p.gradient(xn);
        const double dn = norm(s.d);
        CHECK(norm(gn) <= 0.5 * m * dn * dn + mu * dn + 1e-8);
        if (mu >= m * dn) {
            const double lhs = dot(gn, negate(s.d));
            CHECK(lhs >= norm(gn) * norm(gn) / (2.0 * mu) + 0.375 * mu * dn * dn - 1e-8);
        }
    }
}

TEST_CASE("request struct entry point and iteration limit payload")
{
    TrsRequest req;
    req.hessian = Mat::identity(2);
    req.gradient = {2.0, 0.0};
    req.sigma = 0.0;
    req.radius = 1.0;
    const TrsSolution s = solve_trs(req);
    CHECK(norm(s.d) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.n_factorizations >= 1);
    CHECK(s.kkt_residual <= 1e-8);
}

TEST_CASE("indefinite hessian beyond tolerance is rejected")
{
    Mat h(2, 2);
    h(0, 0) = -1.0;
    h(1, 1) = -1.0;
    CHECK_THROWS_AS(solve_trs(h, Vec{1.0, 1.0}, 0.0, 1.0), NotConvex);
}

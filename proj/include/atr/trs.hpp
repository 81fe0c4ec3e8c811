#pragma once

#include "atr/errors.hpp"
#include "atr/vec.hpp"

namespace atr {

// Primal-dual solution of min g'd + 0.5 d'(H + sigma I)d  s.t. ||d|| <= r.
struct TrsSolution {
    Vec d;
    double lambda = 0.0;
    bool on_boundary = false;
    int n_factorizations = 0;
    double kkt_residual = 0.0;
};

struct TrsRequest {
    Mat hessian;
    Vec gradient;
    double sigma = 0.0;
    double radius = 0.0;
    double tol = 1e-10;
};

class TrsIterationLimit : public MaxIterations {
public:
    TrsIterationLimit(std::string msg, TrsSolution best)
        : MaxIterations(std::move(msg)), best(std::move(best)) {}
    TrsSolution best;
};

// Safeguarded Newton on the secular equation 1/||d(lambda)|| = 1/r, one
// Cholesky factorization per trial multiplier.
TrsSolution solve_trs(const Mat& h, const Vec& g, double sigma, double radius,
                      double tol = 1e-10);
TrsSolution solve_trs(const TrsRequest& req);

// Solves (H + mu I) d = -g; adds the factorization count to *n_fact if given.
Vec unconstrained_step(const Mat& h, const Vec& g, double mu, int* n_fact = nullptr);

struct KktResidual {
    double stationarity = 0.0;
    double complementarity = 0.0;
    double feasibility = 0.0;
    double dual_sign = 0.0;
    double max_residual() const;
};

KktResidual verify_kkt(const Mat& h, const Vec& g, double sigma, double radius,
                       const TrsSolution& sol);

// Brute-force oracle via full eigendecomposition plus bisection on the dual.
TrsSolution eigen_reference_solve(const Mat& h, const Vec& g, double sigma,
                                  double radius);

}  // namespace atr

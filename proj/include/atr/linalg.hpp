#pragma once

#include <optional>

#include "atr/vec.hpp"

namespace atr {

// Lower-triangular Cholesky factor of a SPD matrix; nullopt when the
// factorization breaks down (matrix not positive definite to rounding).
std::optional<Mat> cholesky(const Mat& a);

struct ShiftedChol {
    Mat l;
    double shift;     // diagonal shift actually applied
    int attempts;     // factorization attempts consumed (>= 1)
};

// Factorizes a + shift*I, escalating the shift by x10 from `base_shift` when
// the plain factorization fails. Throws SingularSystem after `max_attempts`.
ShiftedChol cholesky_shifted(const Mat& a, double base_shift, int max_attempts = 6);

// Solves L L^T x = b.
Vec chol_solve(const Mat& l, const Vec& b);
// Solves L w = b (forward substitution only).
Vec chol_forward(const Mat& l, const Vec& b);

struct PowerResult {
    double value;
    bool converged;
    int iters;
};

// Spectral norm of a symmetric matrix by power iteration.
PowerResult power_norm(const Mat& a, double tol, int max_iters);

double frobenius(const Mat& a);

struct EigenSym {
    Vec values;   // ascending
    Mat vectors;  // column j is the eigenvector for values[j]
};

// Cyclic Jacobi eigensolver for symmetric matrices; intended for the small
// dense instances used by reference oracles (n up to a few hundred).
EigenSym jacobi_eigen(Mat a, int max_sweeps = 100);

}  // namespace atr

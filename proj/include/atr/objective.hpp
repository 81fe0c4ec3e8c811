#pragma once

#include <atomic>
#include <memory>
#include <optional>

#include "atr/dataset.hpp"
#include "atr/linalg.hpp"
#include "atr/vec.hpp"

namespace atr {

struct CounterSnapshot {
    long n_value = 0;
    long n_gradient = 0;
    long n_hessian = 0;
    long n_factorizations = 0;
};

inline CounterSnapshot operator-(const CounterSnapshot& a, const CounterSnapshot& b)
{
    return {a.n_value - b.n_value, a.n_gradient - b.n_gradient,
            a.n_hessian - b.n_hessian, a.n_factorizations - b.n_factorizations};
}

// Atomic so a problem instance can be shared across concurrent runs.
class EvalCounters {
public:
    void bump_value() const { n_value_.fetch_add(1, std::memory_order_relaxed); }
    void bump_gradient() const { n_gradient_.fetch_add(1, std::memory_order_relaxed); }
    void bump_hessian() const { n_hessian_.fetch_add(1, std::memory_order_relaxed); }
    void add_factorizations(long n) const
    {
        n_factorizations_.fetch_add(n, std::memory_order_relaxed);
    }
    CounterSnapshot snapshot() const
    {
        return {n_value_.load(), n_gradient_.load(), n_hessian_.load(),
                n_factorizations_.load()};
    }

private:
    mutable std::atomic<long> n_value_{0};
    mutable std::atomic<long> n_gradient_{0};
    mutable std::atomic<long> n_hessian_{0};
    mutable std::atomic<long> n_factorizations_{0};
};

// Value/gradient/Hessian contract with evaluation counters. Evaluations are
// pure; implementations must be reentrant.
class Objective {
public:
    virtual ~Objective() = default;

    int dim() const { return dim_; }

    double value(const Vec& x) const
    {
        counters_.bump_value();
        return value_impl(x);
    }
    Vec gradient(const Vec& x) const
    {
        counters_.bump_gradient();
        return gradient_impl(x);
    }
    Mat hessian(const Vec& x) const
    {
        counters_.bump_hessian();
        return hessian_impl(x);
    }

    const EvalCounters& counters() const { return counters_; }

protected:
    explicit Objective(int dim) : dim_(dim) {}
    virtual double value_impl(const Vec& x) const = 0;
    virtual Vec gradient_impl(const Vec& x) const = 0;
    virtual Mat hessian_impl(const Vec& x) const = 0;

private:
    int dim_;
    EvalCounters counters_;
};

// f(x) = (1/N) sum log(1+exp(-b_i a_i^T x)) + (reg/2) ||x||^2
class LogisticProblem : public Objective {
public:
    LogisticProblem(std::shared_ptr<const Dataset> data, double reg);

    const Dataset& data() const { return *data_; }
    double reg() const { return reg_; }

protected:
    double value_impl(const Vec& x) const override;
    Vec gradient_impl(const Vec& x) const override;
    Mat hessian_impl(const Vec& x) const override;

private:
    std::shared_ptr<const Dataset> data_;
    double reg_;
};

// f(x) = 0.5 x^T H x + b^T x
class QuadraticProblem : public Objective {
public:
    QuadraticProblem(Mat h, Vec b);

    const Mat& h() const { return h_; }
    const Vec& b() const { return b_; }
    // -H^{-1} b when H is positive definite
    std::optional<Vec> known_min() const { return known_min_; }

protected:
    double value_impl(const Vec& x) const override;
    Vec gradient_impl(const Vec& x) const override;
    Mat hessian_impl(const Vec& x) const override;

private:
    Mat h_;
    Vec b_;
    std::optional<Vec> known_min_;
};

// M-hat = ||(1/N) sum a_i a_i^T|| * max_i ||a_i||
double lipschitz_estimate(const LogisticProblem& problem);

struct HessianNormBound {
    double value;
    bool power_converged;  // false => Frobenius fallback (upper bound)
};

// ||grad^2 f(x0)|| by power iteration; runtime stand-in for the Hessian bound.
HessianNormBound hessian_norm_bound(const Objective& problem, const Vec& x0);

// log(1+exp(t)) without overflow
double log1pexp(double t);
double sigmoid(double t);

}  // namespace atr

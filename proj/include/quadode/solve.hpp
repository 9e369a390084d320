#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadode/family.hpp"
#include "quadode/quadrature.hpp"

namespace quadode::solver {

struct SolveConfig {
    double x0 = 0.0;
    double y0 = 0.0;
    int direction = +1;  // sign of y' on the solved branch
    double quad_tol = 1e-12;
    double inv_tol = 1e-12;
    int max_steps = 100000;  // interval budget per quadrature call
};

struct Row {
    double x;
    double y;
    double y1;
    double y2;
    double y3;
    double residual;  // y3 + y1 - dir*Q(y)
};

struct SolutionTable {
    std::vector<Row> rows;
    double first_integral_drift = 0.0;  // max |y1^2 - B(y)| (oracle tables only)
};

struct ResidualReport {
    double max_abs_residual = 0.0;
    double max_oracle_deviation = 0.0;
    double first_integral_drift = 0.0;
    double max_closed_form_deviation = 0.0;  // filled by callers with a closed form
    long rows_checked = 0;
};

class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// The quadrature integrand 1/sqrt(B) hit B(t) <= 0.
class RadicandNonPositive : public SolverError {
public:
    explicit RadicandNonPositive(double t);
    double at() const { return at_; }

private:
    double at_;
};

/// Monotone bracketing for the inverse x -> y failed; `reached()` is the
/// best quadrature estimate of how far in x the branch extends.
class InversionBracketFailure : public SolverError {
public:
    InversionBracketFailure(double reached_x, const std::string& detail);
    double reached() const { return reached_; }

private:
    double reached_;
};

/// Runge-Kutta oracle left the domain B >= 0 mid-step.
class StepUnderflow : public SolverError {
public:
    explicit StepUnderflow(double x);
    double at() const { return at_; }

private:
    double at_;
};

/// Double-precision view of a family, shared by the numeric kernels.
class FamilyEval {
public:
    explicit FamilyEval(const Family& fam);
    double b(double t) const { return horner(b_, t); }
    double db(double t) const { return horner(db_, t); }
    double ddb(double t) const { return horner(ddb_, t); }
    double a(double t) const { return horner(a_, t); }
    // 1/sqrt(B(t)); throws RadicandNonPositive when B(t) <= 0
    double inv_sqrt_b(double t) const;
    // dir-free right side Q(v) = A(v)*sqrt(B(v))/2; throws RadicandNegative when B < 0
    double q(double v) const;

private:
    static double horner(const std::vector<double>& c, double t);
    std::vector<double> b_, db_, ddb_, a_;
};

/// x(y) along the branch through (x0, y0): x0 + dir * \int_{y0}^{y} dt/sqrt(B).
double x_of_y(const Family& fam, const SolveConfig& cfg, double y);

/// Inverse of x_of_y on the monotone branch through the anchor.
double y_of_x(const Family& fam, const SolveConfig& cfg, double x);

struct Derivatives {
    double y1;
    double y2;
    double y3;
};

/// (y', y'', y''') at a point of the branch, from the first integral.
Derivatives derivatives_at(const Family& fam, const SolveConfig& cfg, double y);

/// Quadrature + inversion solve over a strictly monotone grid xs.
SolutionTable solve_grid(const Family& fam, const SolveConfig& cfg, std::span<const double> xs);
SolutionTable solve_grid_serial(const Family& fam, const SolveConfig& cfg,
                                std::span<const double> xs);
SolutionTable solve_grid_parallel(const Family& fam, const SolveConfig& cfg,
                                  std::span<const double> xs);

/// Independent fixed-step RK4 integration of the third-order equation.
SolutionTable rk_oracle(const Family& fam, const SolveConfig& cfg, std::span<const double> xs);

/// Cross-check the quadrature solve against the RK oracle.
ResidualReport verify(const Family& fam, const SolveConfig& cfg, std::span<const double> xs);

}  // namespace quadode::solver

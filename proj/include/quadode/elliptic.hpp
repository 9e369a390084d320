#pragma once

#include <stdexcept>
#include <string>

namespace quadode::elliptic {

class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// The two independent evaluation routes of cubic_x_of_y disagreed.
class CrossCheckFailure : public std::runtime_error {
public:
    CrossCheckFailure(double numeric, double reduced);
    double numeric() const { return numeric_; }
    double reduced() const { return reduced_; }

private:
    double numeric_;
    double reduced_;
};

struct EllipticArgs {
    double phi;  // radians
    double m;    // parameter (m = k^2 convention throughout)
};

/// Carlson symmetric integral R_F(x,y,z) by the duplication algorithm.
/// pre: x,y,z >= 0 with at most one of them zero.
double carlson_rf(double x, double y, double z);

/// Incomplete elliptic integral of the first kind, F(phi|m) =
/// int_0^phi dt/sqrt(1 - m sin^2 t), extended past |phi| = pi/2 by
/// F(phi + pi|m) = F(phi|m) + 2K(m).
double incomplete_f(const EllipticArgs& args);
inline double incomplete_f(double phi, double m) { return incomplete_f(EllipticArgs{phi, m}); }

/// Complete integral K(m) = pi / (2 AGM(1, sqrt(1-m))).  If `iterations` is
/// given it receives the AGM iteration count.
double complete_k_agm(double m, int* iterations = nullptr);

/// int_0^y dt / sqrt(c3 t^3 + c2 t^2 + c1 t + c0).  Evaluated by adaptive
/// quadrature and, when the cubic's root layout allows a reduction to
/// incomplete_f, cross-checked against that closed route.
double cubic_x_of_y(double c3, double c2, double c1, double c0, double y);

}  // namespace quadode::elliptic

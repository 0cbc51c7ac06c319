#ifndef DIRACWG_TRANSVERSE_HPP
#define DIRACWG_TRANSVERSE_HPP

#include <array>

#include "diracwg/errors.hpp"
#include "diracwg/pi_series.hpp"

namespace diracwg::transverse {

using piring::SeriesExpansion;

// Parameters of the fibered transverse operator xi*s1 + s2*D_t + mu*s3
// on (-1,1) with the boundary condition psi2(+-1) = -+psi1(+-1).
struct Params {
    double mu = 0.0;
    double xi = 0.0;
};

enum class ModeKind { oscillatory, hyperbolic, degenerate };

// One eigenpair of the xi = 0 operator. Spinors are real-valued in the
// phase convention used throughout.
struct Mode {
    int branch = 1;
    ModeKind kind = ModeKind::oscillatory;
    double k = 0.0;          // wavenumber; stores k-tilde on the hyperbolic branch
    double nu = 0.0;         // nu_n(0, mu) > 0
    int sign = +1;           // eigenvalue is sign * nu
    double norm_const = 0.0; // c
    double mu = 0.0;
    bool cos_in_first = true;  // which component carries the cos/cosh profile

    std::array<double, 2> value(double t) const;
    std::array<double, 2> derivative(double t) const;
};

// Dressed first-branch eigenfunction of the full xi-dependent operator,
// built from the xi = 0 mode by the rotation with coefficients c_xi and
// c^1_xi = xi / (sqrt(xi^2 + nu^2) + nu).
struct XiMode {
    Mode base;  // mode(1, +1, mu)
    double xi = 0.0;
    double mu = 0.0;
    int sign = +1;
    double c_xi = 1.0;
    double mix = 0.0;    // c^1_xi
    double nu_xi = 0.0;  // nu_1(xi, mu)

    std::array<double, 2> value(double t) const;
    std::array<double, 2> derivative(double t) const;
};

// n-th positive root of mu = -k/tan(2k), bracketed in ((n-1)pi/2, n*pi/2).
// Branch n = 1 requires mu > -1/2.
double k_branch(int n, double mu);

// Unique nonnegative root of mu = -kt/tanh(2*kt); requires mu <= -1/2.
double k_tilde(double mu);

// nu_j(0, mu); branch 1 switches to the hyperbolic branch for mu < -1/2 and
// to the exact polynomial value 1/2 at mu = -1/2.
double nu0(int j, double mu);

// nu_j(xi, mu) = sqrt(xi^2 + nu_j(0, mu)^2).
double nu(int j, double xi, double mu);

Mode mode(int n, int sign, double mu);
XiMode mode_xi(double xi, double mu, int sign);

// The momentum overlap <phi_{xi,mu,1}, s1 t phi_{xi,mu,1}>, computed both in
// closed form and by Gauss-Legendre quadrature. The two must agree in absolute
// value to 1e-10; the quadrature fixes the sign of the returned value.
struct MomentumSplit {
    double value = 0.0;            // copysign(closed_form_abs, quadrature)
    double closed_form_abs = 0.0;
    double quadrature = 0.0;
};
MomentumSplit momentum_m_detail(double xi, double mu, int quad_points = 64);
double momentum_m(double xi, double mu);

// Taylor coefficients of k_1(mu) and nu_1(0, mu) about mu = 0 in exact
// rational-in-pi arithmetic.
SeriesExpansion series_k1(int order);
SeriesExpansion series_nu1(int order);

// Essential-spectrum threshold nu_1(0, eps*m) / eps.
double threshold(double epsilon, double m);

}  // namespace diracwg::transverse

#endif

#ifndef DIRACWG_EFFECTIVE_HPP
#define DIRACWG_EFFECTIVE_HPP

#include <optional>
#include <span>
#include <vector>

#include "diracwg/geometry.hpp"
#include "diracwg/numerics.hpp"

namespace diracwg::effective {

enum class Model { schrodinger_taylor, full_symbol_weyl };

struct FourierBasis {
    int P = 0;        // modes p = -P..P
    double ell = 0.0;
};
struct GridBasis {
    double h = 0.0;   // spacing
    double L = 0.0;   // half window, interior points at -L+h..L-h
    int npoints = 0;
};

// Finite Hermitian representation of a 1D effective operator.
struct EffectiveOperator {
    Model model = Model::schrodinger_taylor;
    numerics::HermitianMatrix matrix{1};
    bool fourier = true;
    FourierBasis fourier_basis;
    GridBasis grid_basis;
    double flux = 0.0;     // momentum shift actually used (0 for open/grid)
    double epsilon = 0.0;  // full-symbol model only
    double m = 0.0;        // full-symbol model only
    int sign_choice = +1;  // full-symbol model only
};

// Flux candidates for the closed-curve momentum shift.
double flux_default(double ell);    // (pi+2)/ell
double flux_alternate(double ell);  // (2-pi)/ell

// (D_s + flux)^2 - kappa^2/pi^2 in the basis the geometry dictates:
// Fourier modes -resolution..resolution for closed curves (Toeplitz potential
// from the FFT of kappa^2), second-order central differences with Dirichlet
// ends and zero flux for open ones (resolution = number of grid cells).
EffectiveOperator schrodinger_matrix(const geometry::CurveGeometry& geom, int resolution,
                                     std::optional<double> flux_override = std::nullopt);

// Modified Weyl quantization of the full effective symbol
//   nu_1(xi, eps*m) + eps*kappa(s)*xi*<t phi, s1 phi>
// over Fourier modes p, p' in [-P, P] with the midpoint rule
// xi_mid = eps*(pi(p+p')/ell + pi/ell). sign_choice flips the sign of the
// momentum-overlap factor.
EffectiveOperator full_symbol_matrix(const geometry::CurveGeometry& geom, double epsilon,
                                     double m, int P, int sign_choice);

// count smallest eigenvalues, ascending.
std::vector<double> effective_eigs(const EffectiveOperator& op, int count);

// Number of negative eigenvalues of the Schrodinger model, stable across the
// last two entries of the resolution schedule.
int count_negative(const geometry::CurveGeometry& geom, std::span<const int> schedule);

}  // namespace diracwg::effective

#endif

#ifndef DIRACWG_DIRAC2D_HPP
#define DIRACWG_DIRAC2D_HPP

#include <string>
#include <vector>

#include "diracwg/geometry.hpp"
#include "diracwg/numerics.hpp"

namespace diracwg::dirac2d {

struct BasisIndex {
    int p = 0;     // Fourier mode, p in [-P, P]
    int n = 1;     // transverse branch, 1..Nt
    int sign = 1;  // +-1
};

// Truncated Galerkin matrix of the normal-form operator in the basis
// (Fourier in s) x (transverse Dirac eigenmodes in t).
struct DiracMatrix {
    numerics::HermitianMatrix matrix{1};
    std::vector<BasisIndex> index;
    double epsilon = 0.0;
    double m = 0.0;
    int P = 0, Nt = 0, Nq_t = 0, Ns = 0;
    double period = 0.0;  // ell for closed curves, 2L for periodized windows
    bool closed = true;
    double threshold = 0.0;  // nu_1(0, eps*m)
    double hermiticity_defect = 0.0;
};

DiracMatrix assemble(const geometry::CurveGeometry& geom, double epsilon, double m, int P,
                     int Nt, int Nq_t);

struct Spectrum {
    std::vector<double> all;  // ascending
    std::vector<double> gap;  // strictly inside (-th*(1-d), th*(1-d)), d = 1e-6
};
Spectrum spectrum_of(const DiracMatrix& D);

// Eigenvalues inside the spectral gap. For closed curves the whole truncated
// spectrum is discrete; "gap" means below the would-be essential threshold of
// the infinite problem.
std::vector<double> discrete_spectrum(const DiracMatrix& D);

struct PredictionRow {
    int j = 1;
    double computed = 0.0;  // j-th lowest positive eigenvalue of the 2D matrix
    double predicted_flux_a = 0.0;
    double predicted_flux_b = 0.0;
    double residual_a = 0.0;  // (computed - predicted)/eps^2
    double residual_b = 0.0;
    bool decreasing_a = true;  // |residual| decreased relative to the previous eps
    bool decreasing_b = true;
};

struct SpectrumReport {
    double epsilon = 0.0;
    double m = 0.0;
    double threshold = 0.0;
    std::vector<double> gap_eigenvalues;
    std::vector<double> lambda_eff_a;  // effective spectrum under flux (pi+2)/ell
    std::vector<double> lambda_eff_b;  // under flux (2-pi)/ell
    std::vector<PredictionRow> rows;
    double max_pairing_defect = 0.0;  // gap spectral symmetry
    bool truncation_certified = false;
    double truncation_shift = 0.0;
    int P = 0, Nt = 0, Nq_t = 0, Ns = 0;
    std::string note;
};

struct ReportOptions {
    int P = 24;
    int Nt = 8;
    int Nq_t = 64;
    int jmax = 1;
    bool certify_truncation = false;
    double truncation_tol = 1e-6;
    int eff_fourier_modes = 48;  // effective-operator resolution, closed case
    int eff_grid_cells = 1024;    // effective-operator resolution, open case
    int workers = 1;
};

struct AsymptoticSummary {
    std::vector<SpectrumReport> reports;  // one per epsilon, in input order
    char winning_flux = 'A';              // 'A' = (pi+2)/ell, 'B' = (2-pi)/ell
    double max_residual_a = 0.0;          // at the smallest epsilon
    double max_residual_b = 0.0;
};

AsymptoticSummary asymptotic_report(const geometry::CurveGeometry& geom, double m,
                                    const std::vector<double>& epsilons,
                                    const ReportOptions& opt);

std::string report_json(const AsymptoticSummary& summary);
std::string report_json(const SpectrumReport& report);
// CSV rows: eps,j,computed,predicted_fluxA,predicted_fluxB,residualA,residualB
std::string report_csv(const AsymptoticSummary& summary);

}  // namespace diracwg::dirac2d

#endif

#include "diracwg/effective.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "diracwg/transverse.hpp"

namespace diracwg::effective {

namespace {

constexpr double kPi = std::numbers::pi;

using numerics::Complex;
using numerics::HermitianMatrix;

// Fourier coefficients of the sampled profile, indexed by r in [-rmax, rmax].
std::vector<Complex> fourier_coeffs(const std::vector<double>& samples, int rmax) {
    const int Ns = static_cast<int>(samples.size());
    if (2 * rmax + 1 > Ns)
        throw validation_error("effective: geometry grid too coarse for requested modes");
    std::vector<Complex> in(samples.begin(), samples.end());
    const std::vector<Complex> hat = numerics::fft_forward(in);
    std::vector<Complex> out(2 * rmax + 1);
    for (int r = -rmax; r <= rmax; ++r) out[r + rmax] = hat[(r % Ns + Ns) % Ns];
    return out;
}

}  // namespace

double flux_default(double ell) { return (kPi + 2.0) / ell; }
double flux_alternate(double ell) { return (2.0 - kPi) / ell; }

EffectiveOperator schrodinger_matrix(const geometry::CurveGeometry& geom, int resolution,
                                     std::optional<double> flux_override) {
    if (resolution < 1) throw validation_error("schrodinger_matrix: resolution must be >= 1");

    EffectiveOperator op;
    op.model = Model::schrodinger_taylor;

    if (geom.closed()) {
        const geometry::Validation v = validate(geom, 1e-8);
        if (!v.ok)
            throw validation_error("schrodinger_matrix: geometry failed validation: " +
                                   v.failures.front());
        const int P = resolution;
        const double ell = geom.period();
        const double flux = flux_override.value_or(flux_default(ell));
        op.fourier = true;
        op.fourier_basis = {P, ell};
        op.flux = flux;

        std::vector<double> v_samples(geom.kappa_samples().size());
        for (std::size_t i = 0; i < v_samples.size(); ++i) {
            const double kap = geom.kappa_samples()[i];
            v_samples[i] = -kap * kap / (kPi * kPi);
        }
        const std::vector<Complex> vhat = fourier_coeffs(v_samples, 2 * P);

        const int dim = 2 * P + 1;
        HermitianMatrix h(dim);
        for (int pr = -P; pr <= P; ++pr) {
            for (int pc = -P; pc <= P; ++pc) {
                Complex entry = vhat[(pr - pc) + 2 * P];
                if (pr == pc) {
                    const double om = 2.0 * kPi * pc / ell + flux;
                    entry += om * om;
                }
                h(pr + P, pc + P) = entry;
            }
        }
        op.matrix = std::move(h);
        return op;
    }

    // Open window: Dirichlet finite differences on [-L, L], zero flux.
    const geometry::Validation v = validate(geom, 1e-8);
    if (!v.ok)
        throw validation_error("schrodinger_matrix: geometry failed validation: " +
                               v.failures.front());
    const double L = geom.half_window();
    const int cells = resolution;
    if (cells < 4) throw validation_error("schrodinger_matrix: need at least 4 grid cells");
    const double h = 2.0 * L / cells;
    const int dim = cells - 1;
    HermitianMatrix mat(dim);
    const double inv_h2 = 1.0 / (h * h);
    for (int i = 0; i < dim; ++i) {
        const double s = -L + h * (i + 1);
        const double kap = geom.kappa_at(s);
        mat(i, i) = 2.0 * inv_h2 - kap * kap / (kPi * kPi);
        if (i + 1 < dim) {
            mat(i, i + 1) = -inv_h2;
            mat(i + 1, i) = -inv_h2;
        }
    }
    op.fourier = false;
    op.grid_basis = {h, L, dim};
    op.flux = 0.0;
    op.matrix = std::move(mat);
    return op;
}

EffectiveOperator full_symbol_matrix(const geometry::CurveGeometry& geom, double epsilon,
                                     double m, int P, int sign_choice) {
    if (!geom.closed())
        throw validation_error("full_symbol_matrix: requires a closed geometry");
    if (!(epsilon > 0.0)) throw validation_error("full_symbol_matrix: epsilon must be positive");
    if (P < 1) throw validation_error("full_symbol_matrix: P must be >= 1");
    if (sign_choice != 1 && sign_choice != -1)
        throw validation_error("full_symbol_matrix: sign_choice must be +1 or -1");
    const geometry::Validation v = validate(geom, epsilon);
    if (!v.ok)
        throw validation_error("full_symbol_matrix: geometry failed validation: " +
                               v.failures.front());

    const double ell = geom.period();
    const double mu = epsilon * m;
    const std::vector<Complex> khat =
        fourier_coeffs(geom.kappa_samples(), 2 * P);

    const int dim = 2 * P + 1;
    HermitianMatrix h(dim);
    for (int pr = -P; pr <= P; ++pr) {
        for (int pc = -P; pc <= P; ++pc) {
            const double xi_mid = epsilon * (kPi * (pr + pc) / ell + kPi / ell);
            Complex entry = epsilon * khat[(pr - pc) + 2 * P] * xi_mid *
                            (sign_choice * transverse::momentum_m(xi_mid, mu));
            if (pr == pc) {
                const double xi_p = epsilon * (2.0 * kPi * pc / ell + kPi / ell);
                entry += transverse::nu(1, xi_p, mu);
            }
            h(pr + P, pc + P) = entry;
        }
    }

    EffectiveOperator op;
    op.model = Model::full_symbol_weyl;
    op.matrix = std::move(h);
    op.fourier = true;
    op.fourier_basis = {P, ell};
    op.flux = kPi / ell;  // the modified-quantization momentum shift
    op.epsilon = epsilon;
    op.m = m;
    op.sign_choice = sign_choice;
    return op;
}

std::vector<double> effective_eigs(const EffectiveOperator& op, int count) {
    const int dim = static_cast<int>(op.matrix.size());
    if (count < 1 || count > dim)
        throw validation_error("effective_eigs: count must be in [1, dim]");
    numerics::EigenResult res = numerics::hermitian_eigenvalues(op.matrix, false);
    res.values.resize(count);
    return res.values;
}

int count_negative(const geometry::CurveGeometry& geom, std::span<const int> schedule) {
    if (schedule.size() < 2)
        throw validation_error("count_negative: schedule needs at least two resolutions");
    std::vector<int> counts;
    for (int res : schedule) {
        const EffectiveOperator op = schrodinger_matrix(geom, res);
        const numerics::EigenResult er = numerics::hermitian_eigenvalues(op.matrix, false);
        int c = 0;
        for (double lam : er.values) c += (lam < 0.0) ? 1 : 0;
        counts.push_back(c);
    }
    const std::size_t nlast = counts.size();
    if (counts[nlast - 1] != counts[nlast - 2])
        throw convergence_error(
            "count_negative: count not stable across the last two resolutions (" +
            std::to_string(counts[nlast - 2]) + " vs " + std::to_string(counts[nlast - 1]) +
            "), refine the schedule");
    return counts.back();
}

}  // namespace diracwg::effective

#include "diracwg/dirac2d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "diracwg/effective.hpp"
#include "diracwg/transverse.hpp"

namespace diracwg::dirac2d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGapGuard = 1e-6;

using numerics::Complex;
using numerics::HermitianMatrix;

// A(s)[a,b] = int phi_a^T s1 (1 - eps t kappa(s))^{-1} phi_b dt for one s,
// by Gauss-Legendre quadrature. Real symmetric.
std::vector<double> transverse_overlaps(const std::vector<transverse::Mode>& modes,
                                        const numerics::QuadratureRule& rule, double epsilon,
                                        double kappa) {
    const std::size_t nm = modes.size();
    const std::size_t nq = rule.nodes.size();
    // spinor values at the quadrature nodes
    std::vector<double> up(nm * nq), dn(nm * nq);
    for (std::size_t a = 0; a < nm; ++a)
        for (std::size_t q = 0; q < nq; ++q) {
            const std::array<double, 2> v = modes[a].value(rule.nodes[q]);
            up[a * nq + q] = v[0];
            dn[a * nq + q] = v[1];
        }
    std::vector<double> ginv(nq);
    for (std::size_t q = 0; q < nq; ++q)
        ginv[q] = rule.weights[q] / (1.0 - epsilon * rule.nodes[q] * kappa);
    std::vector<double> out(nm * nm);
    for (std::size_t a = 0; a < nm; ++a) {
        for (std::size_t b = a; b < nm; ++b) {
            double acc = 0.0;
            const double* ua = &up[a * nq];
            const double* da = &dn[a * nq];
            const double* ub = &up[b * nq];
            const double* db = &dn[b * nq];
            for (std::size_t q = 0; q < nq; ++q)
                acc += ginv[q] * (ua[q] * db[q] + da[q] * ub[q]);
            out[a * nm + b] = acc;
            out[b * nm + a] = acc;
        }
    }
    return out;
}

}  // namespace

DiracMatrix assemble(const geometry::CurveGeometry& geom, double epsilon, double m, int P,
                     int Nt, int Nq_t) {
    if (P < 1 || Nt < 1) throw validation_error("assemble: P and Nt must be >= 1");
    if (Nq_t < 8) throw validation_error("assemble: Nq_t must be >= 8");
    const geometry::Validation val = validate(geom, epsilon);
    if (!val.ok)
        throw validation_error("assemble: geometry failed validation: " + val.failures.front());

    const int Ns = static_cast<int>(geom.kappa_samples().size());
    if (Ns < 4 * P + 2)
        throw validation_error("assemble: geometry grid too coarse for P (need Ns >= 4P+2)");

    const double period = geom.period();
    const double mu = epsilon * m;

    std::vector<transverse::Mode> modes;
    std::vector<BasisIndex> tindex;
    modes.reserve(2 * Nt);
    for (int n = 1; n <= Nt; ++n)
        for (int sg : {+1, -1}) {
            modes.push_back(transverse::mode(n, sg, mu));
            tindex.push_back({0, n, sg});
        }
    const std::size_t nm = modes.size();

    const numerics::QuadratureRule rule = numerics::gauss_legendre(Nq_t);

    // Overlap profiles along the curve and their Fourier coefficients.
    std::vector<std::vector<double>> profiles(Ns);
    for (int i = 0; i < Ns; ++i)
        profiles[i] = transverse_overlaps(modes, rule, epsilon, geom.kappa_samples()[i]);

    // Quadrature self-check at the strongest-curvature sample.
    {
        int iworst = 0;
        for (int i = 1; i < Ns; ++i)
            if (std::abs(geom.kappa_samples()[i]) > std::abs(geom.kappa_samples()[iworst]))
                iworst = i;
        const numerics::QuadratureRule fine = numerics::gauss_legendre(2 * Nq_t);
        const std::vector<double> refined =
            transverse_overlaps(modes, fine, epsilon, geom.kappa_samples()[iworst]);
        double defect = 0.0;
        for (std::size_t k = 0; k < refined.size(); ++k)
            defect = std::max(defect, std::abs(refined[k] - profiles[iworst][k]));
        if (defect > 1e-10)
            throw convergence_error("assemble: transverse quadrature underresolved (defect " +
                                    std::to_string(defect) + "), increase Nq_t");
    }

    // ghat[r][a*nm+b], r in [-2P, 2P]
    const int rmax = 2 * P;
    std::vector<std::vector<Complex>> ghat(2 * rmax + 1, std::vector<Complex>(nm * nm));
    {
        std::vector<Complex> column(Ns);
        for (std::size_t ab = 0; ab < nm * nm; ++ab) {
            for (int i = 0; i < Ns; ++i) column[i] = profiles[i][ab];
            const std::vector<Complex> hat = numerics::fft_forward(column);
            for (int r = -rmax; r <= rmax; ++r)
                ghat[r + rmax][ab] = hat[(r % Ns + Ns) % Ns];
        }
    }

    const int dim = (2 * P + 1) * static_cast<int>(nm);
    DiracMatrix D;
    D.index.resize(dim);
    D.epsilon = epsilon;
    D.m = m;
    D.P = P;
    D.Nt = Nt;
    D.Nq_t = Nq_t;
    D.Ns = Ns;
    D.period = period;
    D.closed = geom.closed();
    D.threshold = transverse::nu0(1, mu);

    HermitianMatrix H(dim);
    auto omega = [&](int p) { return (2.0 * kPi * p + kPi) / period; };
    for (int pr = -P; pr <= P; ++pr) {
        for (std::size_t ar = 0; ar < nm; ++ar) {
            const int row = (pr + P) * static_cast<int>(nm) + static_cast<int>(ar);
            D.index[row] = {pr, tindex[ar].n, tindex[ar].sign};
            for (int pc = -P; pc <= P; ++pc) {
                const double factor = 0.5 * epsilon * (omega(pr) + omega(pc));
                const std::vector<Complex>& g = ghat[(pr - pc) + rmax];
                for (std::size_t ac = 0; ac < nm; ++ac) {
                    const int col = (pc + P) * static_cast<int>(nm) + static_cast<int>(ac);
                    Complex entry = factor * g[ar * nm + ac];
                    if (row == col) entry += tindex[ar].sign * modes[ar].nu;
                    H(row, col) = entry;
                }
            }
        }
    }

    // Assembly self-check, then exact symmetrization.
    D.hermiticity_defect = H.hermiticity_defect();
    const double scale = std::max(1.0, H.max_abs());
    if (D.hermiticity_defect > 1e-12 * scale)
        throw convergence_error("assemble: Hermiticity defect " +
                                std::to_string(D.hermiticity_defect) + " exceeds tolerance");
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const Complex sym = 0.5 * (H(i, j) + std::conj(H(j, i)));
            H(i, j) = sym;
            H(j, i) = std::conj(sym);
        }
    for (int i = 0; i < dim; ++i) H(i, i) = Complex(H(i, i).real(), 0.0);

    D.matrix = std::move(H);
    return D;
}

namespace {

std::vector<double> positive_part(const std::vector<double>& all) {
    std::vector<double> pos;
    for (double v : all)
        if (v > 0.0) pos.push_back(v);
    std::sort(pos.begin(), pos.end());
    return pos;
}

}  // namespace

Spectrum spectrum_of(const DiracMatrix& D) {
    Spectrum s;
    s.all = numerics::hermitian_eigenvalues(D.matrix, false).values;
    const double cut = D.threshold * (1.0 - kGapGuard);
    for (double v : s.all)
        if (std::abs(v) < cut) s.gap.push_back(v);
    return s;
}

std::vector<double> discrete_spectrum(const DiracMatrix& D) { return spectrum_of(D).gap; }

namespace {

double pairing_defect(const std::vector<double>& all, const std::vector<double>& gap) {
    double worst = 0.0;
    for (double lam : gap) {
        double best = std::numeric_limits<double>::infinity();
        for (double other : all) best = std::min(best, std::abs(other + lam));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

AsymptoticSummary asymptotic_report(const geometry::CurveGeometry& geom, double m,
                                    const std::vector<double>& epsilons,
                                    const ReportOptions& opt) {
    if (epsilons.empty()) throw validation_error("asymptotic_report: empty epsilon list");
    for (double eps : epsilons) {
        const geometry::Validation v = validate(geom, eps);
        if (!v.ok)
            throw validation_error("asymptotic_report: eps=" + std::to_string(eps) +
                                   " fails validation: " + v.failures.front());
    }
    if (opt.jmax < 1) throw validation_error("asymptotic_report: jmax must be >= 1");

    // Effective spectra; the flux only matters for closed curves.
    std::vector<double> lam_a, lam_b;
    if (geom.closed()) {
        const auto op_a = effective::schrodinger_matrix(geom, opt.eff_fourier_modes,
                                                        effective::flux_default(geom.period()));
        const auto op_b = effective::schrodinger_matrix(
            geom, opt.eff_fourier_modes, effective::flux_alternate(geom.period()));
        lam_a = effective::effective_eigs(op_a, opt.jmax);
        lam_b = effective::effective_eigs(op_b, opt.jmax);
    } else {
        const auto op = effective::schrodinger_matrix(geom, opt.eff_grid_cells);
        lam_a = effective::effective_eigs(op, opt.jmax);
        lam_b = lam_a;
    }

    AsymptoticSummary summary;
    summary.reports.resize(epsilons.size());

    auto run_one = [&](std::size_t idx) {
        const double eps = epsilons[idx];
        SpectrumReport rep;
        rep.epsilon = eps;
        rep.m = m;
        rep.P = opt.P;
        rep.Nt = opt.Nt;
        rep.Nq_t = opt.Nq_t;

        const DiracMatrix D = assemble(geom, eps, m, opt.P, opt.Nt, opt.Nq_t);
        rep.Ns = D.Ns;
        rep.threshold = D.threshold;
        const Spectrum spec = spectrum_of(D);
        rep.gap_eigenvalues = spec.gap;
        rep.max_pairing_defect = pairing_defect(spec.all, spec.gap);
        const std::vector<double> pos = positive_part(spec.all);

        if (opt.certify_truncation) {
            const int p_ref = opt.P + (opt.P + 1) / 2;
            const int nt_ref = opt.Nt + (opt.Nt + 1) / 2;
            double shift = 0.0;
            for (int pass = 0; pass < 2; ++pass) {
                const DiracMatrix refined =
                    pass == 0 ? assemble(geom, eps, m, p_ref, opt.Nt, opt.Nq_t)
                              : assemble(geom, eps, m, opt.P, nt_ref, opt.Nq_t);
                const std::vector<double> rpos = positive_part(spectrum_of(refined).all);
                for (int j = 0; j < opt.jmax; ++j)
                    shift = std::max(shift, std::abs(rpos[j] - pos[j]));
            }
            rep.truncation_shift = shift;
            rep.truncation_certified = true;
            if (shift > opt.truncation_tol)
                throw convergence_error("asymptotic_report: truncation not converged (shift " +
                                        std::to_string(shift) + " at eps " +
                                        std::to_string(eps) + "), increase P or Nt");
        }

        rep.note =
            geom.closed()
                ? "closed geometry: the truncated 2D spectrum is fully discrete; gap "
                  "eigenvalues are those below the would-be essential threshold of the "
                  "infinite problem"
                : "open window periodized with period " + std::to_string(D.period) +
                      ", flux pi/period; periodization error not bounded rigorously";

        rep.lambda_eff_a = lam_a;
        rep.lambda_eff_b = lam_b;
        const double eps2 = eps * eps;
        for (int j = 1; j <= opt.jmax; ++j) {
            if (j > static_cast<int>(pos.size())) break;
            PredictionRow row;
            row.j = j;
            row.computed = pos[j - 1];
            row.predicted_flux_a = rep.threshold + (2.0 * eps2 / kPi) * lam_a[j - 1];
            row.predicted_flux_b = rep.threshold + (2.0 * eps2 / kPi) * lam_b[j - 1];
            row.residual_a = (row.computed - row.predicted_flux_a) / eps2;
            row.residual_b = (row.computed - row.predicted_flux_b) / eps2;
            rep.rows.push_back(row);
        }
        summary.reports[idx] = std::move(rep);
    };

    const int workers = std::max(1, opt.workers);
    if (workers == 1 || epsilons.size() == 1) {
        for (std::size_t i = 0; i < epsilons.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(epsilons.size());
        const std::size_t nworkers =
            std::min<std::size_t>(static_cast<std::size_t>(workers), epsilons.size());
        for (std::size_t w = 0; w < nworkers; ++w)
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= epsilons.size()) return;
                    try {
                        run_one(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
    }

    // Residual-decrease flags relative to the previous (larger) epsilon.
    for (std::size_t i = 1; i < summary.reports.size(); ++i) {
        SpectrumReport& cur = summary.reports[i];
        const SpectrumReport& prev = summary.reports[i - 1];
        for (std::size_t r = 0; r < cur.rows.size() && r < prev.rows.size(); ++r) {
            cur.rows[r].decreasing_a =
                std::abs(cur.rows[r].residual_a) < std::abs(prev.rows[r].residual_a);
            cur.rows[r].decreasing_b =
                std::abs(cur.rows[r].residual_b) < std::abs(prev.rows[r].residual_b);
        }
    }

    // Flux arbitration at the smallest epsilon; ties go to the default A.
    std::size_t ismall = 0;
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (epsilons[i] < epsilons[ismall]) ismall = i;
    double max_a = 0.0, max_b = 0.0;
    for (const PredictionRow& row : summary.reports[ismall].rows) {
        max_a = std::max(max_a, std::abs(row.residual_a));
        max_b = std::max(max_b, std::abs(row.residual_b));
    }
    summary.max_residual_a = max_a;
    summary.max_residual_b = max_b;
    summary.winning_flux = (max_b < max_a - 1e-12 * std::max(1.0, max_a)) ? 'B' : 'A';
    return summary;
}

namespace {

nlohmann::json to_json_obj(const SpectrumReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const PredictionRow& row : r.rows) {
        rows.push_back({{"j", row.j},
                        {"computed", row.computed},
                        {"predicted_fluxA", row.predicted_flux_a},
                        {"predicted_fluxB", row.predicted_flux_b},
                        {"residualA", row.residual_a},
                        {"residualB", row.residual_b},
                        {"residual_decreasing_A", row.decreasing_a},
                        {"residual_decreasing_B", row.decreasing_b}});
    }
    nlohmann::json j{{"epsilon", r.epsilon},
                     {"m", r.m},
                     {"threshold", r.threshold},
                     {"gap_eigenvalues", r.gap_eigenvalues},
                     {"lambda_eff_fluxA", r.lambda_eff_a},
                     {"lambda_eff_fluxB", r.lambda_eff_b},
                     {"rows", rows},
                     {"max_pairing_defect", r.max_pairing_defect},
                     {"truncation_certified", r.truncation_certified},
                     {"truncation_shift", r.truncation_shift},
                     {"P", r.P},
                     {"Nt", r.Nt},
                     {"Nq_t", r.Nq_t},
                     {"Ns", r.Ns}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace

std::string report_json(const SpectrumReport& report) { return to_json_obj(report).dump(2); }

std::string report_json(const AsymptoticSummary& summary) {
    nlohmann::json reports = nlohmann::json::array();
    for (const SpectrumReport& r : summary.reports) reports.push_back(to_json_obj(r));
    const nlohmann::json j{{"reports", reports},
                           {"winning_flux", std::string(1, summary.winning_flux)},
                           {"max_residual_fluxA", summary.max_residual_a},
                           {"max_residual_fluxB", summary.max_residual_b}};
    return j.dump(2);
}

std::string report_csv(const AsymptoticSummary& summary) {
    std::ostringstream os;
    os << "eps,j,computed,predicted_fluxA,predicted_fluxB,residualA,residualB\n";
    os.precision(17);
    for (const SpectrumReport& r : summary.reports)
        for (const PredictionRow& row : r.rows)
            os << r.epsilon << "," << row.j << "," << row.computed << ","
               << row.predicted_flux_a << "," << row.predicted_flux_b << "," << row.residual_a
               << "," << row.residual_b << "\n";
    return os.str();
}

}  // namespace diracwg::dirac2d

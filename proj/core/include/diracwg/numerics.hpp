#ifndef DIRACWG_NUMERICS_HPP
#define DIRACWG_NUMERICS_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "diracwg/errors.hpp"

namespace diracwg::numerics {

using Complex = std::complex<double>;

// Dense Hermitian matrix, row-major storage.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(std::size_t n) : n_(n), a_(n * n) {
        if (n == 0) throw validation_error("HermitianMatrix: dimension must be positive");
    }

    std::size_t size() const { return n_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    std::span<Complex> data() { return a_; }
    std::span<const Complex> data() const { return a_; }

    // Largest |a_ij|, the natural scale for tolerances.
    double max_abs() const;

    // max |a_ij - conj(a_ji)| over all pairs, plus finiteness.
    double hermiticity_defect() const;

    // Throws validation_error if the Hermiticity defect exceeds rel_tol * scale
    // or any entry is non-finite.
    void validate(double rel_tol = 1e-13) const;

  private:
    std::size_t n_;
    std::vector<Complex> a_;
};

struct QuadratureRule {
    std::vector<double> nodes;    // strictly increasing, inside (-1,1)
    std::vector<double> weights;  // positive, sum to 2

    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

struct RootOptions {
    double tol = 1e-14;   // bracket-width target (absolute)
    int max_iter = 200;
};

// Bracketed scalar root: bisection with secant/inverse-quadratic acceleration
// (Brent). Requires f(a)*f(b) < 0. Deterministic.
double find_root_bracketed(const std::function<double(double)>& f, double a, double b,
                           double tol);
double find_root_bracketed(const std::function<double(double)>& f, double a, double b,
                           const RootOptions& opt);

// n-point Gauss-Legendre rule on [-1,1], exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_legendre(int n);

// Forward DFT with 1/N normalization: F[r] = (1/N) * sum_m x[m] exp(-2*pi*i*r*m/N).
// Any length N >= 1 (radix-2 for powers of two, Bluestein otherwise).
std::vector<Complex> fft_forward(std::span<const Complex> samples);

// Inverse of fft_forward: x[m] = sum_r F[r] exp(+2*pi*i*r*m/N).
std::vector<Complex> fft_inverse(std::span<const Complex> coeffs);

struct EigenOptions {
    double hermiticity_tol = 1e-13;
    int max_ql_iter = 64;  // per eigenvalue, implicit-shift sweeps
};

struct EigenResult {
    std::vector<double> values;    // ascending
    std::vector<Complex> vectors;  // column-major n*n when requested, else empty
    std::size_t n = 0;

    Complex vector(std::size_t row, std::size_t col) const { return vectors[col * n + row]; }
};

// Dense direct eigensolver: unitary (Householder) reduction to real symmetric
// tridiagonal form followed by implicit-shift QL iteration.
EigenResult hermitian_eigenvalues(const HermitianMatrix& H, bool want_vectors,
                                  const EigenOptions& opt = {});

}  // namespace diracwg::numerics

#endif

#include "diracwg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace diracwg::numerics {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

double HermitianMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& z : a_) m = std::max(m, std::abs(z));
    return m;
}

double HermitianMatrix::hermiticity_defect() const {
    double defect = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j)
            defect = std::max(defect, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return defect;
}

void HermitianMatrix::validate(double rel_tol) const {
    for (const Complex& z : a_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw validation_error("HermitianMatrix: non-finite entry");
    const double scale = std::max(1.0, max_abs());
    if (hermiticity_defect() > rel_tol * scale)
        throw validation_error("HermitianMatrix: matrix is not Hermitian within tolerance");
}

// ---------------------------------------------------------------------------
// Bracketed root finding (Brent: bisection + secant/inverse quadratic).
// ---------------------------------------------------------------------------

double find_root_bracketed(const std::function<double(double)>& f, double a, double b,
                           const RootOptions& opt) {
    if (!(opt.tol > 0.0)) throw validation_error("find_root_bracketed: tol must be positive");
    double fa = f(a);
    double fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw validation_error("find_root_bracketed: non-finite function value at bracket end");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0)
        throw validation_error("find_root_bracketed: no sign change on [a,b]");

    double c = a, fc = fa;
    double d = b - a, e = b - a;
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * opt.tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {  // secant
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {  // inverse quadratic
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
        if (!std::isfinite(fb))
            throw validation_error("find_root_bracketed: non-finite function value");
    }
    throw convergence_error("find_root_bracketed: iteration limit reached");
}

double find_root_bracketed(const std::function<double(double)>& f, double a, double b,
                           double tol) {
    RootOptions opt;
    opt.tol = tol;
    return find_root_bracketed(f, a, b, opt);
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes and weights (Newton on the three-term recurrence).
// ---------------------------------------------------------------------------

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw validation_error("gauss_legendre: n must be >= 1");
    QuadratureRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        rule.nodes[i - 1] = -z;
        rule.nodes[n - i] = z;
        rule.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[n - i] = rule.weights[i - 1];
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

// ---------------------------------------------------------------------------
// FFT: iterative radix-2 plus Bluestein for general lengths.
// ---------------------------------------------------------------------------

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place radix-2 transform, kernel exp(sign * 2*pi*i*r*m/N), no scaling.
void fft_radix2(std::vector<Complex>& x, int sign) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const Complex w = std::polar(1.0, ang * static_cast<double>(j));
                const Complex u = x[start + j];
                const Complex v = x[start + j + len / 2] * w;
                x[start + j] = u + v;
                x[start + j + len / 2] = u - v;
            }
        }
    }
}

// Arbitrary-length transform via the chirp identity rm = (r^2 + m^2 - (r-m)^2)/2.
// Quadratic phases are reduced mod 2N in integer arithmetic before evaluating.
std::vector<Complex> fft_bluestein(std::span<const Complex> x, int sign) {
    const std::size_t n = x.size();
    const long long two_n = 2LL * static_cast<long long>(n);
    auto chirp = [&](long long m, int s) {
        const long long q = (m * m) % two_n;
        return std::polar(1.0, s * std::numbers::pi * static_cast<double>(q) /
                                   static_cast<double>(n));
    };
    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<Complex> a(m, Complex(0.0, 0.0));
    std::vector<Complex> b(m, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = x[k] * chirp(static_cast<long long>(k), sign);
        const Complex c = chirp(static_cast<long long>(k), -sign);
        b[k] = c;
        if (k != 0) b[m - k] = c;
    }
    fft_radix2(a, -1);
    fft_radix2(b, -1);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_radix2(a, +1);
    std::vector<Complex> out(n);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t r = 0; r < n; ++r)
        out[r] = a[r] * inv_m * chirp(static_cast<long long>(r), sign);
    return out;
}

std::vector<Complex> dft(std::span<const Complex> x, int sign) {
    if (x.empty()) throw validation_error("fft: empty input");
    if (is_pow2(x.size())) {
        std::vector<Complex> y(x.begin(), x.end());
        fft_radix2(y, sign);
        return y;
    }
    return fft_bluestein(x, sign);
}

}  // namespace

std::vector<Complex> fft_forward(std::span<const Complex> samples) {
    std::vector<Complex> y = dft(samples, -1);
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (Complex& z : y) z *= inv_n;
    return y;
}

std::vector<Complex> fft_inverse(std::span<const Complex> coeffs) {
    return dft(coeffs, +1);
}

// ---------------------------------------------------------------------------
// Dense Hermitian eigensolver.
//
// Householder reflectors (with the LAPACK zlarfg convention producing real
// subdiagonals) reduce A to a real symmetric tridiagonal T with A = Q T Q^*;
// implicit-shift QL iteration then diagonalizes T.
// ---------------------------------------------------------------------------

namespace {

struct Reflector {
    std::size_t k = 0;              // column index; acts on rows k+1..n-1
    Complex tau{0.0, 0.0};
    std::vector<Complex> v;         // v[0] = 1 by convention, length n-1-k
};

// QL with implicit shifts on (d, e); e[i] couples i and i+1 and must have
// length n with e[n-1] = 0 as workspace. If z is non-null (row-major n x n),
// accumulates the rotations into its columns.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z,
                std::size_t n, int max_iter) {
    if (n == 1) return;
    auto rotate = [&](std::size_t i, double c, double s) {
        if (!z) return;
        for (std::size_t row = 0; row < n; ++row) {
            const double f = (*z)[row * n + i + 1];
            const double g = (*z)[row * n + i];
            (*z)[row * n + i + 1] = s * g + c * f;
            (*z)[row * n + i] = c * g - s * f;
        }
    };
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
            }
            if (m == l) break;
            if (iter++ == max_iter)
                throw convergence_error("hermitian_eigenvalues: QL iteration did not converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t ii = m; ii-- > l;) {
                double f = s * e[ii];
                const double b = c * e[ii];
                r = std::hypot(f, g);
                e[ii + 1] = r;
                if (r == 0.0) {
                    d[ii + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[ii + 1] - p;
                r = (d[ii] - g) * s + 2.0 * c * b;
                p = s * r;
                d[ii + 1] = g + p;
                g = c * r - b;
                rotate(ii, c, s);
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

}  // namespace

EigenResult hermitian_eigenvalues(const HermitianMatrix& H, bool want_vectors,
                                  const EigenOptions& opt) {
    H.validate(opt.hermiticity_tol);
    const std::size_t n = H.size();

    // Symmetrized working copy, row-major.
    std::vector<Complex> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i * n + j] = 0.5 * (H(i, j) + std::conj(H(j, i)));

    std::vector<double> d(n, 0.0);
    std::vector<double> e(n > 1 ? n - 1 : 0, 0.0);
    std::vector<Reflector> refl;
    if (want_vectors && n > 1) refl.reserve(n - 1);

    for (std::size_t k = 0; n > 1 && k + 1 < n; ++k) {
        const std::size_t mlen = n - 1 - k;  // rows k+1..n-1
        const Complex alpha = a[(k + 1) * n + k];
        double xnorm_sq = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) xnorm_sq += std::norm(a[i * n + k]);
        const double xnorm = std::sqrt(xnorm_sq);

        if (xnorm == 0.0 && alpha.imag() == 0.0) {
            e[k] = alpha.real();
            if (want_vectors) {
                Reflector rf;
                rf.k = k;
                rf.tau = Complex(0.0, 0.0);
                rf.v.assign(mlen, Complex(0.0, 0.0));
                refl.push_back(std::move(rf));
            }
            continue;
        }

        const double anorm = std::sqrt(std::norm(alpha) + xnorm_sq);
        const double beta = (alpha.real() >= 0.0) ? -anorm : anorm;
        const Complex tau((beta - alpha.real()) / beta, -alpha.imag() / beta);
        const Complex scale = 1.0 / (alpha - beta);

        std::vector<Complex> v(mlen);
        v[0] = Complex(1.0, 0.0);
        for (std::size_t i = 1; i < mlen; ++i) v[i] = a[(k + 1 + i) * n + k] * scale;

        // p = tau * A22 * v on the trailing block A[k+1.., k+1..].
        std::vector<Complex> p(mlen, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < mlen; ++i) {
            const Complex* row = &a[(k + 1 + i) * n + (k + 1)];
            double pre = 0.0, pim = 0.0;
            for (std::size_t j = 0; j < mlen; ++j) {
                const double ar = row[j].real(), ai = row[j].imag();
                const double vr = v[j].real(), vi = v[j].imag();
                pre += ar * vr - ai * vi;
                pim += ar * vi + ai * vr;
            }
            p[i] = tau * Complex(pre, pim);
        }
        // w = p - (tau/2) (p^* v) v
        Complex pv(0.0, 0.0);
        for (std::size_t i = 0; i < mlen; ++i) pv += std::conj(p[i]) * v[i];
        const Complex kappa = 0.5 * tau * pv;
        std::vector<Complex> w(mlen);
        for (std::size_t i = 0; i < mlen; ++i) w[i] = p[i] - kappa * v[i];

        // A22 <- A22 - v w^* - w v^*
        for (std::size_t i = 0; i < mlen; ++i) {
            Complex* row = &a[(k + 1 + i) * n + (k + 1)];
            const double vir = v[i].real(), vii = v[i].imag();
            const double wir = w[i].real(), wii = w[i].imag();
            for (std::size_t j = 0; j < mlen; ++j) {
                const double vjr = v[j].real(), vji = -v[j].imag();  // conj(v[j])
                const double wjr = w[j].real(), wji = -w[j].imag();  // conj(w[j])
                const double dr = vir * wjr - vii * wji + wir * vjr - wii * vji;
                const double di = vir * wji + vii * wjr + wir * vji + wii * vjr;
                row[j] -= Complex(dr, di);
            }
        }

        e[k] = beta;
        a[(k + 1) * n + k] = Complex(beta, 0.0);
        a[k * n + (k + 1)] = Complex(beta, 0.0);
        if (want_vectors) {
            Reflector rf;
            rf.k = k;
            rf.tau = tau;
            rf.v = std::move(v);
            refl.push_back(std::move(rf));
        }
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i].real();

    std::vector<double> z;
    if (want_vectors) {
        z.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
    }
    {
        std::vector<double> ecopy(n, 0.0);
        std::copy(e.begin(), e.end(), ecopy.begin());
        tridiag_ql(d, ecopy, want_vectors ? &z : nullptr, n, opt.max_ql_iter);
    }

    EigenResult res;
    res.n = n;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
    res.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.values[i] = d[order[i]];

    if (want_vectors) {
        // vectors = Q * Z, Q = H_0 H_1 ... applied to the identity from the right.
        std::vector<Complex> q(n * n, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < n; ++i) q[i * n + i] = Complex(1.0, 0.0);
        for (std::size_t r = refl.size(); r-- > 0;) {
            const Reflector& rf = refl[r];
            if (rf.tau == Complex(0.0, 0.0)) continue;
            const std::size_t off = rf.k + 1;
            const std::size_t mlen = rf.v.size();
            // q <- q - tau * v (v^* q), acting on rows off..n-1
            std::vector<Complex> vq(n, Complex(0.0, 0.0));
            for (std::size_t i = 0; i < mlen; ++i) {
                const Complex vc = std::conj(rf.v[i]);
                const Complex* row = &q[(off + i) * n];
                for (std::size_t col = 0; col < n; ++col) vq[col] += vc * row[col];
            }
            for (std::size_t i = 0; i < mlen; ++i) {
                const Complex tv = rf.tau * rf.v[i];
                Complex* row = &q[(off + i) * n];
                for (std::size_t col = 0; col < n; ++col) row[col] -= tv * vq[col];
            }
        }
        res.vectors.assign(n * n, Complex(0.0, 0.0));
        for (std::size_t col = 0; col < n; ++col) {
            const std::size_t zc = order[col];
            for (std::size_t i = 0; i < n; ++i) {
                double accr = 0.0, acci = 0.0;
                const Complex* qrow = &q[i * n];
                for (std::size_t j = 0; j < n; ++j) {
                    accr += qrow[j].real() * z[j * n + zc];
                    acci += qrow[j].imag() * z[j * n + zc];
                }
                res.vectors[col * n + i] = Complex(accr, acci);
            }
        }
    }
    return res;
}

}  // namespace diracwg::numerics

#include "diracwg/transverse.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "diracwg/numerics.hpp"

namespace diracwg::transverse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateWindow = 1e-12;  // |mu + 1/2| below this is the polynomial mode

// f(k) = mu + k*cot(2k); roots are the oscillatory wavenumbers. Written with
// cot so the only singularities are the interval endpoints sin(2k) = 0.
double dispersion_osc(double k, double mu) {
    return mu + k * std::cos(2.0 * k) / std::sin(2.0 * k);
}

// k/tanh(2k) extended by continuity to 1/2 at k = 0.
double k_over_tanh2k(double k) {
    if (k < 1e-4) {
        const double x = 2.0 * k;
        return 0.5 * (1.0 + x * x / 3.0 - x * x * x * x / 45.0);
    }
    return k / std::tanh(2.0 * k);
}

// 4k - sin(4k), series below the cancellation regime.
double four_k_minus_sin(double k) {
    if (std::abs(k) < 0.05) {
        const double x = 4.0 * k;
        const double x2 = x * x;
        double term = x * x2 / 6.0;  // x^3/3!
        double acc = term;
        for (int j = 2; j <= 8; ++j) {
            term *= -x2 / ((2.0 * j) * (2.0 * j + 1.0));
            acc += term;
        }
        return acc;
    }
    return 4.0 * k - std::sin(4.0 * k);
}

// sinh(4k) - 4k, series below the cancellation regime.
double sinh_minus_four_k(double k) {
    if (std::abs(k) < 0.05) {
        const double x = 4.0 * k;
        const double x2 = x * x;
        double term = x * x2 / 6.0;
        double acc = term;
        for (int j = 2; j <= 8; ++j) {
            term *= x2 / ((2.0 * j) * (2.0 * j + 1.0));
            acc += term;
        }
        return acc;
    }
    return std::sinh(4.0 * k) - 4.0 * k;
}

double norm_const_oscillatory(double k) {
    const double s = std::sin(2.0 * k);
    return std::sqrt(k * s * s / four_k_minus_sin(k));
}

double norm_const_hyperbolic(double kt) {
    if (kt == 0.0) return std::sqrt(3.0 / 8.0);
    const double s = std::sinh(2.0 * kt);
    return std::sqrt(kt * s * s / sinh_minus_four_k(kt));
}

}  // namespace

double k_branch(int n, double mu) {
    if (n < 1) throw validation_error("k_branch: branch index must be >= 1");
    if (!std::isfinite(mu)) throw validation_error("k_branch: mu must be finite");
    if (n == 1 && mu <= -0.5)
        throw validation_error(
            "k_branch: branch 1 is oscillatory only for mu > -1/2 (use k_tilde)");

    const double lo_end = (n - 1) * kPi / 2.0;
    const double hi_end = n * kPi / 2.0;
    auto f = [mu](double k) { return dispersion_osc(k, mu); };

    // Left bracket point: f -> +infinity at the left pole for n >= 2, and
    // f(0+) = mu + 1/2 > 0 on branch 1.
    double lo = 0.0;
    if (n == 1) {
        lo = 1e-9;
        if (f(lo) <= 0.0) lo = 1e-13;
    } else {
        double delta = 1e-3;
        lo = lo_end + delta;
        while (f(lo) <= 0.0) {
            delta *= 0.125;
            if (delta < 1e-14)
                throw convergence_error("k_branch: failed to bracket root from the left at n=" +
                                        std::to_string(n) + ", mu=" + std::to_string(mu));
            lo = lo_end + delta;
        }
    }
    // Right bracket point: f -> -infinity at the right pole.
    double delta = 1e-3;
    double hi = hi_end - delta;
    while (f(hi) >= 0.0) {
        delta *= 0.125;
        if (delta < 1e-14)
            throw convergence_error("k_branch: failed to bracket root from the right at n=" +
                                    std::to_string(n) + ", mu=" + std::to_string(mu));
        hi = hi_end - delta;
    }
    if (!(lo < hi))
        throw convergence_error("k_branch: degenerate bracket at n=" + std::to_string(n));
    return numerics::find_root_bracketed(f, lo, hi, 1e-15);
}

double k_tilde(double mu) {
    if (!std::isfinite(mu)) throw validation_error("k_tilde: mu must be finite");
    if (mu > -0.5) throw validation_error("k_tilde: requires mu <= -1/2");
    if (mu == -0.5) return 0.0;
    auto f = [mu](double k) { return mu + k_over_tanh2k(k); };
    const double hi = -mu + 1.0;  // k/tanh(2k) >= k makes f(hi) >= 1
    return numerics::find_root_bracketed(f, 0.0, hi, 1e-15);
}

double nu0(int j, double mu) {
    if (j < 1) throw validation_error("nu0: branch index must be >= 1");
    if (j == 1) {
        if (std::abs(mu + 0.5) <= kDegenerateWindow) return 0.5;
        if (mu < -0.5) {
            const double kt = k_tilde(mu);
            // nu = kt/sinh(2 kt): same number as sqrt(mu^2 - kt^2) without the
            // cancellation at large |mu|.
            if (kt < 1e-8) return 0.5;
            if (2.0 * kt > 700.0) return 2.0 * kt * std::exp(-2.0 * kt);
            return kt / std::sinh(2.0 * kt);
        }
    }
    const double k = k_branch(j, mu);
    return std::hypot(mu, k);
}

double nu(int j, double xi, double mu) { return std::hypot(xi, nu0(j, mu)); }

std::array<double, 2> Mode::value(double t) const {
    const double c = norm_const;
    double f_cos, f_sin;  // cos-profile and sin-profile at t, already normalized
    switch (kind) {
        case ModeKind::degenerate:
            f_cos = 1.0;
            f_sin = t;
            break;
        case ModeKind::hyperbolic:
            f_cos = std::cosh(k * t) / std::cosh(k);
            f_sin = (k < 1e-8) ? t : std::sinh(k * t) / std::sinh(k);
            break;
        case ModeKind::oscillatory:
        default:
            f_cos = std::cos(k * t) / std::cos(k);
            f_sin = (k < 1e-8) ? t : std::sin(k * t) / std::sin(k);
            break;
    }
    if (cos_in_first) return {c * f_cos, -c * f_sin};
    return {-c * f_sin, c * f_cos};
}

std::array<double, 2> Mode::derivative(double t) const {
    const double c = norm_const;
    double d_cos, d_sin;
    switch (kind) {
        case ModeKind::degenerate:
            d_cos = 0.0;
            d_sin = 1.0;
            break;
        case ModeKind::hyperbolic:
            d_cos = k * std::sinh(k * t) / std::cosh(k);
            d_sin = (k < 1e-8) ? 1.0 : k * std::cosh(k * t) / std::sinh(k);
            break;
        case ModeKind::oscillatory:
        default:
            d_cos = -k * std::sin(k * t) / std::cos(k);
            d_sin = (k < 1e-8) ? 1.0 : k * std::cos(k * t) / std::sin(k);
            break;
    }
    if (cos_in_first) return {c * d_cos, -c * d_sin};
    return {-c * d_sin, c * d_cos};
}

Mode mode(int n, int sign, double mu) {
    if (sign != 1 && sign != -1) throw validation_error("mode: sign must be +1 or -1");
    if (n < 1) throw validation_error("mode: branch index must be >= 1");

    Mode m;
    m.branch = n;
    m.sign = sign;
    m.mu = mu;

    if (n == 1 && std::abs(mu + 0.5) <= kDegenerateWindow) {
        m.kind = ModeKind::degenerate;
        m.k = 0.0;
        m.nu = 0.5;
        m.norm_const = std::sqrt(3.0 / 8.0);
        m.cos_in_first = (sign > 0);
        return m;
    }
    if (n == 1 && mu < -0.5) {
        m.kind = ModeKind::hyperbolic;
        m.k = k_tilde(mu);
        m.nu = nu0(1, mu);
        m.norm_const = norm_const_hyperbolic(m.k);
        // eigenvalue of the cos-in-first placement is +kt/sinh(2kt) > 0
        m.cos_in_first = (sign > 0);
        return m;
    }
    m.kind = ModeKind::oscillatory;
    m.k = k_branch(n, mu);
    m.nu = std::hypot(mu, m.k);
    m.norm_const = norm_const_oscillatory(m.k);
    // eigenvalue of the cos-in-first placement is k/sin(2k)
    const double ratio = m.k / std::sin(2.0 * m.k);
    m.cos_in_first = (sign > 0) == (ratio > 0.0);
    return m;
}

XiMode mode_xi(double xi, double mu, int sign) {
    if (sign != 1 && sign != -1) throw validation_error("mode_xi: sign must be +1 or -1");
    XiMode xm;
    xm.base = mode(1, +1, mu);
    xm.xi = xi;
    xm.mu = mu;
    xm.sign = sign;
    const double nu_zero = xm.base.nu;
    xm.nu_xi = std::hypot(xi, nu_zero);
    xm.c_xi = std::sqrt((xm.nu_xi + nu_zero) / (2.0 * xm.nu_xi));
    xm.mix = xi / (xm.nu_xi + nu_zero);
    return xm;
}

std::array<double, 2> XiMode::value(double t) const {
    const std::array<double, 2> p = base.value(t);
    if (sign > 0) return {c_xi * (p[0] + mix * p[1]), c_xi * (p[1] + mix * p[0])};
    return {c_xi * (p[1] - mix * p[0]), c_xi * (p[0] - mix * p[1])};
}

std::array<double, 2> XiMode::derivative(double t) const {
    const std::array<double, 2> p = base.derivative(t);
    if (sign > 0) return {c_xi * (p[0] + mix * p[1]), c_xi * (p[1] + mix * p[0])};
    return {c_xi * (p[1] - mix * p[0]), c_xi * (p[0] - mix * p[1])};
}

namespace {

// (1 - 2k*cot(2k)) / (2k^2) on the oscillatory branch, its hyperbolic
// counterpart, and the common k -> 0 limit 2/3.
double momentum_profile(ModeKind kind, double k) {
    if (kind == ModeKind::degenerate || std::abs(k) < 1e-3) {
        const double k2 = k * k;
        return kind == ModeKind::hyperbolic ? 2.0 / 3.0 - 8.0 * k2 / 45.0
                                            : 2.0 / 3.0 + 8.0 * k2 / 45.0;
    }
    if (kind == ModeKind::hyperbolic)
        return (2.0 * k / std::tanh(2.0 * k) - 1.0) / (2.0 * k * k);
    return (1.0 - 2.0 * k * std::cos(2.0 * k) / std::sin(2.0 * k)) / (2.0 * k * k);
}

}  // namespace

MomentumSplit momentum_m_detail(double xi, double mu, int quad_points) {
    const XiMode xm = mode_xi(xi, mu, +1);
    const Mode& base = xm.base;

    MomentumSplit out;
    const double zero_mode = 2.0 * base.norm_const * base.norm_const *
                             momentum_profile(base.kind, base.k);
    out.closed_form_abs = std::abs(xm.c_xi * xm.c_xi * (1.0 + xm.mix * xm.mix) * zero_mode);

    const numerics::QuadratureRule rule = numerics::gauss_legendre(quad_points);
    out.quadrature = rule.integrate([&](double t) {
        const std::array<double, 2> p = xm.value(t);
        return t * 2.0 * p[0] * p[1];
    });

    if (std::abs(std::abs(out.quadrature) - out.closed_form_abs) > 1e-10)
        throw convergence_error("momentum_m: closed form and quadrature disagree");
    out.value = std::copysign(out.closed_form_abs, out.quadrature);
    return out;
}

double momentum_m(double xi, double mu) { return momentum_m_detail(xi, mu).value; }

namespace {

using piring::PiExpr;
using piring::Rational;

// Exact Taylor coefficients of k_1 from the ODE
//   k_1' * (mu + 2 mu^2 + 2 k_1^2) = k_1,  k_1(0) = pi/4,
// matched order by order.
std::vector<PiExpr> k1_exact(int order) {
    std::vector<PiExpr> a;
    a.push_back(PiExpr::term(1, 4, 1));  // pi/4
    auto q_coeff = [&a](int j) {         // coefficient j of k_1^2
        PiExpr q;
        for (int i = 0; i <= j; ++i) q = q + a[i] * a[j - i];
        return q;
    };
    for (int n = 0; static_cast<int>(a.size()) <= order; ++n) {
        PiExpr rhs = a[n];
        for (int j = 1; j <= n; ++j) {
            PiExpr dj = q_coeff(j).scaled(Rational(2, 1));
            if (j == 1) dj = dj + PiExpr::term(1, 1, 0);
            if (j == 2) dj = dj + PiExpr::term(2, 1, 0);
            rhs = rhs - a[n - j + 1].scaled(Rational(n - j + 1, 1)) * dj;
        }
        // divide by (n+1) * D_0 = (n+1) * pi^2/8
        a.push_back(rhs.scaled(Rational(8, n + 1)).shifted_pi(-2));
    }
    return a;
}

}  // namespace

SeriesExpansion series_k1(int order) {
    if (order < 0) throw validation_error("series_k1: order must be >= 0");
    SeriesExpansion s;
    s.order = order;
    s.exact = k1_exact(order);
    s.exact.resize(order + 1);
    for (const PiExpr& e : s.exact) s.coefficients.push_back(e.value());
    return s;
}

SeriesExpansion series_nu1(int order) {
    if (order < 0) throw validation_error("series_nu1: order must be >= 0");
    const std::vector<PiExpr> a = k1_exact(order);
    // w = mu^2 + k_1^2; nu = sqrt(w) via 2 b_0 b_n = w_n - sum b_i b_{n-i}
    std::vector<PiExpr> b;
    b.push_back(PiExpr::term(1, 4, 1));  // pi/4
    for (int n = 1; n <= order; ++n) {
        PiExpr w;
        for (int i = 0; i <= n; ++i) w = w + a[i] * a[n - i];
        if (n == 2) w = w + PiExpr::term(1, 1, 0);
        for (int i = 1; i < n; ++i) w = w - b[i] * b[n - i];
        b.push_back(w.scaled(Rational(2, 1)).shifted_pi(-1));  // divide by 2 b_0 = pi/2
    }
    SeriesExpansion s;
    s.order = order;
    s.exact = std::move(b);
    for (const PiExpr& e : s.exact) s.coefficients.push_back(e.value());
    return s;
}

double threshold(double epsilon, double m) {
    if (!(epsilon > 0.0)) throw validation_error("threshold: epsilon must be positive");
    return nu0(1, epsilon * m) / epsilon;
}

}  // namespace diracwg::transverse

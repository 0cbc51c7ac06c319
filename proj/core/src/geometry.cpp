#include "diracwg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace diracwg::geometry {

namespace {

constexpr double kPi = std::numbers::pi;

void check_samples(int Ns) {
    if (Ns < 8) throw validation_error("geometry: need at least 8 samples");
}

// Monotone cubic (Fritsch-Carlson) interpolant on strictly increasing knots.
class MonotoneCubic {
  public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        m_.assign(n, 0.0);
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                m_[i] = 0.0;
            } else {
                const double h0 = x_[i] - x_[i - 1];
                const double h1 = x_[i + 1] - x_[i];
                const double w1 = 2.0 * h1 + h0;
                const double w2 = h1 + 2.0 * h0;
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    double eval(double xq) const {
        if (xq <= x_.front()) return y_.front() + m_.front() * (xq - x_.front());
        if (xq >= x_.back()) return y_.back() + m_.back() * (xq - x_.back());
        std::size_t lo = std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin() - 1;
        const double h = x_[lo + 1] - x_[lo];
        const double t = (xq - x_[lo]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        const double h10 = t3 - 2.0 * t2 + t;
        const double h01 = -2.0 * t3 + 3.0 * t2;
        const double h11 = t3 - t2;
        return h00 * y_[lo] + h10 * h * m_[lo] + h01 * y_[lo + 1] + h11 * h * m_[lo + 1];
    }

  private:
    std::vector<double> x_, y_, m_;
};

}  // namespace

CurveGeometry CurveGeometry::circle(double R, int Ns) {
    if (!(R > 0.0)) throw validation_error("circle: radius must be positive");
    check_samples(Ns);
    CurveGeometry g;
    g.variant_ = Variant::closed;
    g.period_ = 2.0 * kPi * R;
    g.kappa_.assign(Ns, 1.0 / R);
    g.kappa_max_ = 1.0 / R;
    return g;
}

CurveGeometry CurveGeometry::ellipse(double a, double b, int Ns) {
    if (!(a > 0.0) || !(b > 0.0)) throw validation_error("ellipse: degenerate axes");
    check_samples(Ns);

    auto speed = [a, b](double th) {
        const double sa = a * std::sin(th), cb = b * std::cos(th);
        return std::sqrt(sa * sa + cb * cb);
    };
    // Arc length on a fine parameter grid (per-interval Simpson), then invert
    // s(theta) by monotone cubic interpolation and resample kappa uniformly.
    const int M = std::max(8192, 16 * Ns);
    const double h = 2.0 * kPi / M;
    std::vector<double> theta(M + 1), s(M + 1);
    theta[0] = 0.0;
    s[0] = 0.0;
    for (int j = 0; j < M; ++j) {
        const double t0 = j * h, t1 = (j + 1) * h;
        s[j + 1] = s[j] + h / 6.0 * (speed(t0) + 4.0 * speed(0.5 * (t0 + t1)) + speed(t1));
        theta[j + 1] = t1;
    }
    const double ell = s[M];
    MonotoneCubic inv(std::move(s), std::move(theta));

    CurveGeometry g;
    g.variant_ = Variant::closed;
    g.period_ = ell;
    g.kappa_.resize(Ns);
    for (int i = 0; i < Ns; ++i) {
        const double th = inv.eval(ell * i / Ns);
        const double v = speed(th);
        g.kappa_[i] = a * b / (v * v * v);
    }
    g.kappa_max_ = *std::max_element(g.kappa_.begin(), g.kappa_.end());
    return g;
}

CurveGeometry CurveGeometry::bump_line(double amp, double width, double L, int Ns) {
    if (!(width > 0.0)) throw validation_error("bump_line: width must be positive");
    if (!(L >= 8.0 * width)) throw validation_error("bump_line: window requires L >= 8*width");
    check_samples(Ns);
    if (amp != 0.0) {
        const double tail = std::exp(-L * L / (width * width));
        if (!(tail < 1e-10))
            throw validation_error("bump_line: window too small, |kappa(+-L)| >= 1e-10*|amp|");
    }
    CurveGeometry g;
    g.variant_ = Variant::open;
    g.period_ = 2.0 * L;
    g.amp_ = amp;
    g.width_ = width;
    g.kappa_.resize(Ns);
    for (int i = 0; i < Ns; ++i) {
        const double s = -L + 2.0 * L * i / Ns;
        g.kappa_[i] = amp * std::exp(-s * s / (width * width));
    }
    g.kappa_max_ = std::abs(amp);
    return g;
}

double CurveGeometry::half_window() const {
    if (closed()) throw validation_error("half_window: geometry is closed");
    return 0.5 * period_;
}

double CurveGeometry::kappa_at(double s) const {
    if (!closed()) return amp_ * std::exp(-s * s / (width_ * width_));
    // closed curves are sampled; wrap and interpolate linearly between samples
    const double ell = period_;
    double sw = std::fmod(s, ell);
    if (sw < 0.0) sw += ell;
    const double x = sw / sample_spacing();
    const std::size_t i = static_cast<std::size_t>(x) % kappa_.size();
    const std::size_t j = (i + 1) % kappa_.size();
    const double f = x - std::floor(x);
    return (1.0 - f) * kappa_[i] + f * kappa_[j];
}

double CurveGeometry::total_curvature() const {
    // periodic trapezoid rule over one period
    double acc = 0.0;
    for (double v : kappa_) acc += v;
    return acc * sample_spacing();
}

std::string CurveGeometry::to_json() const {
    nlohmann::json j;
    if (closed()) {
        j["variant"] = "closed";
        j["ell"] = period_;
        j["samples"] = kappa_;
    } else {
        j["variant"] = "open";
        j["L"] = half_window();
        j["amp"] = amp_;
        j["width"] = width_;
        j["Ns"] = kappa_.size();
    }
    return j.dump(2);
}

CurveGeometry CurveGeometry::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("geometry: bad JSON: ") + e.what());
    }
    if (!j.contains("variant")) throw validation_error("geometry: missing 'variant'");
    try {
        const std::string variant = j.at("variant").get<std::string>();

        auto reject_unknown = [&j](std::initializer_list<const char*> allowed) {
            for (auto it = j.begin(); it != j.end(); ++it) {
                bool ok = false;
                for (const char* k : allowed) ok = ok || (it.key() == k);
                if (!ok) throw validation_error("geometry: unknown key '" + it.key() + "'");
            }
        };

        if (variant == "closed") {
            reject_unknown({"variant", "ell", "samples"});
            CurveGeometry g;
            g.variant_ = Variant::closed;
            g.period_ = j.at("ell").get<double>();
            g.kappa_ = j.at("samples").get<std::vector<double>>();
            if (!(g.period_ > 0.0)) throw validation_error("geometry: ell must be positive");
            if (g.kappa_.size() < 8)
                throw validation_error("geometry: need at least 8 samples");
            for (double v : g.kappa_)
                if (!std::isfinite(v)) throw validation_error("geometry: non-finite sample");
            g.kappa_max_ = 0.0;
            for (double v : g.kappa_) g.kappa_max_ = std::max(g.kappa_max_, std::abs(v));
            return g;
        }
        if (variant == "open") {
            reject_unknown({"variant", "L", "amp", "width", "Ns"});
            const int Ns = j.contains("Ns") ? j.at("Ns").get<int>() : 512;
            return bump_line(j.at("amp").get<double>(), j.at("width").get<double>(),
                             j.at("L").get<double>(), Ns);
        }
        throw validation_error("geometry: variant must be 'closed' or 'open'");
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("geometry: bad document: ") + e.what());
    }
}

CurveGeometry CurveGeometry::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("geometry: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void CurveGeometry::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw validation_error("geometry: cannot write '" + path + "'");
    out << to_json() << "\n";
}

Validation validate(const CurveGeometry& geom, double epsilon) {
    if (!(epsilon > 0.0)) throw validation_error("validate: epsilon must be positive");
    Validation v;
    v.eps_kappa_max = epsilon * geom.kappa_max();
    if (!(v.eps_kappa_max < 1.0))
        v.failures.push_back("metric positivity: eps*sup|kappa| = " +
                             std::to_string(v.eps_kappa_max) + " >= 1");
    if (geom.closed()) {
        v.total_curvature_error = std::abs(geom.total_curvature() - 2.0 * kPi);
        if (!(v.total_curvature_error <= 1e-8 * (1.0 + geom.period())))
            v.failures.push_back("total curvature: integral of kappa differs from 2*pi by " +
                                 std::to_string(v.total_curvature_error));
    }
    v.ok = v.failures.empty();
    return v;
}

}  // namespace diracwg::geometry

#ifndef DIRACWG_GEOMETRY_HPP
#define DIRACWG_GEOMETRY_HPP

#include <string>
#include <vector>

#include "diracwg/errors.hpp"

namespace diracwg::geometry {

// Planar curve represented by its curvature profile kappa(s) on a uniform
// arc-length grid. Closed curves have period ell with total curvature 2*pi;
// open curves live on the window [-L, L] with decaying kappa.
class CurveGeometry {
  public:
    enum class Variant { closed, open };

    static CurveGeometry circle(double R, int Ns);
    static CurveGeometry ellipse(double a, double b, int Ns);
    static CurveGeometry bump_line(double amp, double width, double L, int Ns = 512);

    Variant variant() const { return variant_; }
    bool closed() const { return variant_ == Variant::closed; }

    // Period of the s-grid: ell for closed curves, 2L for open windows.
    double period() const { return period_; }
    double half_window() const;  // L, open only

    // Ns samples at s_i = s0 + i*period/Ns, s0 = 0 (closed) or -L (open).
    const std::vector<double>& kappa_samples() const { return kappa_; }
    double grid_origin() const { return closed() ? 0.0 : -0.5 * period_; }
    double sample_spacing() const { return period_ / static_cast<double>(kappa_.size()); }

    // Pointwise curvature; open curves evaluate the analytic profile.
    double kappa_at(double s) const;

    double kappa_max() const { return kappa_max_; }
    double total_curvature() const;  // trapezoid of kappa over one period

    // open-curve profile parameters
    double amp() const { return amp_; }
    double width() const { return width_; }

    std::string to_json() const;
    static CurveGeometry from_json(const std::string& text);
    static CurveGeometry load(const std::string& path);
    void save(const std::string& path) const;

  private:
    CurveGeometry() = default;
    Variant variant_ = Variant::closed;
    double period_ = 0.0;
    std::vector<double> kappa_;
    double kappa_max_ = 0.0;
    double amp_ = 0.0;
    double width_ = 0.0;
};

struct Validation {
    bool ok = false;
    double eps_kappa_max = 0.0;        // must be < 1 (metric positivity)
    double total_curvature_error = 0.0;  // |integral kappa - 2 pi|, closed only
    std::vector<std::string> failures;
};

Validation validate(const CurveGeometry& geom, double epsilon);

}  // namespace diracwg::geometry

#endif

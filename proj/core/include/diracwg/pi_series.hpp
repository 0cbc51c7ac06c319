#ifndef DIRACWG_PI_SERIES_HPP
#define DIRACWG_PI_SERIES_HPP

#include <map>
#include <string>
#include <vector>

#include "diracwg/errors.hpp"

namespace diracwg::piring {

// Reduced fraction with overflow-checked 64-bit arithmetic.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator-() const;
    bool is_zero() const { return num == 0; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Sparse Laurent polynomial in pi with rational coefficients:
// sum_k c_k * pi^k. Closed under +, -, * and division by rational*pi^k,
// which is all the dispersion-series recurrences need.
class PiExpr {
  public:
    PiExpr() = default;
    static PiExpr term(long long num, long long den, int pi_pow);

    PiExpr operator+(const PiExpr& o) const;
    PiExpr operator-(const PiExpr& o) const;
    PiExpr operator*(const PiExpr& o) const;
    PiExpr scaled(const Rational& r) const;
    PiExpr shifted_pi(int dk) const;  // multiply by pi^dk

    double value() const;
    std::string str() const;
    bool empty() const { return terms_.empty(); }
    const std::map<int, Rational>& terms() const { return terms_; }

  private:
    void add_term(int k, const Rational& r);
    std::map<int, Rational> terms_;
};

struct SeriesExpansion {
    int order = 0;
    std::vector<double> coefficients;  // coefficient of mu^j, j = 0..order
    std::vector<PiExpr> exact;         // same, in closed form
};

}  // namespace diracwg::piring

#endif

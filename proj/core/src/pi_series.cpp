#include "diracwg/pi_series.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace diracwg::piring {

namespace {

long long checked(__int128 v, const char* what) {
    if (v > static_cast<__int128>(0x7fffffffffffffffLL) ||
        v < -static_cast<__int128>(0x7fffffffffffffffLL))
        throw validation_error(std::string("exact series arithmetic overflow in ") + what +
                               " (requested order too large)");
    return static_cast<long long>(v);
}

}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw validation_error("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    const __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
    const __int128 d = static_cast<__int128>(den) * o.den;
    // reduce in 128 bits before the range check
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    const __int128 g = (a == 0) ? 1 : a;
    return Rational(checked(n / g, "add"), checked(d / g, "add"));
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
    const Rational x(num, o.den);   // cross-reduce
    const Rational y(o.num, den);
    const __int128 n = static_cast<__int128>(x.num) * y.num;
    const __int128 d = static_cast<__int128>(x.den) * y.den;
    return Rational(checked(n, "mul"), checked(d, "mul"));
}

Rational Rational::operator-() const {
    Rational r;
    r.num = -num;
    r.den = den;
    return r;
}

PiExpr PiExpr::term(long long num, long long den, int pi_pow) {
    PiExpr e;
    e.add_term(pi_pow, Rational(num, den));
    return e;
}

void PiExpr::add_term(int k, const Rational& r) {
    if (r.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, r);
    } else {
        it->second = it->second + r;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

PiExpr PiExpr::operator+(const PiExpr& o) const {
    PiExpr r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

PiExpr PiExpr::operator-(const PiExpr& o) const {
    PiExpr r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
    return r;
}

PiExpr PiExpr::operator*(const PiExpr& o) const {
    PiExpr r;
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : o.terms_) r.add_term(k1 + k2, c1 * c2);
    return r;
}

PiExpr PiExpr::scaled(const Rational& s) const {
    PiExpr r;
    for (const auto& [k, c] : terms_) r.add_term(k, c * s);
    return r;
}

PiExpr PiExpr::shifted_pi(int dk) const {
    PiExpr r;
    for (const auto& [k, c] : terms_) r.add_term(k + dk, c);
    return r;
}

double PiExpr::value() const {
    double acc = 0.0;
    for (const auto& [k, c] : terms_) acc += c.value() * std::pow(std::numbers::pi, k);
    return acc;
}

std::string PiExpr::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        long long n = c.num;
        const long long d = c.den;
        const bool neg = n < 0;
        if (neg) n = -n;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        if (k == 0) {
            os << n;
            if (d != 1) os << "/" << d;
        } else if (k > 0) {
            if (n != 1) os << n << "*";
            os << "pi";
            if (k != 1) os << "^" << k;
            if (d != 1) os << "/" << d;
        } else {
            os << n << "/";
            if (d != 1) os << "(" << d << "*";
            os << "pi";
            if (k != -1) os << "^" << -k;
            if (d != 1) os << ")";
        }
    }
    return os.str();
}

}  // namespace diracwg::piring

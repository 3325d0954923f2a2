#pragma once

// Exact arithmetic in the field Q(i) of Gaussian rationals.
//
// Every value is a pair of arbitrary-precision rationals (re, im), each kept
// in lowest terms with positive denominator by the underlying representation.
// Equality is structural equality of the normalized representation.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace addax {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// a + b*i with a, b exact rationals.
struct Scalar {
    Rational re;
    Rational im;

    Scalar() = default;
    Scalar(long v) : re(v) {}                    // NOLINT(google-explicit-constructor)
    Scalar(Rational r) : re(std::move(r)) {}     // NOLINT(google-explicit-constructor)
    Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    Scalar(long r, long i) : re(r), im(i) {}

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static Scalar i() { return Scalar(0, 1); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_real() const { return im == 0; }

    Scalar conj() const { return Scalar(re, -im); }

    // re^2 + im^2, a nonnegative rational; zero iff the scalar is zero.
    Rational norm() const { return re * re + im * im; }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        return Scalar(a.re + b.re, a.im + b.im);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        return Scalar(a.re - b.re, a.im - b.im);
    }
    Scalar operator-() const { return Scalar(-re, -im); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        Rational n = b.norm();
        if (n == 0) throw std::domain_error("Scalar: division by zero");
        return Scalar((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
    }
    Scalar& operator+=(const Scalar& o) { re += o.re; im += o.im; return *this; }
    Scalar& operator-=(const Scalar& o) { re -= o.re; im -= o.im; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }
    Scalar& operator/=(const Scalar& o) { *this = *this / o; return *this; }

    Scalar inverse() const { return Scalar(1) / *this; }

    friend bool operator==(const Scalar& a, const Scalar& b) = default;

    // Lexicographic (re, im) order; used only for deterministic tie-breaking,
    // not as a field order.
    friend bool lex_less(const Scalar& a, const Scalar& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }
};

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Reads `int ('/' int)?` starting at pos; leading sign permitted iff allow_sign.
inline Rational parse_rational_at(std::string_view s, size_t& pos, bool allow_sign) {
    size_t start = pos;
    bool neg = false;
    if (allow_sign && pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = s[pos] == '-';
        ++pos;
    }
    size_t dstart = pos;
    while (pos < s.size() && is_digit(s[pos])) ++pos;
    if (pos == dstart) {
        pos = start;
        throw ParseError("expected integer in rational literal");
    }
    Int num(std::string(s.substr(dstart, pos - dstart)));
    Int den = 1;
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        size_t nstart = pos;
        while (pos < s.size() && is_digit(s[pos])) ++pos;
        if (pos == nstart) throw ParseError("expected denominator after '/'");
        den = Int(std::string(s.substr(nstart, pos - nstart)));
        if (den == 0) throw ParseError("zero denominator in rational literal");
    }
    Rational r(num, den);
    return neg ? -r : r;
}

inline std::string rational_text(const Rational& r) {
    std::string out = numerator(r).str();
    if (denominator(r) != 1) {
        out += '/';
        out += denominator(r).str();
    }
    return out;
}

} // namespace detail

// Grammar: rational ( ('+'|'-') rational? 'i' )?  with rational = int ('/' int)?.
// A pure-imaginary shorthand `('+'|'-')? rational? 'i'` is also accepted on input.
inline Scalar parse_scalar(std::string_view text) {
    size_t pos = 0;
    size_t end = text.size();
    if (end == 0) throw ParseError("empty scalar literal");

    // Pure-imaginary shorthand.
    if (text[end - 1] == 'i') {
        bool shorthand = true;
        size_t p = 0;
        bool neg = false;
        if (p < end && (text[p] == '+' || text[p] == '-')) {
            neg = text[p] == '-';
            ++p;
        }
        Rational mag = 1;
        if (p < end - 1) {
            try {
                size_t q = p;
                mag = detail::parse_rational_at(text, q, false);
                if (q != end - 1) shorthand = false;
            } catch (const ParseError&) {
                shorthand = false;
            }
        }
        if (shorthand && !(end == 1 && text[0] == 'i') && p > end - 1) shorthand = false;
        if (shorthand) return Scalar(0, neg ? -mag : mag);
    }

    Rational re = detail::parse_rational_at(text, pos, true);
    if (pos == end) return Scalar(std::move(re));
    char sign = text[pos];
    if (sign != '+' && sign != '-') throw ParseError("expected '+' or '-' before imaginary part");
    ++pos;
    Rational mag = 1;
    if (pos < end && text[pos] != 'i') mag = detail::parse_rational_at(text, pos, false);
    if (pos >= end || text[pos] != 'i') throw ParseError("expected 'i' after imaginary part");
    ++pos;
    if (pos != end) throw ParseError("trailing characters in scalar literal");
    return Scalar(std::move(re), sign == '-' ? -mag : mag);
}

// Canonical rendering; parse_scalar(render_scalar(s)) == s.
inline std::string render_scalar(const Scalar& s) {
    if (s.im == 0) return detail::rational_text(s.re);
    std::string out = detail::rational_text(s.re);
    out += s.im < 0 ? '-' : '+';
    out += detail::rational_text(abs(s.im));
    out += 'i';
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    return os << render_scalar(s);
}

// Exact square root of a nonnegative rational, when one exists in Q.
inline std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    Int n = numerator(q), d = denominator(q);
    Int rn = sqrt(n), rd = sqrt(d);
    if (rn * rn != n || rd * rd != d) return std::nullopt;
    return Rational(rn, rd);
}

// Square root within Q(i). Returns the representative with re > 0, or
// re == 0 and im >= 0; nullopt when no square root exists in the field.
//
// For s = u + vi with s^2 = x + yi: u^2 + v^2 = |x + yi| =: r must be
// rational, and then u^2 = (x + r)/2 must be a rational square. Both
// conditions are decidable exactly, so failure is definitive.
inline std::optional<Scalar> sqrt_in_field(const Scalar& a) {
    if (a.is_zero()) return Scalar::zero();
    if (a.im == 0) {
        if (a.re > 0) {
            auto r = rational_sqrt(a.re);
            if (!r) return std::nullopt;
            return Scalar(*r);
        }
        auto r = rational_sqrt(-a.re);
        if (!r) return std::nullopt;
        return Scalar(Rational(0), *r);
    }
    auto r = rational_sqrt(a.norm());
    if (!r) return std::nullopt;
    auto u = rational_sqrt((a.re + *r) / 2);
    if (!u || *u == 0) return std::nullopt;
    Rational v = a.im / (2 * *u);
    Scalar s(*u, v);
    if (s * s != a) return std::nullopt;
    return s; // u > 0 by construction
}

// All k-th roots of w within Q(i) (at most four: roots differ by the units
// of Z[i] of order dividing k). Exact: reduces to k-th roots of a Gaussian
// integer, found by enumerating lattice points on the circle of the
// appropriate integer norm.
inline std::vector<Scalar> kth_roots_in_field(const Scalar& w, unsigned k) {
    if (k == 0) throw std::invalid_argument("kth_roots_in_field: k must be positive");
    if (w.is_zero()) return {Scalar::zero()};
    if (k == 1) return {w};

    // Scale so that (z*q)^k = w*q^k is a Gaussian integer M; any field root of
    // z^k = w then has z*q integral over Z[i], hence in Z[i].
    Int q = lcm(denominator(w.re), denominator(w.im));
    Scalar m = w * Scalar(Rational(q)); // w*q, then multiply by q^(k-1) more
    Int A = numerator(m.re), B = numerator(m.im);
    Int qk1 = 1;
    for (unsigned j = 0; j + 1 < k; ++j) qk1 *= q;
    A *= qk1;
    B *= qk1;

    Int nm = A * A + B * B;
    // Integer k-th root of nm, exact or bail.
    Int lo = 0, hi = 1;
    auto powk = [&](const Int& x) {
        Int p = 1;
        for (unsigned j = 0; j < k; ++j) p *= x;
        return p;
    };
    while (powk(hi) < nm) hi <<= 1;
    while (lo < hi) {
        Int mid = (lo + hi) / 2;
        if (powk(mid) < nm) lo = mid + 1; else hi = mid;
    }
    if (powk(lo) != nm) return {};
    Int r = lo; // |root|^2 must equal r

    std::vector<Scalar> roots;
    auto consider = [&](const Int& u, const Int& v) {
        // Check (u + vi)^k == A + Bi by repeated exact multiplication.
        Int cu = 1, cv = 0;
        for (unsigned j = 0; j < k; ++j) {
            Int nu = cu * u - cv * v;
            Int nv = cu * v + cv * u;
            cu = nu;
            cv = nv;
        }
        if (cu == A && cv == B) {
            Scalar z(Rational(u, q), Rational(v, q));
            for (const auto& seen : roots)
                if (seen == z) return;
            roots.push_back(z);
        }
    };
    for (Int u = 0, su = sqrt(r); u <= su; ++u) {
        Int v2 = r - u * u;
        Int v = sqrt(v2);
        if (v * v != v2) continue;
        consider(u, v);
        consider(u, -v);
        consider(-u, v);
        consider(-u, -v);
        consider(v, u);
        consider(v, -u);
        consider(-v, u);
        consider(-v, -u);
    }
    return roots;
}

inline Rational factorial(unsigned n) {
    Int f = 1;
    for (unsigned j = 2; j <= n; ++j) f *= j;
    return Rational(f);
}

} // namespace addax

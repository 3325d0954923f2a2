#pragma once

// Sparse exact polynomials.
//
// MPoly is the general multivariate workhorse; HomPoly is the strongly-typed
// homogeneous polynomial used for hypersurface equations; UPoly is univariate
// and supports the division/gcd arithmetic needed for invariant factors.
//
// Canonical term order everywhere: exponent vectors compared entry-wise from
// the first variable, larger exponent first ("descending lex"). The text
// format emits terms in that order.

#include "addax/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace addax {

using Expo = std::vector<unsigned>;

struct DescLex {
    bool operator()(const Expo& a, const Expo& b) const {
        size_t n = std::min(a.size(), b.size());
        for (size_t k = 0; k < n; ++k)
            if (a[k] != b[k]) return a[k] > b[k];
        return a.size() > b.size();
    }
};

using TermMap = std::map<Expo, Scalar, DescLex>;

inline unsigned total_degree(const Expo& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

class MPoly {
public:
    MPoly() = default;
    explicit MPoly(size_t nvars) : nvars_(nvars) {}

    static MPoly constant(size_t nvars, const Scalar& c) {
        MPoly p(nvars);
        if (!c.is_zero()) p.terms_.emplace(Expo(nvars, 0), c);
        return p;
    }
    static MPoly variable(size_t nvars, size_t idx) {
        if (idx >= nvars) throw std::invalid_argument("MPoly::variable: index out of range");
        MPoly p(nvars);
        Expo e(nvars, 0);
        e[idx] = 1;
        p.terms_.emplace(std::move(e), Scalar::one());
        return p;
    }

    size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }
    Scalar constant_value() const {
        if (terms_.empty()) return Scalar::zero();
        if (!is_constant()) throw std::domain_error("MPoly: not constant");
        return terms_.begin()->second;
    }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    void add_term(const Expo& e, const Scalar& c) {
        if (e.size() != nvars_) throw std::invalid_argument("MPoly::add_term: arity mismatch");
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b) {
        a.check_compatible(b);
        MPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend MPoly operator-(const MPoly& a, const MPoly& b) {
        a.check_compatible(b);
        MPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }
    MPoly operator-() const {
        MPoly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        a.check_compatible(b);
        MPoly r(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Expo e = ea;
                for (size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    friend MPoly operator*(const Scalar& s, const MPoly& p) {
        MPoly r(p.nvars_);
        if (s.is_zero()) return r;
        r = p;
        for (auto& [e, c] : r.terms_) c = s * c;
        return r;
    }

    friend bool operator==(const MPoly& a, const MPoly& b) = default;

    Scalar evaluate(const std::vector<Scalar>& point) const {
        if (point.size() != nvars_) throw std::invalid_argument("MPoly::evaluate: arity mismatch");
        Scalar acc;
        for (const auto& [e, c] : terms_) {
            Scalar t = c;
            for (size_t k = 0; k < nvars_; ++k)
                for (unsigned j = 0; j < e[k]; ++j) t *= point[k];
            acc += t;
        }
        return acc;
    }

    // Fixes one variable to a scalar; the variable stays in the arity.
    MPoly substituted(size_t var, const Scalar& value) const {
        if (var >= nvars_) throw std::invalid_argument("MPoly::substituted: index out of range");
        MPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            Scalar t = c;
            for (unsigned j = 0; j < e[var]; ++j) t *= value;
            Expo e2 = e;
            e2[var] = 0;
            r.add_term(e2, t);
        }
        return r;
    }

    MPoly derivative(size_t var) const {
        if (var >= nvars_) throw std::invalid_argument("MPoly::derivative: index out of range");
        MPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Expo e2 = e;
            e2[var] -= 1;
            r.add_term(e2, Scalar(Rational(e[var])) * c);
        }
        return r;
    }

private:
    void check_compatible(const MPoly& o) const {
        if (nvars_ != o.nvars_) throw std::invalid_argument("MPoly: arity mismatch");
    }

    size_t nvars_ = 0;
    TermMap terms_;
};

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

using VarNamer = std::function<std::string(size_t)>;

inline VarNamer x_namer() {
    return [](size_t i) { return "x" + std::to_string(i); };
}

namespace detail {

inline std::string monomial_text(const Expo& e, const VarNamer& name) {
    std::string out;
    for (size_t k = 0; k < e.size(); ++k) {
        if (e[k] == 0) continue;
        if (!out.empty()) out += '*';
        out += name(k);
        if (e[k] > 1) {
            out += '^';
            out += std::to_string(e[k]);
        }
    }
    return out;
}

// Renders one term as (sign, body). Complex coefficients are parenthesized so
// the result re-parses unambiguously.
inline std::pair<bool, std::string> term_text(const Expo& e, const Scalar& c, const VarNamer& name) {
    std::string mono = monomial_text(e, name);
    if (mono.empty()) {
        if (c.is_real()) return {c.re < 0, rational_text(abs(c.re))};
        return {false, "(" + render_scalar(c) + ")"};
    }
    if (!c.is_real()) return {false, "(" + render_scalar(c) + ")*" + mono};
    bool neg = c.re < 0;
    Rational mag = abs(c.re);
    if (mag == 1) return {neg, mono};
    return {neg, rational_text(mag) + "*" + mono};
}

} // namespace detail

// spaced=true yields "a - b + c" (equation style); false yields "a-b+c"
// (action-formula style).
inline std::string render_terms(const TermMap& terms, const VarNamer& name, bool spaced = true) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms) {
        auto [neg, body] = detail::term_text(e, c, name);
        if (first) {
            if (neg) out += '-';
        } else {
            if (spaced)
                out += neg ? " - " : " + ";
            else
                out += neg ? '-' : '+';
        }
        out += body;
        first = false;
    }
    return out;
}

inline std::string render_polynomial(const MPoly& p, bool spaced = true) {
    return render_terms(p.terms(), x_namer(), spaced);
}

// Parses the emitted format (plus optional whitespace). Variables are
// x<index>; complex coefficients must be parenthesized scalar literals.
inline MPoly parse_polynomial(std::string_view text, size_t nvars) {
    std::string s;
    s.reserve(text.size());
    for (char ch : text)
        if (ch != ' ' && ch != '\t') s += ch;
    if (s.empty()) throw ParseError("empty polynomial");

    MPoly p(nvars);
    size_t pos = 0;
    if (s == "0") return p;
    while (pos < s.size()) {
        bool neg = false;
        if (s[pos] == '+' || s[pos] == '-') {
            neg = s[pos] == '-';
            ++pos;
        } else if (pos != 0) {
            throw ParseError("expected '+' or '-' between terms");
        }
        Scalar coeff = Scalar::one();
        Expo e(nvars, 0);
        bool saw_factor = false;
        while (pos < s.size()) {
            if (s[pos] == '(') {
                size_t close = s.find(')', pos);
                if (close == std::string::npos) throw ParseError("unbalanced parenthesis");
                coeff *= parse_scalar(std::string_view(s).substr(pos + 1, close - pos - 1));
                pos = close + 1;
            } else if (s[pos] == 'x') {
                size_t q = pos + 1;
                size_t dstart = q;
                while (q < s.size() && detail::is_digit(s[q])) ++q;
                if (q == dstart) throw ParseError("expected variable index after 'x'");
                size_t idx = std::stoul(s.substr(dstart, q - dstart));
                if (idx >= nvars) throw ParseError("variable index out of range");
                unsigned exp = 1;
                if (q < s.size() && s[q] == '^') {
                    ++q;
                    size_t estart = q;
                    while (q < s.size() && detail::is_digit(s[q])) ++q;
                    if (q == estart) throw ParseError("expected exponent after '^'");
                    exp = static_cast<unsigned>(std::stoul(s.substr(estart, q - estart)));
                }
                e[idx] += exp;
                pos = q;
            } else if (detail::is_digit(s[pos])) {
                coeff *= detail::parse_rational_at(s, pos, false);
            } else {
                throw ParseError(std::string("unexpected character '") + s[pos] + "' in polynomial");
            }
            saw_factor = true;
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                continue;
            }
            break;
        }
        if (!saw_factor) throw ParseError("empty term in polynomial");
        p.add_term(e, neg ? -coeff : coeff);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Homogeneous polynomials
// ---------------------------------------------------------------------------

class HomPoly {
public:
    HomPoly() = default;
    HomPoly(size_t nvars, unsigned degree) : poly_(nvars), degree_(degree) {}

    static HomPoly from_mpoly(MPoly p, unsigned expected_degree) {
        for (const auto& [e, c] : p.terms())
            if (total_degree(e) != expected_degree)
                throw std::invalid_argument("HomPoly: polynomial is not homogeneous of the stated degree");
        HomPoly h;
        h.poly_ = std::move(p);
        h.degree_ = expected_degree;
        return h;
    }

    size_t nvars() const { return poly_.nvars(); }
    unsigned degree() const { return degree_; }
    const MPoly& poly() const { return poly_; }
    const TermMap& terms() const { return poly_.terms(); }
    bool is_zero() const { return poly_.is_zero(); }

    void add_term(const Expo& e, const Scalar& c) {
        if (total_degree(e) != degree_)
            throw std::invalid_argument("HomPoly::add_term: wrong total degree");
        poly_.add_term(e, c);
    }

    friend HomPoly operator+(const HomPoly& a, const HomPoly& b) {
        a.check_compatible(b);
        return from_mpoly(a.poly_ + b.poly_, a.degree_);
    }
    friend HomPoly operator-(const HomPoly& a, const HomPoly& b) {
        a.check_compatible(b);
        return from_mpoly(a.poly_ - b.poly_, a.degree_);
    }
    friend HomPoly operator*(const HomPoly& a, const HomPoly& b) {
        if (a.nvars() != b.nvars()) throw std::invalid_argument("HomPoly: arity mismatch");
        return from_mpoly(a.poly_ * b.poly_, a.degree_ + b.degree_);
    }
    friend HomPoly operator*(const Scalar& s, const HomPoly& p) {
        return from_mpoly(s * p.poly_, p.degree_);
    }

    friend bool operator==(const HomPoly& a, const HomPoly& b) {
        return a.poly_ == b.poly_;
    }

    Scalar evaluate(const std::vector<Scalar>& point) const { return poly_.evaluate(point); }
    MPoly derivative(size_t var) const { return poly_.derivative(var); }

    // First nonzero coefficient in canonical term order.
    Scalar leading_coefficient() const {
        if (poly_.is_zero()) throw std::domain_error("HomPoly: zero polynomial has no leading coefficient");
        return poly_.terms().begin()->second;
    }

    std::string text() const { return render_polynomial(poly_); }

    static HomPoly parse(std::string_view text, size_t nvars, unsigned degree) {
        return from_mpoly(parse_polynomial(text, nvars), degree);
    }

private:
    void check_compatible(const HomPoly& o) const {
        if (nvars() != o.nvars() || degree_ != o.degree_)
            throw std::invalid_argument("HomPoly: arity or degree mismatch");
    }

    MPoly poly_;
    unsigned degree_ = 0;
};

// Renumbers variables onto the kept index list; every term must be supported
// on kept variables only.
inline HomPoly restrict_vars(const HomPoly& p, const std::vector<size_t>& kept) {
    MPoly q(kept.size());
    for (const auto& [e, c] : p.terms()) {
        Expo e2(kept.size(), 0);
        unsigned moved = 0;
        for (size_t k = 0; k < kept.size(); ++k) {
            e2[k] = e[kept[k]];
            moved += e2[k];
        }
        if (moved != total_degree(e))
            throw std::domain_error("restrict_vars: term uses a removed variable");
        q.add_term(e2, c);
    }
    return HomPoly::from_mpoly(std::move(q), p.degree());
}

// ---------------------------------------------------------------------------
// Univariate polynomials (ascending coefficient storage)
// ---------------------------------------------------------------------------

class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UPoly constant(const Scalar& s) { return UPoly({s}); }
    static UPoly x() { return UPoly({Scalar::zero(), Scalar::one()}); }

    bool is_zero() const { return c_.empty(); }
    // Degree of the zero polynomial is -1.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Scalar& operator[](size_t k) const { return c_[k]; }
    const std::vector<Scalar>& coeffs() const { return c_; }
    Scalar lead() const {
        if (c_.empty()) throw std::domain_error("UPoly: zero polynomial has no leading coefficient");
        return c_.back();
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        std::vector<Scalar> r(std::max(a.c_.size(), b.c_.size()));
        for (size_t k = 0; k < r.size(); ++k) {
            if (k < a.c_.size()) r[k] += a.c_[k];
            if (k < b.c_.size()) r[k] += b.c_[k];
        }
        return UPoly(std::move(r));
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) {
        std::vector<Scalar> r(std::max(a.c_.size(), b.c_.size()));
        for (size_t k = 0; k < r.size(); ++k) {
            if (k < a.c_.size()) r[k] += a.c_[k];
            if (k < b.c_.size()) r[k] -= b.c_[k];
        }
        return UPoly(std::move(r));
    }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return UPoly();
        std::vector<Scalar> r(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return UPoly(std::move(r));
    }
    friend UPoly operator*(const Scalar& s, const UPoly& p) {
        std::vector<Scalar> r = p.c_;
        for (auto& v : r) v *= s;
        return UPoly(std::move(r));
    }
    friend bool operator==(const UPoly& a, const UPoly& b) = default;

    std::pair<UPoly, UPoly> divmod(const UPoly& div) const {
        if (div.is_zero()) throw std::domain_error("UPoly: division by zero polynomial");
        UPoly rem = *this;
        std::vector<Scalar> quo;
        int dd = div.degree();
        if (rem.degree() >= dd) quo.assign(static_cast<size_t>(rem.degree() - dd) + 1, Scalar::zero());
        Scalar inv = div.lead().inverse();
        while (!rem.is_zero() && rem.degree() >= dd) {
            int shift = rem.degree() - dd;
            Scalar f = rem.lead() * inv;
            quo[static_cast<size_t>(shift)] = f;
            std::vector<Scalar> nr = rem.c_;
            for (int k = 0; k <= dd; ++k)
                nr[static_cast<size_t>(k + shift)] -= f * div.c_[static_cast<size_t>(k)];
            rem = UPoly(std::move(nr));
        }
        return {UPoly(std::move(quo)), rem};
    }
    UPoly operator/(const UPoly& d) const { return divmod(d).first; }
    UPoly operator%(const UPoly& d) const { return divmod(d).second; }
    bool divides(const UPoly& other) const { return other.divmod(*this).second.is_zero(); }

    UPoly monic() const {
        if (is_zero()) return *this;
        return lead().inverse() * *this;
    }

    Scalar evaluate(const Scalar& v) const {
        Scalar acc;
        for (size_t k = c_.size(); k-- > 0;) acc = acc * v + c_[k];
        return acc;
    }

    friend UPoly gcd(UPoly a, UPoly b) {
        while (!b.is_zero()) {
            UPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }
    friend UPoly lcm(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return UPoly();
        return ((a * b) / gcd(a, b)).monic();
    }

    std::string text(const std::string& var = "x") const {
        TermMap terms;
        for (size_t k = 0; k < c_.size(); ++k) {
            if (c_[k].is_zero()) continue;
            terms.emplace(Expo{static_cast<unsigned>(k)}, c_[k]);
        }
        return render_terms(terms, [&](size_t) { return var; });
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Scalar> c_;
};

} // namespace addax

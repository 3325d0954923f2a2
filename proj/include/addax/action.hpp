#pragma once

// The additive action attached to a pointed pair: exponentials of the
// nilpotent multiplication operators of W, both with concrete parameter
// values and symbolically in parameters a1..an.
//
// Formula text convention: components are joined as "[c0 : c1 : ...]";
// within a component the diagonal term comes first, the remaining terms in
// ascending coordinate order; coefficient polynomials list their terms by
// ascending total degree, ties broken by the canonical term order.

#include "addax/algebra.hpp"
#include "addax/matrix.hpp"
#include "addax/multilinear.hpp"
#include "addax/polynomial.hpp"
#include "addax/scalar.hpp"

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace addax {

// Ambient coordinates of the W element with the given parameter values.
inline Vec w_element(const PointedPair& pair, const std::vector<Scalar>& params) {
    const auto& w = pair.w_basis();
    if (params.size() != w.size()) throw std::invalid_argument("w_element: wrong parameter count");
    Vec a(pair.dim());
    for (size_t j = 0; j < w.size(); ++j) vec_add_scaled(a, params[j], w[j]);
    return a;
}

// exp of a nilpotent operator; the series is finite.
inline Matrix exp_nilpotent(const Matrix& a) {
    size_t nn = a.rows();
    Matrix m = Matrix::identity(nn);
    Matrix term = Matrix::identity(nn);
    for (size_t k = 1; k <= nn; ++k) {
        term = term * a;
        if (term.is_zero()) return m;
        m = m + Scalar(Rational(1) / factorial(static_cast<unsigned>(k))) * term;
    }
    throw std::invalid_argument("exp_nilpotent: operator is not nilpotent");
}

// exp of a maximal-ideal element: sum a^k / k!, finite by nilpotency.
inline Vec exp_element(const LocalAlgebra& alg, const Vec& a) {
    if (a.size() != alg.dim()) throw std::invalid_argument("exp_element: wrong coordinate length");
    if (!a[0].is_zero())
        throw std::invalid_argument("exp_element: element must lie in the maximal ideal");
    Vec result = basis_vec(alg.dim(), 0);
    Vec power = result;
    for (size_t k = 1; k <= alg.dim(); ++k) {
        power = alg.multiply(power, a);
        if (vec_is_zero(power)) return result;
        vec_add_scaled(result, Scalar(Rational(1) / factorial(static_cast<unsigned>(k))), power);
    }
    throw std::logic_error("exp_element: series did not terminate");
}

inline Matrix action_matrix(const PointedPair& pair, const std::vector<Scalar>& params) {
    return exp_nilpotent(pair.algebra().mult_matrix(w_element(pair, params)));
}

inline Matrix rho(const PointedPair& pair, const std::vector<Scalar>& params) {
    return action_matrix(pair, params);
}

namespace detail {

// Normalizes in place so the first nonzero coordinate is 1.
inline Vec& projective_normalize(Vec& v, const char* who) {
    for (const auto& c : v)
        if (!c.is_zero()) {
            Scalar inv = c.inverse();
            for (auto& x : v) x *= inv;
            return v;
        }
    throw std::invalid_argument(std::string(who) + ": point has no nonzero coordinate");
}

} // namespace detail

// Applies the action and renormalizes so the first nonzero coordinate is 1.
inline Vec act(const Matrix& action, const Vec& point) {
    if (point.size() != action.cols()) throw std::invalid_argument("act: wrong point length");
    Vec image = action.apply(point);
    return detail::projective_normalize(image, "act");
}

inline Vec act(const PointedPair& pair, const std::vector<Scalar>& params, const Vec& point) {
    if (point.size() != pair.dim()) throw std::invalid_argument("act: wrong point length");
    return act(action_matrix(pair, params), point);
}

// ---------------------------------------------------------------------------
// Symbolic action matrix
// ---------------------------------------------------------------------------

using PolyMatrix = std::vector<std::vector<MPoly>>;

namespace detail {

inline PolyMatrix poly_identity(size_t nn, size_t nvars) {
    PolyMatrix m(nn, std::vector<MPoly>(nn, MPoly(nvars)));
    for (size_t k = 0; k < nn; ++k) m[k][k] = MPoly::constant(nvars, Scalar::one());
    return m;
}

inline bool poly_matrix_zero(const PolyMatrix& m) {
    for (const auto& row : m)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

inline PolyMatrix poly_mul(const PolyMatrix& a, const PolyMatrix& b, size_t nvars) {
    size_t nn = a.size();
    PolyMatrix r(nn, std::vector<MPoly>(nn, MPoly(nvars)));
    for (size_t i = 0; i < nn; ++i)
        for (size_t k = 0; k < nn; ++k) {
            if (a[i][k].is_zero()) continue;
            for (size_t j = 0; j < nn; ++j) {
                if (b[k][j].is_zero()) continue;
                r[i][j] = r[i][j] + a[i][k] * b[k][j];
            }
        }
    return r;
}

} // namespace detail

// Entries are polynomials in the action parameters a1..an (variable i of the
// polynomial ring is a_{i+1}).
inline PolyMatrix symbolic_action_matrix(const PointedPair& pair) {
    size_t nn = pair.dim();
    size_t n = pair.w_basis().size();
    PolyMatrix gen(nn, std::vector<MPoly>(nn, MPoly(n)));
    for (size_t j = 0; j < n; ++j) {
        Matrix mw = pair.algebra().mult_matrix(pair.w_basis()[j]);
        MPoly aj = MPoly::variable(n, j);
        for (size_t r = 0; r < nn; ++r)
            for (size_t c = 0; c < nn; ++c)
                if (!mw.at(r, c).is_zero()) gen[r][c] = gen[r][c] + mw.at(r, c) * aj;
    }
    PolyMatrix m = detail::poly_identity(nn, n);
    PolyMatrix term = detail::poly_identity(nn, n);
    for (size_t k = 1; k <= nn; ++k) {
        term = detail::poly_mul(term, gen, n);
        if (detail::poly_matrix_zero(term)) return m;
        Scalar f(Rational(1) / factorial(static_cast<unsigned>(k)));
        for (size_t r = 0; r < nn; ++r)
            for (size_t c = 0; c < nn; ++c)
                if (!term[r][c].is_zero()) m[r][c] = m[r][c] + f * term[r][c];
    }
    throw std::logic_error("symbolic_action_matrix: series did not terminate");
}

// ---------------------------------------------------------------------------
// Formula rendering
// ---------------------------------------------------------------------------

inline VarNamer a_namer() {
    return [](size_t i) { return "a" + std::to_string(i + 1); };
}

namespace detail {

struct FormulaOrder {
    bool operator()(const Expo& a, const Expo& b) const {
        unsigned da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return DescLex{}(a, b);
    }
};

// One product "coeff * x_k" where coeff is a parameter polynomial.
inline std::pair<bool, std::string> action_term_text(const MPoly& coeff, size_t k) {
    std::string var = "x" + std::to_string(k);
    if (coeff.terms().size() > 1) {
        std::vector<std::pair<Expo, Scalar>> ordered(coeff.terms().begin(), coeff.terms().end());
        std::sort(ordered.begin(), ordered.end(),
                  [](const auto& p, const auto& q) { return FormulaOrder{}(p.first, q.first); });
        std::string body = "(";
        bool first = true;
        for (const auto& [e, c] : ordered) {
            auto [neg, text] = term_text(e, c, a_namer());
            if (first) {
                if (neg) body += '-';
            } else {
                body += neg ? '-' : '+';
            }
            body += text;
            first = false;
        }
        body += ")*" + var;
        return {false, body};
    }
    const auto& [e, c] = *coeff.terms().begin();
    Expo combined = e;
    combined.push_back(1);
    size_t xslot = e.size();
    VarNamer namer = [&, xslot](size_t i) { return i == xslot ? var : a_namer()(i); };
    return term_text(combined, c, namer);
}

} // namespace detail

// Text of one matrix row applied to the coordinate vector.
inline std::string action_component_text(const std::vector<MPoly>& row, size_t diag) {
    std::vector<size_t> order;
    if (diag < row.size() && !row[diag].is_zero()) order.push_back(diag);
    for (size_t k = 0; k < row.size(); ++k)
        if (k != diag && !row[k].is_zero()) order.push_back(k);
    if (order.empty()) return "0";
    std::string out;
    bool first = true;
    for (size_t k : order) {
        auto [neg, body] = detail::action_term_text(row[k], k);
        if (first) {
            if (neg) out += '-';
        } else {
            out += neg ? '-' : '+';
        }
        out += body;
        first = false;
    }
    return out;
}

inline std::string render_action(const PolyMatrix& m) {
    std::string out = "[";
    for (size_t j = 0; j < m.size(); ++j) {
        if (j) out += " : ";
        out += action_component_text(m[j], j);
    }
    out += "]";
    return out;
}

inline std::string render_action(const PointedPair& pair) {
    return render_action(symbolic_action_matrix(pair));
}

inline std::string render_point(const Vec& v) {
    std::string out = "[";
    for (size_t k = 0; k < v.size(); ++k) {
        if (k) out += " : ";
        out += render_scalar(v[k]);
    }
    out += "]";
    return out;
}

// ---------------------------------------------------------------------------
// Invariance of a polynomial under the action
// ---------------------------------------------------------------------------

struct DerivationWitness {
    size_t w_index; // W basis vector whose infinitesimal action does not kill f
    MPoly residual; // the nonzero derivative polynomial
};

// The action fixes f (up to nothing: exactly) iff every W basis vector acts
// as a derivation annihilating f; exp-linearity makes this exact, not just
// first-order.
inline std::optional<DerivationWitness> invariance_obstruction(const PointedPair& pair, const HomPoly& f) {
    size_t nn = pair.dim();
    if (f.nvars() != nn) throw std::invalid_argument("invariance_obstruction: arity mismatch");
    for (size_t wi = 0; wi < pair.w_basis().size(); ++wi) {
        Matrix aw = pair.algebra().mult_matrix(pair.w_basis()[wi]);
        MPoly total(nn);
        for (size_t k = 0; k < nn; ++k) {
            MPoly dk = f.derivative(k);
            if (dk.is_zero()) continue;
            MPoly row(nn);
            for (size_t l = 0; l < nn; ++l)
                if (!aw.at(k, l).is_zero()) row = row + aw.at(k, l) * MPoly::variable(nn, l);
            total = total + row * dk;
        }
        if (!total.is_zero()) return DerivationWitness{wi, std::move(total)};
    }
    return std::nullopt;
}

namespace detail {

inline Scalar random_small_scalar(std::mt19937_64& rng, bool allow_imaginary = false) {
    std::uniform_int_distribution<int> num(-10, 10);
    std::uniform_int_distribution<int> den(1, 10);
    Scalar s(Rational(num(rng), den(rng)));
    if (allow_imaginary && num(rng) > 5) s.im = Rational(num(rng), den(rng));
    return s;
}

} // namespace detail

// Spot checks f(M_a v) == f(v) on random parameters and points.
inline bool numeric_invariance_trials(const PointedPair& pair, const HomPoly& f, unsigned trials = 8,
                                      std::uint64_t seed = 20240811) {
    std::mt19937_64 rng(seed);
    size_t n = pair.w_basis().size();
    for (unsigned t = 0; t < trials; ++t) {
        std::vector<Scalar> params(n);
        for (auto& p : params) p = detail::random_small_scalar(rng, true);
        Vec point(pair.dim());
        for (auto& c : point) c = detail::random_small_scalar(rng, true);
        Vec image = action_matrix(pair, params).apply(point);
        if (!(f.evaluate(image) == f.evaluate(point))) return false;
    }
    return true;
}

inline bool verify_action_invariance(const PointedPair& pair, const HomPoly& f, unsigned trials = 8,
                                     std::uint64_t seed = 20240811) {
    return !invariance_obstruction(pair, f).has_value() && numeric_invariance_trials(pair, f, trials, seed);
}

// Whether all partial derivatives vanish at a point of the hypersurface.
inline bool singular_at(const HomPoly& f, const Vec& point) {
    if (point.size() != f.nvars()) throw std::invalid_argument("singular_at: wrong point length");
    if (!f.evaluate(point).is_zero())
        throw std::invalid_argument("singular_at: point does not lie on the hypersurface");
    for (size_t k = 0; k < f.nvars(); ++k)
        if (!f.derivative(k).evaluate(point).is_zero()) return false;
    return true;
}

} // namespace addax

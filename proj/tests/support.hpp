#pragma once

// Shared helpers for the test suite: deterministic random data, basis
// changes that fix the unit, padded pairs carrying a dead coordinate, and
// small matrix builders.

#include "addax/addax.hpp"

#include <random>
#include <utility>
#include <vector>

namespace testsupport {

using namespace addax;

inline Rational random_rational(std::mt19937_64& rng, int lo = -9, int hi = 9, int maxden = 6) {
    std::uniform_int_distribution<int> num(lo, hi);
    std::uniform_int_distribution<int> den(1, maxden);
    return Rational(num(rng), den(rng));
}

inline Scalar random_scalar(std::mt19937_64& rng, bool allow_imag = true) {
    Scalar s(random_rational(rng));
    if (allow_imag) {
        std::uniform_int_distribution<int> coin(0, 2);
        if (coin(rng) == 0) s.im = random_rational(rng);
    }
    return s;
}

inline Scalar random_nonzero_scalar(std::mt19937_64& rng, bool allow_imag = true) {
    for (;;) {
        Scalar s = random_scalar(rng, allow_imag);
        if (!s.is_zero()) return s;
    }
}

// Rational point on the unit circle: c = (1-t^2)/(1+t^2), s = 2t/(1+t^2).
inline std::pair<Scalar, Scalar> rational_rotation(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 5);
    Rational t(num(rng), den(rng));
    Rational c = (1 - t * t) / (1 + t * t);
    Rational s = (2 * t) / (1 + t * t);
    return {Scalar(c), Scalar(s)};
}

// Basis change of the quadric model fixing the unit: rotations and optional
// i-scalings of the W columns (1..n), then a shear and rescale of the top
// column (n+1). Such changes keep every canonicalization step inside Q(i).
inline ChangeOfBasis unit_fixing_conjugate(size_t n, std::mt19937_64& rng, bool allow_i = true) {
    size_t nn = n + 2;
    Matrix c = Matrix::identity(nn);
    if (n >= 2) {
        std::uniform_int_distribution<size_t> pick(1, n);
        for (int r = 0; r < 3; ++r) {
            size_t i = pick(rng), j = pick(rng);
            if (i == j) continue;
            auto [co, si] = rational_rotation(rng);
            for (size_t row = 0; row < nn; ++row) {
                Scalar ci = c.at(row, i), cj = c.at(row, j);
                c.at(row, i) = co * ci + si * cj;
                c.at(row, j) = co * cj - si * ci;
            }
        }
    }
    if (allow_i) {
        std::uniform_int_distribution<int> coin(0, 1);
        for (size_t col = 1; col <= n; ++col)
            if (coin(rng))
                for (size_t row = 0; row < nn; ++row) c.at(row, col) *= Scalar(0, 1);
    }
    Scalar gamma(random_rational(rng, 1, 5));
    for (size_t row = 0; row < nn; ++row) c.at(row, nn - 1) *= gamma;
    for (size_t i = 1; i <= n; ++i) {
        Scalar s = random_scalar(rng);
        for (size_t row = 0; row < nn; ++row) c.at(row, nn - 1) += s * c.at(row, i);
    }
    return ChangeOfBasis{c};
}

// The base pair with one extra coordinate killed by every product and added
// to W, so W acquires the nonzero ideal spanned by that coordinate.
inline PointedPair padded_pair(const PointedPair& base) {
    size_t bn = base.dim();
    size_t nn = bn + 1;
    LocalAlgebra::MulTable mul(nn - 1, std::vector<Vec>(nn - 1, Vec(nn)));
    const auto& bt = base.algebra().table();
    for (size_t i = 0; i + 1 < bn; ++i)
        for (size_t j = 0; j + 1 < bn; ++j)
            for (size_t k = 0; k < bn; ++k) mul[i][j][k] = bt[i][j][k];
    LocalAlgebra alg = LocalAlgebra::create(nn, std::move(mul), base.algebra().name() + "+pad");
    std::vector<Vec> w;
    for (const auto& b : base.w_basis()) {
        Vec v = b;
        v.push_back(Scalar::zero());
        w.push_back(std::move(v));
    }
    w.push_back(basis_vec(nn, nn - 1));
    Vec comp = base.complement();
    comp.push_back(Scalar::zero());
    return PointedPair(std::move(alg), std::move(w), std::move(comp));
}

inline HomPoly random_hompoly(std::mt19937_64& rng, size_t nvars, unsigned degree) {
    HomPoly p(nvars, degree);
    std::uniform_int_distribution<size_t> var(0, nvars - 1);
    std::uniform_int_distribution<int> terms(1, 6);
    int tcount = terms(rng);
    for (int t = 0; t < tcount; ++t) {
        Expo e(nvars, 0);
        for (unsigned d = 0; d < degree; ++d) e[var(rng)] += 1;
        p.add_term(e, random_scalar(rng));
    }
    return p;
}

inline Matrix diag(const std::vector<Scalar>& d) {
    Matrix m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

// [[i/2, 1/2], [1/2, -i/2]]: symmetric, traceless, nonzero, squares to zero.
inline Matrix nilpotent2() {
    Matrix m(2, 2);
    Scalar half(Rational(1, 2));
    Scalar ihalf;
    ihalf.im = Rational(1, 2);
    m.at(0, 0) = ihalf;
    m.at(0, 1) = m.at(1, 0) = half;
    m.at(1, 1) = -ihalf;
    return m;
}

// [[0,a,b],[a,0,c],[b,c,0]]
inline Matrix sym3(const Scalar& a, const Scalar& b, const Scalar& c) {
    Matrix m(3, 3);
    m.at(0, 1) = m.at(1, 0) = a;
    m.at(0, 2) = m.at(2, 0) = b;
    m.at(1, 2) = m.at(2, 1) = c;
    return m;
}

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
    for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) m.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return m;
}

// Companion matrix of a monic polynomial (coefficients in the last column).
inline Matrix companion(const UPoly& f) {
    size_t m = static_cast<size_t>(f.degree());
    Matrix c(m, m);
    for (size_t i = 1; i < m; ++i) c.at(i, i - 1) = Scalar::one();
    for (size_t i = 0; i < m; ++i) c.at(i, m - 1) = -f[i];
    return c;
}

inline LambdaData generic(Matrix m) { return {std::move(m), CorankCase::GenericNGe3}; }

// alpha * O^T m O + beta * I with a rational rotation O: stays within the
// moves lambda_equivalent must absorb.
inline Matrix lambda_move(const Matrix& m, std::mt19937_64& rng) {
    size_t n = m.rows();
    Matrix o = Matrix::identity(n);
    if (n >= 2) {
        std::uniform_int_distribution<size_t> pick(0, n - 1);
        for (int r = 0; r < 2; ++r) {
            size_t i = pick(rng), j = pick(rng);
            if (i == j) continue;
            auto [co, si] = rational_rotation(rng);
            for (size_t row = 0; row < n; ++row) {
                Scalar ci = o.at(row, i), cj = o.at(row, j);
                o.at(row, i) = co * ci + si * cj;
                o.at(row, j) = co * cj - si * ci;
            }
        }
    }
    Scalar alpha = random_nonzero_scalar(rng, false);
    Scalar beta(random_rational(rng));
    return alpha * (o.transpose() * m * o) + beta * Matrix::identity(n);
}

// The fractional-linear orbit of the diagonal parameter.
inline std::vector<Scalar> parameter_orbit(const Scalar& t) {
    Scalar one = Scalar::one();
    return {t,
            t.inverse(),
            one - t,
            (t - one) * t.inverse(),
            t * (t - one).inverse(),
            (one - t).inverse()};
}

// Catalog pairs exercised across the suite; every entry carries a pair.
inline std::vector<CatalogEntry> standard_pairs() {
    std::vector<CatalogEntry> out;
    for (unsigned k = 3; k <= 6; ++k) out.push_back(make_truncated(k));
    for (unsigned n = 1; n <= 5; ++n) out.push_back(make_quadric_nondegenerate(n));
    Matrix lam1(1, 1);
    lam1.at(0, 0) = Scalar(2);
    out.push_back(make_corank_one(2, lam1));
    out.push_back(make_corank_one(3));
    out.push_back(make_corank_one(3, diag({Scalar(0), Scalar(1)})));
    out.push_back(make_corank_one(3, nilpotent2()));
    out.push_back(make_corank_one(4, diag({Scalar(0), Scalar(1), Scalar(2)})));
    out.push_back(make_corank_one(4, diag({Scalar(0), Scalar(1), Scalar(3)})));
    out.push_back(make_corank_one(5, diag({Scalar(1), Scalar(2), Scalar(3), Scalar(4)})));
    out.push_back(make_corank_one_n2_split());
    out.push_back(make_corank_one_n2_chain());
    return out;
}

} // namespace testsupport

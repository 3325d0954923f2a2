#pragma once

// Canonical forms for pairs whose distinguished form is bilinear (degree 2).
//
// A full-rank form collapses onto one model per dimension: after scaling so
// F(1, e_top) = 1, orthonormalizing the hyperplane basis to F(v, v) = -1, and
// replacing the complement by v1^2, the structure constants are forced to
// K[e1..en]/(ei^2 - ej^2, ei*ej) with the anti-diagonal Gram matrix.
//
// A corank-one form leaves a residual symmetric matrix Lambda, read off from
// v_i v_j = lambda_ij * k + delta_ij * e_top over the kernel line <k>; Lambda
// is well defined only up to similarity, global scaling, and adding scalar
// matrices, and lambda_equivalent decides that relation with certificates.
// When a required square root (orthonormalization pivot) or scaling root has
// no representative in Q(i), operations report failure instead of guessing.

#include "addax/algebra.hpp"
#include "addax/catalog.hpp"
#include "addax/matrix.hpp"
#include "addax/multilinear.hpp"
#include "addax/polynomial.hpp"
#include "addax/scalar.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace addax {

namespace detail {

inline Scalar pairing(const Matrix& g, const Vec& u, const Vec& v) {
    Scalar acc;
    for (size_t i = 0; i < u.size(); ++i) {
        if (u[i].is_zero()) continue;
        for (size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) acc += u[i] * g.at(i, j) * v[j];
    }
    return acc;
}

inline Matrix gram_of_form(const SymForm& form) {
    if (form.arity() != 2) throw std::invalid_argument("gram_of_form: arity must be 2");
    size_t nn = form.nvars();
    Matrix g(nn, nn);
    for (size_t i = 0; i < nn; ++i)
        for (size_t j = i; j < nn; ++j) {
            Scalar v = form.entry({static_cast<unsigned>(i), static_cast<unsigned>(j)});
            g.at(i, j) = v;
            g.at(j, i) = v;
        }
    return g;
}

inline SymForm form_from_gram(const Matrix& g) {
    SymForm form(g.rows(), 2);
    for (size_t i = 0; i < g.rows(); ++i)
        for (size_t j = i; j < g.cols(); ++j)
            form.set({static_cast<unsigned>(i), static_cast<unsigned>(j)}, g.at(i, j));
    return form;
}

} // namespace detail

class BilinearTriple {
public:
    BilinearTriple(PointedPair pair, SymForm form)
        : pair_(std::move(pair)), form_(std::move(form)) {
        if (form_.arity() != 2)
            throw std::invalid_argument("BilinearTriple: form arity must be 2");
        if (form_.nvars() != pair_.dim())
            throw std::invalid_argument("BilinearTriple: form arity does not match the algebra dimension");
        if (!form_.entry({0, 0}).is_zero())
            throw std::invalid_argument("BilinearTriple: form must vanish on the unit pair");
        if (check_invariance(form_, pair_))
            throw std::invalid_argument("BilinearTriple: form is not invariant under the hyperplane");
        gram_ = detail::gram_of_form(form_);
        rank_ = gram_.rank();
    }

    static BilinearTriple from_pair(const PointedPair& pair) {
        if (pair.degree() != 2)
            throw std::invalid_argument("BilinearTriple: pair degree must be 2");
        return BilinearTriple(pair, invariant_form(pair));
    }

    const PointedPair& pair() const { return pair_; }
    const SymForm& form() const { return form_; }
    const Matrix& gram() const { return gram_; }
    size_t rank() const { return rank_; }
    size_t corank() const { return pair_.dim() - rank_; }

private:
    PointedPair pair_;
    SymForm form_;
    Matrix gram_;
    size_t rank_ = 0;
};

inline Matrix gram_matrix(const BilinearTriple& t) { return t.gram(); }

// Columns are the new basis written in the old coordinates, so coordinates
// transform by matrix^-1 and the first column is the untouched unit.
struct ChangeOfBasis {
    Matrix matrix;

    explicit ChangeOfBasis(Matrix m) : matrix(std::move(m)) {
        if (matrix.rows() != matrix.cols())
            throw std::invalid_argument("ChangeOfBasis: matrix must be square");
        for (size_t i = 0; i < matrix.rows(); ++i) {
            bool ok = i == 0 ? matrix.at(i, 0) == Scalar::one() : matrix.at(i, 0).is_zero();
            if (!ok) throw std::invalid_argument("ChangeOfBasis: first column must be the unit");
        }
        if (!matrix.invertible())
            throw std::invalid_argument("ChangeOfBasis: matrix is singular");
    }
};

inline bool same_structure(const LocalAlgebra& a, const LocalAlgebra& b) {
    return a.dim() == b.dim() && a.table() == b.table();
}

// Transport a pair across a change of basis: same algebra, new coordinates.
// Columns past the first must stay inside the maximal ideal.
inline PointedPair conjugate_pair(const PointedPair& pair, const ChangeOfBasis& change) {
    const Matrix& c = change.matrix;
    size_t nn = pair.dim();
    if (c.rows() != nn)
        throw std::invalid_argument("conjugate_pair: dimension mismatch");
    for (size_t j = 1; j < nn; ++j)
        if (!c.at(0, j).is_zero())
            throw std::invalid_argument("conjugate_pair: ideal basis vectors must stay in the maximal ideal");
    Matrix cinv = c.inverse();
    LocalAlgebra::MulTable mul(nn - 1, std::vector<Vec>(nn - 1));
    for (size_t i = 1; i < nn; ++i)
        for (size_t j = 1; j < nn; ++j)
            mul[i - 1][j - 1] = cinv.apply(pair.algebra().multiply(c.col(i), c.col(j)));
    LocalAlgebra alg = LocalAlgebra::create(nn, std::move(mul), pair.algebra().name());
    std::vector<Vec> w;
    for (const auto& v : pair.w_basis()) w.push_back(cinv.apply(v));
    return PointedPair(std::move(alg), std::move(w), cinv.apply(pair.complement()));
}

inline Matrix nondegenerate_target_gram(size_t n) {
    Matrix g(n + 2, n + 2);
    g.at(0, n + 1) = g.at(n + 1, 0) = Scalar::one();
    for (size_t i = 1; i <= n; ++i) g.at(i, i) = -Scalar::one();
    return g;
}

// Same anti-diagonal shape with a zero row and column at the kernel slot n.
inline Matrix corank_one_target_gram(size_t n) {
    Matrix g(n + 2, n + 2);
    g.at(0, n + 1) = g.at(n + 1, 0) = Scalar::one();
    for (size_t i = 1; i + 1 <= n; ++i) g.at(i, i) = -Scalar::one();
    return g;
}

namespace detail {

// Gram-Schmidt against the given pairing, normalizing every vector to
// self-pairing -1. Returns nullopt when a pivot needs a square root that
// Q(i) does not contain; throws when the pairing dies on the given span.
inline std::optional<std::vector<Vec>> orthonormalize_neg(std::vector<Vec> pool, const Matrix& g) {
    std::vector<Vec> out;
    for (;;) {
        std::erase_if(pool, [](const Vec& v) { return vec_is_zero(v); });
        if (pool.empty()) break;
        size_t pick = pool.size();
        for (size_t k = 0; k < pool.size(); ++k)
            if (!pairing(g, pool[k], pool[k]).is_zero()) {
                pick = k;
                break;
            }
        Vec v;
        if (pick < pool.size()) {
            v = pool[pick];
        } else {
            // Isotropic candidates: a coupled pair must exist, and its sum
            // has self-pairing 2*F(u, w) != 0.
            bool found = false;
            for (size_t a = 0; a < pool.size() && !found; ++a)
                for (size_t b = a + 1; b < pool.size() && !found; ++b)
                    if (!pairing(g, pool[a], pool[b]).is_zero()) {
                        v = pool[a];
                        vec_add_scaled(v, Scalar::one(), pool[b]);
                        found = true;
                    }
            if (!found)
                throw std::logic_error("orthonormalize_neg: pairing is degenerate on the span");
        }
        auto rho = sqrt_in_field(-pairing(g, v, v));
        if (!rho) return std::nullopt;
        Scalar inv = rho->inverse();
        for (auto& x : v) x *= inv;
        // Keep the invariant that the pool is reduced against out: with
        // self-pairing -1 the projection coefficient is +pairing(p, v).
        for (auto& p : pool) vec_add_scaled(p, pairing(g, p, v), v);
        out.push_back(std::move(v));
    }
    return out;
}

// Solves diff == coeff * k for the scalar coefficient; throws when diff
// leaves the line <k>.
inline Scalar line_coefficient(const Vec& diff, const Vec& k, const char* who) {
    size_t lead = k.size();
    for (size_t j = 0; j < k.size(); ++j)
        if (!k[j].is_zero()) {
            lead = j;
            break;
        }
    if (lead == k.size()) throw std::logic_error(std::string(who) + ": zero kernel vector");
    Scalar coeff = diff[lead] * k[lead].inverse();
    Vec check = diff;
    vec_add_scaled(check, -coeff, k);
    if (!vec_is_zero(check))
        throw std::logic_error(std::string(who) + ": product left the kernel line");
    return coeff;
}

inline Matrix assemble_basis(size_t nn, const std::vector<Vec>& columns) {
    Matrix c(nn, nn);
    c.at(0, 0) = Scalar::one();
    for (size_t j = 0; j < columns.size(); ++j)
        for (size_t i = 0; i < nn; ++i) c.at(i, j + 1) = columns[j][i];
    return c;
}

inline LocalAlgebra::MulTable conjugated_table(const PointedPair& pair, const Matrix& c,
                                               const Matrix& cinv) {
    size_t nn = pair.dim();
    LocalAlgebra::MulTable mul(nn - 1, std::vector<Vec>(nn - 1));
    for (size_t i = 1; i < nn; ++i)
        for (size_t j = 1; j < nn; ++j)
            mul[i - 1][j - 1] = cinv.apply(pair.algebra().multiply(c.col(i), c.col(j)));
    return mul;
}

} // namespace detail

struct CanonicalTriple {
    BilinearTriple triple;  // the model pair carrying the rescaled form
    ChangeOfBasis change;   // conjugates the input pair onto the model
    Scalar scale;           // original F = scale * (model form pulled back)
};

// Full-rank case. The constructive steps force the quadric model exactly;
// the postcondition is re-checked and a violation is a logic error.
inline std::optional<CanonicalTriple> canonicalize_nondegenerate(const BilinearTriple& t) {
    size_t nn = t.pair().dim();
    size_t n = nn - 2;
    if (t.rank() != nn)
        throw std::invalid_argument("canonicalize_nondegenerate: form must have full rank");

    Vec unit = basis_vec(nn, 0);
    Scalar scale = detail::pairing(t.gram(), unit, t.pair().complement());
    if (scale.is_zero())
        throw std::logic_error("canonicalize_nondegenerate: unit pairs to zero against the complement");
    Matrix ghat = scale.inverse() * t.gram();

    auto vs = detail::orthonormalize_neg(t.pair().w_basis(), ghat);
    if (!vs) return std::nullopt;
    if (vs->size() != n)
        throw std::logic_error("canonicalize_nondegenerate: hyperplane basis collapsed");

    std::vector<Vec> columns = *vs;
    columns.push_back(t.pair().algebra().multiply(columns[0], columns[0]));
    Matrix c = detail::assemble_basis(nn, columns);
    ChangeOfBasis change{c};
    Matrix cinv = c.inverse();

    LocalAlgebra model_alg =
        LocalAlgebra::create(nn, detail::conjugated_table(t.pair(), c, cinv),
                             "quadric_nondegenerate:" + std::to_string(n));
    const CatalogEntry target = make_quadric_nondegenerate(static_cast<unsigned>(n));
    if (!same_structure(model_alg, target.algebra))
        throw std::logic_error("canonicalize_nondegenerate: canonical structure constants did not materialize");

    Matrix model_gram = c.transpose() * ghat * c;
    if (model_gram != nondegenerate_target_gram(n))
        throw std::logic_error("canonicalize_nondegenerate: canonical Gram matrix did not materialize");

    std::vector<Vec> w;
    for (size_t i = 1; i <= n; ++i) w.push_back(basis_vec(nn, i));
    PointedPair model(std::move(model_alg), std::move(w), basis_vec(nn, n + 1));
    return CanonicalTriple{BilinearTriple(std::move(model), detail::form_from_gram(model_gram)),
                           std::move(change), std::move(scale)};
}

enum class CorankCase { GenericNGe3, N2Split, N2Chain };

inline std::string case_name(CorankCase c) {
    switch (c) {
        case CorankCase::GenericNGe3: return "GENERIC_N_GE_3";
        case CorankCase::N2Split: return "N2_SPLIT";
        case CorankCase::N2Chain: return "N2_CHAIN";
    }
    throw std::logic_error("case_name: unknown tag");
}

// The residual matrix is only defined modulo permutation-free moves:
// similarity, multiplication by a nonzero scalar, and adding scalar
// matrices. The n = 2 cases absorb their scalar into the basis, so their
// stored matrix is the 1x1 zero.
struct LambdaData {
    Matrix lam;
    CorankCase case_tag;
};

struct LambdaExtraction {
    LambdaData data;
    ChangeOfBasis change;
    BilinearTriple canonical;
};

inline std::optional<LambdaExtraction> extract_lambda(const BilinearTriple& t) {
    size_t nn = t.pair().dim();
    size_t n = nn - 2;
    if (t.rank() + 1 != nn)
        throw std::invalid_argument("extract_lambda: form must have corank one");
    if (n < 2)
        throw std::invalid_argument("extract_lambda: corank one needs dimension at least 4");

    Vec unit = basis_vec(nn, 0);
    Scalar scale = detail::pairing(t.gram(), unit, t.pair().complement());
    if (scale.is_zero())
        throw std::logic_error("extract_lambda: unit pairs to zero against the complement");
    Matrix ghat = scale.inverse() * t.gram();

    auto kernel = ghat.kernel_basis();
    if (kernel.size() != 1)
        throw std::logic_error("extract_lambda: kernel dimension disagrees with the rank");
    Vec k = kernel[0];
    if (!t.pair().w().contains(k))
        throw std::invalid_argument("extract_lambda: kernel leaves the hyperplane — inconsistent triple");

    // Greedy complement of <k> inside W, then orthonormalize it.
    std::vector<Vec> complement_gens;
    {
        std::vector<Vec> so_far{k};
        Subspace reach = Subspace::span(nn, so_far);
        for (const auto& w : t.pair().w_basis()) {
            if (reach.contains(w)) continue;
            complement_gens.push_back(w);
            so_far.push_back(w);
            reach = Subspace::span(nn, so_far);
        }
    }
    if (complement_gens.size() + 1 != n)
        throw std::logic_error("extract_lambda: hyperplane dimension bookkeeping failed");
    auto vs = detail::orthonormalize_neg(std::move(complement_gens), ghat);
    if (!vs) return std::nullopt;
    if (vs->size() + 1 != n)
        throw std::logic_error("extract_lambda: kernel complement collapsed");

    // Anchor the top vector: with self-pairings -1 the correction that kills
    // F(v_j, e_top) is + pairing(v_j, complement) * v_j.
    const LocalAlgebra& alg = t.pair().algebra();
    Vec e_top = t.pair().complement();
    for (const auto& v : *vs) vec_add_scaled(e_top, detail::pairing(ghat, v, e_top), v);

    Matrix lam(n - 1, n - 1);
    CorankCase tag = CorankCase::GenericNGe3;
    if (n == 2) {
        const Vec& v = (*vs)[0];
        Scalar beta = detail::line_coefficient(alg.multiply(v, e_top), k, "extract_lambda");
        if (beta.is_zero()) {
            tag = CorankCase::N2Split;
        } else {
            tag = CorankCase::N2Chain;
            for (auto& x : k) x *= beta;  // rescale so v * e_top = k exactly
        }
        Vec sq = alg.multiply(v, v);
        vec_add_scaled(sq, -Scalar::one(), e_top);
        Scalar residue = detail::line_coefficient(sq, k, "extract_lambda");
        vec_add_scaled(e_top, residue, k);  // absorb the scalar into the top vector
    } else {
        for (size_t i = 0; i + 1 < n; ++i)
            for (size_t j = i; j + 1 < n; ++j) {
                Vec prod = alg.multiply((*vs)[i], (*vs)[j]);
                if (i == j) vec_add_scaled(prod, -Scalar::one(), e_top);
                Scalar lij = detail::line_coefficient(prod, k, "extract_lambda");
                lam.at(i, j) = lij;
                lam.at(j, i) = lij;
            }
    }

    std::vector<Vec> columns = *vs;
    columns.push_back(k);
    columns.push_back(e_top);
    Matrix c = detail::assemble_basis(nn, columns);
    ChangeOfBasis change{c};
    Matrix cinv = c.inverse();

    const CatalogEntry target = tag == CorankCase::N2Split    ? make_corank_one_n2_split()
                                : tag == CorankCase::N2Chain  ? make_corank_one_n2_chain()
                                : make_corank_one(static_cast<unsigned>(n), lam);
    LocalAlgebra model_alg = LocalAlgebra::create(
        nn, detail::conjugated_table(t.pair(), c, cinv), target.algebra.name());
    if (!same_structure(model_alg, target.algebra))
        throw std::logic_error("extract_lambda: canonical structure constants did not materialize");

    Matrix model_gram = c.transpose() * ghat * c;
    if (model_gram != corank_one_target_gram(n))
        throw std::logic_error("extract_lambda: canonical Gram matrix did not materialize");

    std::vector<Vec> w;
    for (size_t i = 1; i <= n; ++i) w.push_back(basis_vec(nn, i));
    PointedPair model(std::move(model_alg), std::move(w), basis_vec(nn, n + 1));
    return LambdaExtraction{LambdaData{std::move(lam), tag}, std::move(change),
                            BilinearTriple(std::move(model), detail::form_from_gram(model_gram))};
}

// Monic characteristic polynomial, ascending coefficients, by the
// trace-recursion (Faddeev-LeVerrier); exact over Q(i).
inline UPoly char_poly(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("char_poly: matrix must be square");
    size_t dim = m.rows();
    std::vector<Scalar> coeff(dim + 1);
    coeff[dim] = Scalar::one();
    Matrix work = m;
    for (size_t k = 1; k <= dim; ++k) {
        Scalar ak = -(work.trace() * Scalar(Rational(1, static_cast<long>(k))));
        coeff[dim - k] = ak;
        if (k < dim) work = m * (work + ak * Matrix::identity(dim));
    }
    return UPoly(std::move(coeff));
}

// Invariant factors of xI - M over Q(i)[x]: Smith form with deterministic
// minimal-degree pivoting; monic, unit factors dropped, each divides the next.
inline std::vector<UPoly> invariant_factors(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("invariant_factors: matrix must be square");
    size_t dim = m.rows();
    std::vector<std::vector<UPoly>> a(dim, std::vector<UPoly>(dim));
    for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j) {
            a[i][j] = UPoly::constant(-m.at(i, j));
            if (i == j) a[i][j] = a[i][j] + UPoly::x();
        }

    auto swap_rows = [&](size_t r, size_t s) { if (r != s) std::swap(a[r], a[s]); };
    auto swap_cols = [&](size_t r, size_t s) {
        if (r == s) return;
        for (size_t i = 0; i < dim; ++i) std::swap(a[i][r], a[i][s]);
    };

    for (size_t k = 0; k < dim; ++k) {
        for (;;) {
            size_t pi = dim, pj = dim;
            int best = -1;
            for (size_t i = k; i < dim; ++i)
                for (size_t j = k; j < dim; ++j) {
                    if (a[i][j].is_zero()) continue;
                    if (best < 0 || a[i][j].degree() < best) {
                        best = a[i][j].degree();
                        pi = i;
                        pj = j;
                    }
                }
            if (best < 0) break;  // submatrix exhausted
            swap_rows(pi, k);
            swap_cols(pj, k);

            bool clean = true;
            for (size_t i = k + 1; i < dim; ++i) {
                if (a[i][k].is_zero()) continue;
                UPoly q = a[i][k] / a[k][k];
                for (size_t j = k; j < dim; ++j) a[i][j] = a[i][j] - q * a[k][j];
                if (!a[i][k].is_zero()) clean = false;  // remainder: smaller pivot next pass
            }
            for (size_t j = k + 1; j < dim; ++j) {
                if (a[k][j].is_zero()) continue;
                UPoly q = a[k][j] / a[k][k];
                for (size_t i = k; i < dim; ++i) a[i][j] = a[i][j] - q * a[i][k];
                if (!a[k][j].is_zero()) clean = false;
            }
            if (!clean) continue;

            // Row and column are clear; enforce that the pivot divides the
            // remaining block, pulling in an offending row otherwise.
            bool divides_all = true;
            for (size_t i = k + 1; i < dim && divides_all; ++i)
                for (size_t j = k + 1; j < dim && divides_all; ++j)
                    if (!(a[i][j] % a[k][k]).is_zero()) {
                        for (size_t col = k; col < dim; ++col)
                            a[k][col] = a[k][col] + a[i][col];
                        divides_all = false;
                    }
            if (divides_all) break;
        }
    }

    std::vector<UPoly> factors;
    for (size_t k = 0; k < dim; ++k)
        if (a[k][k].degree() >= 1) factors.push_back(a[k][k].monic());
    return factors;
}

// Monic polynomial whose roots are alpha times the roots of f.
inline UPoly scale_poly_roots(const UPoly& f, const Scalar& alpha) {
    std::vector<Scalar> c = f.coeffs();
    Scalar power = Scalar::one();
    for (size_t j = c.size(); j-- > 0;) {
        c[j] *= power;
        power *= alpha;
    }
    return UPoly(std::move(c)).monic();
}

namespace detail {

inline MPoly poly_det(const std::vector<std::vector<MPoly>>& m, std::vector<size_t> cols,
                      size_t row, size_t nvars) {
    if (cols.empty()) return MPoly::constant(nvars, Scalar::one());
    MPoly acc(nvars);
    for (size_t pick = 0; pick < cols.size(); ++pick) {
        if (m[row][cols[pick]].is_zero()) continue;
        std::vector<size_t> rest;
        for (size_t q = 0; q < cols.size(); ++q)
            if (q != pick) rest.push_back(cols[q]);
        MPoly minor = poly_det(m, std::move(rest), row + 1, nvars);
        MPoly term = m[row][cols[pick]] * minor;
        acc = pick % 2 == 0 ? acc + term : acc - term;
    }
    return acc;
}

} // namespace detail

// Invertible S with S*A = B*S, i.e. B = S*A*S^-1, when one exists over Q(i).
// The kernel of the Sylvester-type system spans all intertwiners; a greedy
// per-variable substitution walks the symbolic determinant to a nonzero point.
inline std::optional<Matrix> find_similarity(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("find_similarity: shape mismatch");
    size_t m = a.rows();
    if (m == 0) return Matrix::identity(0);

    Matrix system(m * m, m * m);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            for (size_t p = 0; p < m; ++p)
                for (size_t q = 0; q < m; ++q) {
                    Scalar contrib;
                    if (i == p) contrib += a.at(q, j);
                    if (q == j) contrib -= b.at(i, p);
                    if (!contrib.is_zero()) system.at(i * m + j, p * m + q) = contrib;
                }
    auto kernel = system.kernel_basis();
    if (kernel.empty()) return std::nullopt;

    size_t nvars = kernel.size();
    std::vector<std::vector<MPoly>> sym(m, std::vector<MPoly>(m, MPoly(nvars)));
    for (size_t r = 0; r < nvars; ++r)
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j)
                if (!kernel[r][i * m + j].is_zero())
                    sym[i][j] = sym[i][j] + kernel[r][i * m + j] * MPoly::variable(nvars, r);

    std::vector<size_t> cols(m);
    std::iota(cols.begin(), cols.end(), size_t{0});
    MPoly det = detail::poly_det(sym, std::move(cols), 0, nvars);
    if (det.is_zero()) return std::nullopt;

    std::vector<Scalar> choice(nvars);
    for (size_t r = 0; r < nvars; ++r) {
        for (long val = 0; val <= static_cast<long>(m); ++val) {
            MPoly trial = det.substituted(r, Scalar(val));
            if (!trial.is_zero()) {
                det = std::move(trial);
                choice[r] = Scalar(val);
                break;
            }
        }
    }

    Matrix s(m, m);
    for (size_t r = 0; r < nvars; ++r)
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j)
                s.at(i, j) += choice[r] * kernel[r][i * m + j];
    if (!s.invertible())
        throw std::logic_error("find_similarity: substitution failed to reach an invertible point");
    return s;
}

enum class Verdict { Equivalent, NotEquivalent, Inconclusive };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Equivalent: return "Equivalent";
        case Verdict::NotEquivalent: return "NotEquivalent";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    throw std::logic_error("verdict_name: unknown verdict");
}

struct Certificate {
    Scalar alpha;       // scaling applied to the first matrix
    Scalar beta;        // scalar-matrix shift
    Matrix similarity;  // S with second = alpha * S * first * S^-1 + beta * I
};

struct EquivalenceOutcome {
    Verdict verdict;
    std::optional<Certificate> certificate;  // present exactly for Equivalent
};

namespace detail {

inline void verify_certificate(const Matrix& first, const Matrix& second, const Certificate& cert) {
    Matrix lhs = cert.alpha * (cert.similarity * first * cert.similarity.inverse()) +
                 cert.beta * Matrix::identity(first.rows());
    if (!(lhs == second))
        throw std::logic_error("lambda_equivalent: certificate failed re-verification");
}

} // namespace detail

// Decides whether second = alpha * S * first * S^-1 + beta * I is solvable
// with alpha != 0 and S invertible over Q(i). NotEquivalent verdicts rest on
// scaling-stable invariants (coefficient support, consistency of the forced
// ratios, invariant-factor degree patterns, or an exhausted complete
// candidate list); Inconclusive marks exactly the cases where the forced
// scaling equation has no solution in Q(i) yet the stable invariants agree,
// so a larger field could still identify the two.
inline EquivalenceOutcome lambda_equivalent(const LambdaData& l1, const LambdaData& l2) {
    if (l1.case_tag != l2.case_tag) return {Verdict::NotEquivalent, std::nullopt};

    if (l1.case_tag != CorankCase::GenericNGe3) {
        if (l1.lam.rows() != 1 || l2.lam.rows() != 1)
            throw std::invalid_argument("lambda_equivalent: n = 2 data must carry a 1x1 matrix");
        Certificate cert{Scalar::one(), l2.lam.at(0, 0) - l1.lam.at(0, 0), Matrix::identity(1)};
        detail::verify_certificate(l1.lam, l2.lam, cert);
        return {Verdict::Equivalent, std::move(cert)};
    }

    size_t m = l1.lam.rows();
    if (l2.lam.rows() != m)
        throw std::invalid_argument("lambda_equivalent: matrix sizes differ");
    if (m == 0) return {Verdict::Equivalent, Certificate{Scalar::one(), Scalar::zero(), Matrix::identity(0)}};

    Scalar inv_m = Scalar(Rational(1, static_cast<long>(m)));
    Scalar t1 = l1.lam.trace() * inv_m;
    Scalar t2 = l2.lam.trace() * inv_m;
    Matrix m1 = l1.lam - t1 * Matrix::identity(m);
    Matrix m2 = l2.lam - t2 * Matrix::identity(m);

    auto finish = [&](const Scalar& alpha, Matrix s) -> EquivalenceOutcome {
        Certificate cert{alpha, t2 - alpha * t1, std::move(s)};
        detail::verify_certificate(l1.lam, l2.lam, cert);
        return {Verdict::Equivalent, std::move(cert)};
    };

    if (m1.is_zero() && m2.is_zero()) return finish(Scalar::one(), Matrix::identity(m));
    if (m1.is_zero() != m2.is_zero()) return {Verdict::NotEquivalent, std::nullopt};

    UPoly p1 = char_poly(m1);
    UPoly p2 = char_poly(m2);
    std::vector<unsigned> support;
    for (unsigned k = 2; k <= m; ++k) {
        bool z1 = p1[m - k].is_zero(), z2 = p2[m - k].is_zero();
        if (z1 != z2) return {Verdict::NotEquivalent, std::nullopt};
        if (!z1) support.push_back(k);
    }

    std::vector<UPoly> f1 = invariant_factors(m1);
    std::vector<UPoly> f2 = invariant_factors(m2);
    bool degrees_match = f1.size() == f2.size();
    for (size_t idx = 0; degrees_match && idx < f1.size(); ++idx)
        degrees_match = f1[idx].degree() == f2[idx].degree();
    // Degree patterns survive both scaling and field extension, so a
    // mismatch rules the relation out entirely.
    if (!degrees_match) return {Verdict::NotEquivalent, std::nullopt};

    if (support.empty()) {
        // Both traceless nilpotent: scaling never changes the similarity
        // type, so alpha = 1 settles it.
        if (f1 != f2) return {Verdict::NotEquivalent, std::nullopt};
        auto s = find_similarity(m1, m2);
        if (!s) throw std::logic_error("lambda_equivalent: equal invariant factors without an intertwiner");
        return finish(Scalar::one(), std::move(*s));
    }

    // Any valid alpha obeys alpha^k = ratio_k on the whole support; the
    // ratios must be mutually consistent before a candidate can exist.
    std::vector<Scalar> ratio(m + 1);
    for (unsigned k : support) ratio[k] = p2[m - k] * p1[m - k].inverse();
    for (size_t a = 0; a < support.size(); ++a)
        for (size_t b = a + 1; b < support.size(); ++b) {
            unsigned ka = support[a], kb = support[b];
            Scalar lhs = Scalar::one(), rhs = Scalar::one();
            for (unsigned rep = 0; rep < kb; ++rep) lhs *= ratio[ka];
            for (unsigned rep = 0; rep < ka; ++rep) rhs *= ratio[kb];
            if (!(lhs == rhs)) return {Verdict::NotEquivalent, std::nullopt};
        }

    unsigned k0 = support.front();
    std::vector<Scalar> candidates = kth_roots_in_field(ratio[k0], k0);
    std::erase_if(candidates, [&](const Scalar& alpha) {
        for (unsigned k : support) {
            Scalar pow = Scalar::one();
            for (unsigned rep = 0; rep < k; ++rep) pow *= alpha;
            if (!(pow == ratio[k])) return true;
        }
        return false;
    });
    std::sort(candidates.begin(), candidates.end(),
              [](const Scalar& x, const Scalar& y) { return lex_less(x, y); });

    for (const Scalar& alpha : candidates) {
        std::vector<UPoly> scaled;
        scaled.reserve(f1.size());
        for (const auto& f : f1) scaled.push_back(scale_poly_roots(f, alpha));
        if (scaled != f2) continue;
        Matrix am1 = alpha * m1;
        auto s = find_similarity(am1, m2);
        if (!s) throw std::logic_error("lambda_equivalent: equal invariant factors without an intertwiner");
        return finish(alpha, std::move(*s));
    }

    if (!candidates.empty()) {
        // The candidate list was complete exactly when every unit that fixes
        // all the ratio equations already lives in Q(i): those units are the
        // g-th roots of unity for g = gcd(support), all rational-imaginary
        // precisely when g divides 4.
        unsigned g = 0;
        for (unsigned k : support) g = std::gcd(g, k);
        if (4 % g == 0) return {Verdict::NotEquivalent, std::nullopt};
    }
    return {Verdict::Inconclusive, std::nullopt};
}

inline Scalar j_invariant_n4(const Scalar& t) {
    if (t.is_zero() || t == Scalar::one())
        throw std::domain_error("j_invariant_n4: defined for t outside {0, 1}");
    Scalar num = t * t - t + Scalar::one();
    Scalar den = t * (Scalar::one() - t);
    return num * num * num * (den * den).inverse();
}

struct CorankOneClassification {
    CorankCase case_tag;
    std::string label;
    Matrix lam;                  // as extracted, before normalization
    std::vector<UPoly> factors;  // invariant factors behind a GENERIC label
    bool normalized;             // false when no Q(i) scaling reaches lead 1
};

namespace detail {

inline std::string factor_list_text(const std::vector<UPoly>& fs) {
    std::string out = "[";
    for (size_t i = 0; i < fs.size(); ++i) {
        if (i) out += "; ";
        out += fs[i].text("x");
    }
    return out + "]";
}

} // namespace detail

// Deterministic label: the case tag alone for n = 2; for the generic case
// the invariant factors of the trace-normalized matrix, rescaled so the
// first nonzero characteristic coefficient becomes 1 whenever some Q(i)
// scaling achieves that (ties broken by the lexicographically least text).
inline std::optional<CorankOneClassification> classify_corank_one(const BilinearTriple& t) {
    auto ext = extract_lambda(t);
    if (!ext) return std::nullopt;
    const LambdaData& data = ext->data;
    if (data.case_tag != CorankCase::GenericNGe3)
        return CorankOneClassification{data.case_tag, case_name(data.case_tag), data.lam, {}, true};

    size_t m = data.lam.rows();
    Scalar tbar = data.lam.trace() * Scalar(Rational(1, static_cast<long>(m)));
    Matrix norm = data.lam - tbar * Matrix::identity(m);
    UPoly p = char_poly(norm);

    unsigned k0 = 0;
    for (unsigned k = 2; k <= m && k0 == 0; ++k)
        if (!p[m - k].is_zero()) k0 = k;

    std::vector<UPoly> base = invariant_factors(norm);
    std::string label;
    std::vector<UPoly> chosen = base;
    bool normalized = true;
    if (k0 == 0) {
        // Nilpotent residue: scaling cannot move it, the factors stand.
        label = detail::factor_list_text(base);
    } else {
        std::vector<Scalar> roots = kth_roots_in_field(p[m - k0].inverse(), k0);
        if (roots.empty()) {
            normalized = false;
            label = "raw " + detail::factor_list_text(base);
        } else {
            std::sort(roots.begin(), roots.end(),
                      [](const Scalar& x, const Scalar& y) { return lex_less(x, y); });
            bool first = true;
            for (const Scalar& alpha : roots) {
                std::vector<UPoly> scaled;
                scaled.reserve(base.size());
                for (const auto& f : base) scaled.push_back(scale_poly_roots(f, alpha));
                std::string text = detail::factor_list_text(scaled);
                if (first || text < label) {
                    label = std::move(text);
                    chosen = std::move(scaled);
                    first = false;
                }
            }
        }
    }
    return CorankOneClassification{data.case_tag, case_name(data.case_tag) + " " + label,
                                   data.lam, std::move(chosen), normalized};
}

} // namespace addax

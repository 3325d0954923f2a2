#pragma once

// Finite-dimensional commutative local algebras over Q(i), presented by
// structure constants on a fixed basis e0, e1, ..., e(N-1) with e0 = 1 and
// m = span(e1..e(N-1)) the maximal ideal.
//
// A PointedPair adds the datum that drives everything else: a hyperplane W
// inside m that generates the algebra, together with a chosen complement
// line, which defines the projection pi : m -> m/W identified with the field
// through the complement coordinate.

#include "addax/matrix.hpp"
#include "addax/scalar.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace addax {

using Vec = std::vector<Scalar>;

inline bool vec_is_zero(const Vec& v) {
    for (const auto& s : v)
        if (!s.is_zero()) return false;
    return true;
}

inline Vec basis_vec(size_t n, size_t k) {
    Vec v(n);
    v[k] = Scalar::one();
    return v;
}

inline Vec& vec_add_scaled(Vec& target, const Scalar& f, const Vec& src) {
    if (target.size() != src.size()) throw std::invalid_argument("vec_add_scaled: size mismatch");
    if (f.is_zero()) return target;
    for (size_t k = 0; k < target.size(); ++k)
        if (!src[k].is_zero()) target[k] += f * src[k];
    return target;
}

struct ValidationIssue {
    std::string axiom;
    std::vector<size_t> witness;
    std::string detail;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationIssue issue)
        : std::runtime_error(issue.axiom + ": " + issue.detail), issue_(std::move(issue)) {}
    const ValidationIssue& issue() const { return issue_; }

private:
    ValidationIssue issue_;
};

// A linear subspace held as a reduced row echelon basis, which makes
// representation unique: equal subspaces compare equal structurally.
class Subspace {
public:
    explicit Subspace(size_t ambient) : ambient_(ambient) {}

    static Subspace span(size_t ambient, const std::vector<Vec>& vectors) {
        Subspace s(ambient);
        if (vectors.empty()) return s;
        Matrix m = Matrix::from_rows(vectors);
        if (m.cols() != ambient) throw std::invalid_argument("Subspace::span: ambient mismatch");
        auto pivots = m.rref();
        Matrix basis(pivots.size(), ambient);
        for (size_t r = 0; r < pivots.size(); ++r)
            for (size_t c = 0; c < ambient; ++c) basis.at(r, c) = m.at(r, c);
        s.rows_ = std::move(basis);
        s.pivots_ = std::move(pivots);
        return s;
    }

    size_t ambient() const { return ambient_; }
    size_t dim() const { return rows_.rows(); }
    bool is_zero() const { return dim() == 0; }
    const std::vector<size_t>& pivots() const { return pivots_; }

    Vec basis_vector(size_t k) const { return rows_.row(k); }
    std::vector<Vec> basis() const {
        std::vector<Vec> b;
        b.reserve(dim());
        for (size_t k = 0; k < dim(); ++k) b.push_back(rows_.row(k));
        return b;
    }

    // Residual of v after elimination by the basis; zero iff v is a member.
    Vec reduce(Vec v) const {
        if (v.size() != ambient_) throw std::invalid_argument("Subspace::reduce: ambient mismatch");
        for (size_t r = 0; r < dim(); ++r) {
            const Scalar& f = v[pivots_[r]];
            if (f.is_zero()) continue;
            Scalar factor = f; // copy: v[pivot] mutates below
            for (size_t c = 0; c < ambient_; ++c)
                if (!rows_.at(r, c).is_zero()) v[c] -= factor * rows_.at(r, c);
        }
        return v;
    }

    bool contains(const Vec& v) const { return vec_is_zero(reduce(v)); }
    bool contains(const Subspace& other) const {
        for (size_t k = 0; k < other.dim(); ++k)
            if (!contains(other.basis_vector(k))) return false;
        return true;
    }

    friend Subspace sum(const Subspace& a, const Subspace& b) {
        if (a.ambient_ != b.ambient_) throw std::invalid_argument("Subspace::sum: ambient mismatch");
        auto vectors = a.basis();
        auto more = b.basis();
        vectors.insert(vectors.end(), more.begin(), more.end());
        return span(a.ambient_, vectors);
    }

    friend bool operator==(const Subspace& a, const Subspace& b) = default;

private:
    size_t ambient_;
    Matrix rows_{0, 0};
    std::vector<size_t> pivots_;
};

struct Quotient;

class LocalAlgebra {
public:
    // mul[i-1][j-1] lists the coordinates of e_i * e_j for 1 <= i, j <= N-1.
    using MulTable = std::vector<std::vector<Vec>>;

    static std::optional<ValidationIssue> check(size_t dim, const MulTable& mul) {
        size_t m = dim - 1;
        if (dim < 1) return ValidationIssue{"shape", {}, "dimension must be at least 1"};
        if (mul.size() != m) return ValidationIssue{"shape", {}, "multiplication table has wrong row count"};
        for (size_t i = 0; i < m; ++i) {
            if (mul[i].size() != m) return ValidationIssue{"shape", {i + 1}, "multiplication table has wrong column count"};
            for (size_t j = 0; j < m; ++j)
                if (mul[i][j].size() != dim)
                    return ValidationIssue{"shape", {i + 1, j + 1}, "product vector has wrong length"};
        }
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i + 1; j < m; ++j)
                if (mul[i][j] != mul[j][i])
                    return ValidationIssue{"commutativity", {i + 1, j + 1},
                                           "e_i*e_j and e_j*e_i disagree"};
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j)
                if (!mul[i][j][0].is_zero())
                    return ValidationIssue{"ideal", {i + 1, j + 1},
                                           "product of nilpotent basis vectors leaves their span"};

        auto mult_basis = [&](const Vec& u, size_t j) {
            Vec r(dim);
            vec_add_scaled(r, u[0], basis_vec(dim, j + 1));
            for (size_t i = 0; i < m; ++i) vec_add_scaled(r, u[i + 1], mul[i][j]);
            return r;
        };
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j)
                for (size_t k = 0; k < m; ++k)
                    if (mult_basis(mul[i][j], k) != mult_basis(mul[j][k], i))
                        return ValidationIssue{"associativity", {i + 1, j + 1, k + 1},
                                               "(e_i*e_j)*e_k differs from e_i*(e_j*e_k)"};

        // Nilpotency of m via the power filtration; must hit zero within dim steps.
        std::vector<Vec> gens;
        for (size_t i = 1; i < dim; ++i) gens.push_back(basis_vec(dim, i));
        Subspace power = Subspace::span(dim, gens);
        for (size_t step = 0; step < dim && !power.is_zero(); ++step) {
            std::vector<Vec> next;
            for (const auto& b : power.basis())
                for (size_t j = 0; j < m; ++j) next.push_back(mult_basis(b, j));
            Subspace np = Subspace::span(dim, next);
            if (np == power)
                return ValidationIssue{"nilpotency", {}, "power filtration of the span of e_1.. stalls above zero"};
            power = std::move(np);
        }
        if (!power.is_zero())
            return ValidationIssue{"nilpotency", {}, "span of e_1.. is not nilpotent"};
        return std::nullopt;
    }

    static LocalAlgebra create(size_t dim, MulTable mul, std::string name = "") {
        if (auto issue = check(dim, mul)) throw ValidationError(*issue);
        LocalAlgebra a;
        a.dim_ = dim;
        a.name_ = std::move(name);
        a.table_ = std::move(mul);
        return a;
    }

    size_t dim() const { return dim_; }
    const std::string& name() const { return name_; }
    const MulTable& table() const { return table_; }

    // e_i * e_j for 1 <= i, j <= N-1.
    const Vec& basis_product(size_t i, size_t j) const { return table_[i - 1][j - 1]; }

    Vec multiply(const Vec& u, const Vec& v) const {
        if (u.size() != dim_ || v.size() != dim_)
            throw std::invalid_argument("LocalAlgebra::multiply: wrong coordinate length");
        Vec r(dim_);
        vec_add_scaled(r, u[0], v);
        for (size_t i = 1; i < dim_; ++i) {
            if (u[i].is_zero()) continue;
            vec_add_scaled(r, u[i] * v[0], basis_vec(dim_, i));
            for (size_t j = 1; j < dim_; ++j) {
                Scalar f = u[i] * v[j];
                if (!f.is_zero()) vec_add_scaled(r, f, basis_product(i, j));
            }
        }
        return r;
    }

    // Matrix of multiplication by u acting on coordinates (column j = u * e_j).
    Matrix mult_matrix(const Vec& u) const {
        Matrix mm(dim_, dim_);
        for (size_t j = 0; j < dim_; ++j) {
            Vec col = multiply(u, basis_vec(dim_, j));
            for (size_t i = 0; i < dim_; ++i) mm.at(i, j) = col[i];
        }
        return mm;
    }

    Subspace maximal_ideal() const {
        std::vector<Vec> gens;
        for (size_t i = 1; i < dim_; ++i) gens.push_back(basis_vec(dim_, i));
        return Subspace::span(dim_, gens);
    }

    // m^1 (>= m^2 >= ...), ending at the first zero power.
    std::vector<Subspace> ideal_filtration() const {
        std::vector<Subspace> chain;
        Subspace power = maximal_ideal();
        chain.push_back(power);
        while (!chain.back().is_zero()) {
            std::vector<Vec> next;
            for (const auto& b : chain.back().basis())
                for (size_t j = 1; j < dim_; ++j) next.push_back(multiply(b, basis_vec(dim_, j)));
            chain.push_back(Subspace::span(dim_, next));
        }
        return chain;
    }

    // Does the unital subalgebra generated by the given elements exhaust R?
    bool generates(const std::vector<Vec>& elements) const {
        std::vector<Vec> seed = elements;
        seed.push_back(basis_vec(dim_, 0));
        Subspace sub = Subspace::span(dim_, seed);
        while (true) {
            std::vector<Vec> next = sub.basis();
            for (const auto& g : elements)
                for (const auto& b : sub.basis()) next.push_back(multiply(g, b));
            Subspace grown = Subspace::span(dim_, next);
            if (grown == sub) break;
            sub = std::move(grown);
        }
        return sub.dim() == dim_;
    }

    bool is_ideal(const Subspace& s) const {
        for (const auto& b : s.basis())
            for (size_t j = 1; j < dim_; ++j)
                if (!s.contains(multiply(b, basis_vec(dim_, j)))) return false;
        return true;
    }

    // Largest ideal of R contained in the subspace W (of m): the terminal
    // space of I_0 = W, I_{k+1} = { x in I_k : x*m inside I_k }.
    Subspace largest_ideal_in(const Subspace& w) const {
        if (w.ambient() != dim_) throw std::invalid_argument("largest_ideal_in: ambient mismatch");
        Subspace current = w;
        while (true) {
            size_t d = current.dim();
            if (d == 0) return current;
            auto basis = current.basis();
            // Rows of conditions on coefficients alpha: sum_i alpha_i * reduce(b_i e_j) = 0.
            size_t cond_rows = (dim_ - 1) * dim_;
            Matrix cond(cond_rows, d);
            for (size_t i = 0; i < d; ++i) {
                for (size_t j = 1; j < dim_; ++j) {
                    Vec res = current.reduce(multiply(basis[i], basis_vec(dim_, j)));
                    for (size_t c = 0; c < dim_; ++c) cond.at((j - 1) * dim_ + c, i) = res[c];
                }
            }
            auto kernel = cond.kernel_basis();
            std::vector<Vec> next;
            for (const auto& alpha : kernel) {
                Vec v(dim_);
                for (size_t i = 0; i < d; ++i) vec_add_scaled(v, alpha[i], basis[i]);
                next.push_back(std::move(v));
            }
            Subspace refined = Subspace::span(dim_, next);
            if (refined == current) return current;
            current = std::move(refined);
        }
    }

    Quotient quotient(const Subspace& ideal) const;

private:
    size_t dim_ = 0;
    std::string name_;
    MulTable table_;
};

// Quotient algebra R/I together with the coordinate bookkeeping: the quotient
// basis is the set of non-pivot coordinates of I, so `projection * section`
// is the identity on quotient coordinates.
struct Quotient {
    LocalAlgebra algebra;
    std::vector<size_t> kept;    // original coordinate indices surviving in R/I
    std::vector<size_t> dropped; // pivot coordinates of I
    Matrix projection;           // kept.size() x N
    Matrix section;              // N x kept.size(), coordinate inclusion
};

inline Quotient LocalAlgebra::quotient(const Subspace& ideal) const {
    if (ideal.ambient() != dim_) throw std::invalid_argument("quotient: ambient mismatch");
    if (!is_ideal(ideal)) throw std::domain_error("quotient: subspace is not an ideal");
    if (!maximal_ideal().contains(ideal)) throw std::domain_error("quotient: ideal not contained in the maximal ideal");

    std::vector<bool> pivot(dim_, false);
    for (size_t p : ideal.pivots()) pivot[p] = true;
    std::vector<size_t> kept, dropped;
    for (size_t c = 0; c < dim_; ++c) (pivot[c] ? dropped : kept).push_back(c);

    size_t qdim = kept.size();
    Matrix proj(qdim, dim_), sect(dim_, qdim);
    for (size_t j = 0; j < dim_; ++j) {
        Vec res = ideal.reduce(basis_vec(dim_, j));
        for (size_t k = 0; k < qdim; ++k) proj.at(k, j) = res[kept[k]];
    }
    for (size_t k = 0; k < qdim; ++k) sect.at(kept[k], k) = Scalar::one();

    MulTable mul(qdim - 1, std::vector<Vec>(qdim - 1));
    for (size_t i = 1; i < qdim; ++i)
        for (size_t j = 1; j < qdim; ++j)
            mul[i - 1][j - 1] = proj.apply(multiply(basis_vec(dim_, kept[i]), basis_vec(dim_, kept[j])));

    std::string qname = name_.empty() ? std::string() : name_ + "/I";
    return Quotient{LocalAlgebra::create(qdim, std::move(mul), qname), std::move(kept),
                    std::move(dropped), std::move(proj), std::move(sect)};
}

// A local algebra with a distinguished generating hyperplane W of m and a
// complement line spanned by `complement`; pi reads off the complement
// coordinate of an element of m.
class PointedPair {
public:
    PointedPair(LocalAlgebra algebra, std::vector<Vec> w_basis, Vec complement)
        : algebra_(std::move(algebra)), w_basis_(std::move(w_basis)), complement_(std::move(complement)) {
        size_t nn = algebra_.dim();
        if (nn < 3)
            throw ValidationError({"pair-shape", {}, "a pointed pair needs dimension at least 3"});
        if (w_basis_.size() != nn - 2)
            throw ValidationError({"pair-shape", {}, "W must have dimension N-2"});
        for (size_t k = 0; k < w_basis_.size(); ++k) {
            if (w_basis_[k].size() != nn)
                throw ValidationError({"pair-shape", {k}, "W vector has wrong coordinate length"});
            if (!w_basis_[k][0].is_zero())
                throw ValidationError({"pair-membership", {k}, "W vector lies outside the maximal ideal"});
        }
        if (complement_.size() != nn)
            throw ValidationError({"pair-shape", {}, "complement vector has wrong coordinate length"});
        if (!complement_[0].is_zero())
            throw ValidationError({"pair-membership", {}, "complement lies outside the maximal ideal"});

        w_ = Subspace::span(nn, w_basis_);
        if (w_.dim() != nn - 2)
            throw ValidationError({"pair-independence", {}, "W basis vectors are dependent"});
        std::vector<Vec> all = w_basis_;
        all.push_back(complement_);
        if (Subspace::span(nn, all).dim() != nn - 1)
            throw ValidationError({"pair-independence", {}, "complement lies inside W"});
        if (!algebra_.generates(w_basis_))
            throw ValidationError({"pair-generation", {}, "W does not generate the algebra"});

        // pi = last row of the inverse of the (basis | complement) matrix on
        // the m-coordinates, extended by zero on the unit coordinate.
        size_t m = nn - 1;
        Matrix b(m, m);
        for (size_t col = 0; col < m - 1; ++col)
            for (size_t r = 0; r < m; ++r) b.at(r, col) = w_basis_[col][r + 1];
        for (size_t r = 0; r < m; ++r) b.at(r, m - 1) = complement_[r + 1];
        Matrix binv = b.inverse();
        pi_row_.assign(nn, Scalar::zero());
        for (size_t r = 0; r < m; ++r) pi_row_[r + 1] = binv.at(m - 1, r);
    }

    const LocalAlgebra& algebra() const { return algebra_; }
    size_t dim() const { return algebra_.dim(); }
    size_t hyperplane_dim() const { return algebra_.dim() - 2; }
    const std::vector<Vec>& w_basis() const { return w_basis_; }
    const Vec& complement() const { return complement_; }
    const Subspace& w() const { return w_; }

    // Complement coordinate of an element of m.
    Scalar pi(const Vec& v) const {
        if (v.size() != algebra_.dim()) throw std::invalid_argument("pi: wrong coordinate length");
        if (!v[0].is_zero()) throw std::domain_error("pi: element lies outside the maximal ideal");
        Scalar acc;
        for (size_t k = 1; k < v.size(); ++k)
            if (!v[k].is_zero()) acc += pi_row_[k] * v[k];
        return acc;
    }

    // Largest d with m^d not inside W. At least 1; at least 2 whenever the
    // pair validates, since a generating W cannot absorb m^2.
    unsigned degree() const {
        auto chain = algebra_.ideal_filtration();
        unsigned d = 0;
        for (size_t k = 0; k < chain.size(); ++k) {
            bool inside = true;
            for (const auto& b : chain[k].basis())
                if (!w_.contains(b)) {
                    inside = false;
                    break;
                }
            if (inside) break;
            d = static_cast<unsigned>(k + 1);
        }
        return d;
    }

private:
    LocalAlgebra algebra_;
    std::vector<Vec> w_basis_;
    Vec complement_;
    Subspace w_{0};
    Vec pi_row_;
};

// Pair induced on R/I when I is an ideal inside W: the images of W span the
// quotient hyperplane and the complement image stays a complement.
inline PointedPair quotient_pair(const PointedPair& pair, const Subspace& ideal) {
    for (const auto& b : ideal.basis())
        if (!pair.w().contains(b))
            throw std::domain_error("quotient_pair: ideal is not contained in W");
    Quotient q = pair.algebra().quotient(ideal);
    std::vector<Vec> images;
    for (const auto& wv : pair.w_basis()) images.push_back(q.projection.apply(wv));
    Subspace wq = Subspace::span(q.algebra.dim(), images);
    return PointedPair(q.algebra, wq.basis(), q.projection.apply(pair.complement()));
}

} // namespace addax

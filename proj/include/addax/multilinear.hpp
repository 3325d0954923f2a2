#pragma once

// Symmetric d-linear forms on a pointed local algebra and the invariance
// condition that characterizes hypersurface equations:
//
//   sum_k F(b_1, ..., a*b_k, ..., b_d) = 0   for all a in W, b_i in R.   (*)
//
// The distinguished form of a pair evaluates a basis tuple with k unit
// entries to (-1)^k * k! * (d-k-1)! times the complement coordinate of the
// product of the non-unit entries, and to 0 when every entry is the unit.

#include "addax/algebra.hpp"
#include "addax/polynomial.hpp"
#include "addax/scalar.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace addax {

using MultiIndex = std::vector<unsigned>; // sorted ascending, length = arity

class SymForm {
public:
    SymForm() = default;
    SymForm(size_t nvars, unsigned arity) : nvars_(nvars), arity_(arity) {}

    size_t nvars() const { return nvars_; }
    unsigned arity() const { return arity_; }
    const std::map<MultiIndex, Scalar>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }

    void set(MultiIndex idx, const Scalar& value) {
        normalize(idx);
        if (value.is_zero())
            entries_.erase(idx);
        else
            entries_[idx] = value;
    }

    Scalar entry(MultiIndex idx) const {
        normalize(idx);
        auto it = entries_.find(idx);
        return it == entries_.end() ? Scalar::zero() : it->second;
    }

    friend bool operator==(const SymForm& a, const SymForm& b) = default;

    // Full multilinear evaluation on arity-many coordinate vectors.
    Scalar evaluate(const std::vector<Vec>& args) const {
        if (args.size() != arity_) throw std::invalid_argument("SymForm::evaluate: wrong argument count");
        for (const auto& a : args)
            if (a.size() != nvars_) throw std::invalid_argument("SymForm::evaluate: wrong coordinate length");
        Scalar total;
        for (const auto& [idx, value] : entries_) {
            // Sum the products over all distinct orderings of the index multiset.
            MultiIndex perm = idx;
            Scalar orderings;
            do {
                Scalar p = Scalar::one();
                for (size_t slot = 0; slot < perm.size() && !p.is_zero(); ++slot)
                    p *= args[slot][perm[slot]];
                orderings += p;
            } while (std::next_permutation(perm.begin(), perm.end()));
            total += value * orderings;
        }
        return total;
    }

    // The associated homogeneous polynomial f(x) = F(x, ..., x).
    HomPoly to_polynomial() const {
        HomPoly f(nvars_, arity_);
        Rational dfact = factorial(arity_);
        for (const auto& [idx, value] : entries_) {
            Expo e(nvars_, 0);
            for (unsigned v : idx) e[v] += 1;
            Rational mults = 1;
            for (unsigned m : e) mults *= factorial(m);
            f.add_term(e, Scalar(dfact / mults) * value);
        }
        return f;
    }

private:
    void normalize(MultiIndex& idx) const {
        if (idx.size() != arity_) throw std::invalid_argument("SymForm: wrong multi-index length");
        for (unsigned v : idx)
            if (v >= nvars_) throw std::invalid_argument("SymForm: index out of range");
        std::sort(idx.begin(), idx.end());
    }

    size_t nvars_ = 0;
    unsigned arity_ = 0;
    std::map<MultiIndex, Scalar> entries_;
};

// Unique symmetric form with F(x,..,x) = f(x): the entry at a multiset with
// variable multiplicities (m_0..m_{N-1}) is coeff * prod(m_v!) / d!.
inline SymForm polarize(const HomPoly& f) {
    SymForm form(f.nvars(), f.degree());
    Rational dfact = factorial(f.degree());
    for (const auto& [e, coeff] : f.terms()) {
        MultiIndex idx;
        Rational mults = 1;
        for (unsigned v = 0; v < e.size(); ++v) {
            for (unsigned j = 0; j < e[v]; ++j) idx.push_back(v);
            mults *= factorial(e[v]);
        }
        form.set(std::move(idx), Scalar(mults / dfact) * coeff);
    }
    return form;
}

inline HomPoly form_to_polynomial(const SymForm& form) { return form.to_polynomial(); }

inline Scalar evaluate_form(const SymForm& form, const std::vector<Vec>& args) {
    return form.evaluate(args);
}

struct InvarianceWitness {
    size_t w_index;   // which W basis vector breaks (*)
    MultiIndex tuple; // basis tuple on which the sum is nonzero
    Scalar value;
};

namespace detail {

// Enumerates sorted basis tuples; by symmetry of F and of the sum in (*),
// checking multisets is exhaustive.
template <typename Fn>
void for_each_multiset(size_t nvars, unsigned arity, Fn&& fn) {
    MultiIndex tuple(arity, 0);
    while (true) {
        fn(const_cast<const MultiIndex&>(tuple));
        size_t pos = arity;
        while (pos > 0 && tuple[pos - 1] == nvars - 1) --pos;
        if (pos == 0) break;
        unsigned v = ++tuple[pos - 1];
        for (size_t k = pos; k < arity; ++k) tuple[k] = v;
    }
}

} // namespace detail

// Verifies (*) over all basis tuples; unit_filter, when set, restricts to
// tuples whose number of unit entries equals the given count.
inline std::optional<InvarianceWitness> check_invariance(const SymForm& form, const PointedPair& pair,
                                                         std::optional<unsigned> unit_filter = std::nullopt) {
    size_t nn = pair.dim();
    if (form.nvars() != nn) throw std::invalid_argument("check_invariance: arity mismatch with algebra");
    const auto& w = pair.w_basis();
    std::optional<InvarianceWitness> witness;
    detail::for_each_multiset(nn, form.arity(), [&](const MultiIndex& tuple) {
        if (witness) return;
        if (unit_filter) {
            unsigned units = 0;
            for (unsigned v : tuple)
                if (v == 0) ++units;
            if (units != *unit_filter) return;
        }
        for (size_t wi = 0; wi < w.size(); ++wi) {
            Scalar sum;
            for (size_t slot = 0; slot < tuple.size(); ++slot) {
                Vec prod = pair.algebra().multiply(w[wi], basis_vec(nn, tuple[slot]));
                MultiIndex idx = tuple;
                for (size_t v = 0; v < nn; ++v) {
                    if (prod[v].is_zero()) continue;
                    idx[slot] = static_cast<unsigned>(v);
                    sum += prod[v] * form.entry(idx);
                }
            }
            if (!sum.is_zero()) {
                witness = InvarianceWitness{wi, tuple, sum};
                return;
            }
        }
    });
    return witness;
}

// Definition of an invariant form: vanishes on the all-units tuple, does not
// vanish identically on the maximal ideal, and satisfies (*).
inline bool is_invariant_form(const SymForm& form, const PointedPair& pair) {
    if (form.nvars() != pair.dim()) throw std::invalid_argument("is_invariant_form: arity mismatch");
    if (!form.entry(MultiIndex(form.arity(), 0)).is_zero()) return false;
    bool restriction_nonzero = false;
    for (const auto& [idx, value] : form.entries())
        if (idx.front() != 0) { // indices sorted: no unit slot at all
            restriction_nonzero = true;
            break;
        }
    if (!restriction_nonzero) return false;
    return !check_invariance(form, pair).has_value();
}

// The distinguished invariant form of a pair of degree d >= 2.
inline SymForm invariant_form(const PointedPair& pair) {
    unsigned d = pair.degree();
    if (d < 2) throw std::domain_error("invariant_form: pair degree must be at least 2");
    size_t nn = pair.dim();
    SymForm form(nn, d);
    detail::for_each_multiset(nn, d, [&](const MultiIndex& tuple) {
        unsigned units = 0;
        for (unsigned v : tuple)
            if (v == 0) ++units;
        if (units == d) return;
        Vec prod = basis_vec(nn, 0);
        for (unsigned v : tuple)
            if (v != 0) prod = pair.algebra().multiply(prod, basis_vec(nn, v));
        Scalar value = pair.pi(prod);
        if (value.is_zero()) return;
        Scalar sign = (units % 2 == 0) ? Scalar::one() : Scalar(-1);
        form.set(tuple, sign * Scalar(factorial(units) * factorial(d - units - 1)) * value);
    });
    return form;
}

// Polarized product of the associated polynomials.
inline SymForm product_form(const SymForm& a, const SymForm& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("product_form: arity mismatch");
    return polarize(a.to_polynomial() * b.to_polynomial());
}

// Equation of the orbit-closure hypersurface, normalized so the first
// coefficient in canonical term order is 1.
inline HomPoly hypersurface_equation(const PointedPair& pair) {
    HomPoly f = invariant_form(pair).to_polynomial();
    if (f.is_zero()) throw std::logic_error("hypersurface_equation: distinguished form vanished");
    return f.leading_coefficient().inverse() * f;
}

} // namespace addax

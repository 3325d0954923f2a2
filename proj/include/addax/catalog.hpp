#pragma once

// Built-in families of pointed local algebras. Each entry carries the
// algebra; families that admit a distinguished generating hyperplane also
// carry the pointed pair in its standard basis.

#include "addax/algebra.hpp"
#include "addax/matrix.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace addax {

struct CatalogEntry {
    LocalAlgebra algebra;
    std::optional<PointedPair> pair;

    const PointedPair& require_pair() const {
        if (!pair) throw std::domain_error("catalog entry '" + algebra.name() + "' has no pointed pair");
        return *pair;
    }
};

namespace detail {

inline LocalAlgebra::MulTable empty_table(size_t dim) {
    return LocalAlgebra::MulTable(dim - 1, std::vector<Vec>(dim - 1, Vec(dim)));
}

} // namespace detail

// K[x]/(x^k), basis e_i = x^i; for k >= 3 the pair W = <x..x^(k-2)>,
// complement x^(k-1).
inline CatalogEntry make_truncated(unsigned k) {
    if (k < 2) throw std::invalid_argument("truncated: order must be at least 2");
    size_t dim = k;
    auto mul = detail::empty_table(dim);
    for (size_t i = 1; i < dim; ++i)
        for (size_t j = 1; j < dim; ++j)
            if (i + j < dim) mul[i - 1][j - 1][i + j] = Scalar::one();
    LocalAlgebra a = LocalAlgebra::create(dim, std::move(mul), "truncated:" + std::to_string(k));
    if (k == 2) return {std::move(a), std::nullopt};
    std::vector<Vec> w;
    for (size_t i = 1; i + 1 < dim; ++i) w.push_back(basis_vec(dim, i));
    PointedPair pair(a, std::move(w), basis_vec(dim, dim - 1));
    return {std::move(a), std::move(pair)};
}

// K[x_1..x_n]/(x_i x_j): every product of generators vanishes. No generating
// hyperplane exists for n >= 2, so the entry is algebra-only.
inline CatalogEntry make_square_zero(unsigned n) {
    if (n < 1) throw std::invalid_argument("square_zero: need at least one generator");
    size_t dim = n + 1;
    LocalAlgebra a = LocalAlgebra::create(dim, detail::empty_table(dim), "square_zero:" + std::to_string(n));
    return {std::move(a), std::nullopt};
}

// e_i e_j = delta_ij * e_(n+1) for 1 <= i, j <= n and e_(n+1) annihilates the
// maximal ideal. W = <e_1..e_n>, complement e_(n+1); the invariant quadric is
// nondegenerate.
inline CatalogEntry make_quadric_nondegenerate(unsigned n) {
    if (n < 1) throw std::invalid_argument("quadric_nondegenerate: need n >= 1");
    size_t dim = n + 2;
    auto mul = detail::empty_table(dim);
    for (size_t i = 1; i <= n; ++i) mul[i - 1][i - 1][n + 1] = Scalar::one();
    LocalAlgebra a = LocalAlgebra::create(dim, std::move(mul), "quadric_nondegenerate:" + std::to_string(n));
    std::vector<Vec> w;
    for (size_t i = 1; i <= n; ++i) w.push_back(basis_vec(dim, i));
    PointedPair pair(a, std::move(w), basis_vec(dim, n + 1));
    return {std::move(a), std::move(pair)};
}

// Corank-one family: on V = <e_1..e_(n-1)> multiplication is
// e_i e_j = lambda_ij * e_n + delta_ij * e_(n+1), with e_n and e_(n+1)
// annihilating m. W = <e_1..e_n>, complement e_(n+1). lambda must be
// symmetric of size (n-1) x (n-1).
inline CatalogEntry make_corank_one(unsigned n, const Matrix& lambda) {
    if (n < 2) throw std::invalid_argument("corank_one: need n >= 2");
    size_t v = n - 1;
    if (lambda.rows() != v || lambda.cols() != v)
        throw std::invalid_argument("corank_one: lambda must be (n-1) x (n-1)");
    if (lambda != lambda.transpose())
        throw std::invalid_argument("corank_one: lambda must be symmetric");
    size_t dim = n + 2;
    auto mul = detail::empty_table(dim);
    for (size_t i = 1; i <= v; ++i)
        for (size_t j = 1; j <= v; ++j) {
            mul[i - 1][j - 1][n] = lambda.at(i - 1, j - 1);
            if (i == j) mul[i - 1][j - 1][n + 1] = Scalar::one();
        }
    LocalAlgebra a = LocalAlgebra::create(dim, std::move(mul), "corank_one:" + std::to_string(n));
    std::vector<Vec> w;
    for (size_t i = 1; i <= n; ++i) w.push_back(basis_vec(dim, i));
    PointedPair pair(a, std::move(w), basis_vec(dim, n + 1));
    return {std::move(a), std::move(pair)};
}

inline CatalogEntry make_corank_one(unsigned n) {
    return make_corank_one(n, Matrix(n - 1, n - 1));
}

// K[e1,e2]/(e1^3, e1 e2, e2^2) with basis (1, e1, e2, e1^2): the n = 2
// corank-one algebra whose hyperplane multiplication splits off.
inline CatalogEntry make_corank_one_n2_split() {
    auto mul = detail::empty_table(4);
    mul[0][0][3] = Scalar::one(); // e1*e1 = e3
    LocalAlgebra a = LocalAlgebra::create(4, std::move(mul), "corank_one_n2_split");
    PointedPair pair(a, {basis_vec(4, 1), basis_vec(4, 2)}, basis_vec(4, 3));
    return {std::move(a), std::move(pair)};
}

// K[x]/(x^4) with basis (1, x, x^3, x^2): W = <x, x^3> is a generating
// hyperplane whose invariant quadric has corank one.
inline CatalogEntry make_corank_one_n2_chain() {
    auto mul = detail::empty_table(4);
    mul[0][0][3] = Scalar::one(); // e1*e1 = e3 (= x^2)
    mul[0][2][2] = Scalar::one(); // e1*e3 = e2 (= x^3)
    mul[2][0][2] = Scalar::one();
    LocalAlgebra a = LocalAlgebra::create(4, std::move(mul), "corank_one_n2_chain");
    PointedPair pair(a, {basis_vec(4, 1), basis_vec(4, 2)}, basis_vec(4, 3));
    return {std::move(a), std::move(pair)};
}

// Resolves "<family>" or "<family>:<n>" names; lambda applies to corank_one.
inline CatalogEntry catalog(const std::string& spec, const std::optional<Matrix>& lambda = std::nullopt) {
    std::string family = spec;
    std::optional<unsigned> arg;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        family = spec.substr(0, colon);
        std::string tail = spec.substr(colon + 1);
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("catalog: malformed parameter in '" + spec + "'");
        arg = static_cast<unsigned>(std::stoul(tail));
    }
    auto need_arg = [&]() {
        if (!arg) throw std::invalid_argument("catalog: '" + family + "' needs a numeric parameter");
        return *arg;
    };
    if (lambda && family != "corank_one")
        throw std::invalid_argument("catalog: only corank_one accepts a lambda matrix");
    if (family == "truncated") return make_truncated(need_arg());
    if (family == "square_zero") return make_square_zero(need_arg());
    if (family == "quadric_nondegenerate") return make_quadric_nondegenerate(need_arg());
    if (family == "corank_one") {
        unsigned n = need_arg();
        return lambda ? make_corank_one(n, *lambda) : make_corank_one(n);
    }
    if (family == "corank_one_n2_split" && !arg) return make_corank_one_n2_split();
    if (family == "corank_one_n2_chain" && !arg) return make_corank_one_n2_chain();
    throw std::invalid_argument("catalog: unknown entry '" + spec + "'");
}

inline std::vector<std::string> catalog_families() {
    return {
        "truncated:<k>              K[x]/(x^k), pair for k >= 3",
        "square_zero:<n>            K[x1..xn]/(xi*xj), algebra only",
        "quadric_nondegenerate:<n>  nondegenerate quadric pair, dim n+2",
        "corank_one:<n>             corank-one quadric pair, dim n+2 (accepts --lambda)",
        "corank_one_n2_split        K[e1,e2]/(e1^3, e1*e2, e2^2)",
        "corank_one_n2_chain        K[x]/(x^4) pointed by W = <x, x^3>",
    };
}

} // namespace addax

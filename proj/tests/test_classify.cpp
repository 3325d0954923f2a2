#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

#include <random>
#include <string>
#include <vector>

using namespace addax;
using namespace testsupport;

namespace {

// dim 3, e1*e1 = c*e2: the conic pair with a rescaled product.
PointedPair scaled_square_pair(const Scalar& c) {
    LocalAlgebra::MulTable mul(2, std::vector<Vec>(2, Vec(3)));
    mul[0][0][2] = c;
    return PointedPair(LocalAlgebra::create(3, std::move(mul)), {basis_vec(3, 1)},
                       basis_vec(3, 2));
}

// dim 4, e1*e1 = c*e3, W = <e1, e2>: corank-one with a rescaled product.
PointedPair corank_scaled_pair(const Scalar& c) {
    LocalAlgebra::MulTable mul(3, std::vector<Vec>(3, Vec(4)));
    mul[0][0][3] = c;
    return PointedPair(LocalAlgebra::create(4, std::move(mul)),
                       {basis_vec(4, 1), basis_vec(4, 2)}, basis_vec(4, 3));
}

// dim 5, e1*e1 = e4, W = <e1, e2, e3>: the form drops rank twice.
PointedPair cone_pair() {
    LocalAlgebra::MulTable mul(4, std::vector<Vec>(4, Vec(5)));
    mul[0][0][4] = Scalar(1);
    return PointedPair(LocalAlgebra::create(5, std::move(mul)),
                       {basis_vec(5, 1), basis_vec(5, 2), basis_vec(5, 3)}, basis_vec(5, 4));
}

// Basis change safe for corank-one pairs: rotations among the non-kernel
// hyperplane columns, rational rescales of the kernel and top columns, and a
// shear of the top column. Keeps every extraction pivot inside the field.
ChangeOfBasis corank_conjugate(size_t n, std::mt19937_64& rng) {
    size_t nn = n + 2;
    Matrix c = Matrix::identity(nn);
    if (n >= 3) {
        std::uniform_int_distribution<size_t> pick(1, n - 1);
        for (int r = 0; r < 2; ++r) {
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
    Scalar kscale(random_rational(rng, 1, 5));
    for (size_t row = 0; row < nn; ++row) c.at(row, n) *= kscale;
    Scalar gamma(random_rational(rng, 1, 5));
    for (size_t row = 0; row < nn; ++row) c.at(row, nn - 1) *= gamma;
    for (size_t i = 1; i < n; ++i) {
        Scalar s(random_rational(rng));
        for (size_t row = 0; row < nn; ++row) c.at(row, nn - 1) += s * c.at(row, i);
    }
    return ChangeOfBasis{c};
}

void check_certificate(const Matrix& first, const Matrix& second, const EquivalenceOutcome& out) {
    REQUIRE(out.verdict == Verdict::Equivalent);
    REQUIRE(out.certificate);
    const Certificate& cert = *out.certificate;
    CHECK(!cert.alpha.is_zero());
    REQUIRE(cert.similarity.invertible());
    Matrix rebuilt = cert.alpha * (cert.similarity * first * cert.similarity.inverse()) +
                     cert.beta * Matrix::identity(first.rows());
    CHECK(rebuilt == second);
}

LambdaData tfam(const Scalar& t) { return generic(diag({Scalar(0), Scalar(1), t})); }

Matrix ones1x1(const Scalar& v) {
    Matrix m(1, 1);
    m.at(0, 0) = v;
    return m;
}

} // namespace

TEST_CASE("gram matrices and ranks of bilinear diagnostics") {
    BilinearTriple t = BilinearTriple::from_pair(make_truncated(3).require_pair());
    Matrix expect(3, 3);
    expect.at(0, 2) = expect.at(2, 0) = Scalar(-1);
    expect.at(1, 1) = Scalar(1);
    CHECK(t.gram() == expect);
    CHECK(gram_matrix(t) == expect);
    CHECK(t.rank() == 3);
    CHECK(t.corank() == 0);

    BilinearTriple cone = BilinearTriple::from_pair(cone_pair());
    CHECK(cone.rank() == 3);
    CHECK(cone.corank() == 2);

    CHECK(BilinearTriple::from_pair(make_corank_one(3).require_pair()).corank() == 1);
}

TEST_CASE("bilinear diagnostics reject malformed input") {
    // degree-3 pair has no bilinear distinguished form
    CHECK_THROWS_AS(BilinearTriple::from_pair(make_truncated(4).require_pair()),
                    std::invalid_argument);

    PointedPair pair = make_truncated(3).require_pair();
    SymForm broken = invariant_form(pair);
    broken.set({2, 2}, Scalar(1)); // destroys invariance
    CHECK_THROWS_AS(BilinearTriple(pair, broken), std::invalid_argument);

    SymForm with_unit = invariant_form(pair);
    with_unit.set({0, 0}, Scalar(1));
    CHECK_THROWS_AS(BilinearTriple(pair, with_unit), std::invalid_argument);

    CHECK_THROWS_AS(BilinearTriple(pair, SymForm(4, 2)), std::invalid_argument);
    CHECK_THROWS_AS(BilinearTriple(pair, SymForm(3, 3)), std::invalid_argument);
}

TEST_CASE("changes of basis are validated") {
    CHECK_THROWS_AS(ChangeOfBasis{Matrix(2, 3)}, std::invalid_argument);
    Matrix scaled_unit = Matrix::identity(3);
    scaled_unit.at(0, 0) = Scalar(2);
    CHECK_THROWS_AS(ChangeOfBasis{scaled_unit}, std::invalid_argument);
    Matrix leaky = Matrix::identity(3);
    leaky.at(1, 0) = Scalar(1);
    CHECK_THROWS_AS(ChangeOfBasis{leaky}, std::invalid_argument);
    Matrix singular = Matrix::identity(3);
    singular.at(2, 2) = Scalar(0);
    CHECK_THROWS_AS(ChangeOfBasis{singular}, std::invalid_argument);
    CHECK_NOTHROW(ChangeOfBasis{Matrix::identity(3)});
}

TEST_CASE("conjugation moves the gram matrix congruently") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 5; ++trial) {
        PointedPair pair = make_quadric_nondegenerate(3).require_pair();
        ChangeOfBasis change = unit_fixing_conjugate(3, rng);
        PointedPair conj = conjugate_pair(pair, change);
        Matrix g = BilinearTriple::from_pair(pair).gram();
        Matrix gc = BilinearTriple::from_pair(conj).gram();
        CHECK(gc == change.matrix.transpose() * g * change.matrix);
        CHECK(conj.degree() == 2);
    }
    // columns leaving the maximal ideal are refused
    Matrix bad = Matrix::identity(5);
    bad.at(0, 2) = Scalar(1);
    CHECK_THROWS_AS(
        conjugate_pair(make_quadric_nondegenerate(3).require_pair(), ChangeOfBasis{bad}),
        std::invalid_argument);
}

TEST_CASE("full-rank pairs collapse onto the quadric model") {
    for (unsigned n = 1; n <= 5; ++n) {
        PointedPair pair = make_quadric_nondegenerate(n).require_pair();
        auto canon = canonicalize_nondegenerate(BilinearTriple::from_pair(pair));
        REQUIRE(canon);
        CHECK(canon->scale == Scalar(-1));
        CHECK(canon->change.matrix == Matrix::identity(n + 2));
        CHECK(same_structure(canon->triple.pair().algebra(), pair.algebra()));
        CHECK(canon->triple.gram() == nondegenerate_target_gram(n));
    }
    auto conic = canonicalize_nondegenerate(
        BilinearTriple::from_pair(make_truncated(3).require_pair()));
    REQUIRE(conic);
    CHECK(conic->scale == Scalar(-1));
    CHECK(conic->change.matrix == Matrix::identity(3));
    CHECK(same_structure(conic->triple.pair().algebra(),
                         make_quadric_nondegenerate(1).algebra));
}

TEST_CASE("conjugated quadrics canonicalize back exactly") {
    std::mt19937_64 rng(47);
    for (unsigned n = 1; n <= 3; ++n) {
        PointedPair pair = make_quadric_nondegenerate(n).require_pair();
        for (int trial = 0; trial < 3; ++trial) {
            ChangeOfBasis change = unit_fixing_conjugate(n, rng);
            PointedPair conj = conjugate_pair(pair, change);
            auto canon = canonicalize_nondegenerate(BilinearTriple::from_pair(conj));
            REQUIRE(canon);
            CHECK(canon->scale == Scalar(-1));
            CHECK(canon->change.matrix == change.matrix.inverse());
            CHECK(same_structure(canon->triple.pair().algebra(), pair.algebra()));
            CHECK(canon->triple.gram() == nondegenerate_target_gram(n));
        }
    }
}

TEST_CASE("canonicalization stops at square roots outside the field") {
    auto missing = canonicalize_nondegenerate(
        BilinearTriple::from_pair(scaled_square_pair(Scalar(3))));
    CHECK(!missing.has_value()); // needs sqrt(3)

    auto imaginary = canonicalize_nondegenerate(
        BilinearTriple::from_pair(scaled_square_pair(Scalar(-1))));
    REQUIRE(imaginary); // sqrt(-1) lives in the field
    CHECK(imaginary->scale == Scalar(-1));
    CHECK(imaginary->change.matrix.at(1, 1) == Scalar(0, -1));
    CHECK(same_structure(imaginary->triple.pair().algebra(),
                         make_quadric_nondegenerate(1).algebra));
    CHECK(imaginary->triple.gram() == nondegenerate_target_gram(1));
}

TEST_CASE("corank-one extraction recovers the residual matrix") {
    struct Case {
        unsigned n;
        Matrix lam;
    };
    const Case cases[] = {
        {3, Matrix(2, 2)},
        {3, diag({Scalar(0), Scalar(1)})},
        {3, nilpotent2()},
        {4, diag({Scalar(0), Scalar(1), Scalar(2)})},
        {4, diag({Scalar(0), Scalar(1), Scalar(3)})},
        {5, diag({Scalar(1), Scalar(2), Scalar(3), Scalar(4)})},
    };
    for (const auto& c : cases) {
        CatalogEntry entry = make_corank_one(c.n, c.lam);
        auto ext = extract_lambda(BilinearTriple::from_pair(entry.require_pair()));
        REQUIRE(ext);
        CHECK(ext->data.case_tag == CorankCase::GenericNGe3);
        CHECK(ext->data.lam == c.lam);
        CHECK(ext->change.matrix == Matrix::identity(c.n + 2));
        CHECK(same_structure(ext->canonical.pair().algebra(), entry.algebra));
        CHECK(ext->canonical.gram() == corank_one_target_gram(c.n));
    }

    auto split = extract_lambda(BilinearTriple::from_pair(make_corank_one_n2_split().require_pair()));
    REQUIRE(split);
    CHECK(split->data.case_tag == CorankCase::N2Split);
    CHECK(split->data.lam == Matrix(1, 1));
    CHECK(split->change.matrix == Matrix::identity(4));

    auto chain = extract_lambda(BilinearTriple::from_pair(make_corank_one_n2_chain().require_pair()));
    REQUIRE(chain);
    CHECK(chain->data.case_tag == CorankCase::N2Chain);
    CHECK(chain->data.lam == Matrix(1, 1));
    CHECK(chain->change.matrix == Matrix::identity(4));

    // a scaled split product is absorbed into the top vector, not Lambda
    Matrix two = ones1x1(Scalar(2));
    auto scaled = extract_lambda(BilinearTriple::from_pair(make_corank_one(2, two).require_pair()));
    REQUIRE(scaled);
    CHECK(scaled->data.case_tag == CorankCase::N2Split);
    CHECK(scaled->data.lam == Matrix(1, 1));
    CHECK(same_structure(scaled->canonical.pair().algebra(),
                         make_corank_one_n2_split().algebra));
}

TEST_CASE("extraction edge cases") {
    // wrong corank in either direction
    CHECK_THROWS_AS(extract_lambda(BilinearTriple::from_pair(
                        make_quadric_nondegenerate(2).require_pair())),
                    std::invalid_argument);
    CHECK_THROWS_AS(extract_lambda(BilinearTriple::from_pair(cone_pair())),
                    std::invalid_argument);
    CHECK_THROWS_AS(canonicalize_nondegenerate(BilinearTriple::from_pair(
                        make_corank_one(3).require_pair())),
                    std::invalid_argument);
    CHECK_THROWS_AS(canonicalize_nondegenerate(BilinearTriple::from_pair(cone_pair())),
                    std::invalid_argument);

    // orthonormalization pivot needs sqrt(3): no residual matrix over the field
    CHECK(!extract_lambda(BilinearTriple::from_pair(corank_scaled_pair(Scalar(3)))).has_value());
    // but sqrt(-1) is available
    CHECK(extract_lambda(BilinearTriple::from_pair(corank_scaled_pair(Scalar(-1)))).has_value());
}

TEST_CASE("characteristic polynomials") {
    CHECK(char_poly(diag({Scalar(1), Scalar(2)})) ==
          UPoly({Scalar(2), Scalar(-3), Scalar(1)}));
    CHECK(char_poly(Matrix(2, 2)) == UPoly({Scalar(0), Scalar(0), Scalar(1)}));
    CHECK(char_poly(nilpotent2()) == UPoly({Scalar(0), Scalar(0), Scalar(1)}));

    UPoly f({Scalar(5), Scalar(-2), Scalar(0), Scalar(1)}); // x^3 - 2x + 5
    CHECK(char_poly(companion(f)) == f);

    CHECK(char_poly(sym3(Scalar(3), Scalar(4), Scalar(0, 5))) ==
          UPoly({Scalar(0, -120), Scalar(0), Scalar(0), Scalar(1)}));

    CHECK_THROWS_AS(char_poly(Matrix(2, 3)), std::invalid_argument);
}

TEST_CASE("invariant factors of the characteristic matrix") {
    UPoly x({Scalar(0), Scalar(1)});
    UPoly x2({Scalar(0), Scalar(0), Scalar(1)});

    Matrix j2(2, 2);
    j2.at(0, 1) = Scalar(1);
    CHECK(invariant_factors(j2) == std::vector<UPoly>{x2});
    CHECK(invariant_factors(nilpotent2()) == std::vector<UPoly>{x2});
    CHECK(invariant_factors(Matrix(2, 2)) == std::vector<UPoly>{x, x});

    CHECK(invariant_factors(diag({Scalar(1), Scalar(2)})) ==
          std::vector<UPoly>{UPoly({Scalar(2), Scalar(-3), Scalar(1)})});
    UPoly xm1({Scalar(-1), Scalar(1)});
    CHECK(invariant_factors(diag({Scalar(1), Scalar(1)})) == std::vector<UPoly>{xm1, xm1});
    CHECK(invariant_factors(diag({Scalar(0), Scalar(1), Scalar(2)})) ==
          std::vector<UPoly>{UPoly({Scalar(0), Scalar(2), Scalar(-3), Scalar(1)})});

    UPoly x2m1({Scalar(-1), Scalar(0), Scalar(1)});
    CHECK(invariant_factors(diag({Scalar(1), Scalar(1), Scalar(-1), Scalar(-1)})) ==
          std::vector<UPoly>{x2m1, x2m1});

    // each factor divides the next and the product is the characteristic poly
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        size_t n = 2 + trial % 3;
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                m.at(i, j) = Scalar(Rational(static_cast<int>(rng() % 7) - 3));
        auto fs = invariant_factors(m);
        REQUIRE(!fs.empty());
        UPoly prod = UPoly::constant(Scalar::one());
        for (size_t k = 0; k < fs.size(); ++k) {
            if (k) CHECK((fs[k] % fs[k - 1]).is_zero());
            prod = prod * fs[k];
        }
        CHECK(prod == char_poly(m));
    }
}

TEST_CASE("scaling the roots of a monic polynomial") {
    UPoly f({Scalar(1), Scalar(0), Scalar(1)}); // x^2 + 1
    CHECK(scale_poly_roots(f, Scalar(2)) == UPoly({Scalar(4), Scalar(0), Scalar(1)}));
    CHECK(scale_poly_roots(f, Scalar::one()) == f);
    UPoly g({Scalar(0), Scalar(2), Scalar(-3), Scalar(1)}); // x^3 - 3x^2 + 2x
    CHECK(scale_poly_roots(g, Scalar(-1)) == UPoly({Scalar(0), Scalar(2), Scalar(3), Scalar(1)}));
    // root alpha*r of the scaled polynomial, checked pointwise
    CHECK(scale_poly_roots(g, Scalar(5)).evaluate(Scalar(10)).is_zero()); // 5 * root 2
}

TEST_CASE("similarity search over the field") {
    Matrix a = diag({Scalar(1), Scalar(2)});
    Matrix b = diag({Scalar(2), Scalar(1)});
    auto s = find_similarity(a, b);
    REQUIRE(s);
    CHECK(*s * a == b * *s);
    CHECK(s->invertible());

    Matrix j2(2, 2);
    j2.at(0, 1) = Scalar(1);
    auto s2 = find_similarity(j2, nilpotent2());
    REQUIRE(s2);
    CHECK(*s2 * j2 == nilpotent2() * *s2);

    Matrix jordan = Matrix::identity(2);
    jordan.at(0, 1) = Scalar(1);
    CHECK(!find_similarity(diag({Scalar(1), Scalar(1)}), jordan).has_value());

    CHECK_THROWS_AS(find_similarity(Matrix(2, 2), Matrix(3, 3)), std::invalid_argument);
}

TEST_CASE("the three residual matrices in dimension five are distinct") {
    LambdaData zero = generic(Matrix(2, 2));
    LambdaData dg = generic(diag({Scalar(0), Scalar(1)}));
    LambdaData nil = generic(nilpotent2());

    CHECK(lambda_equivalent(zero, dg).verdict == Verdict::NotEquivalent);
    CHECK(lambda_equivalent(zero, nil).verdict == Verdict::NotEquivalent);
    CHECK(lambda_equivalent(dg, nil).verdict == Verdict::NotEquivalent);
    CHECK(!lambda_equivalent(zero, dg).certificate.has_value());

    std::mt19937_64 rng(59);
    for (const LambdaData& rep : {zero, dg, nil}) {
        for (int trial = 0; trial < 5; ++trial) {
            Matrix moved = lambda_move(rep.lam, rng);
            auto out = lambda_equivalent(rep, generic(moved));
            check_certificate(rep.lam, moved, out);
        }
    }
}

TEST_CASE("equivalence absorbs scalar shifts and scalings") {
    // zero residue vs a scalar matrix
    auto shifted = lambda_equivalent(generic(Matrix(2, 2)),
                                     generic(diag({Scalar(5), Scalar(5)})));
    check_certificate(Matrix(2, 2), diag({Scalar(5), Scalar(5)}), shifted);
    CHECK(shifted.certificate->beta == Scalar(5));

    // two rank-one nilpotents are similar outright
    Matrix j2(2, 2);
    j2.at(0, 1) = Scalar(1);
    auto nil = lambda_equivalent(generic(j2), generic(nilpotent2()));
    check_certificate(j2, nilpotent2(), nil);
    CHECK(nil.certificate->alpha == Scalar::one());

    // a global doubling is found with alpha = 2
    Matrix m1 = sym3(Scalar(3), Scalar(4), Scalar(0, 5));
    Matrix m2 = sym3(Scalar(6), Scalar(8), Scalar(0, 10));
    auto doubled = lambda_equivalent(generic(m1), generic(m2));
    check_certificate(m1, m2, doubled);
    CHECK(doubled.certificate->alpha == Scalar(2));
}

TEST_CASE("inequivalence verdicts use scaling-stable invariants") {
    // nilpotent orbit types differ
    Matrix j2(2, 2);
    j2.at(0, 1) = Scalar(1);
    Matrix pair_blocks = block_diag(j2, j2);
    UPoly x4({Scalar(0), Scalar(0), Scalar(0), Scalar(0), Scalar(1)});
    CHECK(lambda_equivalent(generic(pair_blocks), generic(companion(x4))).verdict ==
          Verdict::NotEquivalent);

    // same characteristic polynomial, different invariant-factor degrees
    UPoly sq({Scalar(1), Scalar(0), Scalar(-2), Scalar(0), Scalar(1)}); // (x^2-1)^2
    CHECK(lambda_equivalent(generic(diag({Scalar(1), Scalar(1), Scalar(-1), Scalar(-1)})),
                            generic(companion(sq)))
              .verdict == Verdict::NotEquivalent);

    // consistent ratios, complete candidate list exhausted
    UPoly q1({Scalar(0), Scalar(2), Scalar(-3), Scalar(0), Scalar(1)}); // x^4 - 3x^2 + 2x
    UPoly q2({Scalar(0), Scalar(0), Scalar(-2), Scalar(1), Scalar(1)}); // x^4 + x^3 - 2x^2
    Matrix e1 = block_diag(Matrix(1, 1), companion(q1));
    Matrix e2 = block_diag(ones1x1(Scalar(1)), companion(q2));
    CHECK(char_poly(e1) == char_poly(e2));
    CHECK(lambda_equivalent(generic(e1), generic(e2)).verdict == Verdict::NotEquivalent);
}

TEST_CASE("the undecidable scaling stays inconclusive") {
    Matrix m1 = sym3(Scalar(3), Scalar(4), Scalar(0, 5));    // char x^3 - 120i
    Matrix m2 = sym3(Scalar(5), Scalar(12), Scalar(0, 13));  // char x^3 - 1560i
    auto out = lambda_equivalent(generic(m1), generic(m2));
    CHECK(out.verdict == Verdict::Inconclusive); // alpha^3 = 13 has no root here
    CHECK(!out.certificate.has_value());
}

TEST_CASE("diagonal family verdicts follow the invariant") {
    struct Pairing {
        long t1num, t1den, t2num, t2den;
        Verdict verdict;
    };
    const Pairing table[] = {
        {2, 1, 1, 2, Verdict::Equivalent},
        {3, 1, -2, 1, Verdict::Equivalent},
        {3, 1, 5, 1, Verdict::NotEquivalent},
        {5, 1, -2, 1, Verdict::NotEquivalent},
        {2, 1, 3, 1, Verdict::NotEquivalent},
    };
    for (const auto& row : table) {
        Scalar t1(Rational(row.t1num, row.t1den));
        Scalar t2(Rational(row.t2num, row.t2den));
        auto out = lambda_equivalent(tfam(t1), tfam(t2));
        CHECK(out.verdict == row.verdict);
        CHECK(out.certificate.has_value() == (row.verdict == Verdict::Equivalent));
        if (out.certificate) check_certificate(tfam(t1).lam, tfam(t2).lam, out);
    }

    // equivalence exactly matches equality of the invariant
    const Scalar ts[] = {Scalar(2), Scalar(Rational(1, 2)), Scalar(-1),
                         Scalar(3), Scalar(5), Scalar(-2)};
    for (size_t i = 0; i < std::size(ts); ++i)
        for (size_t j = i + 1; j < std::size(ts); ++j) {
            bool same_j = j_invariant_n4(ts[i]) == j_invariant_n4(ts[j]);
            auto out = lambda_equivalent(tfam(ts[i]), tfam(ts[j]));
            CHECK(out.verdict != Verdict::Inconclusive);
            CHECK((out.verdict == Verdict::Equivalent) == same_j);
        }
}

TEST_CASE("the diagonal-family invariant") {
    CHECK(j_invariant_n4(Scalar(2)) == Scalar(Rational(27, 4)));
    CHECK(j_invariant_n4(Scalar(Rational(1, 2))) == Scalar(Rational(27, 4)));
    CHECK(j_invariant_n4(Scalar(-1)) == Scalar(Rational(27, 4)));
    CHECK(j_invariant_n4(Scalar(3)) == Scalar(Rational(343, 36)));
    CHECK(j_invariant_n4(Scalar(-2)) == Scalar(Rational(343, 36)));
    CHECK(j_invariant_n4(Scalar(5)) == Scalar(Rational(9261, 400)));

    CHECK_THROWS_AS(j_invariant_n4(Scalar(0)), std::domain_error);
    CHECK_THROWS_AS(j_invariant_n4(Scalar(1)), std::domain_error);

    for (const Scalar& t : {Scalar(2), Scalar(0, 1), Scalar(Rational(-3, 7))}) {
        Scalar expect = j_invariant_n4(t);
        for (const Scalar& u : parameter_orbit(t)) CHECK(j_invariant_n4(u) == expect);
    }
}

TEST_CASE("rules for the four-dimensional residues") {
    LambdaData split{Matrix(1, 1), CorankCase::N2Split};
    LambdaData chain{Matrix(1, 1), CorankCase::N2Chain};
    CHECK(lambda_equivalent(split, chain).verdict == Verdict::NotEquivalent);
    CHECK(!lambda_equivalent(split, chain).certificate.has_value());

    LambdaData shifted{ones1x1(Scalar(3)), CorankCase::N2Split};
    auto out = lambda_equivalent(split, shifted);
    check_certificate(split.lam, shifted.lam, out);
    CHECK(out.certificate->beta == Scalar(3));

    LambdaData bad{Matrix(2, 2), CorankCase::N2Split};
    CHECK_THROWS_AS(lambda_equivalent(bad, bad), std::invalid_argument);
    CHECK_THROWS_AS(lambda_equivalent(generic(Matrix(2, 2)), generic(Matrix(3, 3))),
                    std::invalid_argument);
}

TEST_CASE("classification labels") {
    auto classify = [](const CatalogEntry& entry) {
        auto cls = classify_corank_one(BilinearTriple::from_pair(entry.require_pair()));
        REQUIRE(cls);
        return *cls;
    };

    auto zero3 = classify(make_corank_one(3));
    CHECK(zero3.label == "GENERIC_N_GE_3 [x; x]");
    CHECK(zero3.normalized);

    auto dg = classify(make_corank_one(3, diag({Scalar(0), Scalar(1)})));
    CHECK(dg.label == "GENERIC_N_GE_3 [x^2 + 1]");
    CHECK(dg.normalized);
    CHECK(dg.factors == std::vector<UPoly>{UPoly({Scalar(1), Scalar(0), Scalar(1)})});

    auto nil = classify(make_corank_one(3, nilpotent2()));
    CHECK(nil.label == "GENERIC_N_GE_3 [x^2]");
    CHECK(nil.normalized);

    auto four = classify(make_corank_one(4, diag({Scalar(0), Scalar(1), Scalar(2)})));
    CHECK(four.label == "GENERIC_N_GE_3 [x^3 + x]");
    CHECK(four.normalized);

    auto raw3 = classify(make_corank_one(4, diag({Scalar(0), Scalar(1), Scalar(3)})));
    CHECK(raw3.label == "GENERIC_N_GE_3 raw [x^3 - 7/3*x - 20/27]");
    CHECK(!raw3.normalized);

    auto raw5 = classify(make_corank_one(4, diag({Scalar(0), Scalar(1), Scalar(5)})));
    CHECK(raw5.label == "GENERIC_N_GE_3 raw [x^3 - 7*x - 6]");
    CHECK(!raw5.normalized);

    auto split = classify(make_corank_one_n2_split());
    CHECK(split.label == "N2_SPLIT");
    CHECK(split.case_tag == CorankCase::N2Split);
    CHECK(split.factors.empty());
    CHECK(split.normalized);

    auto chain = classify(make_corank_one_n2_chain());
    CHECK(chain.label == "N2_CHAIN");
    CHECK(chain.case_tag == CorankCase::N2Chain);

    CHECK(!classify_corank_one(BilinearTriple::from_pair(corank_scaled_pair(Scalar(3))))
               .has_value());
}

TEST_CASE("labels are stable under the allowed moves") {
    std::mt19937_64 rng(61);

    // residual-matrix moves applied before building the pair
    struct Rep {
        unsigned n;
        Matrix lam;
    };
    const Rep reps[] = {
        {3, Matrix(2, 2)},
        {3, diag({Scalar(0), Scalar(1)})},
        {3, nilpotent2()},
        {4, diag({Scalar(0), Scalar(1), Scalar(2)})},
    };
    for (const auto& rep : reps) {
        auto base = classify_corank_one(
            BilinearTriple::from_pair(make_corank_one(rep.n, rep.lam).require_pair()));
        REQUIRE(base);
        for (int trial = 0; trial < 3; ++trial) {
            Matrix moved = lambda_move(rep.lam, rng);
            auto cls = classify_corank_one(
                BilinearTriple::from_pair(make_corank_one(rep.n, moved).require_pair()));
            REQUIRE(cls);
            CHECK(cls->label == base->label);
        }
    }

    // whole-pair conjugation, normalized label
    {
        PointedPair pair = make_corank_one(3, diag({Scalar(0), Scalar(1)})).require_pair();
        auto base = classify_corank_one(BilinearTriple::from_pair(pair));
        REQUIRE(base);
        for (int trial = 0; trial < 3; ++trial) {
            PointedPair conj = conjugate_pair(pair, corank_conjugate(3, rng));
            auto cls = classify_corank_one(BilinearTriple::from_pair(conj));
            REQUIRE(cls);
            CHECK(cls->label == base->label);
        }
    }

    // whole-pair conjugation, raw label: equivalence is still certified
    {
        PointedPair pair = make_corank_one(4, diag({Scalar(0), Scalar(1), Scalar(3)})).require_pair();
        auto base = extract_lambda(BilinearTriple::from_pair(pair));
        REQUIRE(base);
        for (int trial = 0; trial < 3; ++trial) {
            PointedPair conj = conjugate_pair(pair, corank_conjugate(4, rng));
            auto ext = extract_lambda(BilinearTriple::from_pair(conj));
            REQUIRE(ext);
            auto out = lambda_equivalent(base->data, ext->data);
            check_certificate(base->data.lam, ext->data.lam, out);
        }
    }
}

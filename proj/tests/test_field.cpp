#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ropit/field.hpp"
#include "support.hpp"

using namespace ropit;
using testsupport::Rng;

TEST_CASE("modular arithmetic basics") {
    PrimeField f7(7);
    CHECK((f7.make(3) + f7.make(5)).value() == 1);
    CHECK((f7.make(3) * f7.make(5)).value() == 1);
    CHECK((f7.make(0) - f7.make(1)).value() == 6);
    CHECK((-f7.make(1)).value() == 6);
    CHECK(f7.make_signed(-3).value() == 4);
    CHECK(f7.make(14).value() == 0);
}

TEST_CASE("inverse") {
    PrimeField f7(7);
    PrimeField f5(5);
    CHECK(f7.make(3).inverse().value() == 5);
    CHECK(f5.make(4).inverse().value() == 4);
    CHECK(f7.make(1).inverse().value() == 1);
    CHECK_THROWS_AS((void)f7.zero().inverse(), Error);
}

TEST_CASE("modulus validation") {
    CHECK_THROWS_AS(PrimeField(9), PreconditionError);
    CHECK_THROWS_AS(PrimeField(2147483646), PreconditionError);
    CHECK_THROWS_AS(PrimeField(4), PreconditionError);
    CHECK_THROWS_AS(PrimeField(3), PreconditionError); // p >= 5 required
    CHECK_THROWS_AS(PrimeField(std::uint64_t{1} << 62), PreconditionError);
    CHECK(PrimeField(5).modulus() == 5);
    CHECK(PrimeField(2147483647).modulus() == 2147483647);
    CHECK(PrimeField(2305843009213693951ull).modulus() == 2305843009213693951ull); // 2^61 - 1
}

TEST_CASE("cross-modulus arithmetic is rejected") {
    PrimeField f7(7), f5(5);
    CHECK_THROWS_AS((void)(f7.make(1) + f5.make(1)), FieldMismatchError);
    CHECK_THROWS_AS((void)(f7.make(1) * f5.make(1)), FieldMismatchError);
}

TEST_CASE("field axioms on random triples") {
    Rng rng(11);
    for (std::uint64_t p : {std::uint64_t{101}, std::uint64_t{2147483647},
                            std::uint64_t{2305843009213693951ull}}) {
        PrimeField field(p);
        for (int i = 0; i < 1000; ++i) {
            const Scalar a = testsupport::random_scalar(rng, field);
            const Scalar b = testsupport::random_scalar(rng, field);
            const Scalar c = testsupport::random_scalar(rng, field);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            CHECK(a * (b + c) == a * b + a * c);
            if (!a.is_zero()) CHECK((a * a.inverse()).value() == 1);
            CHECK(a - a == field.zero());
        }
    }
}

TEST_CASE("anchor sets") {
    PrimeField f7(7);
    AnchorSet a = AnchorSet::canonical(f7, 4);
    CHECK(a.size() == 4);
    CHECK(a.at(3).value() == 3);
    CHECK_THROWS_AS(AnchorSet::canonical(f7, 7), PreconditionError);  // needs p > n
    CHECK_THROWS_AS(AnchorSet({f7.make(1), f7.make(1)}), ValidationError);
}

TEST_CASE("lagrange basis interpolation identities") {
    PrimeField f7(7);
    AnchorSet a({f7.make(1), f7.make(2), f7.make(3)});
    CHECK(lagrange_basis(a, 1, f7.make(1)).value() == 1);
    CHECK(lagrange_basis(a, 1, f7.make(2)).value() == 0);
    // (0-1)(0-3) / ((2-1)(2-3)) = 3 / (-1) = -3 = 4 mod 7
    CHECK(lagrange_basis(a, 2, f7.make(0)).value() == 4);

    // Kronecker delta on the anchors.
    for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(lagrange_basis(a, i, a.at(j)).value() == (i == j + 1 ? 1u : 0u));

    // Partition of unity: the basis interpolates the constant-1 function.
    Rng rng(5);
    for (std::uint64_t p : {std::uint64_t{101}, std::uint64_t{2147483647}}) {
        PrimeField field(p);
        AnchorSet anchors = AnchorSet::canonical(field, 6);
        for (int t = 0; t < 50; ++t) {
            const Scalar w = testsupport::random_scalar(rng, field);
            Scalar sum = field.zero();
            for (std::size_t i = 1; i <= anchors.size(); ++i) sum += lagrange_basis(anchors, i, w);
            CHECK(sum == field.one());
        }
    }
}

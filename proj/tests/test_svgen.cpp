#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ropit/blackbox.hpp"
#include "ropit/formula.hpp"
#include "ropit/sparse.hpp"
#include "ropit/svgen.hpp"
#include "support.hpp"

using namespace ropit;
using namespace ropit::testsupport;

namespace {

std::vector<std::vector<std::uint64_t>> collect(const PointSet& pts) {
    std::vector<std::vector<std::uint64_t>> out;
    auto cur = pts.cursor();
    std::vector<std::uint64_t> row(pts.dimension());
    while (cur->next(row)) out.push_back(row);
    return out;
}

} // namespace

TEST_CASE("generator components at anchor inputs") {
    PrimeField f(101);
    SVGenerator g1(AnchorSet::canonical(f, 3), 1);
    // y at anchor a_2, z = 5: component 2 carries z, others vanish
    const std::vector<Scalar> y{f.make(1)}, z{f.make(5)};
    CHECK(g1.eval_map(y, z) == std::vector<Scalar>{f.zero(), f.make(5), f.zero()});
    // z = 0 kills every component
    const std::vector<Scalar> z0{f.zero()};
    CHECK(g1.eval_map(y, z0) == std::vector<Scalar>{f.zero(), f.zero(), f.zero()});

    SVGenerator g2(AnchorSet::canonical(f, 3), 2);
    const std::vector<Scalar> y2{f.make(0), f.make(0)}, z2{f.one(), f.one()};
    CHECK(g2.eval_component(1, y2, z2).value() == 2);
    CHECK(g2.eval_component(2, y2, z2).value() == 0);
}

TEST_CASE("generator map over a non-anchor input") {
    PrimeField f(7);
    SVGenerator g(AnchorSet::canonical(f, 2), 1); // anchors (0, 1)
    const std::vector<Scalar> y{f.make(2)}, z{f.one()};
    // (u_1(2), u_2(2)) = (-1, 2) = (6, 2) mod 7
    CHECK(g.eval_map(y, z) == std::vector<Scalar>{f.make(6), f.make(2)});
}

TEST_CASE("raw map path agrees with the basis-evaluation reference") {
    Rng rng(51);
    for (std::uint64_t p : {std::uint64_t{101}, std::uint64_t{2147483647}}) {
        PrimeField field(p);
        for (int round = 0; round < 20; ++round) {
            const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(6));
            const std::uint32_t order = 1 + static_cast<std::uint32_t>(rng.below(3));
            SVGenerator g(AnchorSet::canonical(field, n), order);
            const auto y = random_point(rng, field, order);
            const auto z = random_point(rng, field, order);
            std::vector<std::uint64_t> yr, zr, out(n);
            for (const Scalar& s : y) yr.push_back(s.value());
            for (const Scalar& s : z) zr.push_back(s.value());
            g.eval_map_raw(yr, zr, out);
            const auto expect = g.eval_map(y, z);
            for (std::uint32_t i = 0; i < n; ++i) CHECK(out[i] == expect[i].value());
        }
    }
}

TEST_CASE("low-weight sets: counts and order") {
    PrimeField f(101);
    CHECK(collect(PointSet::low_weight(f, 3, 0)).size() == 1);
    CHECK(collect(PointSet::low_weight(f, 3, 1)).size() == 4);
    CHECK(collect(PointSet::low_weight(f, 4, 2)).size() == 11); // 1 + 4 + 6
    CHECK(low_weight_count(4, 2) == 11);
    CHECK(low_weight_count(3, 1) == 4);

    const auto rows = collect(PointSet::low_weight(f, 3, 2));
    const std::vector<std::vector<std::uint64_t>> expect = {
        {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    CHECK(rows == expect);

    // count matches the binomial sum for a spread of parameters
    for (std::uint32_t n = 1; n <= 10; ++n)
        for (std::uint32_t w = 0; w <= n; ++w)
            CHECK(collect(PointSet::low_weight(f, n, w)).size() == low_weight_count(n, w));
}

TEST_CASE("generator image enumeration") {
    PrimeField f(7);
    SVGenerator g(AnchorSet::canonical(f, 2), 1);
    const auto rows = collect(PointSet::generator_image(g, {f.make(0), f.make(1)}));
    const std::vector<std::vector<std::uint64_t>> expect = {{0, 0}, {0, 0}, {1, 0}, {0, 1}};
    CHECK(rows == expect);

    CHECK(collect(PointSet::generator_image(g, {f.make(3)})).size() == 1);
    // z = 0 forces the zero point
    for (const auto& row : collect(PointSet::generator_image(g, {f.zero()})))
        CHECK(row == std::vector<std::uint64_t>{0, 0});
}

TEST_CASE("every image point re-evaluates consistently under eval_map") {
    PrimeField f(101);
    SVGenerator g(AnchorSet::canonical(f, 3), 2);
    const std::vector<Scalar> values{f.make(0), f.make(2), f.make(9)};
    const auto rows = collect(PointSet::generator_image(g, values));
    REQUIRE(rows.size() == 81); // 3^(2*2)
    std::size_t idx = 0;
    // odometer over (y_1, y_2, z_1, z_2), first digit fastest
    for (std::size_t d3 = 0; d3 < 3; ++d3)
        for (std::size_t d2 = 0; d2 < 3; ++d2)
            for (std::size_t d1 = 0; d1 < 3; ++d1)
                for (std::size_t d0 = 0; d0 < 3; ++d0) {
                    const std::vector<Scalar> y{values[d0], values[d1]};
                    const std::vector<Scalar> z{values[d2], values[d3]};
                    const auto expect = g.eval_map(y, z);
                    for (std::uint32_t i = 0; i < 3; ++i) CHECK(rows[idx][i] == expect[i].value());
                    ++idx;
                }
}

TEST_CASE("sum sets") {
    PrimeField f(101);
    PointSet a = PointSet::low_weight(f, 2, 1); // (0,0), (0,1), (1,0)
    PointSet zero = PointSet::low_weight(f, 2, 0);
    CHECK(collect(PointSet::sum(a, zero)) == collect(a));
    CHECK(collect(PointSet::sum(a, a)).size() == 9);

    SVGenerator g(AnchorSet::canonical(f, 2), 1);
    PointSet single = PointSet::generator_image(g, {f.one()}); // one point
    const auto rows = collect(PointSet::sum(zero, single));
    CHECK(rows.size() == 1);
}

TEST_CASE("evaluation grids") {
    PrimeField f(101);
    CHECK(collect(PointSet::grid(f, {0, 0, 0})).size() == 1);
    const auto line = collect(PointSet::grid(f, {2}));
    CHECK(line == std::vector<std::vector<std::uint64_t>>{{0}, {1}, {2}});
    CHECK(collect(PointSet::grid(f, {1, 2})).size() == 6);
    PrimeField tiny(5);
    CHECK_THROWS_AS((void)PointSet::grid(tiny, {5}), PreconditionError);
}

TEST_CASE("substitution identity of the composed generator") {
    // f(G_{m+1}) with y_{m+1} pinned to anchor a_i equals f with x_i replaced
    // by G_m^i + z_{m+1} and the other coordinates by G_m components.
    // Exhaustive over F_13 for the free inputs; per-variable degrees are
    // below 13, so grid equality is polynomial identity.
    PrimeField f(13);
    const std::uint32_t n = 3;
    const Roabp prog = to_roabp(parse_formula("x1*x2 + x3", f), f);
    SVGenerator g1(AnchorSet::canonical(f, n), 1);
    SVGenerator g2(AnchorSet::canonical(f, n), 2);
    for (std::uint32_t i = 1; i <= n; ++i) {
        for (std::uint64_t y1 = 0; y1 < 13; ++y1)
            for (std::uint64_t z1 = 0; z1 < 13; ++z1)
                for (std::uint64_t z2 = 0; z2 < 13; ++z2) {
                    const std::vector<Scalar> inner_y{f.make(y1)}, inner_z{f.make(z1)};
                    const auto base = g1.eval_map(inner_y, inner_z);
                    // left side: f(G_2) with y_2 = a_i
                    const std::vector<Scalar> y{f.make(y1), f.make(i - 1)};
                    const std::vector<Scalar> z{f.make(z1), f.make(z2)};
                    const Scalar lhs = prog.evaluate(g2.eval_map(y, z));
                    // right side: substitute x_i by G_1^i + z_2
                    std::vector<Scalar> point = base;
                    point[i - 1] = base[i - 1] + f.make(z2);
                    const Scalar rhs = prog.evaluate(point);
                    CHECK(lhs == rhs);
                }
    }
}

TEST_CASE("grid search through the generator finds nonzeros of small programs") {
    Rng rng(52);
    PrimeField field(101);
    for (int round = 0; round < 25; ++round) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(4));
        const Roabp prog = random_nonzero_program(rng, field, n);
        const BlackBox box = BlackBox::from_program(prog);
        std::uint32_t m = 0;
        while ((1u << m) < n) ++m;
        SVGenerator gen(AnchorSet::canonical(field, n), m + 1);
        const std::uint64_t yb = static_cast<std::uint64_t>(n) * n;
        std::vector<std::uint64_t> bounds;
        for (std::uint32_t j = 0; j < m + 1; ++j) {
            bounds.push_back(yb);
            bounds.push_back(n);
        }
        auto cur = PointSet::grid(field, bounds).cursor();
        std::vector<std::uint64_t> tuple(2 * (m + 1)), y(m + 1), z(m + 1), image(n);
        bool found = false;
        while (!found && cur->next(tuple)) {
            for (std::uint32_t j = 0; j <= m; ++j) {
                y[j] = tuple[2 * j];
                z[j] = tuple[2 * j + 1];
            }
            gen.eval_map_raw(y, z, image);
            std::vector<Scalar> pt;
            for (std::uint64_t v : image) pt.push_back(field.make(v));
            if (!box.query(pt).is_zero()) found = true;
        }
        CHECK(found);
    }
}

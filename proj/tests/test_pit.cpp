#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ropit/formula.hpp"
#include "ropit/pit.hpp"
#include "ropit/sparse.hpp"
#include "support.hpp"

using namespace ropit;
using namespace ropit::testsupport;

namespace {

void check_witness(const PitReport& rep, const Roabp& prog) {
    REQUIRE(!rep.is_zero);
    REQUIRE(rep.witness.has_value());
    CHECK(!prog.evaluate(*rep.witness).is_zero());
}

} // namespace

TEST_CASE("structural tester on canonical programs") {
    PrimeField f(101);
    // parallel +1/-1 constant routes feeding a single x1 edge: (1-1)*x1 = 0
    const Roabp cancel(f, 1, {{0}, {1, 2}, {3}, {4}},
                       {{0, 1, EdgeLabel::constant(f.one())},
                        {0, 2, EdgeLabel::constant(f.make_signed(-1))},
                        {1, 3, EdgeLabel::constant(f.one())},
                        {2, 3, EdgeLabel::constant(f.one())},
                        {3, 4, EdgeLabel::variable(1)}});
    CHECK(pit_single_structural(cancel).is_zero);

    const Roabp chain = build_chain(f, 2);
    check_witness(pit_single_structural(chain), chain);

    CHECK(pit_single_structural(Roabp::zero(f, 3)).is_zero);

    // nonzero constant term is caught by the direct source-sink edge
    const Roabp constant = to_roabp(parse_formula("5", f), f, 2);
    const PitReport rep = pit_single_structural(constant);
    CHECK(!rep.is_zero);
    CHECK(rep.witness->at(0).is_zero());
}

TEST_CASE("black-box tester basics") {
    PrimeField f(101);
    const BlackBox zero_box = BlackBox::from_program(Roabp::zero(f, 3));
    CHECK(pit_single_blackbox(zero_box, 3).is_zero);

    const Roabp chain = build_chain(f, 2);
    const PitReport rep = pit_single_blackbox(BlackBox::from_program(chain), 4);
    check_witness(rep, chain);
    CHECK(pit_single_structural(chain).is_zero == rep.is_zero);

    const Roabp single = to_roabp(parse_formula("x1", f), f);
    const PitReport rep1 = pit_single_blackbox(BlackBox::from_program(single), 1);
    check_witness(rep1, single);
}

TEST_CASE("cross-engine agreement with the oracle on random programs") {
    Rng rng(71);
    PrimeField field(101);
    for (int round = 0; round < 80; ++round) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(5));
        const Roabp a = random_program(rng, field, n);
        const bool oracle_zero = from_roabp(a).is_zero();
        CHECK(pit_single_structural(a).is_zero == oracle_zero);
        // full zero sweeps are only desk-sized up to n = 4; nonzero sweeps
        // exit early at any n
        if (!oracle_zero || n <= 4)
            CHECK(pit_single_blackbox(BlackBox::from_program(a), n).is_zero == oracle_zero);
    }
}

TEST_CASE("verdicts are shift invariant") {
    Rng rng(72);
    PrimeField field(101);
    for (int round = 0; round < 25; ++round) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(4));
        const Roabp a = random_program(rng, field, n);
        const BlackBox box = BlackBox::from_program(a);
        const BlackBox moved = box.shifted(random_point(rng, field, n));
        CHECK(pit_single_blackbox(box, n).is_zero == pit_single_blackbox(moved, n).is_zero);
    }
}

TEST_CASE("second-partial probes cost exactly four base queries") {
    PrimeField f(101);
    const Roabp chain = build_chain(f, 2);
    const BlackBox box = BlackBox::from_program(chain);
    const BlackBox dd = box.second_partial(1, 2);
    const std::uint64_t before = box.base_queries();
    (void)dd.query(std::vector<Scalar>(4, f.zero()));
    CHECK(box.base_queries() - before == 4);
    // composed views keep routing through the same counter
    const BlackBox composed = dd.restricted(3, f.one()).shifted(std::vector<Scalar>(4, f.one()));
    const std::uint64_t before2 = box.base_queries();
    (void)composed.query(std::vector<Scalar>(4, f.zero()));
    CHECK(box.base_queries() - before2 == 4);
}

TEST_CASE("alignment finding traces the product of three variables") {
    PrimeField f(101);
    const Roabp p3 = product_program(f, 3);
    StructuralAlignmentHandle handle(p3);
    std::vector<AlignmentHandle*> handles{&handle};
    const auto candidates = alignment_candidates(f, 1, 3);
    CHECK(candidates.size() == 10);
    const AlignmentResult res = find_alignment(handles, 3, candidates);
    // L holds the three second partials x3, x2, x1 in pair order
    REQUIRE(res.constraints.size() == 3);
    CHECK(res.constraints[0] == std::make_tuple(std::size_t{0}, 1u, 2u));
    CHECK(res.constraints[1] == std::make_tuple(std::size_t{0}, 1u, 3u));
    CHECK(res.constraints[2] == std::make_tuple(std::size_t{0}, 2u, 3u));
    REQUIRE(res.shift.size() == 3);
    for (const Scalar& v : res.shift) CHECK(v.value() == 1);
    // each coordinate tried 0 first, then settled on 1
    for (const auto& choice : res.per_coordinate) CHECK(choice.candidates_tried == 2);
    // the shifted product is aligned
    CHECK(is_aligned(from_roabp(p3).shifted(res.shift)));
}

TEST_CASE("alignment with constant handles picks the first candidate everywhere") {
    PrimeField f(101);
    const Roabp c1 = to_roabp(parse_formula("7", f), f, 3);
    const Roabp c2 = to_roabp(parse_formula("3", f), f, 3);
    StructuralAlignmentHandle h1(c1), h2(c2);
    std::vector<AlignmentHandle*> handles{&h1, &h2};
    const auto candidates = alignment_candidates(f, 2, 3);
    const AlignmentResult res = find_alignment(handles, 3, candidates);
    CHECK(res.constraints.empty());
    for (const Scalar& v : res.shift) CHECK(v.is_zero());
}

TEST_CASE("alignment results certify on random instances") {
    Rng rng(73);
    PrimeField field(131);
    for (int round = 0; round < 15; ++round) {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(4));
        const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.below(2));
        std::vector<Roabp> programs;
        for (std::uint32_t i = 0; i < k; ++i) programs.push_back(random_program(rng, field, n));
        std::vector<std::unique_ptr<StructuralAlignmentHandle>> handles;
        std::vector<AlignmentHandle*> hptrs;
        for (const Roabp& p : programs) {
            handles.push_back(std::make_unique<StructuralAlignmentHandle>(p));
            hptrs.push_back(handles.back().get());
        }
        const auto res = find_alignment(hptrs, n, alignment_candidates(field, k, n));
        // recorded constraints re-evaluate nonzero at the shift
        for (const auto& [h, a, b] : res.constraints) {
            const SparseMultilinear dd = from_roabp(programs[h]).derivative(a).derivative(b);
            CHECK(!dd.evaluate(res.shift).is_zero());
        }
        // every summand becomes aligned after the shift
        for (const Roabp& p : programs)
            CHECK(is_aligned(from_roabp(p).shifted(res.shift)));
    }
}

TEST_CASE("sum testers agree on constructed and random instances") {
    Rng rng(74);
    PrimeField field(2003); // > k * n^4 for n <= 5, k <= 2
    const Caps caps{10'000'000, kDefaultTermCap};

    const auto run_all = [&](const std::vector<Roabp>& programs, bool expect_zero) {
        const PitReport non_bb = sum_pit_nonblackbox(programs, caps);
        CHECK(non_bb.is_zero == expect_zero);
        std::vector<BlackBox> boxes;
        for (const Roabp& p : programs) boxes.push_back(BlackBox::from_program(p));
        const PitReport semi = sum_pit_semiblackbox(boxes, caps);
        CHECK(semi.is_zero == expect_zero);
        const PitReport bb = sum_pit_blackbox(BlackBox::sum_of_programs(programs),
                                              static_cast<std::uint32_t>(programs.size()), caps);
        CHECK(bb.is_zero == expect_zero);
        if (!expect_zero) {
            REQUIRE(non_bb.witness.has_value());
            Scalar sum = field.zero();
            for (const Roabp& p : programs) sum += p.evaluate(*non_bb.witness);
            CHECK(!sum.is_zero());
        }
    };

    const Roabp chain = build_chain(field, 2);
    run_all({chain, negated(chain)}, true);
    run_all({chain, to_roabp(parse_formula("x1", field), field, 4)}, false);
    run_all({Roabp::zero(field, 3)}, true);

    for (int round = 0; round < 10; ++round) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(4));
        std::vector<Roabp> programs{random_program(rng, field, n), random_program(rng, field, n)};
        const bool zero = (from_roabp(programs[0]) + from_roabp(programs[1])).is_zero();
        run_all(programs, zero);
    }
}

TEST_CASE("the hitting-set sweep engages beyond the cube regime") {
    PrimeField f(4099); // > 1 * 8^4
    // n = 8 > 7k with k = 1: the generator-image branch runs
    const Roabp single = to_roabp(parse_formula("x1", f), f, 8);
    const PitReport rep = sum_pit_blackbox(BlackBox::from_program(single), 1, Caps{200000, kDefaultTermCap});
    check_witness(rep, single);

    // a zero program cannot finish the astronomically large sweep: loud cap
    CHECK_THROWS_AS((void)sum_pit_blackbox(BlackBox::from_program(Roabp::zero(f, 8)), 1,
                                           Caps{200000, kDefaultTermCap}),
                    CapExceededError);
}

TEST_CASE("caps interrupt zero sweeps loudly") {
    PrimeField f(101);
    const BlackBox zero_box = BlackBox::from_program(Roabp::zero(f, 4));
    CHECK_THROWS_AS((void)pit_single_blackbox(zero_box, 4, Caps{100, kDefaultTermCap}),
                    CapExceededError);
}

TEST_CASE("cap boundary semantics") {
    PrimeField f(101);
    // n = 2: grid is (y_1 z_1 y_2 z_2) with bounds (2, 2, 2, 2) -> 81 points
    const BlackBox zero_box = BlackBox::from_program(Roabp::zero(f, 2));
    // a sweep that ends exactly at the cap is a completed sweep
    const PitReport exact = pit_single_blackbox(zero_box, 2, Caps{81, kDefaultTermCap});
    CHECK(exact.is_zero);
    CHECK(exact.stats.points_enumerated == 81);
    CHECK_THROWS_AS((void)pit_single_blackbox(zero_box, 2, Caps{80, kDefaultTermCap}),
                    CapExceededError);

    // a witness inside the budget beats the cap error even if the full sweep
    // would not fit: x1*x2 is nonzero somewhere in the first points
    const Roabp prod = product_program(f, 2);
    const PitReport hit = pit_single_blackbox(BlackBox::from_program(prod), 2,
                                              Caps{40, kDefaultTermCap});
    CHECK(!hit.is_zero);
}

namespace {

// Inconsistent tester: reports every second partial nonzero while building
// the constraint list, then claims every restriction is zero.
class LyingHandle final : public AlignmentHandle {
public:
    explicit LyingHandle(std::uint32_t n) : n_(n) {}
    std::uint32_t num_vars() const override { return n_; }
    bool restricted_second_partial_is_zero(std::uint32_t, std::uint32_t,
                                           const std::map<std::uint32_t, Scalar>& fixed) override {
        return !fixed.empty();
    }
    std::uint64_t pit_calls() const override { return 0; }

private:
    std::uint32_t n_;
};

} // namespace

TEST_CASE("a broken handle surfaces as a hard error, not a bogus shift") {
    PrimeField f(101);
    LyingHandle handle(3);
    std::vector<AlignmentHandle*> handles{&handle};
    const auto candidates = alignment_candidates(f, 1, 3);
    CHECK_THROWS_AS((void)find_alignment(handles, 3, candidates), Error);
}

TEST_CASE("dimension and index mismatches are rejected") {
    PrimeField f(101);
    const Roabp chain = build_chain(f, 2);
    const std::vector<Scalar> short_point(3, f.one());
    CHECK_THROWS_AS((void)chain.evaluate(short_point), ValidationError);
    CHECK_THROWS_AS((void)chain.restricted(5, f.one()), ValidationError);
    const BlackBox box = BlackBox::from_program(chain);
    CHECK_THROWS_AS((void)box.query(short_point), ValidationError);
    CHECK_THROWS_AS((void)box.second_partial(1, 1), ValidationError);
    CHECK_THROWS_AS((void)box.restricted(9, f.one()), ValidationError);
    SVGenerator gen(AnchorSet::canonical(f, 4), 2);
    const std::vector<Scalar> one_y{f.one()};
    CHECK_THROWS_AS((void)gen.eval_component(1, one_y, one_y), ValidationError);
}

TEST_CASE("field-size preconditions are enforced") {
    PrimeField f(5);
    const Roabp p2 = product_program(f, 2);
    CHECK_THROWS_AS((void)sum_pit_nonblackbox(std::vector<Roabp>{p2, p2}, Caps{}),
                    PreconditionError); // needs p > 2*4 = 8
    PrimeField g(101);
    const Roabp p3 = product_program(g, 3);
    CHECK_THROWS_AS((void)sum_pit_blackbox(BlackBox::from_program(p3), 2, Caps{}),
                    PreconditionError); // needs p > 2*81 = 162
}

TEST_CASE("report stats are populated") {
    PrimeField f(101);
    const Roabp chain = build_chain(f, 2);
    const PitReport s = pit_single_structural(chain);
    CHECK(s.stats.program_evals > 0);
    const PitReport b = pit_single_blackbox(BlackBox::from_program(chain), 4);
    CHECK(b.stats.box_queries > 0);
    CHECK(b.stats.points_enumerated > 0);
}

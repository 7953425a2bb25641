#include "ropit/blackbox.hpp"

namespace ropit {

BlackBox BlackBox::from_program(Roabp program) {
    const PrimeField field = program.field();
    const std::uint32_t dim = program.num_vars();
    auto counter = std::make_shared<std::uint64_t>(0);
    auto prog = std::make_shared<Roabp>(std::move(program));
    return BlackBox(field, dim,
                    [prog, counter](const PointBlock& b) {
                        *counter += b.rows;
                        return prog->evaluate_block(b);
                    },
                    counter);
}

BlackBox BlackBox::sum_of_programs(std::vector<Roabp> programs) {
    if (programs.empty()) throw ValidationError("sum box needs at least one program");
    const PrimeField field = programs.front().field();
    const std::uint32_t dim = programs.front().num_vars();
    for (const Roabp& p : programs) {
        if (p.field().modulus() != field.modulus()) throw FieldMismatchError("summands over different fields");
        if (p.num_vars() != dim) throw ValidationError("summands over different variable counts");
    }
    auto counter = std::make_shared<std::uint64_t>(0);
    auto progs = std::make_shared<std::vector<Roabp>>(std::move(programs));
    const std::uint64_t p = field.modulus();
    return BlackBox(field, dim,
                    [progs, counter, p](const PointBlock& b) {
                        *counter += b.rows;
                        std::vector<std::uint64_t> acc(b.rows, 0);
                        for (const Roabp& prog : *progs) {
                            std::vector<std::uint64_t> vals = prog.evaluate_block(b);
                            for (std::size_t r = 0; r < b.rows; ++r) {
                                std::uint64_t s = acc[r] + vals[r];
                                acc[r] = s >= p ? s - p : s;
                            }
                        }
                        return acc;
                    },
                    counter);
}

BlackBox BlackBox::from_scalar_fn(const PrimeField& field, std::uint32_t dimension,
                                  std::function<Scalar(std::span<const Scalar>)> fn) {
    auto counter = std::make_shared<std::uint64_t>(0);
    return BlackBox(field, dimension,
                    [field, dimension, fn = std::move(fn), counter](const PointBlock& b) {
                        *counter += b.rows;
                        std::vector<std::uint64_t> out(b.rows, 0);
                        std::vector<Scalar> point;
                        for (std::size_t r = 0; r < b.rows; ++r) {
                            point.clear();
                            for (std::uint32_t i = 0; i < dimension; ++i)
                                point.push_back(field.make(b.cols[i][r]));
                            out[r] = fn(point).value();
                        }
                        return out;
                    },
                    counter);
}

std::vector<std::uint64_t> BlackBox::query_block(const PointBlock& block) const {
    if (block.modulus != field_.modulus()) throw FieldMismatchError("query block from a different field");
    if (block.cols.size() != dimension_) throw ValidationError("query block has wrong dimension");
    return fn_(block);
}

Scalar BlackBox::query(std::span<const Scalar> point) const {
    if (point.size() != dimension_) throw ValidationError("query point has wrong dimension");
    PointBlock b;
    b.modulus = field_.modulus();
    b.rows = 1;
    b.cols.reserve(dimension_);
    for (const Scalar& s : point) {
        if (s.modulus() != field_.modulus()) throw FieldMismatchError("query point from a different field");
        b.cols.push_back({s.value()});
    }
    return field_.make(query_block(b).front());
}

BlackBox BlackBox::restricted(std::uint32_t var, const Scalar& value) const {
    if (var < 1 || var > dimension_) throw ValidationError("restriction index out of range");
    if (value.modulus() != field_.modulus()) throw FieldMismatchError("restriction value from a different field");
    return BlackBox(field_, dimension_,
                    [fn = fn_, var, v = value.value()](const PointBlock& b) {
                        PointBlock c = b;
                        c.cols[var - 1].assign(b.rows, v);
                        return fn(c);
                    },
                    counter_);
}

BlackBox BlackBox::shifted(std::vector<Scalar> v) const {
    if (v.size() != dimension_) throw ValidationError("shift vector has wrong dimension");
    std::vector<std::uint64_t> raw;
    raw.reserve(v.size());
    for (const Scalar& s : v) {
        if (s.modulus() != field_.modulus()) throw FieldMismatchError("shift vector from a different field");
        raw.push_back(s.value());
    }
    const std::uint64_t p = field_.modulus();
    return BlackBox(field_, dimension_,
                    [fn = fn_, raw = std::move(raw), p](const PointBlock& b) {
                        PointBlock c = b;
                        for (std::size_t i = 0; i < c.cols.size(); ++i) {
                            for (std::size_t r = 0; r < c.rows; ++r) {
                                std::uint64_t s = c.cols[i][r] + raw[i];
                                c.cols[i][r] = s >= p ? s - p : s;
                            }
                        }
                        return fn(c);
                    },
                    counter_);
}

BlackBox BlackBox::second_partial(std::uint32_t a, std::uint32_t b) const {
    if (a == b || a < 1 || a > dimension_ || b < 1 || b > dimension_)
        throw ValidationError("second partial needs two distinct in-range indices");
    const std::uint64_t p = field_.modulus();
    return BlackBox(field_, dimension_,
                    [fn = fn_, a, b, p](const PointBlock& blk) {
                        auto pinned = [&](std::uint64_t va, std::uint64_t vb) {
                            PointBlock c = blk;
                            c.cols[a - 1].assign(blk.rows, va);
                            c.cols[b - 1].assign(blk.rows, vb);
                            return fn(c);
                        };
                        // f|ab=11 - f|ab=10 - f|ab=01 + f|ab=00
                        std::vector<std::uint64_t> f11 = pinned(1, 1);
                        std::vector<std::uint64_t> f10 = pinned(1, 0);
                        std::vector<std::uint64_t> f01 = pinned(0, 1);
                        std::vector<std::uint64_t> f00 = pinned(0, 0);
                        std::vector<std::uint64_t> out(blk.rows);
                        for (std::size_t r = 0; r < blk.rows; ++r) {
                            std::uint64_t s = f11[r] + f00[r];
                            if (s >= p) s -= p;
                            std::uint64_t t = f10[r] + f01[r];
                            if (t >= p) t -= p;
                            out[r] = s >= t ? s - t : s + p - t;
                        }
                        return out;
                    },
                    counter_);
}

} // namespace ropit

#include "ropit/pit.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>

namespace ropit {

namespace {

constexpr std::size_t kBlockRows = 512;

std::uint32_t ceil_log2(std::uint32_t x) {
    return x <= 1 ? 0 : 32 - static_cast<std::uint32_t>(std::countl_zero(x - 1));
}

struct ScanHit {
    std::vector<std::uint64_t> point;
    std::uint64_t value;
};

// Sweeps the point set in enumeration order (translated by shift when given),
// evaluating blocks and returning the first row with a nonzero value. The
// reported witness is the translated point.
std::optional<ScanHit> scan_for_nonzero(
    const PointSet& pts, const std::vector<std::uint64_t>* shift,
    const std::function<std::vector<std::uint64_t>(const PointBlock&)>& eval,
    std::uint64_t max_points, PitStats& stats, const char* cap_flag) {
    const std::uint32_t dim = pts.dimension();
    const std::uint64_t p = pts.field().modulus();
    auto cur = pts.cursor();
    std::vector<std::uint64_t> row(dim);
    std::vector<std::vector<std::uint64_t>> rows;
    bool exhausted = false;
    bool capped = false;
    while (!exhausted && !capped) {
        rows.clear();
        while (rows.size() < kBlockRows) {
            if (stats.points_enumerated + rows.size() >= max_points) {
                // budget boundary: evaluate what was already fetched first; a
                // witness inside the budget must not be preempted by the cap
                // error, and a sweep that ends exactly at the cap is complete
                if (!cur->next(row))
                    exhausted = true;
                else
                    capped = true;
                break;
            }
            if (!cur->next(row)) {
                exhausted = true;
                break;
            }
            if (shift) {
                std::vector<std::uint64_t> t(dim);
                for (std::uint32_t i = 0; i < dim; ++i) {
                    std::uint64_t s = row[i] + (*shift)[i];
                    t[i] = s >= p ? s - p : s;
                }
                rows.push_back(std::move(t));
            } else {
                rows.push_back(row);
            }
        }
        if (rows.empty()) break;
        PointBlock block = PointBlock::from_rows(pts.field(), rows, dim);
        std::vector<std::uint64_t> vals = eval(block);
        stats.points_enumerated += rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (vals[r] != 0) return ScanHit{rows[r], vals[r]};
    }
    if (capped)
        throw CapExceededError("point sweep truncated at " + std::to_string(max_points) +
                                   " points before reaching a verdict",
                               cap_flag);
    return std::nullopt;
}

std::vector<Scalar> to_scalars(const PrimeField& field, std::span<const std::uint64_t> raw) {
    std::vector<Scalar> out;
    out.reserve(raw.size());
    for (std::uint64_t v : raw) out.push_back(field.make(v));
    return out;
}

} // namespace

PitReport pit_single_structural(const Roabp& program) {
    PitReport rep;
    const Roabp norm = program.normalized();
    const PrimeField& field = program.field();

    // Variables in layer order with their edge endpoints.
    struct VarNode {
        std::uint32_t var, begin, end;
    };
    std::vector<VarNode> vars;
    std::vector<std::vector<std::size_t>> edges_by_layer(norm.num_levels() - 1);
    for (std::size_t ei = 0; ei < norm.edges().size(); ++ei)
        edges_by_layer[norm.node_level(norm.edges()[ei].from)].push_back(ei);
    for (std::size_t l = 0; l + 1 < norm.num_levels(); ++l) {
        for (std::size_t ei : edges_by_layer[l]) {
            const Edge& e = norm.edges()[ei];
            if (e.label.is_variable()) vars.push_back({e.label.var_index(), e.from, e.to});
        }
    }

    const std::size_t nv = vars.size();
    const std::size_t src = 0, snk = nv + 1;
    std::vector<std::vector<std::size_t>> adj(nv + 2);
    if (!norm.constant_path_sum(norm.source(), norm.sink()).is_zero()) adj[src].push_back(snk);
    for (std::size_t i = 0; i < nv; ++i) {
        if (!norm.constant_path_sum(norm.source(), vars[i].begin).is_zero()) adj[src].push_back(1 + i);
        if (!norm.constant_path_sum(vars[i].end, norm.sink()).is_zero()) adj[1 + i].push_back(snk);
        for (std::size_t j = i + 1; j < nv; ++j)
            if (!norm.constant_path_sum(vars[i].end, vars[j].begin).is_zero())
                adj[1 + i].push_back(1 + j);
    }

    std::vector<std::ptrdiff_t> parent(nv + 2, -2);
    parent[src] = -1;
    std::deque<std::size_t> queue{src};
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v : adj[u]) {
            if (parent[v] != -2) continue;
            parent[v] = static_cast<std::ptrdiff_t>(u);
            queue.push_back(v);
        }
    }
    if (parent[snk] == -2) return rep; // sink unreachable: identically zero

    std::vector<std::uint32_t> path_vars;
    for (std::size_t v = static_cast<std::size_t>(parent[snk]); v != src;
         v = static_cast<std::size_t>(parent[v]))
        path_vars.push_back(vars[v - 1].var);
    std::reverse(path_vars.begin(), path_vars.end());

    // A monomial on the path variables has a nonzero coefficient, so the
    // restriction of the polynomial to them is nonzero and the 0/1 cube over
    // them carries a witness.
    rep.is_zero = false;
    const std::uint32_t k = static_cast<std::uint32_t>(path_vars.size());
    PointSet cube = PointSet::low_weight(field, k, k);
    auto cur = cube.cursor();
    std::vector<std::uint64_t> bits(k);
    std::vector<std::vector<std::uint64_t>> rows;
    for (;;) {
        rows.clear();
        while (rows.size() < kBlockRows && cur->next(bits)) {
            std::vector<std::uint64_t> full(program.num_vars(), 0);
            for (std::uint32_t i = 0; i < k; ++i) full[path_vars[i] - 1] = bits[i];
            rows.push_back(std::move(full));
        }
        if (rows.empty()) break;
        PointBlock block = PointBlock::from_rows(field, rows, program.num_vars());
        std::vector<std::uint64_t> vals = program.evaluate_block(block);
        rep.stats.program_evals += rows.size();
        rep.stats.points_enumerated += rows.size();
        bool found = false;
        for (std::size_t r = 0; r < rows.size() && !found; ++r) {
            if (vals[r] != 0) {
                rep.witness = to_scalars(field, rows[r]);
                found = true;
            }
        }
        if (found) break;
    }
    if (!rep.witness) throw Error("structural tester found a path but no cube witness");
    if (program.evaluate(*rep.witness).is_zero()) throw Error("structural witness fails re-evaluation");
    rep.stats.program_evals += 1;
    return rep;
}

PitReport pit_single_blackbox(const BlackBox& box, std::uint32_t var_bound, const Caps& caps) {
    const PrimeField& field = box.field();
    const std::uint32_t n = box.dimension();
    PitReport rep;
    const std::uint64_t q0 = box.base_queries();

    if (n == 0 || var_bound == 0) {
        std::vector<Scalar> origin(n, field.zero());
        const Scalar v = box.query(origin);
        rep.stats.points_enumerated = 1;
        if (!v.is_zero()) {
            rep.is_zero = false;
            rep.witness = origin;
        }
        rep.stats.box_queries = box.base_queries() - q0;
        return rep;
    }

    var_bound = std::min(var_bound, n);
    const std::uint32_t order = ceil_log2(std::max(var_bound, 2u)) + 1;
    SVGenerator gen(AnchorSet::canonical(field, n), order);
    const std::uint64_t y_bound = static_cast<std::uint64_t>(var_bound) * (n - 1);
    const std::uint64_t z_bound = var_bound;
    std::vector<std::uint64_t> bounds;
    bounds.reserve(2 * order);
    for (std::uint32_t j = 0; j < order; ++j) {
        bounds.push_back(y_bound); // tuple layout (y_1, z_1, y_2, z_2, ...), first fastest
        bounds.push_back(z_bound);
    }
    PointSet grid = PointSet::grid(field, bounds);

    auto cur = grid.cursor();
    std::vector<std::uint64_t> tuple(2 * order), y(order), z(order);
    std::vector<std::vector<std::uint64_t>> rows;
    bool exhausted = false;
    bool capped = false;
    while (!exhausted && !capped) {
        rows.clear();
        while (rows.size() < kBlockRows) {
            if (rep.stats.points_enumerated + rows.size() >= caps.max_points) {
                if (!cur->next(tuple))
                    exhausted = true;
                else
                    capped = true;
                break;
            }
            if (!cur->next(tuple)) {
                exhausted = true;
                break;
            }
            for (std::uint32_t j = 0; j < order; ++j) {
                y[j] = tuple[2 * j];
                z[j] = tuple[2 * j + 1];
            }
            std::vector<std::uint64_t> image(n);
            gen.eval_map_raw(y, z, image);
            rows.push_back(std::move(image));
        }
        if (rows.empty()) break;
        PointBlock block = PointBlock::from_rows(field, rows, n);
        std::vector<std::uint64_t> vals = box.query_block(block);
        rep.stats.points_enumerated += rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (vals[r] != 0) {
                rep.is_zero = false;
                rep.witness = to_scalars(field, rows[r]);
                if (box.query(*rep.witness).is_zero()) throw Error("grid witness fails re-evaluation");
                rep.stats.box_queries = box.base_queries() - q0;
                return rep;
            }
        }
    }
    if (capped)
        throw CapExceededError("generator grid sweep truncated before a verdict", "--cap-points");
    rep.stats.box_queries = box.base_queries() - q0;
    return rep;
}

StructuralAlignmentHandle::StructuralAlignmentHandle(Roabp program) : base_(std::move(program)) {}

bool StructuralAlignmentHandle::restricted_second_partial_is_zero(
    std::uint32_t a, std::uint32_t b, const std::map<std::uint32_t, Scalar>& fixed) {
    const auto key = std::make_pair(a, b);
    auto it = second_partials_.find(key);
    if (it == second_partials_.end())
        it = second_partials_.emplace(key, base_.derivative(a).derivative(b)).first;
    Roabp g = it->second;
    for (const auto& [var, val] : fixed) g = g.restricted(var, val);
    ++pit_calls_;
    return pit_single_structural(g).is_zero;
}

QueryAlignmentHandle::QueryAlignmentHandle(BlackBox box, Caps caps)
    : box_(std::move(box)), caps_(caps) {}

bool QueryAlignmentHandle::restricted_second_partial_is_zero(
    std::uint32_t a, std::uint32_t b, const std::map<std::uint32_t, Scalar>& fixed) {
    BlackBox view = box_.second_partial(a, b);
    std::uint32_t pinned = 2;
    for (const auto& [var, val] : fixed) {
        view = view.restricted(var, val);
        if (var != a && var != b) ++pinned;
    }
    const std::uint32_t n = box_.dimension();
    const std::uint32_t free_vars = n > pinned ? n - pinned : 0;
    ++pit_calls_;
    return pit_single_blackbox(view, free_vars, caps_).is_zero;
}

std::vector<Scalar> alignment_candidates(const PrimeField& field, std::uint32_t k, std::uint32_t n) {
    const unsigned __int128 need = static_cast<unsigned __int128>(k) * n * n;
    if (static_cast<unsigned __int128>(field.modulus()) <= need)
        throw PreconditionError("field too small: need p > k*n^2 = " + std::to_string(k) + "*" +
                                std::to_string(n) + "^2, modulus is " + std::to_string(field.modulus()));
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(need) + 1);
    for (std::uint64_t c = 0; c <= static_cast<std::uint64_t>(need); ++c) out.push_back(field.make(c));
    return out;
}

AlignmentResult find_alignment(std::span<AlignmentHandle* const> handles, std::uint32_t n,
                               std::span<const Scalar> candidates) {
    if (candidates.empty()) throw PreconditionError("alignment needs a nonempty candidate set");
    AlignmentResult res;
    for (std::size_t h = 0; h < handles.size(); ++h)
        for (std::uint32_t a = 1; a <= n; ++a)
            for (std::uint32_t b = a + 1; b <= n; ++b)
                if (!handles[h]->restricted_second_partial_is_zero(a, b, {}))
                    res.constraints.emplace_back(h, a, b);

    std::map<std::uint32_t, Scalar> fixed;
    for (std::uint32_t j = 1; j <= n; ++j) {
        bool found = false;
        std::uint32_t tried = 0;
        for (const Scalar& c : candidates) {
            ++tried;
            auto attempt = fixed;
            attempt.emplace(j, c);
            bool ok = true;
            for (const auto& [h, a, b] : res.constraints) {
                if (handles[h]->restricted_second_partial_is_zero(a, b, attempt)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                res.shift.push_back(c);
                res.per_coordinate.push_back({j, c, tried});
                fixed.emplace(j, c);
                found = true;
                break;
            }
        }
        if (!found)
            throw Error("no candidate keeps every constraint nonzero at x" + std::to_string(j) +
                        "; broken handle or violated field precondition");
    }
    for (AlignmentHandle* h : handles) res.pit_calls += h->pit_calls();
    return res;
}

namespace {

PitReport sweep_shifted_sum(const PrimeField& field, std::uint32_t n, std::uint32_t k,
                            const std::vector<Scalar>& shift,
                            const std::function<std::vector<std::uint64_t>(const PointBlock&)>& eval,
                            const std::function<Scalar(std::span<const Scalar>)>& verify,
                            const Caps& caps, PitStats base_stats) {
    PitReport rep;
    rep.stats = base_stats;
    PointSet w_set = PointSet::low_weight(field, n, std::min<std::uint32_t>(7 * k, n));
    std::vector<std::uint64_t> shift_raw;
    shift_raw.reserve(shift.size());
    for (const Scalar& s : shift) shift_raw.push_back(s.value());
    std::optional<ScanHit> hit =
        scan_for_nonzero(w_set, &shift_raw, eval, caps.max_points, rep.stats, "--cap-points");
    if (hit) {
        rep.is_zero = false;
        rep.witness = to_scalars(field, hit->point);
        if (verify(*rep.witness).is_zero()) throw Error("sum witness fails re-evaluation");
    }
    return rep;
}

} // namespace

PitReport sum_pit_nonblackbox(std::span<const Roabp> programs, const Caps& caps) {
    if (programs.empty()) throw ValidationError("sum test needs at least one program");
    const PrimeField& field = programs.front().field();
    const std::uint32_t n = programs.front().num_vars();
    const std::uint32_t k = static_cast<std::uint32_t>(programs.size());
    for (const Roabp& p : programs) {
        if (p.field().modulus() != field.modulus()) throw FieldMismatchError("summands over different fields");
        if (p.num_vars() != n) throw ValidationError("summands over different variable counts");
    }
    std::vector<std::unique_ptr<StructuralAlignmentHandle>> handles;
    std::vector<AlignmentHandle*> hptrs;
    for (const Roabp& p : programs) {
        handles.push_back(std::make_unique<StructuralAlignmentHandle>(p));
        hptrs.push_back(handles.back().get());
    }
    const std::vector<Scalar> candidates = alignment_candidates(field, k, n);
    AlignmentResult align = find_alignment(hptrs, n, candidates);

    PitStats stats;
    stats.pit_calls = align.pit_calls;
    const std::uint64_t p = field.modulus();
    auto eval = [&](const PointBlock& b) {
        stats.program_evals += b.rows * k;
        std::vector<std::uint64_t> acc(b.rows, 0);
        for (const Roabp& prog : programs) {
            std::vector<std::uint64_t> vals = prog.evaluate_block(b);
            for (std::size_t r = 0; r < b.rows; ++r) {
                std::uint64_t s = acc[r] + vals[r];
                acc[r] = s >= p ? s - p : s;
            }
        }
        return acc;
    };
    auto verify = [&](std::span<const Scalar> point) {
        Scalar acc = field.zero();
        for (const Roabp& prog : programs) acc += prog.evaluate(point);
        return acc;
    };
    PitReport rep = sweep_shifted_sum(field, n, k, align.shift, eval, verify, caps, stats);
    rep.stats.program_evals = stats.program_evals;
    return rep;
}

PitReport sum_pit_semiblackbox(std::span<const BlackBox> boxes, const Caps& caps) {
    if (boxes.empty()) throw ValidationError("sum test needs at least one box");
    const PrimeField& field = boxes.front().field();
    const std::uint32_t n = boxes.front().dimension();
    const std::uint32_t k = static_cast<std::uint32_t>(boxes.size());
    std::vector<std::uint64_t> q0;
    for (const BlackBox& b : boxes) {
        if (b.field().modulus() != field.modulus()) throw FieldMismatchError("summands over different fields");
        if (b.dimension() != n) throw ValidationError("summands over different variable counts");
        q0.push_back(b.base_queries());
    }
    std::vector<std::unique_ptr<QueryAlignmentHandle>> handles;
    std::vector<AlignmentHandle*> hptrs;
    for (const BlackBox& b : boxes) {
        handles.push_back(std::make_unique<QueryAlignmentHandle>(b, caps));
        hptrs.push_back(handles.back().get());
    }
    const std::vector<Scalar> candidates = alignment_candidates(field, k, n);
    AlignmentResult align = find_alignment(hptrs, n, candidates);

    PitStats stats;
    stats.pit_calls = align.pit_calls;
    const std::uint64_t p = field.modulus();
    auto eval = [&](const PointBlock& b) {
        std::vector<std::uint64_t> acc(b.rows, 0);
        for (const BlackBox& box : boxes) {
            std::vector<std::uint64_t> vals = box.query_block(b);
            for (std::size_t r = 0; r < b.rows; ++r) {
                std::uint64_t s = acc[r] + vals[r];
                acc[r] = s >= p ? s - p : s;
            }
        }
        return acc;
    };
    auto verify = [&](std::span<const Scalar> point) {
        Scalar acc = field.zero();
        for (const BlackBox& box : boxes) acc += box.query(point);
        return acc;
    };
    PitReport rep = sweep_shifted_sum(field, n, k, align.shift, eval, verify, caps, stats);
    for (std::size_t i = 0; i < boxes.size(); ++i)
        rep.stats.box_queries += boxes[i].base_queries() - q0[i];
    return rep;
}

PitReport sum_pit_blackbox(const BlackBox& box, std::uint32_t k, const Caps& caps) {
    if (k < 1) throw ValidationError("summand bound k must be at least 1");
    const PrimeField& field = box.field();
    const std::uint32_t n = box.dimension();
    if (n > (1u << 20)) throw PreconditionError("dimension too large for the hitting-set sweep");
    const unsigned __int128 nn = n;
    const unsigned __int128 need = static_cast<unsigned __int128>(k) * nn * nn * nn * nn;
    if (static_cast<unsigned __int128>(field.modulus()) <= need)
        throw PreconditionError("field too small: need p > k*n^4, modulus is " +
                                std::to_string(field.modulus()));
    PitReport rep;
    const std::uint64_t q0 = box.base_queries();

    if (n == 0) {
        std::vector<Scalar> origin;
        const Scalar v = box.query(origin);
        rep.stats.points_enumerated = 1;
        if (!v.is_zero()) {
            rep.is_zero = false;
            rep.witness = origin;
        }
        rep.stats.box_queries = box.base_queries() - q0;
        return rep;
    }

    auto eval = [&](const PointBlock& b) { return box.query_block(b); };
    std::optional<ScanHit> hit;
    if (static_cast<std::uint64_t>(7) * k >= n) {
        // The weight bound is vacuous: W covers the whole 0/1 cube, and a
        // multilinear polynomial vanishing on the cube is identically zero,
        // so a single unshifted sweep decides.
        PointSet w_set = PointSet::low_weight(field, n, n);
        hit = scan_for_nonzero(w_set, nullptr, eval, caps.max_points, rep.stats, "--cap-points");
    } else {
        const std::uint64_t v_count = static_cast<std::uint64_t>(need) + 1;
        if (v_count > caps.max_points)
            throw CapExceededError("candidate set V of size " + std::to_string(v_count) +
                                       " exceeds the point cap; full-scale sweep truncated",
                                   "--cap-points");
        std::vector<Scalar> values;
        values.reserve(v_count);
        for (std::uint64_t c = 0; c < v_count; ++c) values.push_back(field.make(c));
        SVGenerator gen(AnchorSet::canonical(field, n), ceil_log2(n) + 1);
        PointSet image = PointSet::generator_image(gen, std::move(values));
        PointSet sweep = PointSet::sum(image, PointSet::low_weight(field, n, 7 * k));
        hit = scan_for_nonzero(sweep, nullptr, eval, caps.max_points, rep.stats, "--cap-points");
    }
    if (hit) {
        rep.is_zero = false;
        rep.witness = to_scalars(field, hit->point);
        if (box.query(*rep.witness).is_zero()) throw Error("hitting-set witness fails re-evaluation");
    }
    rep.stats.box_queries = box.base_queries() - q0;
    return rep;
}

} // namespace ropit

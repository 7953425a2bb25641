#include "ropit/sparse.hpp"

#include <algorithm>

namespace ropit {

SparseMultilinear::SparseMultilinear(const PrimeField& field, std::uint32_t num_vars)
    : field_(field), num_vars_(num_vars) {
    if (num_vars > VarSet::kMaxVars)
        throw PreconditionError("the sparse oracle is desk-scale only: at most 64 variables");
}

SparseMultilinear SparseMultilinear::constant(const PrimeField& field, std::uint32_t num_vars,
                                              const Scalar& c) {
    SparseMultilinear f(field, num_vars);
    f.add_term(VarSet{}, c);
    return f;
}

SparseMultilinear SparseMultilinear::monomial(const PrimeField& field, std::uint32_t num_vars,
                                              VarSet vars, const Scalar& coeff) {
    SparseMultilinear f(field, num_vars);
    f.add_term(vars, coeff);
    return f;
}

void SparseMultilinear::check_compatible(const SparseMultilinear& o) const {
    if (field_.modulus() != o.field_.modulus()) throw FieldMismatchError("polynomials over different fields");
    if (num_vars_ != o.num_vars_) throw ValidationError("polynomials over different variable counts");
}

Scalar SparseMultilinear::coefficient(VarSet term) const {
    auto it = terms_.find(term.bits());
    return it == terms_.end() ? field_.zero() : field_.make(it->second);
}

void SparseMultilinear::add_term(VarSet term, const Scalar& coeff) {
    if (coeff.modulus() != field_.modulus()) throw FieldMismatchError("coefficient from a different field");
    if (!term.is_subset_of(VarSet::all(num_vars_)))
        throw ValidationError("term references a variable outside [n]");
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(term.bits(), coeff.value());
    if (!inserted) {
        std::uint64_t s = (field_.make(it->second) + coeff).value();
        if (s == 0)
            terms_.erase(it);
        else
            it->second = s;
    }
}

Scalar SparseMultilinear::evaluate(std::span<const Scalar> point) const {
    if (point.size() != num_vars_) throw ValidationError("evaluation point has wrong dimension");
    Scalar acc = field_.zero();
    for (const auto& [mask, coeff] : terms_) {
        Scalar t = field_.make(coeff);
        for (std::uint32_t i : VarSet::from_bits(mask)) t *= point[i - 1];
        acc += t;
    }
    return acc;
}

SparseMultilinear SparseMultilinear::operator+(const SparseMultilinear& o) const {
    check_compatible(o);
    SparseMultilinear out = *this;
    for (const auto& [mask, coeff] : o.terms_) out.add_term(VarSet::from_bits(mask), field_.make(coeff));
    return out;
}

SparseMultilinear SparseMultilinear::operator-(const SparseMultilinear& o) const {
    check_compatible(o);
    SparseMultilinear out = *this;
    for (const auto& [mask, coeff] : o.terms_) out.add_term(VarSet::from_bits(mask), -field_.make(coeff));
    return out;
}

SparseMultilinear SparseMultilinear::scaled(const Scalar& c) const {
    SparseMultilinear out(field_, num_vars_);
    for (const auto& [mask, coeff] : terms_) out.add_term(VarSet::from_bits(mask), field_.make(coeff) * c);
    return out;
}

SparseMultilinear SparseMultilinear::restricted(std::uint32_t var, const Scalar& value) const {
    SparseMultilinear out(field_, num_vars_);
    for (const auto& [mask, coeff] : terms_) {
        VarSet t = VarSet::from_bits(mask);
        if (t.contains(var))
            out.add_term(t.without(var), field_.make(coeff) * value);
        else
            out.add_term(t, field_.make(coeff));
    }
    return out;
}

SparseMultilinear SparseMultilinear::derivative(std::uint32_t var) const {
    SparseMultilinear out(field_, num_vars_);
    for (const auto& [mask, coeff] : terms_) {
        VarSet t = VarSet::from_bits(mask);
        if (t.contains(var)) out.add_term(t.without(var), field_.make(coeff));
    }
    return out;
}

SparseMultilinear SparseMultilinear::times_var(std::uint32_t var) const {
    SparseMultilinear out(field_, num_vars_);
    for (const auto& [mask, coeff] : terms_) {
        VarSet t = VarSet::from_bits(mask);
        if (t.contains(var)) throw ValidationError("times_var would break multilinearity");
        out.add_term(t.with(var), field_.make(coeff));
    }
    return out;
}

SparseMultilinear SparseMultilinear::shifted(std::span<const Scalar> v, std::uint64_t term_cap) const {
    if (v.size() != num_vars_) throw ValidationError("shift vector has wrong dimension");
    SparseMultilinear out(field_, num_vars_);
    for (const auto& [mask, coeff] : terms_) {
        // expand prod_{i in T} (x_i + v_i) over all subsets of T
        const std::vector<std::uint32_t> idx = VarSet::from_bits(mask).to_vector();
        const std::uint64_t subsets = std::uint64_t{1} << idx.size();
        for (std::uint64_t s = 0; s < subsets; ++s) {
            Scalar c = field_.make(coeff);
            VarSet kept;
            for (std::size_t b = 0; b < idx.size(); ++b) {
                if ((s >> b) & 1)
                    kept = kept.with(idx[b]);
                else
                    c *= v[idx[b] - 1];
            }
            out.add_term(kept, c);
            if (out.terms_.size() > term_cap)
                throw CapExceededError("shifted expansion exceeds term cap", "--cap-terms");
        }
    }
    return out;
}

bool SparseMultilinear::equals(const SparseMultilinear& o) const {
    check_compatible(o);
    return terms_ == o.terms_;
}

VarSet SparseMultilinear::dependent_vars() const {
    std::uint64_t bits = 0;
    for (const auto& [mask, coeff] : terms_) bits |= mask;
    return VarSet::from_bits(bits);
}

SparseMultilinear from_roabp(const Roabp& program, std::uint64_t term_cap) {
    const PrimeField& field = program.field();
    if (program.num_vars() > VarSet::kMaxVars)
        throw PreconditionError("the sparse oracle is desk-scale only: at most 64 variables");
    const auto& levels = program.levels();
    std::vector<SparseMultilinear> prev(levels[0].size(),
                                        SparseMultilinear::constant(field, program.num_vars(), field.one()));
    for (std::size_t l = 1; l < levels.size(); ++l) {
        std::vector<SparseMultilinear> cur(levels[l].size(),
                                           SparseMultilinear(field, program.num_vars()));
        std::uint64_t level_terms = 0;
        for (std::size_t q = 0; q < levels[l].size(); ++q) {
            for (std::uint32_t ei : program.incoming_edges(levels[l][q])) {
                const Edge& e = program.edges()[ei];
                const SparseMultilinear& src = prev[program.node_position(e.from)];
                if (e.label.is_variable())
                    cur[q] = cur[q] + src.times_var(e.label.var_index());
                else
                    cur[q] = cur[q] + src.scaled(e.label.const_value());
            }
            level_terms += cur[q].term_count();
            if (level_terms > term_cap)
                throw CapExceededError("program expansion exceeds term cap", "--cap-terms");
        }
        prev = std::move(cur);
    }
    return prev.front();
}

std::vector<std::pair<std::vector<std::uint32_t>, Scalar>> sorted_terms(const SparseMultilinear& f) {
    std::vector<std::pair<std::vector<std::uint32_t>, Scalar>> out;
    out.reserve(f.term_count());
    for (const auto& [mask, coeff] : f.terms())
        out.emplace_back(VarSet::from_bits(mask).to_vector(), f.field().make(coeff));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

bool is_decent(const SparseMultilinear& f) {
    // d2f/dx_a dx_b != 0 iff some term contains both a and b (no cancellation
    // is possible across distinct multilinear monomials).
    const std::uint32_t n = f.num_vars();
    std::vector<bool> pair_live(static_cast<std::size_t>(n) * n, false);
    for (const auto& [mask, coeff] : f.terms()) {
        const std::vector<std::uint32_t> idx = VarSet::from_bits(mask).to_vector();
        for (std::size_t x = 0; x < idx.size(); ++x)
            for (std::size_t y = x + 1; y < idx.size(); ++y)
                pair_live[static_cast<std::size_t>(idx[x] - 1) * n + (idx[y] - 1)] = true;
    }
    for (std::uint32_t a = 1; a <= n; ++a) {
        for (std::uint32_t b = a + 1; b <= n; ++b) {
            if (!pair_live[static_cast<std::size_t>(a - 1) * n + (b - 1)]) continue;
            if (f.coefficient(VarSet{}.with(a).with(b)).is_zero()) return false;
        }
    }
    return true;
}

namespace {

// Scalar proportionality: b == c * a for some nonzero c. Returns c, or nullopt.
std::optional<Scalar> proportional(const SparseMultilinear& a, const SparseMultilinear& b) {
    if (b.is_zero() || a.is_zero()) return std::nullopt;
    if (a.term_count() != b.term_count()) return std::nullopt;
    const auto& at = a.terms();
    const auto& bt = b.terms();
    auto ai = at.begin();
    auto bi = bt.begin();
    if (ai->first != bi->first) return std::nullopt;
    const Scalar c = a.field().make(bi->second) * a.field().make(ai->second).inverse();
    for (; ai != at.end(); ++ai, ++bi) {
        if (ai->first != bi->first) return std::nullopt;
        if (a.field().make(ai->second) * c != a.field().make(bi->second)) return std::nullopt;
    }
    return c;
}

PairCertificate check_variable(const SparseMultilinear& f, std::uint32_t i, VarSet ambient) {
    PairCertificate cert;
    cert.var = i;
    const PrimeField& field = f.field();
    const std::vector<std::uint32_t> pool = ambient.without(i).to_vector();
    for (std::size_t x = 0; x < pool.size(); ++x) {
        for (std::size_t y = x + 1; y < pool.size(); ++y) {
            const std::uint32_t j = pool[x], k = pool[y];
            const SparseMultilinear h = f.derivative(j).derivative(k);
            const SparseMultilinear a = h.derivative(i);
            if (h.is_zero() || a.is_zero()) {
                // h = (-h) * (0*x_i - 1): beta = 0 and any nonzero alpha.
                cert.witnessed = true;
                cert.j = j;
                cert.k = k;
                cert.beta = field.zero();
                cert.alpha = field.one();
                return cert;
            }
            const SparseMultilinear b = h.restricted(i, field.zero());
            if (auto c = proportional(a, b)) {
                // h = a*x_i + c*a = a * (x_i - (-c)): beta = 1, alpha = -c != 0.
                cert.witnessed = true;
                cert.j = j;
                cert.k = k;
                cert.beta = field.one();
                cert.alpha = -*c;
                cert.c = *c;
                return cert;
            }
            cert.failed_pairs.emplace_back(j, k);
        }
    }
    return cert;
}

} // namespace

AlignmentVerdict is_prealigned_on(const SparseMultilinear& f, VarSet s, VarSet ambient) {
    AlignmentVerdict verdict;
    verdict.holds = true;
    if (f.dependent_vars().count() <= 2) {
        for (std::uint32_t i : s) {
            PairCertificate cert;
            cert.var = i;
            cert.witnessed = true;
            cert.trivial_base = true;
            verdict.certificates.push_back(std::move(cert));
        }
        return verdict;
    }
    for (std::uint32_t i : s) {
        PairCertificate cert = check_variable(f, i, ambient);
        verdict.holds = verdict.holds && cert.witnessed;
        verdict.certificates.push_back(std::move(cert));
    }
    return verdict;
}

AlignmentVerdict is_prealigned_on(const SparseMultilinear& f, VarSet s) {
    return is_prealigned_on(f, s, VarSet::all(f.num_vars()));
}

bool is_prealigned(const SparseMultilinear& f) {
    return is_prealigned_on(f, f.dependent_vars()).holds;
}

namespace {

bool aligned_rec(const SparseMultilinear& f, VarSet ambient, std::uint64_t zeroed,
                 std::map<std::uint64_t, bool>& memo) {
    auto it = memo.find(zeroed);
    if (it != memo.end()) return it->second;
    const VarSet vars = f.dependent_vars();
    bool ok = true;
    if (vars.count() > 2) {
        ok = is_prealigned_on(f, vars, ambient).holds;
        if (ok) {
            for (std::uint32_t i : vars) {
                if (!aligned_rec(f.restricted(i, f.field().zero()), ambient.without(i),
                                 zeroed | VarSet::single(i).bits(), memo)) {
                    ok = false;
                    break;
                }
            }
        }
    }
    memo[zeroed] = ok;
    return ok;
}

} // namespace

bool is_aligned(const SparseMultilinear& f, VarSet ambient, AlignConfig cfg) {
    if (f.dependent_vars().count() > cfg.max_vars)
        throw CapExceededError("alignment recursion over " + std::to_string(f.dependent_vars().count()) +
                                   " variables",
                               "--cap-align-vars");
    std::map<std::uint64_t, bool> memo;
    return aligned_rec(f, ambient, 0, memo);
}

bool is_aligned(const SparseMultilinear& f, AlignConfig cfg) {
    return is_aligned(f, VarSet::all(f.num_vars()), cfg);
}

} // namespace ropit

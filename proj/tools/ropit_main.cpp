#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ropit/formula.hpp"
#include "ropit/kernels.hpp"
#include "ropit/pit.hpp"
#include "ropit/serialize.hpp"
#include "ropit/svgen.hpp"

namespace {

using namespace ropit;

std::uint32_t ceil_log2_u32(std::uint32_t x) {
    std::uint32_t m = 0;
    while ((std::uint32_t{1} << m) < x) ++m;
    return m;
}

void emit(const std::string& output_path, const std::string& content) {
    if (output_path.empty())
        std::cout << content;
    else
        write_text_file(output_path, content);
}

std::string join_scalars(std::span<const Scalar> v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << v[i].value();
    }
    return out.str();
}

struct Report {
    std::ostringstream out;
    void line(const std::string& key, const std::string& value) { out << key << ": " << value << '\n'; }
    void line(const std::string& key, std::uint64_t value) { line(key, std::to_string(value)); }
    void stats(const PitStats& s) {
        line("points_enumerated", s.points_enumerated);
        line("program_evals", s.program_evals);
        line("box_queries", s.box_queries);
        line("pit_calls", s.pit_calls);
    }
    void verdict(const PitReport& r) {
        line("verdict", r.is_zero ? "zero" : "nonzero");
        stats(r.stats);
        if (r.witness) line("witness", join_scalars(*r.witness));
    }
    std::string str() const { return out.str(); }
};

std::vector<Roabp> load_programs(const std::vector<std::string>& paths) {
    std::vector<Roabp> programs;
    programs.reserve(paths.size());
    for (const std::string& p : paths) programs.push_back(load_program_file(p));
    for (const Roabp& p : programs) {
        if (p.field().modulus() != programs.front().field().modulus())
            throw ValidationError("input programs use different moduli");
        if (p.num_vars() != programs.front().num_vars())
            throw ValidationError("input programs use different variable counts");
    }
    return programs;
}

std::vector<Scalar> parse_scalar_list(const PrimeField& field, const std::string& text) {
    std::vector<Scalar> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        try {
            out.push_back(field.make(std::stoull(part)));
        } catch (const std::exception&) {
            throw ropit::ParseError("'" + part + "' is not an unsigned integer");
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"identity testing toolkit for read-once algebraic branching programs"};
    app.require_subcommand(1);

    std::string output;
    std::uint64_t cap_points = 10'000'000;
    std::uint64_t cap_terms = kDefaultTermCap;
    std::uint32_t cap_align_vars = kDefaultAlignVarCap;
    std::uint64_t modulus = PrimeField::kDefaultModulus;

    auto add_common = [&](CLI::App* cmd, bool with_modulus) {
        cmd->add_option("--output", output, "write the result to a file instead of stdout");
        cmd->add_option("--cap-points", cap_points, "maximum points per sweep (default 10^7)");
        cmd->add_option("--cap-terms", cap_terms, "maximum oracle terms (default 2^20)");
        cmd->add_option("--cap-align-vars", cap_align_vars,
                        "maximum variables in alignment verification (default 12)");
        if (with_modulus) cmd->add_option("--modulus", modulus, "prime field modulus (default 2^31-1)");
    };

    // ---- pit ----
    auto* pit_cmd = app.add_subcommand("pit", "run an identity test");
    pit_cmd->require_subcommand(1);

    std::string single_mode;
    std::string single_file;
    auto* single = pit_cmd->add_subcommand("single", "test a single program");
    single->add_option("--mode", single_mode, "structural|blackbox")
        ->required()
        ->check(CLI::IsMember({"structural", "blackbox"}));
    single->add_option("file", single_file, "program file")->required();
    add_common(single, false);
    single->callback([&] {
        const Roabp program = load_program_file(single_file);
        const std::uint32_t n = program.num_vars();
        Report rep;
        rep.line("mode", "single-" + single_mode);
        rep.line("modulus", program.field().modulus());
        rep.line("n", n);
        rep.line("nodes", program.num_nodes());
        rep.line("edges", program.edges().size());
        rep.line("size", program.num_nodes() + program.edges().size());
        if (single_mode == "structural") {
            rep.verdict(pit_single_structural(program));
        } else {
            const unsigned __int128 nn = n;
            if (static_cast<unsigned __int128>(program.field().modulus()) <= nn * nn)
                throw PreconditionError("single-blackbox mode needs p > n^2");
            rep.line("m", n == 0 ? 0 : ceil_log2_u32(std::max(n, 2u)) + 1);
            Caps caps{cap_points, cap_terms};
            rep.verdict(pit_single_blackbox(BlackBox::from_program(program), n, caps));
        }
        emit(output, rep.str());
    });

    std::string sum_mode;
    std::vector<std::string> sum_files;
    std::uint32_t sum_k = 0;
    auto* sum = pit_cmd->add_subcommand("sum", "test a sum of programs");
    sum->add_option("--mode", sum_mode, "nonblackbox|semiblackbox|blackbox")
        ->required()
        ->check(CLI::IsMember({"nonblackbox", "semiblackbox", "blackbox"}));
    sum->add_option("--k", sum_k, "summand bound for blackbox mode (default: file count)");
    sum->add_option("files", sum_files, "program files")->required()->expected(-1);
    add_common(sum, false);
    sum->callback([&] {
        std::vector<Roabp> programs = load_programs(sum_files);
        const std::uint32_t n = programs.front().num_vars();
        const std::uint64_t p = programs.front().field().modulus();
        // --k overrides the promise bound in blackbox mode only; the other
        // modes see the summands and use the file count
        const std::uint32_t file_k = static_cast<std::uint32_t>(programs.size());
        const std::uint32_t k = sum_mode == "blackbox" && sum_k ? sum_k : file_k;
        Caps caps{cap_points, cap_terms};
        Report rep;
        rep.line("mode", "sum-" + sum_mode);
        rep.line("modulus", p);
        rep.line("n", n);
        rep.line("k", k);
        if (sum_mode == "nonblackbox") {
            rep.line("candidates", static_cast<std::uint64_t>(k) * n * n + 1);
            rep.verdict(sum_pit_nonblackbox(programs, caps));
        } else if (sum_mode == "semiblackbox") {
            rep.line("candidates", static_cast<std::uint64_t>(k) * n * n + 1);
            std::vector<BlackBox> boxes;
            boxes.reserve(programs.size());
            for (Roabp& prog : programs) boxes.push_back(BlackBox::from_program(std::move(prog)));
            rep.verdict(sum_pit_semiblackbox(boxes, caps));
        } else {
            rep.line("m", n == 0 ? 0 : ceil_log2_u32(n) + 1);
            rep.line("v_size", static_cast<std::uint64_t>(k) * n * n * n * n + 1);
            rep.verdict(sum_pit_blackbox(BlackBox::sum_of_programs(std::move(programs)), k, caps));
        }
        emit(output, rep.str());
    });

    // ---- gen ----
    auto* gen_cmd = app.add_subcommand("gen", "generate example programs and point sets");
    gen_cmd->require_subcommand(1);

    std::uint32_t family_n = 1;
    auto* gen_fn = gen_cmd->add_subcommand("fn", "bipartite family over 2n variables");
    gen_fn->add_option("n", family_n, "family parameter")->required();
    add_common(gen_fn, true);
    gen_fn->callback([&] { emit(output, serialize_program(build_fn(PrimeField(modulus), family_n))); });

    auto* gen_chain = gen_cmd->add_subcommand("chain", "consecutive-pair family over 2n variables");
    gen_chain->add_option("n", family_n, "family parameter")->required();
    add_common(gen_chain, true);
    gen_chain->callback(
        [&] { emit(output, serialize_program(build_chain(PrimeField(modulus), family_n))); });

    std::uint32_t hit_n = 0, hit_weight = 0, sv_order = 0;
    std::string sv_set;
    auto* gen_hit = gen_cmd->add_subcommand("hitset", "emit a hitting-set point list");
    gen_hit->add_option("--n", hit_n, "dimension")->required();
    gen_hit->add_option("--weight", hit_weight, "maximum 0/1 weight");
    gen_hit->add_option("--sv-order", sv_order, "emit the generator image of this order");
    gen_hit->add_option("--sv-set", sv_set, "comma-separated values for the generator image");
    add_common(gen_hit, true);
    gen_hit->callback([&] {
        const PrimeField field(modulus);
        std::optional<PointSet> points;
        if (sv_order > 0) {
            SVGenerator gen(AnchorSet::canonical(field, hit_n), sv_order);
            PointSet image = PointSet::generator_image(gen, parse_scalar_list(field, sv_set));
            if (gen_hit->count("--weight"))
                points = PointSet::sum(PointSet::low_weight(field, hit_n, hit_weight), image);
            else
                points = image;
        } else {
            points = PointSet::low_weight(field, hit_n, hit_weight);
        }
        std::ostringstream out;
        out << "# n=" << hit_n << " p=" << field.modulus() << " provenance=" << points->provenance_name()
            << " count=" << points->count_clamped() << "\n";
        auto cur = points->cursor();
        std::vector<std::uint64_t> row(hit_n);
        std::uint64_t emitted = 0;
        while (cur->next(row)) {
            if (++emitted > cap_points)
                throw CapExceededError("point emission exceeds the cap", "--cap-points");
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << '\n';
        }
        emit(output, out.str());
    });

    // ---- expand ----
    std::string expand_file;
    auto* expand = app.add_subcommand("expand", "dump the exact sparse expansion of a program");
    expand->add_option("file", expand_file, "program file")->required();
    add_common(expand, false);
    expand->callback(
        [&] { emit(output, expansion_dump(from_roabp(load_program_file(expand_file), cap_terms))); });

    // ---- parse ----
    std::string formula_text;
    std::uint32_t parse_n = 0;
    auto* parse = app.add_subcommand("parse", "compile a read-once formula into a program");
    parse->add_option("formula", formula_text, "formula text, e.g. \"x1*x2+x3\"")->required();
    parse->add_option("--n", parse_n, "variable count (default: largest index used)");
    add_common(parse, true);
    parse->callback([&] {
        const PrimeField field(modulus);
        const FormulaNode tree = parse_formula(formula_text, field);
        const std::uint32_t n = std::max(parse_n, tree.max_var());
        emit(output, serialize_program(to_roabp(tree, field, n)));
    });

    // ---- align ----
    std::vector<std::string> align_files;
    auto* align = app.add_subcommand("align", "compute a simultaneous alignment shift");
    align->add_option("files", align_files, "program files")->required()->expected(-1);
    add_common(align, false);
    align->callback([&] {
        std::vector<Roabp> programs = load_programs(align_files);
        const std::uint32_t n = programs.front().num_vars();
        const std::uint32_t k = static_cast<std::uint32_t>(programs.size());
        const PrimeField field = programs.front().field();
        std::vector<std::unique_ptr<StructuralAlignmentHandle>> handles;
        std::vector<AlignmentHandle*> hptrs;
        for (const Roabp& prog : programs) {
            handles.push_back(std::make_unique<StructuralAlignmentHandle>(prog));
            hptrs.push_back(handles.back().get());
        }
        const std::vector<Scalar> candidates = alignment_candidates(field, k, n);
        const AlignmentResult result = find_alignment(hptrs, n, candidates);
        Report rep;
        rep.line("mode", "align");
        rep.line("modulus", field.modulus());
        rep.line("n", n);
        rep.line("k", k);
        rep.line("candidates", candidates.size());
        rep.line("constraints", result.constraints.size());
        rep.line("pit_calls", result.pit_calls);
        rep.line("v", join_scalars(result.shift));
        try {
            bool all_aligned = true;
            for (const Roabp& prog : programs) {
                const SparseMultilinear f = from_roabp(prog, cap_terms);
                all_aligned = all_aligned &&
                              is_aligned(f.shifted(result.shift, cap_terms), AlignConfig{cap_align_vars});
            }
            rep.line("aligned", all_aligned ? "true" : "false");
        } catch (const CapExceededError& e) {
            rep.line("verification", std::string("skipped: ") + e.what());
        }
        emit(output, rep.str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ropit::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FieldMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

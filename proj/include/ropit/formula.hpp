#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ropit/roabp.hpp"

namespace ropit {

/// Node of a read-once {+, *} formula tree. Leaves are variables or constants;
/// every variable index occurs at most once in the whole tree.
struct FormulaNode {
    enum class Kind { add, mul, variable, constant };

    Kind kind;
    std::uint32_t var_index = 0;   // variable leaves
    std::optional<Scalar> value;   // constant leaves
    std::vector<FormulaNode> children;

    static FormulaNode var(std::uint32_t index);
    static FormulaNode constant(const Scalar& v);
    static FormulaNode add(std::vector<FormulaNode> children);
    static FormulaNode mul(std::vector<FormulaNode> children);

    /// Largest variable index referenced; 0 for constant trees.
    std::uint32_t max_var() const;

    /// Direct tree evaluation; the reference for the compiler.
    Scalar evaluate(std::span<const Scalar> point) const;
};

/// Grammar:  expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
/// factor := 'x' integer | integer | '(' expr ')'.  Whitespace is
/// insignificant; '-' desugars into adding a (-1)-scaled term. Throws
/// ParseError with position on syntax errors and on read-once violations.
FormulaNode parse_formula(std::string_view text, const PrimeField& field);

/// Compiles a read-once tree into a program: series composition for products,
/// depth-equalized parallel composition for sums, single edges for leaves.
Roabp to_roabp(const FormulaNode& tree, const PrimeField& field, std::uint32_t num_vars);
Roabp to_roabp(const FormulaNode& tree, const PrimeField& field);

/// Program over 2n variables computing sum_{i odd} sum_{j even} x_i x_j:
/// levels s | u_1..u_n | w_1..w_n | t, with a complete bipartite constant
/// middle layer.
Roabp build_fn(const PrimeField& field, std::uint32_t n);

/// Program over 2n variables computing x_1 x_2 + x_2 x_3 + ... + x_{2n-1} x_{2n},
/// reading odd variables first (skip/pending tracks), then even variables.
Roabp build_chain(const PrimeField& field, std::uint32_t n);

/// Exhaustive maximum size of an edge set of K_{n,n} containing no path of
/// three edges; brute force over all edge subsets, n <= 4.
std::uint32_t max_path3_free(std::uint32_t n);

} // namespace ropit

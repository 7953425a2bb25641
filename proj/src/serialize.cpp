#include "ropit/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ropit {

using ordered_json = nlohmann::ordered_json;

std::string serialize_program(const Roabp& program) {
    ordered_json j;
    j["modulus"] = program.field().modulus();
    j["num_vars"] = program.num_vars();
    j["levels"] = program.levels();
    ordered_json edges = ordered_json::array();
    for (const Edge& e : program.edges()) {
        ordered_json je;
        je["from"] = e.from;
        je["to"] = e.to;
        if (e.label.is_variable())
            je["label"] = ordered_json{{"var", e.label.var_index()}};
        else
            je["label"] = ordered_json{{"const", e.label.const_value().value()}};
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    return j.dump(2) + "\n";
}

Roabp parse_program(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("program file is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw ParseError("program file must be a JSON object");
        const PrimeField field(j.at("modulus").get<std::uint64_t>());
        const std::uint32_t num_vars = j.at("num_vars").get<std::uint32_t>();
        auto levels = j.at("levels").get<std::vector<std::vector<std::uint32_t>>>();
        std::vector<Edge> edges;
        for (const auto& je : j.at("edges")) {
            const std::uint32_t from = je.at("from").get<std::uint32_t>();
            const std::uint32_t to = je.at("to").get<std::uint32_t>();
            const auto& label = je.at("label");
            if (label.contains("var")) {
                edges.push_back({from, to, EdgeLabel::variable(label.at("var").get<std::uint32_t>())});
            } else if (label.contains("const")) {
                const std::uint64_t c = label.at("const").get<std::uint64_t>();
                if (c >= field.modulus())
                    throw ParseError("constant " + std::to_string(c) + " not reduced modulo " +
                                     std::to_string(field.modulus()));
                edges.push_back({from, to, EdgeLabel::constant(field.make(c))});
            } else {
                throw ParseError("edge label must carry 'var' or 'const'");
            }
        }
        return Roabp(field, num_vars, std::move(levels), std::move(edges));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed program file: ") + e.what());
    }
}

Roabp load_program_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_program(ss.str());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

std::string expansion_dump(const SparseMultilinear& f) {
    std::ostringstream out;
    for (const auto& [indices, coeff] : sorted_terms(f)) {
        out << coeff.value() << " :";
        for (std::uint32_t i : indices) out << ' ' << i;
        out << '\n';
    }
    return out.str();
}

} // namespace ropit

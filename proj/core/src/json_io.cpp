#include "varfield/json_io.hpp"

#include "varfield/errors.hpp"

#include <json.hpp>

namespace varfield {

namespace {

using nlohmann::json;

const char* kind_name(AtomKind k) {
    switch (k) {
    case AtomKind::Constant: return "constant";
    case AtomKind::Time: return "time";
    case AtomKind::Space: return "space";
    case AtomKind::Field: return "field";
    case AtomKind::Deriv: return "deriv";
    }
    return "?";
}

json atom_to_json(const Atom& a) {
    json out;
    out["kind"] = kind_name(a.kind);
    switch (a.kind) {
    case AtomKind::Constant:
        out["name"] = a.name;
        break;
    case AtomKind::Time:
        break;
    case AtomKind::Space:
        out["axis"] = a.comp;
        break;
    case AtomKind::Field:
        out["name"] = a.name;
        out["comp"] = a.comp;
        break;
    case AtomKind::Deriv:
        out["name"] = a.name;
        out["comp"] = a.comp;
        out["multi"] = a.multi;
        break;
    }
    return out;
}

Atom atom_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return Atom::constant(j.at("name").get<std::string>());
    if (kind == "time") return Atom::time();
    if (kind == "space") return Atom::space(j.at("axis").get<int>());
    if (kind == "field")
        return Atom::field(j.at("name").get<std::string>(), j.at("comp").get<int>());
    if (kind == "deriv") {
        std::array<int, kCoordCount> multi{};
        auto arr = j.at("multi");
        for (int i = 0; i < kCoordCount; ++i) multi[i] = arr.at(i).get<int>();
        return Atom::deriv(j.at("name").get<std::string>(), j.at("comp").get<int>(), multi);
    }
    throw Error(ErrorCode::UnsupportedForm, "unknown atom kind in JSON: " + kind);
}

json expr_to_json_obj(const Expr& e) {
    json terms = json::array();
    for (const auto& [m, c] : e.terms()) {
        json term;
        term["coeff"] = c.str();
        json atoms = json::array();
        for (const auto& [a, p] : m) {
            json entry = atom_to_json(a);
            entry["power"] = p;
            atoms.push_back(std::move(entry));
        }
        term["atoms"] = std::move(atoms);
        terms.push_back(std::move(term));
    }
    return json{{"type", "polynomial"}, {"terms", std::move(terms)}};
}

Expr expr_from_json_obj(const json& j) {
    if (j.at("type").get<std::string>() != "polynomial")
        throw Error(ErrorCode::UnsupportedForm, "expected a polynomial expression node");
    Expr out;
    for (const auto& term : j.at("terms")) {
        Rational coeff(term.at("coeff").get<std::string>());
        Expr t = Expr::rational(coeff);
        for (const auto& entry : term.at("atoms"))
            t *= Expr::atom(atom_from_json(entry)).pow(entry.at("power").get<int>());
        out += t;
    }
    return out;
}

json equation_to_json_obj(const Equation& eq) {
    return json{{"field", eq.field},
                {"comp", eq.comp},
                {"lhs", eq.lhs.str()},
                {"lhs_tree", expr_to_json_obj(eq.lhs)}};
}

std::string dump(const json& j, int indent) {
    return indent < 0 ? j.dump() : j.dump(indent);
}

} // namespace

std::string expr_to_json(const Expr& e, int indent) {
    return dump(expr_to_json_obj(e), indent);
}

std::string equation_to_json(const Equation& eq, int indent) {
    return dump(equation_to_json_obj(eq), indent);
}

std::string equations_to_json(const std::vector<Equation>& eqs, int indent) {
    json arr = json::array();
    for (const auto& eq : eqs) arr.push_back(equation_to_json_obj(eq));
    return dump(arr, indent);
}

std::string em_report_to_json(const EmReport& r, int indent) {
    json comparisons = json::array();
    for (const auto& c : r.comparisons)
        comparisons.push_back(json{{"field", c.field},
                                   {"comp", c.comp},
                                   {"match", c.match},
                                   {"normalization", c.normalization}});
    json out{{"comparisons", std::move(comparisons)},
             {"curl_curl_identity", r.curl_curl_identity},
             {"all_match", r.all_match()}};
    return dump(out, indent);
}

std::string equivalence_report_to_json(const EquivalenceReport& r, int indent) {
    json out{{"action_lhs", r.action_lhs},
             {"action_rhs", r.action_rhs},
             {"rel_err", r.rel_err},
             {"hs", r.hs},
             {"action_errs_by_h", r.action_errs_by_h},
             {"action_order_estimate", r.action_order_estimate},
             {"residual_norms_by_h", r.residual_norms_by_h},
             {"convergence_order_estimate", r.residual_order_estimate},
             {"det_sign", r.det_sign == DetSign::positive ? "positive" : "negative"}};
    return dump(out, indent);
}

std::string equations_to_fixture_json(const std::vector<Equation>& eqs) {
    return equations_to_json(eqs, 2);
}

std::vector<Equation> equations_from_fixture_json(const std::string& json_text) {
    json arr = json::parse(json_text);
    std::vector<Equation> out;
    for (const auto& j : arr) {
        Equation eq;
        eq.field = j.at("field").get<std::string>();
        eq.comp = j.at("comp").get<int>();
        eq.lhs = expr_from_json_obj(j.at("lhs_tree"));
        out.push_back(std::move(eq));
    }
    return out;
}

} // namespace varfield

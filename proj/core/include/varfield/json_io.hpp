#pragma once

#include "varfield/electrodynamics.hpp"
#include "varfield/euler_lagrange.hpp"
#include "varfield/expr.hpp"
#include "varfield/transform.hpp"

#include <string>
#include <vector>

namespace varfield {

// JSON renderings used by the CLI; schemas documented in the README.
std::string expr_to_json(const Expr& e, int indent = -1);
std::string equation_to_json(const Equation& eq, int indent = -1);
std::string equations_to_json(const std::vector<Equation>& eqs, int indent = 2);
std::string em_report_to_json(const EmReport& r, int indent = 2);
std::string equivalence_report_to_json(const EquivalenceReport& r, int indent = 2);

// Round-trips for the target-equation fixture format.
std::string equations_to_fixture_json(const std::vector<Equation>& eqs);
std::vector<Equation> equations_from_fixture_json(const std::string& json_text);

} // namespace varfield

#pragma once

#include "varfield/lagrangian.hpp"
#include "varfield/transform_def.hpp"

#include <string>

namespace varfield {

// Grammar (normative; see README):
//
//   .lag:  { "field" name "[" (1|3) "]" ";" | "source" name "[" (1|3) "]" ";"
//            | "const" name [ "=" number ] ";" }
//          "L" "=" expr [";"]
//
//   expr:  + - * / ^ with standard precedence (^ binds tightest, then unary
//          minus, then * /, then + -); calls grad(s), div(v), curl(v),
//          dot(v,v), dt(e), d(e, xi); vector fields indexed as name[k];
//          "#" starts a comment to end of line.
//
//   .map:  "x1" = expr(xb1..xb3) ";" ... "x3" = ... ";"
//          { fieldname ["[" k "]"] = expr(barred fields) ";" }
//          [ "inverse" "{" same shape "}" ]
//
// Division is admitted only by (sub)expressions that canonicalize to a
// nonzero rational constant.
LagrangianDef parse_lagrangian(const std::string& src);
TransformDef parse_transform(const std::string& src);

// DSL rendering; reparsing the result yields a struct_equal definition.
// Requires derivative atoms of order <= 1 (always true for valid densities).
std::string render_lagrangian(const LagrangianDef& def);

} // namespace varfield

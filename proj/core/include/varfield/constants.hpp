#pragma once

#include "varfield/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace varfield {

// Named constants stay symbolic through every derivation; numeric values
// bind only when an expression is evaluated.  eps0 and c are built in and
// mu0 is derived: mu0 = 1/(eps0*c^2) whenever it is evaluated numerically.
class ConstantTable {
public:
    ConstantTable();

    void declare(const std::string& name, std::optional<Rational> value = std::nullopt);
    void set_value(const std::string& name, Rational value);

    bool is_declared(const std::string& name) const;
    std::optional<Rational> value(const std::string& name) const;

    // Numeric value if resolvable (declared value, or derived mu0).
    std::optional<double> numeric(const std::string& name) const;

    std::vector<std::string> names() const; // declaration order

private:
    std::vector<std::string> order_;
    std::map<std::string, std::optional<Rational>> values_;
};

} // namespace varfield

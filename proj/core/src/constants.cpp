#include "varfield/constants.hpp"

#include "varfield/errors.hpp"

#include <algorithm>

namespace varfield {

ConstantTable::ConstantTable() {
    declare("eps0");
    declare("c");
    declare("mu0");
}

void ConstantTable::declare(const std::string& name, std::optional<Rational> value) {
    if (!values_.count(name)) order_.push_back(name);
    values_[name] = std::move(value);
}

void ConstantTable::set_value(const std::string& name, Rational value) {
    declare(name, std::move(value));
}

bool ConstantTable::is_declared(const std::string& name) const {
    return values_.count(name) != 0;
}

std::optional<Rational> ConstantTable::value(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> ConstantTable::numeric(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) return std::nullopt;
    if (it->second) return to_double(*it->second);
    if (name == "mu0") {
        // mu0 = 1/(eps0 c^2) always holds when evaluated numerically.
        auto e = numeric("eps0");
        auto c = numeric("c");
        if (e && c && *e != 0.0 && *c != 0.0) return 1.0 / (*e * *c * *c);
    }
    return std::nullopt;
}

std::vector<std::string> ConstantTable::names() const { return order_; }

} // namespace varfield

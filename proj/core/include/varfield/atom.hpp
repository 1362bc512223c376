#pragma once

#include <array>
#include <compare>
#include <string>

namespace varfield {

// Kind values fix the canonical atom ordering:
// constants < t < x_i < field components < derivative symbols.
enum class AtomKind : int {
    Constant = 0,
    Time = 1,
    Space = 2,
    Field = 3,
    Deriv = 4,
};

// Coordinate index convention throughout: 0 = t, 1..3 = x1..x3.
inline constexpr int kCoordCount = 4;

// A single indeterminate of the polynomial algebra.  Field components and
// their derivative symbols are independent atoms; mixed partials commute
// because the multi-index is the representation.
struct Atom {
    AtomKind kind{AtomKind::Time};
    std::string name;                 // Constant, Field, Deriv
    int comp{0};                      // Space: axis 1..3; Field/Deriv: 0 = scalar, else 1..3
    std::array<int, kCoordCount> multi{0, 0, 0, 0}; // Deriv only: orders wrt t,x1,x2,x3

    static Atom time();
    static Atom space(int axis);
    static Atom constant(std::string name);
    static Atom field(std::string name, int comp = 0);
    static Atom deriv(std::string field, int comp, const std::array<int, kCoordCount>& multi);
    // First derivative of a field component wrt coordinate index (0 = t).
    static Atom d1(std::string field, int comp, int coord);

    int deriv_order() const;
    bool is_coordinate() const { return kind == AtomKind::Time || kind == AtomKind::Space; }
    // Coordinate index of a Time/Space atom.
    int coord_index() const;

    // Same atom with the derivative order wrt `coord` incremented.
    Atom raise(int coord) const;

    std::string str() const;

    auto operator<=>(const Atom&) const = default;
};

} // namespace varfield

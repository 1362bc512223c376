#include "varfield/atom.hpp"

#include "varfield/errors.hpp"

#include <numeric>
#include <sstream>

namespace varfield {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::FirstOrderViolation: return "FirstOrderViolation";
    case ErrorCode::MixedMap: return "MixedMap";
    case ErrorCode::MissingComponent: return "MissingComponent";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::UnsupportedForm: return "UnsupportedForm";
    case ErrorCode::MissingBinding: return "MissingBinding";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::OrientationFlip: return "OrientationFlip";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Atom Atom::time() {
    Atom a;
    a.kind = AtomKind::Time;
    return a;
}

Atom Atom::space(int axis) {
    if (axis < 1 || axis > 3)
        throw Error(ErrorCode::UnsupportedForm, "space axis out of range");
    Atom a;
    a.kind = AtomKind::Space;
    a.comp = axis;
    return a;
}

Atom Atom::constant(std::string name) {
    Atom a;
    a.kind = AtomKind::Constant;
    a.name = std::move(name);
    return a;
}

Atom Atom::field(std::string name, int comp) {
    Atom a;
    a.kind = AtomKind::Field;
    a.name = std::move(name);
    a.comp = comp;
    return a;
}

Atom Atom::deriv(std::string field, int comp, const std::array<int, kCoordCount>& multi) {
    Atom a;
    a.kind = AtomKind::Deriv;
    a.name = std::move(field);
    a.comp = comp;
    a.multi = multi;
    if (a.deriv_order() < 1)
        throw Error(ErrorCode::UnsupportedForm, "derivative symbol of order zero");
    return a;
}

Atom Atom::d1(std::string field, int comp, int coord) {
    std::array<int, kCoordCount> multi{0, 0, 0, 0};
    multi[coord] = 1;
    return deriv(std::move(field), comp, multi);
}

int Atom::deriv_order() const {
    return std::accumulate(multi.begin(), multi.end(), 0);
}

int Atom::coord_index() const {
    if (kind == AtomKind::Time) return 0;
    if (kind == AtomKind::Space) return comp;
    throw Error(ErrorCode::UnsupportedForm, "not a coordinate atom");
}

Atom Atom::raise(int coord) const {
    Atom a = *this;
    if (kind == AtomKind::Field) {
        a.kind = AtomKind::Deriv;
        a.multi = {0, 0, 0, 0};
    } else if (kind != AtomKind::Deriv) {
        throw Error(ErrorCode::UnsupportedForm, "cannot raise non-field atom");
    }
    a.multi[coord]++;
    return a;
}

namespace {
const char* coord_name(int coord) {
    static const char* names[kCoordCount] = {"t", "x1", "x2", "x3"};
    return names[coord];
}
} // namespace

std::string Atom::str() const {
    std::ostringstream os;
    switch (kind) {
    case AtomKind::Constant:
        os << name;
        break;
    case AtomKind::Time:
        os << "t";
        break;
    case AtomKind::Space:
        os << "x" << comp;
        break;
    case AtomKind::Field:
        os << name;
        if (comp > 0) os << "[" << comp << "]";
        break;
    case AtomKind::Deriv: {
        int order = deriv_order();
        os << "d";
        if (order > 1) os << order;
        os << name;
        if (comp > 0) os << "[" << comp << "]";
        os << "/";
        for (int c = 0; c < kCoordCount; ++c) {
            if (multi[c] == 0) continue;
            os << "d" << coord_name(c);
            if (multi[c] > 1) os << "^" << multi[c];
        }
        break;
    }
    }
    return os.str();
}

} // namespace varfield

#pragma once

#include <stdexcept>
#include <string>

namespace varfield {

enum class ErrorCode {
    Syntax,
    UnknownIdentifier,
    ArityMismatch,
    FirstOrderViolation,
    MixedMap,
    MissingComponent,
    SingularMap,
    UnsupportedForm,
    MissingBinding,
    GridTooCoarse,
    OrientationFlip,
    Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string msg)
        : std::runtime_error(std::move(msg)), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace varfield

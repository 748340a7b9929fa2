#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dgstab {

enum class ErrorCode {
    InvalidArgument,
    InvalidMatrix,
    DimensionMismatch,
    NonSymmetric,
    SingularOperator,
    SingularMatrix,
    EigenFailure,
    Overflow,
    IndexOutOfRange,
    InfiniteClass,
    NotThetaOrdered,
    Unrepresentable,
    UnsupportedClass,
    OrderTooLarge,
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace dgstab

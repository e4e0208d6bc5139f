#pragma once

#include <stdexcept>
#include <string>

namespace tenrec {

// Base class for all library errors. `code()` is a stable machine-readable
// class name, used verbatim by the CLI error reporting.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define TENREC_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& msg) : Error(#Name, msg) {} \
    }

TENREC_DEFINE_ERROR(IndexOutOfRange);
TENREC_DEFINE_ERROR(DuplicateEntry);
TENREC_DEFINE_ERROR(NonFiniteValue);
TENREC_DEFINE_ERROR(ShapeMismatch);
TENREC_DEFINE_ERROR(TooLargeForDense);
TENREC_DEFINE_ERROR(RankTooLarge);
TENREC_DEFINE_ERROR(ConvergenceFailure);
TENREC_DEFINE_ERROR(NotSymmetric);
TENREC_DEFINE_ERROR(NotPositiveDefinite);
TENREC_DEFINE_ERROR(SingularFactor);
TENREC_DEFINE_ERROR(UnknownField);
TENREC_DEFINE_ERROR(EmptyList);
TENREC_DEFINE_ERROR(EmptyHistory);
TENREC_DEFINE_ERROR(EmptyGrid);
TENREC_DEFINE_ERROR(ParseError);
TENREC_DEFINE_ERROR(UnknownRatingValue);
TENREC_DEFINE_ERROR(NotEnoughEligibleUsers);
TENREC_DEFINE_ERROR(DegenerateSample);
TENREC_DEFINE_ERROR(ConfigError);
TENREC_DEFINE_ERROR(IoError);

#undef TENREC_DEFINE_ERROR

}  // namespace tenrec

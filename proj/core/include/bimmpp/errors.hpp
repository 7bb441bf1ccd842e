#pragma once

#include <stdexcept>
#include <string>

namespace bimmpp {

// Error taxonomy shared by the whole library. Each error carries a stable
// name used by the CLI to pick an exit code and report on stderr.
// Category: validation errors reject malformed input; numerical errors
// report a computation that could not be completed on valid input.
enum class ErrorCategory { Validation, Numerical };

class Error : public std::runtime_error {
public:
    Error(std::string name, ErrorCategory cat, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)), cat_(cat) {}
    const std::string& name() const noexcept { return name_; }
    ErrorCategory category() const noexcept { return cat_; }

private:
    std::string name_;
    ErrorCategory cat_;
};

#define BIMMPP_DEFINE_ERROR(Name, Category)                                   \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what)                                \
            : Error(#Name, ErrorCategory::Category, what) {}                  \
    }

BIMMPP_DEFINE_ERROR(InvalidParameter, Validation);
BIMMPP_DEFINE_ERROR(ShapeMismatch, Validation);
BIMMPP_DEFINE_ERROR(TooShort, Validation);
BIMMPP_DEFINE_ERROR(UnsupportedOrder, Validation);
BIMMPP_DEFINE_ERROR(BadFormat, Validation);

BIMMPP_DEFINE_ERROR(SingularMatrix, Numerical);
BIMMPP_DEFINE_ERROR(Reducible, Numerical);
BIMMPP_DEFINE_ERROR(DegenerateChain, Numerical);
BIMMPP_DEFINE_ERROR(ZeroVariance, Numerical);
BIMMPP_DEFINE_ERROR(Divergent, Numerical);
BIMMPP_DEFINE_ERROR(NoConvergence, Numerical);
BIMMPP_DEFINE_ERROR(HorizonTooShort, Numerical);
BIMMPP_DEFINE_ERROR(EmptyCondition, Numerical);

#undef BIMMPP_DEFINE_ERROR

} // namespace bimmpp

#pragma once

#include <stdexcept>
#include <string>

namespace toeplab {

// Exit-status classes used by the command line front end.
enum class ErrorClass { check_failed = 1, config = 2, degenerate = 3 };

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what, ErrorClass cls)
        : std::runtime_error(code + ": " + what), code_(std::move(code)), class_(cls)
    {
    }

    const std::string& code() const noexcept { return code_; }
    ErrorClass error_class() const noexcept { return class_; }

private:
    std::string code_;
    ErrorClass class_;
};

#define TOEPLAB_DEFINE_ERROR(Name, code_str, cls)                                      \
    class Name : public Error {                                                        \
    public:                                                                            \
        explicit Name(const std::string& what) : Error(code_str, what, cls) {}         \
    };

TOEPLAB_DEFINE_ERROR(ContractViolation, "core.ContractViolation", ErrorClass::config)
TOEPLAB_DEFINE_ERROR(NotInvertible, "core.NotInvertible", ErrorClass::degenerate)
TOEPLAB_DEFINE_ERROR(DomainError, "core.DomainError", ErrorClass::degenerate)
TOEPLAB_DEFINE_ERROR(ParseError, "core.ParseError", ErrorClass::config)
TOEPLAB_DEFINE_ERROR(UnclassifiableWeight, "weight.UnclassifiableWeight", ErrorClass::config)
TOEPLAB_DEFINE_ERROR(UnsupportedExactWeight, "weight.UnsupportedExactWeight", ErrorClass::config)
TOEPLAB_DEFINE_ERROR(InsufficientState, "lattice.InsufficientState", ErrorClass::config)
TOEPLAB_DEFINE_ERROR(SingularVariable, "recursion.SingularVariable", ErrorClass::degenerate)
TOEPLAB_DEFINE_ERROR(UnsolvableStep, "recursion.UnsolvableStep", ErrorClass::degenerate)
TOEPLAB_DEFINE_ERROR(ConsistencyFailure, "recursion.ConsistencyFailure", ErrorClass::check_failed)
TOEPLAB_DEFINE_ERROR(ConfinementFailure, "recursion.ConfinementFailure", ErrorClass::check_failed)
TOEPLAB_DEFINE_ERROR(DegenerateInitialData, "recursion.DegenerateInitialData", ErrorClass::degenerate)
TOEPLAB_DEFINE_ERROR(IdentityFailure, "flows.IdentityFailure", ErrorClass::check_failed)
TOEPLAB_DEFINE_ERROR(IntegrationDiverged, "flows.IntegrationDiverged", ErrorClass::degenerate)
TOEPLAB_DEFINE_ERROR(RefusedSize, "combinatorics.RefusedSize", ErrorClass::config)

#undef TOEPLAB_DEFINE_ERROR

class SingularTau : public Error {
public:
    explicit SingularTau(int n)
        : Error("toeplitz.SingularTau", "tau determinant not invertible at n=" + std::to_string(n),
                ErrorClass::degenerate),
          n_(n)
    {
    }
    int n() const noexcept { return n_; }

private:
    int n_;
};

} // namespace toeplab

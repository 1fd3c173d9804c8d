#pragma once

#include <stdexcept>
#include <string>

namespace dbar {

/// Exit codes used by the command-line tool. Each error class owns one code.
enum class ErrorCode : int {
    ok = 0,
    usage = 1,
    grid = 2,
    sample = 3,
    domain = 4,
    degenerate_line = 5,
    support_touches_z = 6,
    support_not_compact = 7,
    geometry = 8,
    puncture_too_close = 9,
    moment_obstruction = 10,
    structure_obstruction = 11,
    not_closed = 12,
    support_leak = 13,
    star_condition = 14,
    depth = 15,
    format = 16,
    verify_failed = 17,
    unknown_testcase = 18,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }
    virtual const char* kind() const noexcept = 0;

private:
    ErrorCode code_;
};

#define DBAR_DEFINE_ERROR(Name, Code)                                           \
    class Name : public Error {                                                 \
    public:                                                                     \
        explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
        const char* kind() const noexcept override { return #Name; }            \
    };

DBAR_DEFINE_ERROR(UsageError, usage)
DBAR_DEFINE_ERROR(GridError, grid)
DBAR_DEFINE_ERROR(SampleError, sample)
DBAR_DEFINE_ERROR(DomainError, domain)
DBAR_DEFINE_ERROR(DegenerateLineError, degenerate_line)
DBAR_DEFINE_ERROR(SupportTouchesZError, support_touches_z)
DBAR_DEFINE_ERROR(SupportNotCompactError, support_not_compact)
DBAR_DEFINE_ERROR(GeometryError, geometry)
DBAR_DEFINE_ERROR(PunctureTooCloseError, puncture_too_close)
DBAR_DEFINE_ERROR(NotClosedError, not_closed)
DBAR_DEFINE_ERROR(SupportLeakError, support_leak)
DBAR_DEFINE_ERROR(StarConditionError, star_condition)
DBAR_DEFINE_ERROR(DepthError, depth)
DBAR_DEFINE_ERROR(FormatError, format)
DBAR_DEFINE_ERROR(UnknownTestcaseError, unknown_testcase)

#undef DBAR_DEFINE_ERROR

/// Raised when a moment [φ](l) or punctured moment [φ,j](l) exceeds tolerance.
/// puncture == 0 denotes the outer moment.
class MomentObstructionError : public Error {
public:
    MomentObstructionError(const std::string& what, int puncture, int l, double value)
        : Error(ErrorCode::moment_obstruction, what), puncture(puncture), l(l), value(value) {}
    const char* kind() const noexcept override { return "MomentObstructionError"; }
    int puncture;
    int l;
    double value;
};

/// Raised when a truncated structure condition fails. `spec` is a readable
/// rendering of the failing (mu, l, k, j) entry.
class StructureObstructionError : public Error {
public:
    StructureObstructionError(const std::string& what, std::string spec, double value)
        : Error(ErrorCode::structure_obstruction, what), spec(std::move(spec)), value(value) {}
    const char* kind() const noexcept override { return "StructureObstructionError"; }
    std::string spec;
    double value;
};

}  // namespace dbar

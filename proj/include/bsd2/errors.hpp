#pragma once

#include <stdexcept>
#include <string>

namespace bsd2 {

// Base of every library error; `kind()` is the stable machine-readable name
// used in reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define BSD2_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

BSD2_DEFINE_ERROR(PreconditionViolated);
BSD2_DEFINE_ERROR(NoRationalInRange);
BSD2_DEFINE_ERROR(SingularCurve);
BSD2_DEFINE_ERROR(Degree6Field);
BSD2_DEFINE_ERROR(NoRationalTwoTorsion);
BSD2_DEFINE_ERROR(SignMinusOne);
BSD2_DEFINE_ERROR(EigenspaceNotFound);
BSD2_DEFINE_ERROR(CalibrationMismatch);
BSD2_DEFINE_ERROR(LevelTooLarge);
BSD2_DEFINE_ERROR(IdentityViolated);
BSD2_DEFINE_ERROR(IntegralityViolated);
BSD2_DEFINE_ERROR(CrossCheckFailed);
BSD2_DEFINE_ERROR(PrecisionExhausted);
BSD2_DEFINE_ERROR(CriteriaDisagree);
BSD2_DEFINE_ERROR(InadmissibleTwist);
BSD2_DEFINE_ERROR(LedgerMismatch);
BSD2_DEFINE_ERROR(ConfigError);

#undef BSD2_DEFINE_ERROR

}  // namespace bsd2

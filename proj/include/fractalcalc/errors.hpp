#pragma once

#include <stdexcept>
#include <string>

namespace fractalcalc {

// Base of every error raised by the library. Callers that do not care about
// the category can catch this one type.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define FRACTALCALC_ERROR(Name)                                                \
  class Name : public Error {                                                  \
  public:                                                                      \
    using Error::Error;                                                        \
  }

FRACTALCALC_ERROR(PoleError);
FRACTALCALC_ERROR(DomainError);
FRACTALCALC_ERROR(ConvergenceError);
FRACTALCALC_ERROR(SpecError);
FRACTALCALC_ERROR(RangeError);
FRACTALCALC_ERROR(GridError);
FRACTALCALC_ERROR(OrderError);
FRACTALCALC_ERROR(SingularGridError);
FRACTALCALC_ERROR(TruncationError);
FRACTALCALC_ERROR(StripError);
FRACTALCALC_ERROR(NoConvergence);

#undef FRACTALCALC_ERROR

} // namespace fractalcalc

#pragma once

#include <stdexcept>
#include <string>

namespace reilly_lab {

struct LabError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define REILLY_LAB_ERROR(Name)             \
  struct Name : LabError {                 \
    using LabError::LabError;              \
  }

REILLY_LAB_ERROR(DomainError);
REILLY_LAB_ERROR(ConvexityViolation);
REILLY_LAB_ERROR(SingularSystem);
REILLY_LAB_ERROR(ConvergenceFailure);
REILLY_LAB_ERROR(CurvatureNotPositive);
REILLY_LAB_ERROR(StrengthenedDegenerate);
REILLY_LAB_ERROR(MeanConvexityViolation);
REILLY_LAB_ERROR(NonRadialInput);
REILLY_LAB_ERROR(CapOverflow);
REILLY_LAB_ERROR(PositivityLoss);
REILLY_LAB_ERROR(ConfigError);

#undef REILLY_LAB_ERROR

}  // namespace reilly_lab

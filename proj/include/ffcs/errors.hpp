#pragma once

#include <stdexcept>
#include <string>

namespace ffcs {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FFCS_DEFINE_ERROR(Name)     \
  class Name : public Error {       \
   public:                          \
    using Error::Error;             \
  };

// field
FFCS_DEFINE_ERROR(NonPrimeCharacteristic)
FFCS_DEFINE_ERROR(SuppliedPolynomialNotPrimitive)
FFCS_DEFINE_ERROR(FieldTooLarge)
FFCS_DEFINE_ERROR(DivisionByZero)
FFCS_DEFINE_ERROR(FieldMismatch)
FFCS_DEFINE_ERROR(DomainError)
FFCS_DEFINE_ERROR(InvalidArgument)

// lifting
FFCS_DEFINE_ERROR(RowCountNotDivisible)
FFCS_DEFINE_ERROR(NotInBaseSpan)

// codes
FFCS_DEFINE_ERROR(DecodeFailure)

// sensing
FFCS_DEFINE_ERROR(DimensionMismatch)
FFCS_DEFINE_ERROR(DimensionTooLargeForField)
FFCS_DEFINE_ERROR(RecoveryFailure)
FFCS_DEFINE_ERROR(SearchSpaceTooLarge)
FFCS_DEFINE_ERROR(NoSolutionWithinWeight)
FFCS_DEFINE_ERROR(SchemeFormatError)

// noisy pipeline
FFCS_DEFINE_ERROR(InfeasibleRate)
FFCS_DEFINE_ERROR(OuterFieldTooSmall)
FFCS_DEFINE_ERROR(OuterDecodeFailure)

// real-valued baseline
FFCS_DEFINE_ERROR(IllConditionedActiveSet)

// tracking
FFCS_DEFINE_ERROR(ConstantSeries)
FFCS_DEFINE_ERROR(RaggedRows)
FFCS_DEFINE_ERROR(NonNumericCell)

// experiment driver
FFCS_DEFINE_ERROR(ConfigError)

#undef FFCS_DEFINE_ERROR

}  // namespace ffcs

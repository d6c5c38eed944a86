#pragma once

#include <stdexcept>
#include <string>

namespace sll {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define SLL_DEFINE_ERROR(NAME)                                  \
  class NAME : public Error {                                   \
   public:                                                      \
    explicit NAME(const std::string& what) : Error(what) {}     \
  }

SLL_DEFINE_ERROR(InvalidDistributionError);
SLL_DEFINE_ERROR(AllZeroError);
SLL_DEFINE_ERROR(OutOfRangeError);
SLL_DEFINE_ERROR(DegenerateDataError);
SLL_DEFINE_ERROR(NonFiniteError);
SLL_DEFINE_ERROR(NotFittedError);
SLL_DEFINE_ERROR(DimensionMismatchError);
SLL_DEFINE_ERROR(ShapeMismatchError);
SLL_DEFINE_ERROR(DegenerateFilterError);
SLL_DEFINE_ERROR(SingleClassError);
SLL_DEFINE_ERROR(ZeroWeightError);
SLL_DEFINE_ERROR(TooFewFeaturesError);
SLL_DEFINE_ERROR(ParseError);
SLL_DEFINE_ERROR(SchemaError);

#undef SLL_DEFINE_ERROR

}  // namespace sll

#pragma once

#include <stdexcept>
#include <string>

namespace fcm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model structure cannot support the requested operation (e.g. fewer than
/// two output concepts for competitive wiring).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An argument violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// State vector / matrix sizes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value fell outside its admissible interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf appeared during iteration or training.
class NumericFault : public Error {
 public:
  using Error::Error;
};

/// A printed matrix row cannot be reconciled with the reference sparsity.
class RepairError : public Error {
 public:
  using Error::Error;
};

/// A label does not exist in the model, hierarchy or dataset label set.
class UnknownLabelError : public Error {
 public:
  using Error::Error;
};

/// Metric requested on an empty confusion matrix.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// Malformed document. Message carries line/field context.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fcm

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chainrec {

/// Base class of all recoverable engine errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry
struct NotOnCircle : Error { using Error::Error; };
struct ChordTooLong : Error { using Error::Error; };

// maps / examples
struct BadParameter : Error { using Error::Error; };
struct NotCovered : Error { using Error::Error; };
struct OffDomain : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

// chaindyn
struct TooManyCells : Error { using Error::Error; };
struct NoCycle : Error { using Error::Error; };
struct RealizationFailed : Error { using Error::Error; };

// fixedpoint
struct BudgetExceeded : Error { using Error::Error; };
struct VanishingOnLoop : Error { using Error::Error; };
struct RefinementCapExceeded : Error { using Error::Error; };
struct OrientationReversing : Error { using Error::Error; };

// cli map mini-language
struct ParseError : Error {
  std::size_t offset;
  std::string expected;
  ParseError(std::size_t off, const std::string& exp)
      : Error("parse error at byte " + std::to_string(off) + ": expected " + exp),
        offset(off),
        expected(exp) {}
};

}  // namespace chainrec

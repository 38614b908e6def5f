// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finsler {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FINSLER_DEFINE_ERROR(Name)            \
  class Name : public Error {                 \
   public:                                    \
    explicit Name(const std::string& what)    \
        : Error(#Name ": " + what) {}         \
  }

// jets
FINSLER_DEFINE_ERROR(UnknownVariable);
FINSLER_DEFINE_ERROR(DomainError);
FINSLER_DEFINE_ERROR(OrderExceeded);
FINSLER_DEFINE_ERROR(StencilOutOfDomain);
FINSLER_DEFINE_ERROR(DivisionByZero);

// expression language
FINSLER_DEFINE_ERROR(InvalidFamilyParameter);

// metric / spray / curvature
FINSLER_DEFINE_ERROR(NonPositivePhi);
FINSLER_DEFINE_ERROR(EmptyGrid);
FINSLER_DEFINE_ERROR(SingularLambda);
FINSLER_DEFINE_ERROR(SingularOmega);
FINSLER_DEFINE_ERROR(SingularPhiZZ);
FINSLER_DEFINE_ERROR(SingularMetric);
FINSLER_DEFINE_ERROR(ZDivision);

// characterization
FINSLER_DEFINE_ERROR(RankDeficientFit);
FINSLER_DEFINE_ERROR(NotSIndependent);
FINSLER_DEFINE_ERROR(DegenerateDenominator);

// unicorn family
FINSLER_DEFINE_ERROR(NegativeDelta);
FINSLER_DEFINE_ERROR(ZeroG2);
FINSLER_DEFINE_ERROR(DegenerateAlphaBeta);

#undef FINSLER_DEFINE_ERROR

/// Parse failure; carries the byte offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error("SyntaxError at offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : Error("UnknownIdentifier '" + name + "' at offset " + std::to_string(offset)),
        name_(name),
        offset_(offset) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

}  // namespace finsler

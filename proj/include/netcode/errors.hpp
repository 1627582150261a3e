#pragma once

#include <stdexcept>
#include <string>

namespace netcode {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NETCODE_DEFINE_ERROR(Name)         \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

// graph-core
NETCODE_DEFINE_ERROR(InvalidNetwork);
NETCODE_DEFINE_ERROR(CycleDetected);
NETCODE_DEFINE_ERROR(UnknownEdge);
NETCODE_DEFINE_ERROR(PathCapExceeded);
NETCODE_DEFINE_ERROR(PreconditionViolated);

// polynomial
NETCODE_DEFINE_ERROR(FieldMismatch);
NETCODE_DEFINE_ERROR(ZeroPolynomial);
NETCODE_DEFINE_ERROR(UnboundVariable);
NETCODE_DEFINE_ERROR(SymbolicOverflow);

// transfer / decomposition
NETCODE_DEFINE_ERROR(NotTopologicallySorted);
NETCODE_DEFINE_ERROR(DecompositionMismatch);
NETCODE_DEFINE_ERROR(NotAGnsCut);

// feasibility / codelab
NETCODE_DEFINE_ERROR(InternalContradiction);
NETCODE_DEFINE_ERROR(SearchSpaceTooLarge);
NETCODE_DEFINE_ERROR(DimensionMismatch);
NETCODE_DEFINE_ERROR(StateSpaceTooLarge);

#undef NETCODE_DEFINE_ERROR

/// Malformed network or code file. Line and column are 1-based; zero when
/// the problem is structural rather than lexical.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(line ? what + " (line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ")"
                   : what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace netcode

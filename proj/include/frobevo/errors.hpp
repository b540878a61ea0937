// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace frobevo {

/// Base class for all domain errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// grammar
struct SyntaxError : Error {
  using Error::Error;
};
struct UndefinedNonterminal : Error {
  using Error::Error;
};
struct DuplicateDefinition : Error {
  using Error::Error;
};
struct UnknownNonterminal : Error {
  using Error::Error;
};

// expr
struct ParseError : Error {
  using Error::Error;
};
struct DivisionByZero : Error {
  using Error::Error;
};
struct Overflow : Error {
  using Error::Error;
};

// oracle
struct NotCoprime : Error {
  using Error::Error;
};
struct BoundTooSmall : Error {
  using Error::Error;
};

// dataset
struct IoError : Error {
  using Error::Error;
};
struct SchemaError : Error {
  using Error::Error;
};
struct EmptyFamily : Error {
  using Error::Error;
};
struct FamilyError : Error {
  using Error::Error;
};

// evolve
struct ConfigError : Error {
  using Error::Error;
};
struct InvalidPhenotype : Error {
  using Error::Error;
};

}  // namespace frobevo

#pragma once

#include <stdexcept>
#include <string>

namespace xsb {

/// Lattice extents do not match, or a lattice cannot represent the requested support.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// |.|^s with s < 0 evaluated on its zero set with nonzero input mass.
class SingularSymbolError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Estimate quotient with a vanishing right-hand side.
class UndefinedQuotientError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace xsb

#pragma once

// Shared error types and computation caps.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fusionkit {

// All caps are inclusive upper bounds on group order.
struct Caps {
  std::uint64_t element_cap = 100000;  // full element tables
  std::uint64_t subgroup_cap = 243;    // subgroup-lattice enumeration
  std::uint64_t aut_cap = 729;         // automorphism-group search
};

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : Error {
  std::size_t line = 0;
  ParseError(const std::string& what, std::size_t ln = 0)
      : Error(ln ? "line " + std::to_string(ln) + ": " + what : what), line(ln) {}
};

// Precondition violations: degree mismatches, subgroup containment, etc.
struct DomainError : Error {
  using Error::Error;
};

struct CapExceeded : Error {
  using Error::Error;
};

struct NotAHomomorphism : Error {
  using Error::Error;
};

struct ImageOutsideCodomain : Error {
  using Error::Error;
};

// A construction whose saturation post-check failed.
struct SaturationError : Error {
  using Error::Error;
};

// A named premise of a construction was violated.
struct PremiseError : Error {
  using Error::Error;
};

}  // namespace fusionkit

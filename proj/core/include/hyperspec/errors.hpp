#pragma once

#include <stdexcept>
#include <string>

namespace hyperspec {

// Invalid geometric input: degenerate box, non-simple polygon, vertex at
// nonpositive height, and the like.
class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// The discretization left no unknowns (e.g. every vertex is a boundary vertex).
class DegenerateProblemError : public std::runtime_error {
 public:
  explicit DegenerateProblemError(const std::string& what) : std::runtime_error(what) {}
};

// Factorization or iteration failure inside a numerical kernel.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hyperspec

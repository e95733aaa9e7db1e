#pragma once

#include <stdexcept>
#include <string>

namespace simpson {

/// Input violates an operation's domain (non-positive entry, unknown id, bad text).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The table lies on a hyperplane that decides its triangulation.
class DegenerateTable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency failure of the triangulation catalog.
class CatalogError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace simpson

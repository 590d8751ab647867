// Exception types used across the library. Precondition violations throw
// std::domain_error; the types below distinguish failure classes the CLI
// maps to distinct exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace cerx {

// Malformed input files: missing columns, bad cells, inconsistent rows.
class schema_error : public std::runtime_error {
 public:
  explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures during model fitting (divergence, non-convergence).
class train_error : public std::runtime_error {
 public:
  explicit train_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem problems: unreadable or unwritable paths.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cerx

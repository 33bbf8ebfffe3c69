#ifndef QULEQ_ERROR_HPP
#define QULEQ_ERROR_HPP

#include <stdexcept>
#include <string>

namespace quleq {

// Bad arguments, malformed files, violated preconditions.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested computation would exceed a configured budget.
struct budget_error : std::runtime_error {
  explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A verification step failed (certificate mismatch, tampered message, ...).
struct verify_error : std::runtime_error {
  explicit verify_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace quleq

#endif

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cch {

// Error categories, mapped 1:1 onto CLI exit codes.
enum class Errc : int {
  usage = 1,      // bad arguments / malformed request
  io = 2,         // file missing, unreadable, malformed document
  cap = 3,        // size or enumeration cap exceeded
  assertion = 4,  // a checked invariant failed
};

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

// Absolute tolerance for float comparisons throughout.
inline constexpr double kTol = 1e-9;

// Default hard cap on generated point counts.
inline constexpr std::size_t kDefaultPointCap = 500000;

}  // namespace cch

#pragma once

// Catch matchers shared by the unit test binaries.

#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "cch/common.hpp"

namespace testsupport {

struct ErrorCodeIs : Catch::Matchers::MatcherGenericBase {
  cch::Errc code;
  explicit ErrorCodeIs(cch::Errc c) : code(c) {}
  bool match(const cch::Error& e) const { return e.code == code; }
  std::string describe() const override {
    return "exits with code " + std::to_string(int(code));
  }
};

}  // namespace testsupport

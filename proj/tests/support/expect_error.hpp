#pragma once

#include <doctest.h>

#include <string>

#include "polydens/error.hpp"

/// Runs fn and checks that it throws polydens::Error with the given code.
template <class F>
void expect_error(polydens::Errc code, F&& fn) {
  try {
    fn();
    FAIL("expected error " << std::string(polydens::to_string(code)));
  } catch (const polydens::Error& e) {
    CHECK(std::string(polydens::to_string(e.code())) == std::string(polydens::to_string(code)));
  }
}

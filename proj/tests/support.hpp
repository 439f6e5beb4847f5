#pragma once

// Helpers shared by the unit tests.

#include "doctest.h"
#include "wlap/error.hpp"

namespace wlap::test {

/// Code of the wlap::Error thrown by f; fails the test if nothing is thrown.
template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::NoSpectrumData;
}

}  // namespace wlap::test

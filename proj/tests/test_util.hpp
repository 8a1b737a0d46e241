// SPDX-License-Identifier: MIT

#ifndef PLAB_TESTS_TEST_UTIL_HPP
#define PLAB_TESTS_TEST_UTIL_HPP

#include <doctest.h>

#include "plab/common.hpp"

/// Assert that an expression throws plab::Error with the given failure class.
#define CHECK_ERRC(expr, expected)                                                               \
  do {                                                                                           \
    bool caught_ = false;                                                                        \
    try {                                                                                        \
      (void)(expr);                                                                              \
    } catch (const ::plab::Error& e_) {                                                          \
      caught_ = true;                                                                            \
      CHECK(e_.code() == (expected));                                                            \
    }                                                                                            \
    CHECK_MESSAGE(caught_, "expected a typed failure: " #expr);                                  \
  } while (0)

#endif  // PLAB_TESTS_TEST_UTIL_HPP

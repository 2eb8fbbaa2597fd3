#pragma once

#include <doctest.h>

#include <initializer_list>

#include "marchenko/error.hpp"
#include "marchenko/measure.hpp"

namespace marchenko::testing {

inline Measure atoms(std::initializer_list<Atom> list) { return Measure{list, {}}; }

inline Piece piece(double a, double b, std::initializer_list<double> c) {
  Piece p{a, b, Eigen::VectorXd(static_cast<Eigen::Index>(c.size()))};
  Eigen::Index k = 0;
  for (double v : c) p.cheb[k++] = v;
  return p;
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace marchenko::testing

#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "marchenko/error.hpp"

namespace marchenko {

enum class SettingKind { jacobi, schrodinger };

inline std::string_view to_string(SettingKind k) {
  return k == SettingKind::jacobi ? "jacobi" : "schrodinger";
}

// Operator class together with its spectral bound R. In the jacobi setting
// r is the root of r + 1/r = R in (0, 1].
struct Setting {
  SettingKind kind = SettingKind::jacobi;
  double R = 2.0;
  double r = 1.0;

  static Setting jacobi(double R) {
    if (!(R >= 2.0) || !std::isfinite(R)) {
      throw Error(ErrorCode::BadR, "jacobi setting needs R >= 2").with_location(R);
    }
    // Cancellation-free form of (R - sqrt(R^2 - 4)) / 2.
    return Setting{SettingKind::jacobi, R, 2.0 / (R + std::sqrt(R * R - 4.0))};
  }

  static Setting schrodinger(double R) {
    if (!(R > 0.0) || !std::isfinite(R)) {
      throw Error(ErrorCode::BadR, "schrodinger setting needs R > 0").with_location(R);
    }
    return Setting{SettingKind::schrodinger, R, 0.0};
  }

  static Setting make(SettingKind kind, double R) {
    return kind == SettingKind::jacobi ? jacobi(R) : schrodinger(R);
  }
};

}  // namespace marchenko

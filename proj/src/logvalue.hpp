#pragma once

#include <string>

namespace plaser {

// Sign plus log10-magnitude representation for quantities that can leave the
// double range (populations amplified by e^{thousands} in strong-gain runs).
// Exact zero is sign == 0. Arithmetic matches double semantics where both are
// representable.
struct LogValue {
  int sign = 0;            // -1, 0, +1
  double log10_abs = 0.0;  // meaningful only when sign != 0

  static LogValue from_double(double v);
  // value = v * 2^pow2 without forming the product
  static LogValue from_scaled(double v, long long pow2);

  double to_double() const;  // +-inf beyond range, +-0 below
  bool finite_double() const;
  bool is_zero() const { return sign == 0; }
  // %.17g when double-representable, otherwise manual d.dddde+XXXX form
  std::string to_string() const;

  LogValue operator-() const { return {-sign, log10_abs}; }
  friend LogValue operator+(const LogValue& a, const LogValue& b);
  friend LogValue operator-(const LogValue& a, const LogValue& b) {
    return a + (-b);
  }
  friend LogValue operator*(const LogValue& a, const LogValue& b);
};

// -1, 0, +1 as a < b, a == b, a > b
int compare(const LogValue& a, const LogValue& b);

// |a - b| / max(|a|, |b|), usable when the magnitudes exceed double range;
// returns 0 when both are zero.
double relative_difference(const LogValue& a, const LogValue& b);

}  // namespace plaser

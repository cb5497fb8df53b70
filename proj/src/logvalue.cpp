#include "logvalue.hpp"

#include <cmath>
#include <cstdio>

#include "errors.hpp"

namespace plaser {

namespace {
constexpr double log10_of_2 = 0.30102999566398119521373889472449;
constexpr double ln_of_10 = 2.30258509299404568401799145468436;
}  // namespace

LogValue LogValue::from_double(double v) {
  if (!std::isfinite(v)) {
    fail(ErrCode::Overflow, "non-finite value entered log-scale bookkeeping");
  }
  if (v == 0.0) return {0, 0.0};
  return {v > 0.0 ? 1 : -1, std::log10(std::abs(v))};
}

LogValue LogValue::from_scaled(double v, long long pow2) {
  if (!std::isfinite(v)) {
    fail(ErrCode::Overflow, "non-finite value entered log-scale bookkeeping");
  }
  if (v == 0.0) return {0, 0.0};
  return {v > 0.0 ? 1 : -1,
          std::log10(std::abs(v)) + static_cast<double>(pow2) * log10_of_2};
}

double LogValue::to_double() const {
  if (sign == 0) return 0.0;
  if (log10_abs > 308.6) {
    return sign > 0 ? HUGE_VAL : -HUGE_VAL;
  }
  if (log10_abs < -324.0) return sign > 0 ? 0.0 : -0.0;
  return sign * std::pow(10.0, log10_abs);
}

bool LogValue::finite_double() const {
  if (sign == 0) return true;
  return log10_abs < 308.25 && log10_abs > -307.65;
}

std::string LogValue::to_string() const {
  char buf[64];
  if (sign == 0) return "0";
  if (finite_double()) {
    std::snprintf(buf, sizeof buf, "%.17g", to_double());
    return buf;
  }
  // beyond double range: decimal scientific form straight from the exponent
  double expo = std::floor(log10_abs);
  double mantissa = std::pow(10.0, log10_abs - expo);
  if (mantissa >= 10.0) {
    mantissa /= 10.0;
    expo += 1.0;
  }
  std::snprintf(buf, sizeof buf, "%s%.12ge%+lld", sign < 0 ? "-" : "",
                mantissa, static_cast<long long>(expo));
  return buf;
}

LogValue operator+(const LogValue& a, const LogValue& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const bool a_hi = a.log10_abs >= b.log10_abs;
  const LogValue& hi = a_hi ? a : b;
  const LogValue& lo = a_hi ? b : a;
  const double d = lo.log10_abs - hi.log10_abs;  // <= 0
  const double r = (d < -320.0) ? 0.0 : std::pow(10.0, d);
  if (a.sign == b.sign) {
    return {a.sign, hi.log10_abs + std::log1p(r) / ln_of_10};
  }
  if (r >= 1.0) return {0, 0.0};  // exact cancellation
  return {hi.sign, hi.log10_abs + std::log1p(-r) / ln_of_10};
}

LogValue operator*(const LogValue& a, const LogValue& b) {
  if (a.sign == 0 || b.sign == 0) return {0, 0.0};
  return {a.sign * b.sign, a.log10_abs + b.log10_abs};
}

int compare(const LogValue& a, const LogValue& b) {
  if (a.sign != b.sign) return a.sign < b.sign ? -1 : 1;
  if (a.sign == 0) return 0;
  if (a.log10_abs == b.log10_abs) return 0;
  const bool bigger_mag = a.log10_abs > b.log10_abs;
  if (a.sign > 0) return bigger_mag ? 1 : -1;
  return bigger_mag ? -1 : 1;
}

double relative_difference(const LogValue& a, const LogValue& b) {
  if (a.sign == 0 && b.sign == 0) return 0.0;
  const LogValue diff = a - b;
  if (diff.sign == 0) return 0.0;
  const double ref =
      (a.sign == 0) ? b.log10_abs
                    : (b.sign == 0 ? a.log10_abs
                                   : std::max(a.log10_abs, b.log10_abs));
  const double d = diff.log10_abs - ref;
  if (d < -300.0) return 0.0;
  if (d > 300.0) return HUGE_VAL;
  return std::pow(10.0, d);
}

}  // namespace plaser

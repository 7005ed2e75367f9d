#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "cartogrammer/errors.hpp"

namespace cartogrammer {

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string trim_fraction(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

inline std::string group_thousands(const std::string& plain) {
  const auto dot = plain.find('.');
  const std::string whole = plain.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : plain.substr(dot);
  std::string out;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    if (i > 0 && (whole.size() - i) % 3 == 0) out += ',';
    out += whole[i];
  }
  return out + frac;
}

}  // namespace detail

// Human-readable magnitude: below one million the number is written out
// with comma separators (at most two decimals); larger values are scaled to
// million / billion / trillion with four significant digits.
inline std::string format_value(double v, const std::string& unit = {}) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("format_value needs a finite value >= 0");
  std::string number;
  const std::string small = detail::trim_fraction(detail::fixed(v, 2));
  if (std::stod(small) < 1e6) {
    number = detail::group_thousands(small);
  } else {
    static constexpr std::array<std::pair<double, const char*>, 3> kScales{
        {{1e6, "million"}, {1e9, "billion"}, {1e12, "trillion"}}};
    for (std::size_t s = 0; s < kScales.size(); ++s) {
      const double mantissa = v / kScales[s].first;
      const int int_digits = mantissa < 10 ? 1 : mantissa < 100 ? 2 : mantissa < 1000 ? 3 : 4;
      const int decimals = std::max(0, 4 - int_digits);
      const std::string text = detail::fixed(mantissa, decimals);
      if (std::stod(text) >= 1000.0 && s + 1 < kScales.size()) continue;
      number = detail::group_thousands(detail::trim_fraction(text)) + " " + kScales[s].second;
      break;
    }
  }
  return unit.empty() ? number : number + " " + unit;
}

// The member of {1, 2, 5} x 10^k closest to x in log space; ties go to the
// smaller candidate.
inline double nice_number(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("nice_number needs a finite x > 0");
  int k = static_cast<int>(std::floor(std::log10(x)));
  auto power = [](int e) { return e >= 0 ? std::pow(10.0, e) : 1.0 / std::pow(10.0, -e); };
  double mantissa = x / power(k);
  if (mantissa < 1.0) {
    --k;
    mantissa = x / power(k);
  } else if (mantissa >= 10.0) {
    ++k;
    mantissa = x / power(k);
  }
  static constexpr std::array<double, 4> kSteps{1.0, 2.0, 5.0, 10.0};
  double best = kSteps[0];
  double best_dist = std::abs(std::log10(mantissa));
  for (double step : kSteps) {
    const double dist = std::abs(std::log10(step) - std::log10(mantissa));
    if (dist < best_dist) {
      best = step;
      best_dist = dist;
    }
  }
  if (best == 10.0) return power(k + 1);
  return k >= 0 ? best * power(k) : best / std::pow(10.0, -k);
}

}  // namespace cartogrammer

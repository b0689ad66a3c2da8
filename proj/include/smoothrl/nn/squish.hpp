/*
 * Copyright 2026 The smoothrl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SMOOTHRL_NN_SQUISH_HPP
#define SMOOTHRL_NN_SQUISH_HPP

#include <cmath>

namespace smoothrl::nn {

/// Squareplus smoothing constant. With b = 4, squareplus(0) = 1.
inline constexpr double kSquareplusB = 4.0;

/// Derivative of squareplus, a smooth sigmoid in (0, 1).
inline double squareplus_slope(double x, double b = kSquareplusB) {
  return 0.5 * (1.0 + x / std::sqrt(x * x + b));
}

/// Squish activation: x * squareplus'(x).
inline double squish(double x, double b = kSquareplusB) {
  return x * squareplus_slope(x, b);
}

inline double squish_derivative(double x, double b = kSquareplusB) {
  const double r = x * x + b;
  return squareplus_slope(x, b) + 0.5 * x * b / (r * std::sqrt(r));
}

}  // namespace smoothrl::nn

#endif  // SMOOTHRL_NN_SQUISH_HPP

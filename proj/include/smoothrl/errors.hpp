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

#ifndef SMOOTHRL_ERRORS_HPP
#define SMOOTHRL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace smoothrl {

/// Invalid configuration or precondition on user-supplied values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shape or dimension disagreement between cooperating objects.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A loss, gradient or parameter became NaN or infinite.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was issued in a state that does not allow it
/// (stale tape, finished episode, empty buffer, ...).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Reading or writing a file failed or its contents are malformed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smoothrl

#endif  // SMOOTHRL_ERRORS_HPP

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

#ifndef SMOOTHRL_ENVS_CATALOG_HPP
#define SMOOTHRL_ENVS_CATALOG_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smoothrl/envs/environment.hpp"
#include "smoothrl/envs/pendulum.hpp"
#include "smoothrl/envs/point_reacher.hpp"

namespace smoothrl::envs {

/// Specs of every built-in environment, with default noise scales.
inline std::vector<EnvSpec> env_catalog() {
  return {Pendulum::make_spec({}), PointReacher::make_spec({})};
}

/// Creates an environment by its stable id. `noise` overrides the default
/// observation noise scale when given.
inline std::unique_ptr<Environment> make_env(const std::string& id,
                                             std::optional<double> noise = std::nullopt) {
  if (noise && !(*noise >= 0.0)) throw ConfigError("observation noise must be >= 0");
  if (id == "pendulum-swingup") {
    Pendulum::Params p;
    if (noise) p.noise = *noise;
    return std::make_unique<Pendulum>(p);
  }
  if (id == "point-reacher") {
    PointReacher::Params p;
    if (noise) p.noise = *noise;
    return std::make_unique<PointReacher>(p);
  }
  throw ConfigError("unknown environment id '" + id + "'");
}

}  // namespace smoothrl::envs

#endif  // SMOOTHRL_ENVS_CATALOG_HPP

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

#ifndef SMOOTHRL_LEARNER_CHECKPOINT_HPP
#define SMOOTHRL_LEARNER_CHECKPOINT_HPP

#include <map>
#include <string>
#include <string_view>

#include "smoothrl/errors.hpp"
#include "smoothrl/learner/agent.hpp"
#include "smoothrl/nn/serialization.hpp"

// An agent checkpoint is a container of named sections:
//
//   char[8]  magic "SMRLCKPT"
//   u32      container version (1)
//   u32      section count, then per section:
//              u32 name length, name bytes, u64 payload length, payload
//
// Sections: "meta" (text: env id and action bounds), "config" (text echo of
// the run configuration), "policy", "value", "policy_target", "value_target"
// (serialized networks) and "policy_optimizer", "value_optimizer".

namespace smoothrl::learner {

struct Checkpoint {
  std::string env_id;
  Eigen::VectorXd action_bounds;
  std::string config_text;
  Networks networks;
  nn::Adam policy_optimizer;
  nn::Adam value_optimizer;
};

inline std::string serialize_checkpoint(const Agent& agent, std::string_view config_text) {
  std::map<std::string, std::string> sections;
  {
    nn::ByteWriter meta;
    meta.put_string(agent.env_id());
    meta.put_matrix(agent.action_bounds());
    sections["meta"] = meta.take();
  }
  sections["config"] = std::string(config_text);
  const auto& n = agent.networks();
  sections["policy"] = nn::serialize_network(n.policy);
  sections["value"] = nn::serialize_network(n.value);
  sections["policy_target"] = nn::serialize_network(n.policy_target);
  sections["value_target"] = nn::serialize_network(n.value_target);
  sections["policy_optimizer"] = nn::serialize_adam(agent.policy_optimizer());
  sections["value_optimizer"] = nn::serialize_adam(agent.value_optimizer());

  nn::ByteWriter w;
  w.put_bytes("SMRLCKPT");
  w.put_u32(1);
  w.put_u32(static_cast<std::uint32_t>(sections.size()));
  for (const auto& [name, payload] : sections) {
    w.put_string(name);
    w.put_u64(payload.size());
    w.put_bytes(payload);
  }
  return w.take();
}

inline Checkpoint deserialize_checkpoint(std::string_view data) {
  nn::ByteReader r(data);
  if (r.get_bytes(8) != "SMRLCKPT") throw IoError("not an agent checkpoint (bad magic)");
  if (r.get_u32() != 1) throw IoError("unsupported checkpoint version");
  std::map<std::string, std::string_view> sections;
  const auto count = r.get_u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.get_string();
    const auto len = r.get_u64();
    sections[name] = r.get_bytes(len);
  }
  if (!r.at_end()) throw IoError("trailing bytes after checkpoint");
  auto need = [&](const std::string& name) {
    auto it = sections.find(name);
    if (it == sections.end()) throw IoError("checkpoint lacks section '" + name + "'");
    return it->second;
  };
  Checkpoint c;
  {
    nn::ByteReader meta(need("meta"));
    c.env_id = meta.get_string();
    c.action_bounds = meta.get_matrix().col(0);
  }
  c.config_text = std::string(need("config"));
  c.networks.policy = nn::deserialize_network(need("policy"));
  c.networks.value = nn::deserialize_network(need("value"));
  c.networks.policy_target = nn::deserialize_network(need("policy_target"));
  c.networks.value_target = nn::deserialize_network(need("value_target"));
  c.policy_optimizer = nn::deserialize_adam(need("policy_optimizer"));
  c.value_optimizer = nn::deserialize_adam(need("value_optimizer"));
  if (c.networks.policy.output_dim() != 2 * c.action_bounds.size()) {
    throw IoError("checkpoint policy output does not match its action bounds");
  }
  return c;
}

inline void save_checkpoint(const Agent& agent, std::string_view config_text, const std::string& path) {
  nn::write_file(path, serialize_checkpoint(agent, config_text));
}

inline Checkpoint load_checkpoint(const std::string& path) {
  return deserialize_checkpoint(nn::read_file(path));
}

}  // namespace smoothrl::learner

#endif  // SMOOTHRL_LEARNER_CHECKPOINT_HPP

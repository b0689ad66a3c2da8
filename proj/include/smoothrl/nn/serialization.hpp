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

#ifndef SMOOTHRL_NN_SERIALIZATION_HPP
#define SMOOTHRL_NN_SERIALIZATION_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "smoothrl/errors.hpp"
#include "smoothrl/nn/adam.hpp"
#include "smoothrl/nn/mlp.hpp"

// Binary layout of a serialized network (all integers and floats little-endian):
//
//   char[8]  magic "SMRLNET1"
//   u32      format version (1)
//   u32      activation id (1 = squish)
//   f64      squareplus b
//   f64      layer-norm epsilon
//   u32      number of layer widths W, then W x u64 widths (input .. output)
//   u32      number of parameter arrays A, then A records of
//              u32 name length, name bytes, u64 rows, u64 cols,
//              rows*cols f64 values in row-major order
//
// Optimizer state blobs use the magic "SMRLADM1" followed by
//   f64 learning rate, f64 beta1, f64 beta2, f64 epsilon, u64 step,
//   u32 array count N, then N first-moment and N second-moment matrices
//   (u64 rows, u64 cols, row-major f64 values).

namespace smoothrl::nn {

inline constexpr std::uint32_t kNetworkFormatVersion = 1;

class ByteWriter {
 public:
  void put_u32(std::uint32_t v) { put_le(v); }
  void put_u64(std::uint64_t v) { put_le(v); }
  void put_f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }
  void put_bytes(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  void put_string(std::string_view s) {
    put_u32(static_cast<std::uint32_t>(s.size()));
    put_bytes(s);
  }
  void put_matrix(const Eigen::MatrixXd& m) {
    put_u64(static_cast<std::uint64_t>(m.rows()));
    put_u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) put_f64(m(r, c));
    }
  }
  [[nodiscard]] const std::string& bytes() const { return bytes_; }
  std::string take() { return std::move(bytes_); }

 private:
  template <typename T>
  void put_le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }
  std::string bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint32_t get_u32() { return get_le<std::uint32_t>(); }
  std::uint64_t get_u64() { return get_le<std::uint64_t>(); }
  double get_f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }
  std::string_view get_bytes(std::size_t n) {
    require(n);
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::string get_string() { return std::string(get_bytes(get_u32())); }
  Eigen::MatrixXd get_matrix() {
    const auto rows = get_u64();
    const auto cols = get_u64();
    if (rows > (1u << 24) || cols > (1u << 24)) throw IoError("serialized matrix is implausibly large");
    require(rows * cols * 8);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = get_f64();
    }
    return m;
  }
  [[nodiscard]] bool at_end() const { return pos_ == data_.size(); }

 private:
  void require(std::size_t n) const {
    if (data_.size() - pos_ < n) throw IoError("unexpected end of serialized data");
  }
  template <typename T>
  T get_le() {
    require(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return v;
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

inline std::string serialize_network(const MlpNetwork& net) {
  ByteWriter w;
  w.put_bytes("SMRLNET1");
  w.put_u32(kNetworkFormatVersion);
  w.put_u32(static_cast<std::uint32_t>(MlpNetwork::activation()));
  w.put_f64(kSquareplusB);
  w.put_f64(kLayerNormEpsilon);
  const auto widths = net.architecture().widths();
  w.put_u32(static_cast<std::uint32_t>(widths.size()));
  for (auto v : widths) w.put_u64(static_cast<std::uint64_t>(v));
  w.put_u32(static_cast<std::uint32_t>(net.num_arrays()));
  for (std::size_t i = 0; i < net.num_arrays(); ++i) {
    w.put_string(net.names()[i]);
    w.put_matrix(net.array(i));
  }
  return w.take();
}

inline MlpNetwork deserialize_network(std::string_view data) {
  ByteReader r(data);
  if (r.get_bytes(8) != "SMRLNET1") throw IoError("not a serialized network (bad magic)");
  if (const auto v = r.get_u32(); v != kNetworkFormatVersion) {
    throw IoError("unsupported network format version " + std::to_string(v));
  }
  if (r.get_u32() != static_cast<std::uint32_t>(Activation::kSquish)) {
    throw IoError("unsupported activation id");
  }
  if (r.get_f64() != kSquareplusB || r.get_f64() != kLayerNormEpsilon) {
    throw IoError("network was saved with different activation/normalization constants");
  }
  const auto n_widths = r.get_u32();
  if (n_widths < 2 || n_widths > 64) throw IoError("invalid layer count");
  std::vector<Eigen::Index> widths;
  for (std::uint32_t i = 0; i < n_widths; ++i) widths.push_back(static_cast<Eigen::Index>(r.get_u64()));
  Architecture arch;
  arch.input = widths.front();
  arch.output = widths.back();
  arch.hidden.assign(widths.begin() + 1, widths.end() - 1);
  const auto n_arrays = r.get_u32();
  std::vector<Eigen::MatrixXd> arrays;
  std::vector<std::string> names;
  for (std::uint32_t i = 0; i < n_arrays; ++i) {
    names.push_back(r.get_string());
    arrays.push_back(r.get_matrix());
  }
  if (!r.at_end()) throw IoError("trailing bytes after serialized network");
  auto net = MlpNetwork::from_arrays(arch, std::move(arrays));
  if (names != net.names()) throw IoError("parameter array names do not match the architecture");
  return net;
}

inline std::string serialize_adam(const Adam& opt) {
  ByteWriter w;
  w.put_bytes("SMRLADM1");
  w.put_f64(opt.config().learning_rate);
  w.put_f64(opt.config().beta1);
  w.put_f64(opt.config().beta2);
  w.put_f64(opt.config().epsilon);
  w.put_u64(opt.step_count());
  w.put_u32(static_cast<std::uint32_t>(opt.first_moments().size()));
  for (const auto& m : opt.first_moments()) w.put_matrix(m);
  for (const auto& m : opt.second_moments()) w.put_matrix(m);
  return w.take();
}

inline Adam deserialize_adam(std::string_view data) {
  ByteReader r(data);
  if (r.get_bytes(8) != "SMRLADM1") throw IoError("not a serialized optimizer state (bad magic)");
  AdamConfig cfg;
  cfg.learning_rate = r.get_f64();
  cfg.beta1 = r.get_f64();
  cfg.beta2 = r.get_f64();
  cfg.epsilon = r.get_f64();
  const auto step = r.get_u64();
  const auto n = r.get_u32();
  std::vector<Eigen::MatrixXd> first, second;
  for (std::uint32_t i = 0; i < n; ++i) first.push_back(r.get_matrix());
  for (std::uint32_t i = 0; i < n; ++i) second.push_back(r.get_matrix());
  if (!r.at_end()) throw IoError("trailing bytes after optimizer state");
  return Adam(cfg, step, std::move(first), std::move(second));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

inline void save_network(const MlpNetwork& net, const std::string& path) {
  write_file(path, serialize_network(net));
}

inline MlpNetwork load_network(const std::string& path) { return deserialize_network(read_file(path)); }

}  // namespace smoothrl::nn

#endif  // SMOOTHRL_NN_SERIALIZATION_HPP

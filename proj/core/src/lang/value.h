// Copyright 2026 The PolicyForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLICYFORGE_LANG_VALUE_H_
#define POLICYFORGE_LANG_VALUE_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include <boost/container/small_vector.hpp>

namespace policyforge::lang {

// Runtime value: real or boolean, scalar or vector. Booleans are stored as
// 0/1 and promote to reals in arithmetic.
class Value {
 public:
  enum class Kind : std::uint8_t { kReal, kBool, kRealVector, kBoolVector };
  using Storage = boost::container::small_vector<double, 4>;

  Value() : kind_(Kind::kReal), data_(1, 0.0) {}

  static Value Real(double v) { return Value(Kind::kReal, Storage(1, v)); }
  static Value Bool(bool v) {
    return Value(Kind::kBool, Storage(1, v ? 1.0 : 0.0));
  }
  static Value RealVector(Storage data) {
    return Value(Kind::kRealVector, std::move(data));
  }
  static Value BoolVector(Storage data) {
    return Value(Kind::kBoolVector, std::move(data));
  }
  static Value RealVector(std::span<const double> data) {
    return Value(Kind::kRealVector, Storage(data.begin(), data.end()));
  }

  Kind kind() const { return kind_; }
  bool is_vector() const {
    return kind_ == Kind::kRealVector || kind_ == Kind::kBoolVector;
  }
  bool is_bool() const {
    return kind_ == Kind::kBool || kind_ == Kind::kBoolVector;
  }
  std::size_t size() const { return data_.size(); }
  double scalar() const { return data_[0]; }
  double operator[](std::size_t i) const { return data_[i]; }
  std::span<const double> data() const { return {data_.data(), data_.size()}; }
  Storage& storage() { return data_; }
  const Storage& storage() const { return data_; }

 private:
  Value(Kind kind, Storage data) : kind_(kind), data_(std::move(data)) {}

  Kind kind_;
  Storage data_;
};

}  // namespace policyforge::lang

#endif  // POLICYFORGE_LANG_VALUE_H_

// Copyright 2026 The ProspectNet Authors
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

#include "prospectnet/param_store.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "prospectnet/errors.hpp"

namespace prospectnet
{

namespace
{

constexpr char kMagic[8] = {'P', 'N', 'C', 'K', 'P', 'T', '0', '1'};

void write_u64(std::ofstream & out, std::uint64_t v)
{
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) {
    buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  }
  out.write(reinterpret_cast<const char *>(buf), 8);
}

std::uint64_t read_u64(std::ifstream & in)
{
  unsigned char buf[8];
  in.read(reinterpret_cast<char *>(buf), 8);
  if (!in) {
    throw ParseError("checkpoint truncated while reading integer");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  }
  return v;
}

void write_f64(std::ofstream & out, double d)
{
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) {
    buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  }
  out.write(reinterpret_cast<const char *>(buf), 8);
}

double read_f64(std::ifstream & in)
{
  unsigned char buf[8];
  in.read(reinterpret_cast<char *>(buf), 8);
  if (!in) {
    throw ParseError("checkpoint truncated while reading payload");
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  }
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

Tensor & ParameterStore::create(const std::string & name, Tensor init)
{
  if (entries_.count(name) != 0) {
    throw ValidationError("parameter already exists: " + name);
  }
  Entry e;
  e.grad = Tensor(init.shape());
  e.value = std::move(init);
  auto [it, inserted] = entries_.emplace(name, std::move(e));
  return it->second.value;
}

Tensor & ParameterStore::value(const std::string & name)
{
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw NotFoundError("unknown parameter: " + name);
  }
  return it->second.value;
}

const Tensor & ParameterStore::value(const std::string & name) const
{
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw NotFoundError("unknown parameter: " + name);
  }
  return it->second.value;
}

Tensor & ParameterStore::grad(const std::string & name)
{
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw NotFoundError("unknown parameter: " + name);
  }
  return it->second.grad;
}

const Tensor & ParameterStore::grad(const std::string & name) const
{
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw NotFoundError("unknown parameter: " + name);
  }
  return it->second.grad;
}

std::vector<std::string> ParameterStore::names() const
{
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto & [name, entry] : entries_) {
    out.push_back(name);
  }
  return out;
}

std::size_t ParameterStore::scalar_count() const
{
  std::size_t n = 0;
  for (const auto & [name, entry] : entries_) {
    n += entry.value.size();
  }
  return n;
}

void ParameterStore::zero_grads()
{
  for (auto & [name, entry] : entries_) {
    std::fill(entry.grad.values().begin(), entry.grad.values().end(), 0.0);
  }
}

Tensor & ParameterStore::create_glorot(
  const std::string & name, std::size_t fan_in, std::size_t fan_out, std::mt19937_64 & rng)
{
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return create(name, Tensor::uniform(fan_in, fan_out, -bound, bound, rng));
}

void ParameterStore::save(const std::string & path) const
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open checkpoint for writing: " + path);
  }
  out.write(kMagic, sizeof(kMagic));
  for (const auto & [name, entry] : entries_) {
    write_u64(out, name.size());
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    const auto & shape = entry.value.shape();
    write_u64(out, shape.size());
    for (const auto d : shape) {
      write_u64(out, d);
    }
    for (const double v : entry.value.values()) {
      write_f64(out, v);
    }
  }
  if (!out) {
    throw IoError("failed writing checkpoint: " + path);
  }
}

void ParameterStore::load(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw NotFoundError("cannot open checkpoint: " + path);
  }
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a parameter checkpoint (bad magic): " + path);
  }
  std::map<std::string, Entry> loaded;
  while (true) {
    in.peek();
    if (in.eof()) {
      break;
    }
    const std::uint64_t name_len = read_u64(in);
    std::string name(name_len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(name_len));
    if (!in) {
      throw ParseError("checkpoint truncated while reading name");
    }
    const std::uint64_t rank = read_u64(in);
    std::vector<std::size_t> shape(rank);
    std::size_t count = 1;
    for (std::uint64_t i = 0; i < rank; ++i) {
      shape[i] = static_cast<std::size_t>(read_u64(in));
      count *= shape[i];
    }
    std::vector<double> data(count);
    for (auto & v : data) {
      v = read_f64(in);
    }
    if (loaded.count(name) != 0) {
      throw ParseError("duplicate parameter in checkpoint: " + name);
    }
    Entry e;
    e.value = Tensor(shape, std::move(data));
    e.grad = Tensor(shape);
    loaded.emplace(std::move(name), std::move(e));
  }
  entries_ = std::move(loaded);
}

}  // namespace prospectnet

// Copyright 2026 The CDR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace cdr {

/// SplitMix64 finalizer. Used as the mixing function for stream derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// Mixes two 64-bit words into one. Not symmetric: mix(a, b) != mix(b, a).
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

/// A reproducible random stream identified by (master_seed, stream_id).
///
/// There is no global generator. Every consumer asks for an engine seeded from
/// mix64(master_seed, stream_id), and independent sub-streams are derived with
/// child(k), whose id is mix64(stream_id, k). The same path of child() calls
/// from the same master seed always yields the same draws, regardless of the
/// order in which sibling streams are consumed, so work can be fanned out
/// across threads without changing results.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0)
      : master_seed_(master_seed), stream_id_(stream_id) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  RngStream child(std::uint64_t k) const {
    return RngStream(master_seed_, mix64(stream_id_, k));
  }

  std::mt19937_64 engine() const {
    return std::mt19937_64(mix64(master_seed_, stream_id_));
  }

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
};

}  // namespace cdr

// Copyright 2026 The Caspr Authors
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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace caspr {

/// Fixed-width bit vector. Used both for interpretations (bit per ground
/// atom) and total choices (bit per probabilistic fact).
class Bitset {
public:
    Bitset() = default;

    explicit Bitset(std::size_t size, bool value = false)
        : blocks_((size + 63) / 64, value ? ~std::uint64_t{0} : 0), size_(size) {
        trim();
    }

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const { return (blocks_[i >> 6] >> (i & 63)) & 1; }

    void set(std::size_t i, bool value = true) {
        if (value)
            blocks_[i >> 6] |= std::uint64_t{1} << (i & 63);
        else
            blocks_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    void reset(std::size_t i) { set(i, false); }

    void flip(std::size_t i) { blocks_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    void clear() {
        for (auto& b : blocks_) b = 0;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto b : blocks_) n += static_cast<std::size_t>(std::popcount(b));
        return n;
    }

    bool any() const {
        for (auto b : blocks_)
            if (b) return true;
        return false;
    }

    /// Low 64 bits as an integer; handy as a dense index when size() <= 64.
    std::uint64_t low_word() const { return blocks_.empty() ? 0 : blocks_[0]; }

    template <typename Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t w = 0; w < blocks_.size(); ++w) {
            std::uint64_t b = blocks_[w];
            while (b) {
                int bit = std::countr_zero(b);
                fn(w * 64 + static_cast<std::size_t>(bit));
                b &= b - 1;
            }
        }
    }

    bool operator==(const Bitset& other) const = default;

    /// Lexicographic over blocks; only used for deterministic ordering.
    bool operator<(const Bitset& other) const {
        if (size_ != other.size_) return size_ < other.size_;
        return blocks_ < other.blocks_;
    }

private:
    void trim() {
        if (size_ % 64 != 0 && !blocks_.empty())
            blocks_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }

    std::vector<std::uint64_t> blocks_;
    std::size_t size_ = 0;
};

/// A set of ground atoms, one bit per atom id.
using Interpretation = Bitset;

/// One truth assignment to all probabilistic facts, one bit per fact index.
using TotalChoice = Bitset;

}  // namespace caspr

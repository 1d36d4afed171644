#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace resil {

/// Fixed-capacity dynamic bitset over node indices [0, n).
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(int n) : n_(n), words_((n + 63) / 64, 0) {}

  static NodeSet full(int n) {
    NodeSet s(n);
    for (int i = 0; i < n; ++i) s.insert(i);
    return s;
  }

  int capacity() const { return n_; }

  bool contains(int i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void insert(int i) { words_[i >> 6] |= (uint64_t{1} << (i & 63)); }
  void erase(int i) { words_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }

  int count() const {
    int c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }

  /// Lowest member, or -1.
  int first() const {
    for (size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return static_cast<int>(k * 64) + std::countr_zero(words_[k]);
    return -1;
  }

  NodeSet& operator&=(const NodeSet& o) {
    for (size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  NodeSet& operator|=(const NodeSet& o) {
    for (size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  /// Set difference.
  NodeSet& operator-=(const NodeSet& o) {
    for (size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }

  bool operator==(const NodeSet& o) const = default;

  std::vector<int> to_vector() const {
    std::vector<int> out;
    for (size_t k = 0; k < words_.size(); ++k) {
      uint64_t w = words_[k];
      while (w) {
        out.push_back(static_cast<int>(k * 64) + std::countr_zero(w));
        w &= w - 1;
      }
    }
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (size_t k = 0; k < words_.size(); ++k) {
      uint64_t w = words_[k];
      while (w) {
        f(static_cast<int>(k * 64) + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }

  const std::vector<uint64_t>& words() const { return words_; }

 private:
  int n_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace resil

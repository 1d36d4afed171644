#pragma once

#include <numeric>
#include <utility>
#include <vector>

namespace resil {

/// Disjoint sets with union by size and path halving. Tracks set sizes
/// weighted by a caller-supplied element weight.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), weight_(n, 1), sets_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  UnionFind(int n, const std::vector<int>& weights) : UnionFind(n) {
    weight_ = weights;
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns false when already joined.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (weight_[a] < weight_[b]) std::swap(a, b);
    parent_[b] = a;
    weight_[a] += weight_[b];
    --sets_;
    return true;
  }

  int weight(int x) { return weight_[find(x)]; }
  int set_count() const { return sets_; }
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
  std::vector<int> weight_;
  int sets_;
};

}  // namespace resil

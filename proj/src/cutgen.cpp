#include "resil/cutgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "resil/error.hpp"

namespace resil {

namespace {

constexpr double kEps = 1e-9;

// Knapsack data either scaled to exact integers or kept as doubles.
struct Arithmetic {
  bool exact = false;
  std::vector<int64_t> a;
  int64_t b = 0;
};

Arithmetic make_arithmetic(const KnapsackConstraint& k) {
  std::vector<double> all = k.coeffs;
  all.push_back(k.capacity);
  Arithmetic ar;
  if (auto s = integer_scale(all)) {
    ar.exact = true;
    for (double v : k.coeffs) ar.a.push_back(std::llround(v * static_cast<double>(*s)));
    ar.b = std::llround(k.capacity * static_cast<double>(*s));
  }
  return ar;
}

double sum_over(const KnapsackConstraint& k, std::span<const int> idx) {
  double s = 0.0;
  for (int j : idx) s += k.coeffs[j];
  return s;
}

std::vector<int> sorted_unique(std::span<const int> idx, int n) {
  std::vector<int> out(idx.begin(), idx.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    fail(ErrorCode::kInvalidArgument, "cover indices must be unique");
  for (int j : out)
    if (j < 0 || j >= n) fail(ErrorCode::kInvalidArgument, "cover index out of range");
  return out;
}

template <typename T>
bool less_than(T x, T y) {
  if constexpr (std::is_integral_v<T>) {
    return x < y;
  } else {
    return x < y - kEps;
  }
}

template <typename T>
bool at_most(T x, T y) {
  if constexpr (std::is_integral_v<T>) {
    return x <= y;
  } else {
    return x <= y + kEps;
  }
}

// Threshold ā in "units": for integral data every quantity is multiplied by
// t = |C+| so that ā = (b - sum of the unclipped tail) / t stays integral.
template <typename T>
struct Threshold {
  T abar_units{};
  T multiplier{1};
  double abar = 0.0;
};

template <typename T>
Threshold<T> solve_threshold(std::vector<T> vals, T cap, double unit) {
  std::sort(vals.begin(), vals.end(), std::greater<T>());
  const int c = static_cast<int>(vals.size());
  T total{};
  for (T v : vals) total += v;
  Threshold<T> th;
  if (!less_than(cap, total)) {
    // sum_C a_j == b: no clipping needed; the smallest solution is max a_j.
    th.abar_units = vals.front();
    th.abar = static_cast<double>(vals.front()) / unit;
    return th;
  }
  // f(x) = sum min(a_j, x) is strictly increasing on [0, max a], f(0) = 0 < b
  // < f(max a), so exactly one segment t (t largest values clipped) solves it.
  T tail = total;
  for (int t = 1; t <= c; ++t) {
    tail -= vals[t - 1];
    const T num = cap - tail;
    const T next = t < c ? vals[t] : T{};
    if constexpr (std::is_integral_v<T>) {
      if (next * t <= num && num <= vals[t - 1] * t) {
        th.abar_units = num;
        th.multiplier = t;
        th.abar = static_cast<double>(num) / static_cast<double>(t) / unit;
        return th;
      }
    } else {
      const T x = num / t;
      if (at_most(next, x) && at_most(x, vals[t - 1])) {
        th.abar_units = x;
        th.abar = x / unit;
        return th;
      }
    }
  }
  fail(ErrorCode::kInternal, "no threshold solves sum min(a_j, abar) = b");
}

template <typename T>
LiftedCoverCut lift_with(const std::vector<T>& a, T b, double unit, const std::vector<int>& cover) {
  std::vector<T> ac;
  for (int j : cover) ac.push_back(a[j]);
  const Threshold<T> th = solve_threshold(ac, b, unit);
  const T mult = th.multiplier;
  const T abar = th.abar_units;

  LiftedCoverCut cut;
  cut.cover = cover;
  cut.abar = th.abar;
  cut.lifted = true;
  cut.rhs = static_cast<int>(cover.size()) - 1;
  cut.coeffs.assign(a.size(), 0);

  std::vector<T> clipped;
  std::vector<char> in_cminus(a.size(), 0);
  for (int j : cover) {
    const T aj = a[j] * mult;
    clipped.push_back(std::min(aj, abar));
    if (at_most(aj, abar)) {
      in_cminus[j] = 1;
      cut.cminus.push_back(j);
    }
  }
  std::sort(clipped.begin(), clipped.end(), std::greater<T>());
  std::vector<T> partial(clipped.size() + 1, T{});
  for (size_t r = 0; r < clipped.size(); ++r) partial[r + 1] = partial[r] + clipped[r];
  if constexpr (std::is_integral_v<T>) {
    if (partial.back() != b * mult)
      fail(ErrorCode::kInternal, "clipped cover weights do not sum to the capacity");
  } else {
    if (std::abs(partial.back() - b) > 1e-7)
      fail(ErrorCode::kInternal, "clipped cover weights do not sum to the capacity");
  }

  for (size_t k = 0; k < a.size(); ++k) {
    if (in_cminus[k]) {
      cut.coeffs[k] = 1;
      continue;
    }
    // Strict boundary: largest γ with S⁻(γ) < a_k. The non-strict reading
    // cuts off feasible points whenever a_k equals a partial sum.
    const T ak = a[k] * mult;
    int gamma = 0;
    for (size_t g = 1; g < partial.size(); ++g)
      if (less_than(partial[g], ak)) gamma = static_cast<int>(g);
    cut.coeffs[k] = gamma;
  }
  return cut;
}

}  // namespace

void KnapsackConstraint::validate() const {
  for (double a : coeffs)
    if (!(a >= 0.0) || !std::isfinite(a))
      fail(ErrorCode::kInvalidArgument, "knapsack coefficients must be finite and >= 0");
  if (!(capacity > 0.0) || !std::isfinite(capacity))
    fail(ErrorCode::kInvalidArgument, "knapsack capacity must be finite and > 0");
}

std::vector<int> LiftedCoverCut::support() const {
  std::vector<int> s;
  for (size_t j = 0; j < coeffs.size(); ++j)
    if (coeffs[j] != 0) s.push_back(static_cast<int>(j));
  return s;
}

int LiftedCoverCut::lhs(std::span<const int> chosen) const {
  int v = 0;
  for (int j : chosen) v += coeffs[j];
  return v;
}

std::string LiftedCoverCut::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0) continue;
    if (!first) os << " + ";
    if (coeffs[j] != 1) os << coeffs[j] << ' ';
    os << 'x' << (j + 1);
    first = false;
  }
  if (first) os << '0';
  os << " <= " << rhs;
  return os.str();
}

std::optional<int64_t> integer_scale(std::span<const double> values) {
  int64_t scale = 1;
  for (int p = 0; p <= 6; ++p, scale *= 10) {
    bool ok = true;
    for (double v : values) {
      const double s = v * static_cast<double>(scale);
      if (!std::isfinite(s) || std::abs(s) > 1e15 || std::abs(s - std::round(s)) > 1e-6) {
        ok = false;
        break;
      }
    }
    if (ok) return scale;
  }
  return std::nullopt;
}

bool is_cover(const KnapsackConstraint& k, std::span<const int> indices) {
  const Arithmetic ar = make_arithmetic(k);
  if (ar.exact) {
    int64_t s = 0;
    for (int j : indices) s += ar.a[j];
    return s > ar.b;
  }
  return sum_over(k, indices) > k.capacity + kEps;
}

bool is_minimal_cover(const KnapsackConstraint& k, std::span<const int> indices) {
  if (!is_cover(k, indices)) return false;
  std::vector<int> rest(indices.begin(), indices.end());
  for (size_t i = 0; i < indices.size(); ++i) {
    rest.erase(rest.begin() + static_cast<long>(i));
    const bool still = is_cover(k, rest);
    rest.insert(rest.begin() + static_cast<long>(i), indices[i]);
    if (still) return false;
  }
  return true;
}

std::optional<Cover> find_cover(const KnapsackConstraint& k, std::span<const int> order) {
  k.validate();
  const int n = k.size();
  std::vector<int> seq;
  if (order.empty()) {
    seq.resize(n);
    std::iota(seq.begin(), seq.end(), 0);
    std::stable_sort(seq.begin(), seq.end(),
                     [&](int x, int y) { return k.coeffs[x] > k.coeffs[y]; });
  } else {
    sorted_unique(order, n);  // validates
    seq.assign(order.begin(), order.end());
  }
  std::vector<int> chosen;
  for (int j : seq) {
    chosen.push_back(j);
    if (is_cover(k, chosen)) break;
  }
  if (!is_cover(k, chosen)) return std::nullopt;

  // Peel smallest coefficients first; sums only shrink, so one pass leaves a
  // minimal cover.
  std::vector<int> by_weight = chosen;
  std::stable_sort(by_weight.begin(), by_weight.end(),
                   [&](int x, int y) { return k.coeffs[x] < k.coeffs[y]; });
  for (int j : by_weight) {
    std::vector<int> without;
    for (int i : chosen)
      if (i != j) without.push_back(i);
    if (is_cover(k, without)) chosen = std::move(without);
  }
  Cover c;
  c.indices = chosen;
  std::sort(c.indices.begin(), c.indices.end());
  c.minimal = is_minimal_cover(k, c.indices);
  return c;
}

LiftedCoverCut cover_inequality(const KnapsackConstraint& k, const Cover& c) {
  LiftedCoverCut cut;
  cut.cover = sorted_unique(c.indices, k.size());
  cut.coeffs.assign(k.coeffs.size(), 0);
  for (int j : cut.cover) cut.coeffs[j] = 1;
  cut.rhs = static_cast<int>(cut.cover.size()) - 1;
  cut.cminus = cut.cover;
  cut.abar = 0.0;
  return cut;
}

double compute_abar(const KnapsackConstraint& k, const Cover& c) {
  k.validate();
  const std::vector<int> idx = sorted_unique(c.indices, k.size());
  if (idx.empty()) fail(ErrorCode::kInvalidArgument, "empty cover");
  std::vector<double> all = k.coeffs;
  all.push_back(k.capacity);
  if (auto scale = integer_scale(all)) {
    const Arithmetic ar = make_arithmetic(k);
    std::vector<int64_t> vals;
    int64_t total = 0;
    for (int j : idx) {
      vals.push_back(ar.a[j]);
      total += ar.a[j];
    }
    if (total < ar.b) fail(ErrorCode::kInvalidArgument, "index set weighs less than the capacity");
    return solve_threshold<int64_t>(vals, ar.b, static_cast<double>(*scale)).abar;
  }
  std::vector<double> vals;
  for (int j : idx) vals.push_back(k.coeffs[j]);
  if (sum_over(k, idx) < k.capacity - kEps)
    fail(ErrorCode::kInvalidArgument, "index set weighs less than the capacity");
  return solve_threshold<double>(vals, k.capacity, 1.0).abar;
}

LiftedCoverCut lift_cover_unchecked(const KnapsackConstraint& k, const Cover& c) {
  k.validate();
  const std::vector<int> idx = sorted_unique(c.indices, k.size());
  if (!is_minimal_cover(k, idx)) fail(ErrorCode::kInvalidArgument, "lifting requires a minimal cover");
  std::vector<double> all = k.coeffs;
  all.push_back(k.capacity);
  if (auto scale = integer_scale(all)) {
    const Arithmetic ar = make_arithmetic(k);
    return lift_with<int64_t>(ar.a, ar.b, static_cast<double>(*scale), idx);
  }
  return lift_with<double>(k.coeffs, k.capacity, 1.0, idx);
}

LiftedCoverCut lift_cover(const KnapsackConstraint& k, const Cover& c) {
  LiftedCoverCut cut = lift_cover_unchecked(k, c);
  const CutVerification v = verify_cut(k, cut);
  if (v.valid) {
    cut.verified = true;
    cut.dominates_ci = v.dominates_ci;
    return cut;
  }
  LiftedCoverCut ci = cover_inequality(k, c);
  ci.abar = cut.abar;
  ci.verified = true;
  ci.dominates_ci = true;
  ci.downgraded = true;
  return ci;
}

CutVerification verify_cut(const KnapsackConstraint& k, const LiftedCoverCut& cut) {
  k.validate();
  const int n = k.size();
  if (n > kVerifyCap)
    fail(ErrorCode::kSizeGuard, "cut verification limited to " + std::to_string(kVerifyCap) + " items");
  if (static_cast<int>(cut.coeffs.size()) != n)
    fail(ErrorCode::kInvalidArgument, "cut and knapsack sizes differ");

  CutVerification out;
  out.dominates_ci = true;
  for (int j = 0; j < n; ++j) {
    const int ci = std::binary_search(cut.cover.begin(), cut.cover.end(), j) ? 1 : 0;
    if (cut.coeffs[j] < ci) out.dominates_ci = false;
  }
  if (cut.rhs != static_cast<int>(cut.cover.size()) - 1) out.dominates_ci = false;

  const Arithmetic ar = make_arithmetic(k);
  std::vector<int64_t> suffix(n + 1, 0);  // sum of positive coefficients from j on
  for (int j = n - 1; j >= 0; --j) suffix[j] = suffix[j + 1] + std::max(cut.coeffs[j], 0);

  bool violated = false;
  // Depth-first over feasible points only; a subtree is skipped once even
  // taking every remaining item cannot exceed the right-hand side.
  auto fits = [&](int j, double w, int64_t wi) {
    return ar.exact ? wi + ar.a[j] <= ar.b : w + k.coeffs[j] <= k.capacity + kEps;
  };
  auto dfs = [&](auto&& self, int j, double w, int64_t wi, int64_t lhs) -> void {
    if (violated) return;
    if (lhs > cut.rhs) {
      violated = true;
      return;
    }
    if (j == n || lhs + suffix[j] <= cut.rhs) return;
    if (fits(j, w, wi))
      self(self, j + 1, w + k.coeffs[j], wi + (ar.exact ? ar.a[j] : 0), lhs + cut.coeffs[j]);
    self(self, j + 1, w, wi, lhs);
  };
  dfs(dfs, 0, 0.0, 0, 0);
  out.valid = !violated;
  return out;
}

std::vector<LiftedCoverCut> generate_cuts(const KnapsackConstraint& k,
                                          std::span<const std::vector<int>> extra_orders) {
  k.validate();
  std::vector<LiftedCoverCut> out;
  if (k.size() > kVerifyCap) return out;
  const int n = k.size();
  std::vector<std::vector<int>> orders;
  orders.emplace_back();  // default: descending
  std::vector<int> asc(n);
  std::iota(asc.begin(), asc.end(), 0);
  std::stable_sort(asc.begin(), asc.end(), [&](int x, int y) { return k.coeffs[x] < k.coeffs[y]; });
  orders.push_back(asc);
  for (const auto& o : extra_orders) orders.push_back(o);

  std::set<std::pair<std::vector<int>, int>> seen;
  for (const auto& order : orders) {
    const auto cover = find_cover(k, order);
    if (!cover) continue;
    LiftedCoverCut cut = lift_cover(k, *cover);
    if (seen.insert({cut.coeffs, cut.rhs}).second) out.push_back(std::move(cut));
  }
  return out;
}

double fractional_knapsack_bound(std::span<const double> weights, std::span<const double> coeffs,
                                 double capacity) {
  double value = 0.0;
  std::vector<int> items;
  for (size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    if (coeffs[j] <= 0.0) {
      value += weights[j];
    } else {
      items.push_back(static_cast<int>(j));
    }
  }
  std::stable_sort(items.begin(), items.end(), [&](int x, int y) {
    return weights[x] * coeffs[y] > weights[y] * coeffs[x];
  });
  double room = std::max(capacity, 0.0);
  for (int j : items) {
    if (coeffs[j] <= room + kEps) {
      value += weights[j];
      room -= coeffs[j];
    } else {
      value += weights[j] * room / coeffs[j];
      break;
    }
  }
  return value;
}

}  // namespace resil

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace resil {

/// sum_j coeffs[j] x_j <= capacity over binary x.
struct KnapsackConstraint {
  std::vector<double> coeffs;
  double capacity = 0.0;

  /// Throws kInvalidArgument unless all coefficients are >= 0 and capacity > 0.
  void validate() const;
  int size() const { return static_cast<int>(coeffs.size()); }
};

/// Index set C with sum_{j in C} a_j > b.
struct Cover {
  std::vector<int> indices;  // ascending
  bool minimal = false;
};

/// sum_j coeffs[j] x_j <= rhs with nonnegative integer coefficients.
///
/// Produced either as a plain cover inequality (coefficient 1 on the cover)
/// or by the ā-threshold lifting, which puts 1 on C⁻ = {j in C : a_j <= ā}
/// and an integer γ_k on every other index.
struct LiftedCoverCut {
  std::vector<int> coeffs;
  int rhs = 0;
  std::vector<int> cover;
  std::vector<int> cminus;
  double abar = 0.0;
  bool lifted = false;
  bool verified = false;
  bool dominates_ci = false;
  /// Lifting produced an invalid cut and the plain cover inequality was
  /// substituted.
  bool downgraded = false;

  std::vector<int> support() const;
  int lhs(std::span<const int> chosen) const;
  std::string to_string() const;  // e.g. "x1 + x2 + x4 <= 1"
};

struct CutVerification {
  bool valid = false;
  bool dominates_ci = false;
};

inline constexpr int kVerifyCap = 24;

/// Greedy cover in the given order (default: descending a_j, then index),
/// peeled to minimality. nullopt when sum a_j <= b.
std::optional<Cover> find_cover(const KnapsackConstraint& k, std::span<const int> order = {});

bool is_cover(const KnapsackConstraint& k, std::span<const int> indices);
bool is_minimal_cover(const KnapsackConstraint& k, std::span<const int> indices);

LiftedCoverCut cover_inequality(const KnapsackConstraint& k, const Cover& c);

/// Unique ā > 0 with sum_{j in C} min(a_j, ā) = b. Requires sum_C a_j >= b;
/// at equality every ā >= max a_j solves it and max a_j is returned.
double compute_abar(const KnapsackConstraint& k, const Cover& c);

/// Lifts a minimal cover and always verifies the result; an invalid lift is
/// replaced by the cover inequality with `downgraded` set.
LiftedCoverCut lift_cover(const KnapsackConstraint& k, const Cover& c);

/// Same lifting without the verification/fallback step. Exposed for audits.
LiftedCoverCut lift_cover_unchecked(const KnapsackConstraint& k, const Cover& c);

/// Enumerates the feasible binary points (|N| <= kVerifyCap, else kSizeGuard)
/// and checks none violates the cut.
CutVerification verify_cut(const KnapsackConstraint& k, const LiftedCoverCut& cut);

/// Covers from descending and ascending coefficient orders plus any extra
/// orders, lifted, verified and de-duplicated. Empty when no cover exists or
/// the knapsack is too large to verify.
std::vector<LiftedCoverCut> generate_cuts(const KnapsackConstraint& k,
                                          std::span<const std::vector<int>> extra_orders = {});

/// Upper bound on max sum w_j x_j subject to sum c_j x_j <= capacity,
/// 0 <= x <= 1 (Dantzig fractional bound). Items with w_j <= 0 are ignored.
double fractional_knapsack_bound(std::span<const double> weights, std::span<const double> coeffs,
                                 double capacity);

/// Power-of-ten scale (<= 1e6) making all values integral, if any.
std::optional<int64_t> integer_scale(std::span<const double> values);

}  // namespace resil

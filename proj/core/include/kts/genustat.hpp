#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "kts/kernels.hpp"
#include "kts/oracle.hpp"
#include "kts/types.hpp"

namespace kts {

// Arguments to a generalized U-statistic kernel, laid out block by block:
// block j contributes block_sizes[j] consecutive points.
using GenUKernel = std::function<double(std::span<const Point>)>;

// A c-sample generalized U-statistic: c = block_sizes.size() sample groups,
// h symmetric within each block. h must be safe to call concurrently.
struct GenUSpec {
  std::vector<std::size_t> block_sizes;
  GenUKernel h;

  std::size_t arity() const;
};

// c = 2, m = (2, 2) with
//   h(x, x'; y, y') = k(x,x') + k(y,y') - [k(x,y') + k(x',y) + k(x,y) + k(x',y')] / 2
GenUSpec mmd_genu_spec(const KernelSpec& spec);

inline constexpr std::uint64_t kDefaultNaiveCap = 10'000'000;

// Average of h over every choice of m_j-subsets from each group j. For a
// block-symmetric h this equals the average over ordered injections (each
// subset appears prod_j m_j! times there). Reference implementation only:
// O(prod_j C(n_j, m_j)) kernel calls.
double gen_u_evaluate(const GenUSpec& spec, std::span<const Matrix> groups,
                      std::uint64_t cap = kDefaultNaiveCap);

// zeta_{d_1..d_c} = Var(E[h | first d_j arguments of each block j]).
class ZetaTable {
 public:
  using Key = std::vector<std::size_t>;

  explicit ZetaTable(std::vector<std::size_t> block_sizes);

  const std::vector<std::size_t>& block_sizes() const noexcept { return block_sizes_; }

  void set(const Key& depth, double value);
  bool contains(const Key& depth) const { return values_.contains(depth); }
  // Throws IncompleteTableError for a missing entry.
  double at(const Key& depth) const;

  // Every depth with 0 <= d_j <= m_j, in lexicographic order.
  std::vector<Key> all_depths() const;
  bool complete() const;

  const std::map<Key, double>& values() const noexcept { return values_; }

 private:
  std::vector<std::size_t> block_sizes_;
  std::map<Key, double> values_;
};

// prod_j C(n_j, m_j)^{-1} C(m_j, d_j) C(n_j - m_j, m_j - d_j).
double sen_coefficient(std::span<const std::size_t> block_sizes, std::span<const std::size_t> depth,
                       std::span<const std::size_t> sizes);

// Var(U_n) = sum over depths of sen_coefficient * zeta. The d = 0 entry is
// taken as 0 when absent. Throws IncompleteTableError for any other missing
// depth.
double sen_variance(const GenUSpec& spec, const ZetaTable& zetas, std::span<const std::size_t> sizes);

// Largest r with every zeta at total depth <= r below tol; nullopt when the
// whole table is below tol (infinite order).
std::optional<std::size_t> degeneracy_order(const ZetaTable& zetas, double tol = kDefaultDegeneracyTolerance);

// The MMD kernel's zeta table in terms of population functionals. With
// zx = zeta_x, zy = zeta_y:
//
//   zeta_X      = zx                         zeta_Y      = zy
//   zeta_XX'    = |C_P|^2 + 2 zx             zeta_YY'    = |C_Q|^2 + 2 zy
//   zeta_XY     = <C_P,C_Q>/4 + zx + zy
//   zeta_XX'Y   = |C_P|^2 + <C_P,C_Q>/2 + 2 zx + zy
//   zeta_XYY'   = |C_Q|^2 + <C_P,C_Q>/2 + zx + 2 zy
//   zeta_XX'YY' = |C_P|^2 + |C_Q|^2 + <C_P,C_Q> + 2 (zx + zy)
//
// Keys are (d_X, d_Y).
ZetaTable mmd_zeta_table(const PopulationFunctionals& f);

// zeta table of an arbitrary kernel under discrete distributions (one per
// block), by exhaustive enumeration of the conditional expectations.
ZetaTable exact_zeta_table(const GenUSpec& spec, std::span<const DiscreteDistribution> dists,
                           std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace kts

#include "kts/genustat.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "kts/error.hpp"
#include "kts/summation.hpp"

namespace kts {

std::size_t GenUSpec::arity() const {
  return std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
}

GenUSpec mmd_genu_spec(const KernelSpec& spec) {
  return GenUSpec{{2, 2}, [spec](std::span<const Point> a) {
                    const Point x = a[0], xp = a[1], y = a[2], yp = a[3];
                    return spec(x, xp) + spec(y, yp) -
                           0.5 * (spec(x, yp) + spec(xp, y) + spec(x, y) + spec(xp, yp));
                  }};
}

namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

// Advances `c` to the next k-combination of [0, n) in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

double gen_u_evaluate(const GenUSpec& spec, std::span<const Matrix> groups, std::uint64_t cap) {
  const std::size_t c = spec.block_sizes.size();
  if (groups.size() != c) throw ShapeError("gen_u_evaluate: need one sample group per block");
  double count = 1.0;
  for (std::size_t j = 0; j < c; ++j) {
    const auto nj = static_cast<std::size_t>(groups[j].rows());
    if (nj < spec.block_sizes[j]) {
      throw InsufficientSamplesError("gen_u_evaluate: group " + std::to_string(j) + " has " +
                                     std::to_string(nj) + " samples but the kernel takes " +
                                     std::to_string(spec.block_sizes[j]));
    }
    count *= binomial(nj, spec.block_sizes[j]);
  }
  if (count > static_cast<double>(cap)) {
    throw EnumerationTooLargeError("gen_u_evaluate: " + std::to_string(count) + " kernel calls exceed cap");
  }

  std::vector<std::vector<std::size_t>> combos(c);
  for (std::size_t j = 0; j < c; ++j) {
    combos[j].resize(spec.block_sizes[j]);
    std::iota(combos[j].begin(), combos[j].end(), std::size_t{0});
  }
  std::vector<Point> args(spec.arity());
  CompensatedSum total;
  for (;;) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < c; ++j) {
      for (std::size_t idx : combos[j]) args[pos++] = row_of(groups[j], static_cast<Eigen::Index>(idx));
    }
    total.add(spec.h(args));
    std::size_t j = 0;
    for (; j < c; ++j) {
      if (next_combination(combos[j], static_cast<std::size_t>(groups[j].rows()))) break;
      std::iota(combos[j].begin(), combos[j].end(), std::size_t{0});
    }
    if (j == c) break;
  }
  return total.value() / count;
}

ZetaTable::ZetaTable(std::vector<std::size_t> block_sizes) : block_sizes_(std::move(block_sizes)) {}

void ZetaTable::set(const Key& depth, double value) {
  if (depth.size() != block_sizes_.size()) throw ShapeError("zeta table: key has the wrong number of blocks");
  for (std::size_t j = 0; j < depth.size(); ++j) {
    if (depth[j] > block_sizes_[j]) throw ShapeError("zeta table: depth exceeds block size");
  }
  values_[depth] = value;
}

double ZetaTable::at(const Key& depth) const {
  auto it = values_.find(depth);
  if (it == values_.end()) {
    std::string key;
    for (std::size_t d : depth) key += std::to_string(d);
    throw IncompleteTableError("zeta table: missing entry zeta_" + key);
  }
  return it->second;
}

std::vector<ZetaTable::Key> ZetaTable::all_depths() const {
  std::vector<Key> out;
  Key d(block_sizes_.size(), 0);
  for (;;) {
    out.push_back(d);
    std::size_t j = d.size();
    while (j-- > 0) {
      if (++d[j] <= block_sizes_[j]) break;
      d[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) return out;
  }
}

bool ZetaTable::complete() const {
  for (const Key& d : all_depths()) {
    if (std::accumulate(d.begin(), d.end(), std::size_t{0}) == 0) continue;
    if (!contains(d)) return false;
  }
  return true;
}

double sen_coefficient(std::span<const std::size_t> block_sizes, std::span<const std::size_t> depth,
                       std::span<const std::size_t> sizes) {
  double coef = 1.0;
  for (std::size_t j = 0; j < block_sizes.size(); ++j) {
    const std::size_t m = block_sizes[j];
    const std::size_t n = sizes[j];
    const std::size_t d = depth[j];
    coef *= binomial(m, d) * binomial(n - m, m - d) / binomial(n, m);
  }
  return coef;
}

double sen_variance(const GenUSpec& spec, const ZetaTable& zetas, std::span<const std::size_t> sizes) {
  if (zetas.block_sizes() != spec.block_sizes) throw ShapeError("sen_variance: table does not match kernel");
  if (sizes.size() != spec.block_sizes.size()) throw ShapeError("sen_variance: one size per block required");
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j] < spec.block_sizes[j]) throw InsufficientSamplesError("sen_variance: n_j < m_j");
  }
  CompensatedSum total;
  for (const auto& d : zetas.all_depths()) {
    if (std::accumulate(d.begin(), d.end(), std::size_t{0}) == 0 && !zetas.contains(d)) continue;
    total.add(sen_coefficient(spec.block_sizes, d, sizes) * zetas.at(d));
  }
  return total.value();
}

std::optional<std::size_t> degeneracy_order(const ZetaTable& zetas, double tol) {
  if (!zetas.complete()) throw IncompleteTableError("degeneracy order needs a complete table");
  std::optional<std::size_t> first_positive;
  for (const auto& [d, v] : zetas.values()) {
    const std::size_t depth = std::accumulate(d.begin(), d.end(), std::size_t{0});
    if (depth == 0 || v <= tol) continue;
    if (!first_positive || depth < *first_positive) first_positive = depth;
  }
  if (!first_positive) return std::nullopt;
  return *first_positive - 1;
}

ZetaTable mmd_zeta_table(const PopulationFunctionals& f) {
  const double zx = f.zeta_x;
  const double zy = f.zeta_y;
  ZetaTable t({2, 2});
  t.set({0, 0}, 0.0);
  t.set({1, 0}, zx);
  t.set({0, 1}, zy);
  t.set({2, 0}, f.hs_pp + 2.0 * zx);
  t.set({0, 2}, f.hs_qq + 2.0 * zy);
  t.set({1, 1}, 0.25 * f.hs_pq + zx + zy);
  t.set({2, 1}, f.hs_pp + 0.5 * f.hs_pq + 2.0 * zx + zy);
  t.set({1, 2}, f.hs_qq + 0.5 * f.hs_pq + zx + 2.0 * zy);
  t.set({2, 2}, f.hs_pp + f.hs_qq + f.hs_pq + 2.0 * (zx + zy));
  return t;
}

ZetaTable exact_zeta_table(const GenUSpec& spec, std::span<const DiscreteDistribution> dists,
                           std::uint64_t cap) {
  const std::size_t c = spec.block_sizes.size();
  if (dists.size() != c) throw ShapeError("exact_zeta_table: need one distribution per block");
  const std::size_t arity = spec.arity();

  // Support index and distribution for each argument slot.
  std::vector<const DiscreteDistribution*> slot_dist;
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t k = 0; k < spec.block_sizes[j]; ++k) {
      slot_dist.push_back(&dists[j]);
    }
  }
  double count = 1.0;
  for (const auto* d : slot_dist) count *= static_cast<double>(d->size());
  if (count > static_cast<double>(cap)) throw EnumerationTooLargeError("exact_zeta_table: too many tuples");

  // Tabulate h and the tuple weight over every support tuple.
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<double> weights, values;
  std::vector<std::size_t> digits(arity, 0);
  std::vector<Point> args(arity);
  for (;;) {
    double w = 1.0;
    for (std::size_t s = 0; s < arity; ++s) {
      w *= slot_dist[s]->probs()[digits[s]];
      args[s] = row_of(slot_dist[s]->support(), static_cast<Eigen::Index>(digits[s]));
    }
    tuples.push_back(digits);
    weights.push_back(w);
    values.push_back(spec.h(args));
    std::size_t s = 0;
    for (; s < arity; ++s) {
      if (++digits[s] < slot_dist[s]->size()) break;
      digits[s] = 0;
    }
    if (s == arity) break;
  }

  CompensatedSum mean_acc;
  for (std::size_t t = 0; t < values.size(); ++t) mean_acc.add(weights[t] * values[t]);
  const double mean = mean_acc.value();

  ZetaTable table(spec.block_sizes);
  for (const auto& depth : table.all_depths()) {
    // Slots conditioned on: the first depth[j] slots of each block.
    std::vector<bool> conditioned(arity, false);
    std::size_t offset = 0;
    for (std::size_t j = 0; j < c; ++j) {
      for (std::size_t k = 0; k < depth[j]; ++k) conditioned[offset + k] = true;
      offset += spec.block_sizes[j];
    }
    std::map<std::vector<std::size_t>, std::pair<CompensatedSum, CompensatedSum>> groups;
    for (std::size_t t = 0; t < values.size(); ++t) {
      std::vector<std::size_t> key;
      for (std::size_t s = 0; s < arity; ++s) {
        if (conditioned[s]) key.push_back(tuples[t][s]);
      }
      auto& [wsum, hsum] = groups[key];
      wsum.add(weights[t]);
      hsum.add(weights[t] * values[t]);
    }
    CompensatedSum var;
    for (const auto& [key, acc] : groups) {
      const double w = acc.first.value();
      if (w <= 0.0) continue;
      const double cond_mean = acc.second.value() / w;
      var.add(w * (cond_mean - mean) * (cond_mean - mean));
    }
    table.set(depth, var.value());
  }
  return table;
}

}  // namespace kts

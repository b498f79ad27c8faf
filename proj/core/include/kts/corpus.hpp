#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kts/kernels.hpp"
#include "kts/oracle.hpp"

namespace kts {

// Randomized discrete problems on which every closed-form variance is checked
// against exhaustive enumeration: support sizes 2-3 in 1-D, nX, nY in
// {2, 3, 4}, kernels cycling gaussian / linear / triangle.
struct CorpusConfig {
  std::size_t instances = 200;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  // Scales the 4 zeta_x / nX term of the unbiased closed form by 1 + 1e-6,
  // to demonstrate that the check is sensitive.
  bool perturb = false;
};

struct CorpusInstance {
  DiscreteDistribution p;
  DiscreteDistribution q;
  KernelSpec kernel;
  std::size_t nx;
  std::size_t ny;
};

CorpusInstance make_corpus_instance(std::uint64_t seed, std::size_t index);

struct FormulaError {
  std::string formula;
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  bool pass = true;
};

struct CorpusReport {
  std::vector<FormulaError> formulas;
  std::size_t instances = 0;
  bool pass = true;
};

// |value - reference| / max(|reference|, 1e-12).
double relative_error(double value, double reference);

// Formulas, in report order:
//   mean                 E[mmd_unbiased] = MMD^2
//   unbiased_variance    mmd_unbiased_variance(...).total
//   ustat_variance       mmd_ustat_variance (nX == nY only)
//   sen_variance         sen_variance over mmd_zeta_table
//   zeta_table           mmd_zeta_table vs exact_zeta_table, entrywise
CorpusReport run_oracle_corpus(const CorpusConfig& config);

}  // namespace kts

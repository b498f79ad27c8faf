#include "kts/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "kts/error.hpp"
#include "kts/version.hpp"

namespace kts {

namespace {

double parse_field(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) throw ParseError("empty field", line);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("not a number: '" + std::string(field) + "'", line);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value", line);
  return value;
}

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'", 0);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what(), 0);
  }
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const char* key) {
  const auto rows = required<std::vector<std::vector<double>>>(j, key);
  if (rows.empty() || rows.front().empty()) throw ParseError(std::string("'") + key + "' must be non-empty", 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw ParseError(std::string("ragged '") + key + "'", 0);
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return m;
}

}  // namespace

Matrix read_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      // Only a final empty line (trailing newline) is allowed.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError("blank line", line_no);
    }
    std::size_t count = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_field(rest.substr(0, comma), line_no));
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw ParseError("expected " + std::to_string(cols) + " fields, found " + std::to_string(count), line_no);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("no data rows", line_no);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

Matrix read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_csv(in);
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf.data(), ptr);
}

void write_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k) out << ',';
      out << format_double(m(i, k));
    }
    out << '\n';
  }
}

Json to_json(const KernelSpec& spec) {
  Json params = Json::object();
  for (const auto& [name, value] : spec.params()) params[name] = value;
  return Json{{"family", std::string(to_string(spec.family()))}, {"params", params}};
}

KernelSpec kernel_spec_from_json(const Json& j) {
  const auto family = kernel_family_from_string(required<std::string>(j, "family"));
  KernelSpec::Params params;
  if (j.contains("params")) params = required<KernelSpec::Params>(j, "params");
  return KernelSpec::make(family, params);
}

Json to_json(const DiscreteDistribution& dist) {
  return Json{{"support", matrix_to_json(dist.support())}, {"probs", dist.probs()}};
}

DiscreteDistribution discrete_distribution_from_json(const Json& j) {
  return DiscreteDistribution(matrix_from_json(j, "support"), required<std::vector<double>>(j, "probs"));
}

Json to_json(const Sampler& sampler) {
  Json j{{"family", std::string(to_string(sampler.family()))}};
  switch (sampler.family()) {
    case Sampler::Family::normal:
      j["mean"] = sampler.location();
      j["variance"] = sampler.spread();
      j["dim"] = sampler.dim();
      break;
    case Sampler::Family::laplace:
      j["location"] = sampler.location();
      j["scale"] = sampler.spread();
      j["dim"] = sampler.dim();
      break;
    case Sampler::Family::discrete:
      j["distribution"] = to_json(*sampler.distribution());
      break;
  }
  return j;
}

Sampler sampler_from_json(const Json& j) {
  const auto family = required<std::string>(j, "family");
  const std::size_t dim = j.contains("dim") ? required<std::size_t>(j, "dim") : 1;
  if (family == "normal") return Sampler::normal(required<double>(j, "mean"), required<double>(j, "variance"), dim);
  if (family == "laplace") {
    return Sampler::laplace(required<double>(j, "location"), required<double>(j, "scale"), dim);
  }
  if (family == "discrete") return Sampler::discrete(discrete_distribution_from_json(j.at("distribution")));
  throw ParseError("unknown sampler family '" + family + "'", 0);
}

Json to_json(const SpectralModel& model) {
  return Json{{"eigenvalues", model.eigenvalues}, {"rho_x", model.rho_x}, {"rho_y", model.rho_y}};
}

SpectralModel spectral_model_from_json(const Json& j) {
  return make_spectral_model(required<std::vector<double>>(j, "eigenvalues"), required<double>(j, "rho_x"),
                             required<double>(j, "rho_y"));
}

Json to_json(const PopulationFunctionals& f) {
  return Json{{"mmd_sq", f.mmd_sq}, {"zeta_x", f.zeta_x},   {"zeta_y", f.zeta_y},     {"hs_pp", f.hs_pp},
              {"hs_qq", f.hs_qq},   {"hs_pq", f.hs_pq},     {"mu_cp_mu", f.mu_cp_mu}, {"mu_cq_mu", f.mu_cq_mu}};
}

Json to_json(const TestResult& r) {
  return Json{{"statistic", r.statistic}, {"p_value", r.p_value},
              {"threshold", r.threshold}, {"reject", r.reject},
              {"alpha", r.alpha},         {"num_permutations", r.num_permutations},
              {"seed", r.seed},           {"nx", r.nx},
              {"ny", r.ny}};
}

Json to_json(const VarianceReport& r) {
  Json j{{"leading", r.leading}};
  j["total"] = r.total ? Json(*r.total) : Json(nullptr);
  j["zeta_x"] = r.zeta_x;
  j["zeta_y"] = r.zeta_y;
  j["sigma"] = r.sigma;
  j["nx"] = r.nx;
  j["ny"] = r.ny;
  return j;
}

Json to_json(const AltLimit& a) { return Json{{"mean", a.mean}, {"variance", a.variance}}; }

Json to_json(const TuneConfig& c) {
  Json grid = Json::object();
  for (const auto& [name, values] : c.param_grid) grid[name] = values;
  Json j{{"family", std::string(to_string(c.family))},
         {"param_grid", grid},
         {"lambda_reg", c.lambda_reg},
         {"refine_steps", c.refine_steps},
         {"train_fraction", c.train_fraction},
         {"seed", c.seed}};
  if (c.sigma_sizes) {
    j["sigma_sizes"] = Json::array({c.sigma_sizes->first, c.sigma_sizes->second});
  } else {
    j["sigma_sizes"] = nullptr;
  }
  return j;
}

TuneConfig tune_config_from_json(const Json& j) {
  TuneConfig c;
  if (j.contains("family")) c.family = kernel_family_from_string(required<std::string>(j, "family"));
  if (j.contains("param_grid")) c.param_grid = required<std::map<std::string, std::vector<double>>>(j, "param_grid");
  if (j.contains("lambda_reg")) c.lambda_reg = required<double>(j, "lambda_reg");
  if (j.contains("refine_steps")) c.refine_steps = required<std::size_t>(j, "refine_steps");
  if (j.contains("train_fraction")) c.train_fraction = required<double>(j, "train_fraction");
  if (j.contains("seed")) c.seed = required<std::uint64_t>(j, "seed");
  if (j.contains("sigma_sizes") && !j.at("sigma_sizes").is_null()) {
    const auto sizes = required<std::vector<std::size_t>>(j, "sigma_sizes");
    if (sizes.size() != 2) throw ParseError("'sigma_sizes' must hold two counts", 0);
    c.sigma_sizes = std::pair{sizes[0], sizes[1]};
  }
  return c;
}

Json to_json(const TuneResult& r) {
  Json trace = Json::array();
  for (const auto& e : r.trace) trace.push_back(Json{{"spec", to_json(e.spec)}, {"objective", e.objective}});
  return Json{{"best_spec", to_json(r.best_spec)}, {"objective", r.objective}, {"trace", trace}};
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const Json& config) { return fnv1a_hex(config.dump()); }

std::string version_string() { return kVersion; }

}  // namespace kts

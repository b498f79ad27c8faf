#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "kts/asymptotics.hpp"
#include "kts/kernels.hpp"
#include "kts/oracle.hpp"
#include "kts/permtest.hpp"
#include "kts/simulation.hpp"
#include "kts/tuner.hpp"
#include "kts/types.hpp"
#include "kts/variance.hpp"

namespace kts {

using Json = nlohmann::ordered_json;

// Headerless numeric CSV: one sample per line, comma-separated, '.' decimal
// point. A trailing newline and '\r' line endings are accepted; blank lines
// are not. Throws ParseError carrying the 1-based line number.
Matrix read_csv(std::istream& in);
Matrix read_csv_file(const std::filesystem::path& path);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

void write_csv(std::ostream& out, const Matrix& m);

Json to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const Json& j);

Json to_json(const DiscreteDistribution& dist);
DiscreteDistribution discrete_distribution_from_json(const Json& j);

Json to_json(const Sampler& sampler);
Sampler sampler_from_json(const Json& j);

Json to_json(const SpectralModel& model);
SpectralModel spectral_model_from_json(const Json& j);

Json to_json(const PopulationFunctionals& f);
Json to_json(const TestResult& r);
Json to_json(const VarianceReport& r);
Json to_json(const AltLimit& a);

Json to_json(const TuneConfig& c);
TuneConfig tune_config_from_json(const Json& j);
Json to_json(const TuneResult& r);

// FNV-1a 64 of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

// fnv1a_hex of the compact serialization.
std::string config_hash(const Json& config);

std::string version_string();

}  // namespace kts

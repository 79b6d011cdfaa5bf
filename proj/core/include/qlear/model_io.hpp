#pragma once

// JSON persistence for fitted models and grid-search configurations.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlear/classifier.hpp"
#include "qlear/dataset.hpp"
#include "qlear/model_selection.hpp"

namespace qlear {

inline constexpr int kModelSchemaVersion = 1;
inline constexpr int kGridSchemaVersion = 1;

struct ModelMeta {
  std::uint64_t seed = 0;
  double pool_fraction = 0.5;
  std::optional<ParamGrid> grid;
  std::optional<double> cv_error;
  std::string created;  ///< ISO-8601 UTC timestamp; the only non-deterministic field
  std::string tool;
};

/// Everything predict needs, independent of the training data.
struct ModelFile {
  QlearParams params;
  std::vector<ClassPool> pools;
  std::optional<StandardizationStats> preprocessing;
  ModelMeta meta;

  std::size_t dim() const { return pool_dimension(pools); }
};

std::string serialize_model(const ModelFile& model);
/// Throws ModelFormatError.
ModelFile parse_model(std::string_view json_text);

void write_model(const std::filesystem::path& path, const ModelFile& model);
/// Throws FileNotFound, ModelFormatError.
ModelFile read_model(const std::filesystem::path& path);

/// Grid config: {"schema_version": 1, "q_values": [...], "n_s_values": [...],
/// "n_ns_values": [...], "alpha_values": [...], "unit_normalize": false}.
/// Missing lists fall back to ParamGrid::defaults(). Throws ConfigParseError.
ParamGrid parse_grid_config(std::string_view json_text);
ParamGrid read_grid_config(const std::filesystem::path& path);
std::string serialize_grid_config(const ParamGrid& grid);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

std::string_view library_version() noexcept;

}  // namespace qlear

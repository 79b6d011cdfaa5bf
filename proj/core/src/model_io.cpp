#include "qlear/model_io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qlear/error.hpp"

namespace qlear {
namespace {

using Json = nlohmann::ordered_json;

Json grid_to_json(const ParamGrid& grid) {
  return Json{{"schema_version", kGridSchemaVersion},
              {"q_values", grid.q_values},
              {"n_s_values", grid.n_s_values},
              {"n_ns_values", grid.n_ns_values},
              {"alpha_values", grid.alpha_values},
              {"unit_normalize", grid.unit_normalize}};
}

std::vector<std::size_t> counts_from_json(const Json& j, const char* key) {
  if (!j.is_array()) throw Error(Errc::ConfigParseError, std::string(key) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) throw Error(Errc::ConfigParseError, std::string(key) + " must hold non-negative integers");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

ParamGrid grid_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::ConfigParseError, "grid config must be a JSON object");
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != kGridSchemaVersion) {
    throw Error(Errc::ConfigParseError, "unsupported grid schema_version");
  }
  ParamGrid grid = ParamGrid::defaults();
  if (j.contains("q_values")) grid.q_values = j.at("q_values").get<std::vector<double>>();
  if (j.contains("n_s_values")) grid.n_s_values = counts_from_json(j.at("n_s_values"), "n_s_values");
  if (j.contains("n_ns_values")) grid.n_ns_values = counts_from_json(j.at("n_ns_values"), "n_ns_values");
  if (j.contains("alpha_values")) grid.alpha_values = j.at("alpha_values").get<std::vector<double>>();
  if (j.contains("unit_normalize")) grid.unit_normalize = j.at("unit_normalize").get<bool>();
  return grid;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view library_version() noexcept { return QLEAR_VERSION_STRING; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string serialize_model(const ModelFile& model) {
  Json classes = Json::array();
  for (const auto& pool : model.pools) classes.push_back({{"label", pool.label}, {"vectors", pool.vectors}});

  Json preprocessing = nullptr;
  if (model.preprocessing) {
    preprocessing = {{"type", "standardize"},
                     {"mean", model.preprocessing->mean},
                     {"std", model.preprocessing->std},
                     {"constant", model.preprocessing->constant}};
  }

  Json meta = {{"seed", model.meta.seed},
               {"pool_fraction", model.meta.pool_fraction},
               {"grid", model.meta.grid ? grid_to_json(*model.meta.grid) : Json(nullptr)},
               {"cv_error", model.meta.cv_error ? Json(*model.meta.cv_error) : Json(nullptr)},
               {"created", model.meta.created},
               {"tool", model.meta.tool}};

  const Json j = {{"schema_version", kModelSchemaVersion},
                  {"feature_dim", model.dim()},
                  {"params",
                   {{"q", model.params.q},
                    {"n_s", model.params.n_s},
                    {"n_ns", model.params.n_ns},
                    {"alpha", model.params.alpha},
                    {"unit_normalize", model.params.unit_normalize}}},
                  {"classes", classes},
                  {"preprocessing", preprocessing},
                  {"meta", meta}};
  return j.dump(2) + "\n";
}

ModelFile parse_model(std::string_view text) {
  ModelFile model;
  try {
    const Json j = Json::parse(text);
    if (j.at("schema_version").get<int>() != kModelSchemaVersion) {
      throw Error(Errc::ModelFormatError, "unsupported model schema_version");
    }
    const auto& p = j.at("params");
    model.params.q = p.at("q").get<double>();
    if (!p.at("n_s").is_number_unsigned() || !p.at("n_ns").is_number_unsigned()) {
      throw Error(Errc::ModelFormatError, "n_s and n_ns must be non-negative integers");
    }
    model.params.n_s = p.at("n_s").get<std::size_t>();
    model.params.n_ns = p.at("n_ns").get<std::size_t>();
    model.params.alpha = p.at("alpha").get<double>();
    model.params.unit_normalize = p.value("unit_normalize", false);
    for (const auto& c : j.at("classes")) {
      model.pools.push_back({c.at("label").get<std::string>(), c.at("vectors").get<std::vector<FeatureVector>>()});
    }
    if (const auto& pre = j.at("preprocessing"); !pre.is_null()) {
      StandardizationStats stats;
      stats.mean = pre.at("mean").get<std::vector<double>>();
      stats.std = pre.at("std").get<std::vector<double>>();
      stats.constant = pre.value("constant", std::vector<bool>(stats.mean.size(), false));
      model.preprocessing = std::move(stats);
    }
    if (j.contains("meta")) {
      const auto& m = j.at("meta");
      model.meta.seed = m.value("seed", std::uint64_t{0});
      model.meta.pool_fraction = m.value("pool_fraction", 0.5);
      if (m.contains("grid") && !m.at("grid").is_null()) model.meta.grid = grid_from_json(m.at("grid"));
      if (m.contains("cv_error") && !m.at("cv_error").is_null()) model.meta.cv_error = m.at("cv_error").get<double>();
      model.meta.created = m.value("created", std::string{});
      model.meta.tool = m.value("tool", std::string{});
    }
  } catch (const Json::exception& e) {
    throw Error(Errc::ModelFormatError, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::ModelFormatError) throw;
    throw Error(Errc::ModelFormatError, e.detail());
  }

  try {
    model.params.validate();
    validate_pools(model.pools);
  } catch (const Error& e) {
    throw Error(Errc::ModelFormatError, e.detail());
  }
  if (model.pools.size() < 2) throw Error(Errc::ModelFormatError, "model needs at least two classes");
  if (model.preprocessing && (model.preprocessing->mean.size() != model.dim() ||
                              model.preprocessing->std.size() != model.dim() ||
                              model.preprocessing->constant.size() != model.dim())) {
    throw Error(Errc::ModelFormatError, "preprocessing dimension differs from pool dimension");
  }
  return model;
}

void write_model(const std::filesystem::path& path, const ModelFile& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IOError, "cannot write '" + path.string() + "'");
  out << serialize_model(model);
  if (!out) throw Error(Errc::IOError, "failed writing '" + path.string() + "'");
}

ModelFile read_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

ParamGrid parse_grid_config(std::string_view text) {
  ParamGrid grid;
  try {
    grid = grid_from_json(Json::parse(text));
  } catch (const Json::exception& e) {
    throw Error(Errc::ConfigParseError, e.what());
  }
  try {
    grid.validate();
  } catch (const Error& e) {
    throw Error(Errc::ConfigParseError, e.detail());
  }
  return grid;
}

ParamGrid read_grid_config(const std::filesystem::path& path) { return parse_grid_config(read_file(path)); }

std::string serialize_grid_config(const ParamGrid& grid) { return grid_to_json(grid).dump(2) + "\n"; }

}  // namespace qlear

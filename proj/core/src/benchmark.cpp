#include "qlear/benchmark.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "qlear/error.hpp"

namespace qlear {
namespace {

struct KnownRow {
  std::array<std::string_view, 3> keys;
  ReportedResult result;
};

const std::array<KnownRow, 10>& known_rows() {
  static const std::array<KnownRow, 10> rows{{
      {{"appendi", "", ""}, {"Appendix", 35, 7, 4, 0.03, 0.0}},
      {{"australian", "", ""}, {"Australian Credit", 195, 7, 5, 0.11, 0.0}},
      {{"banana", "", ""}, {"Banana", 1500, 26, 1, 1.78, 3.2}},
      {{"contracept", "cmc", ""}, {"Contraceptive", 320, 29, 1, 1.5, 9.7}},
      {{"glass", "", ""}, {"Glass", 38, 5, 2, 1.22, 2.8}},
      {{"german", "", ""}, {"German Credit", 265, 25, 1, 0.5, 0.0}},
      {{"iris", "", ""}, {"Iris", 21, 14, 1, 2.0, 0.0}},
      {{"parkinson", "", ""}, {"Parkinson", 40, 14, 5, 0.03, 0.003}},
      {{"pima", "diabetes", ""}, {"Pima", 230, 13, 1, 0.95, 0.0}},
      {{"wine", "", ""}, {"Wine", 25, 9, 6, 0.03, 0.0}},
  }};
  return rows;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

}  // namespace

std::optional<ReportedResult> reported_result(std::string_view dataset_name) {
  const std::string name = lower(dataset_name);
  for (const auto& row : known_rows()) {
    for (std::string_view key : row.keys) {
      if (!key.empty() && name.find(key) != std::string::npos) return row.result;
    }
  }
  return std::nullopt;
}

double BenchmarkRow::mean_error() const {
  if (runs.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : runs) s += r.test_error;
  return s / static_cast<double>(runs.size());
}

double BenchmarkRow::error_spread() const {
  if (runs.size() < 2) return 0.0;
  const double m = mean_error();
  double s = 0.0;
  for (const auto& r : runs) s += (r.test_error - m) * (r.test_error - m);
  return std::sqrt(s / static_cast<double>(runs.size() - 1));
}

BenchmarkRow benchmark_dataset(const LabeledDataset& dataset, std::string name, const BenchmarkConfig& config) {
  BenchmarkRow row;
  row.dataset = std::move(name);
  row.reported = reported_result(row.dataset);
  for (std::size_t s = 0; s < config.seeds; ++s) {
    const auto start = std::chrono::steady_clock::now();
    BenchmarkRun run;
    run.seed = config.first_seed + s;

    PoolSample sample = sample_pools(dataset, config.pool_fraction, run.seed);
    if (config.standardize) {
      std::vector<FeatureVector> all;
      for (const auto& pool : sample.pools) all.insert(all.end(), pool.vectors.begin(), pool.vectors.end());
      const auto stats = fit_standardization(all);
      for (auto& pool : sample.pools) pool.vectors = stats.apply(std::span<const FeatureVector>(pool.vectors));
      sample.holdout = stats.apply(sample.holdout);
    }
    for (const auto& pool : sample.pools) {
      run.pool_size_max = std::max(run.pool_size_max, pool.vectors.size());
      run.n_pool += pool.vectors.size();
    }
    run.n_holdout = sample.holdout.size();

    const auto cv = two_fold_cv(sample.pools, config.grid, run.seed, config.workers);
    run.chosen = cv.best;
    run.cv_error = cv.cv_error;
    run.test_error = evaluate(sample.pools, cv.best, sample.holdout, config.workers).error_rate;
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.runs.push_back(run);
  }
  return row;
}

std::vector<BenchmarkRow> run_benchmark(std::span<const std::filesystem::path> paths, const BenchmarkConfig& config) {
  std::vector<BenchmarkRow> rows;
  for (const auto& path : paths) {
    const std::string name = path.filename().string();
    try {
      const auto dataset = load_csv(path, config.csv);
      auto row = benchmark_dataset(dataset, name, config);
      row.path = path.string();
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      BenchmarkRow failed;
      failed.dataset = name;
      failed.path = path.string();
      failed.ok = false;
      failed.error = e.what();
      failed.reported = reported_result(name);
      rows.push_back(std::move(failed));
    }
  }
  return rows;
}

void write_benchmark_csv(std::ostream& out, std::span<const BenchmarkRow> rows) {
  out << "dataset,status,seed,pool_size_max,n_pool,n_holdout,q,n_s,n_ns,alpha,cv_error,test_error_pct,runtime_s\n";
  for (const auto& row : rows) {
    if (!row.ok) {
      std::string msg = row.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      out << row.dataset << ",failed: " << msg << ",,,,,,,,,,,\n";
      continue;
    }
    for (const auto& r : row.runs) {
      out << row.dataset << ",ok," << r.seed << ',' << r.pool_size_max << ',' << r.n_pool << ',' << r.n_holdout
          << ',' << fmt("%.17g", r.chosen.q) << ',' << r.chosen.n_s << ',' << r.chosen.n_ns << ','
          << fmt("%.17g", r.chosen.alpha) << ',' << fmt("%.17g", r.cv_error) << ','
          << fmt("%.6f", 100.0 * r.test_error) << ',' << fmt("%.3f", r.seconds) << '\n';
    }
  }
}

std::string benchmark_json(std::span<const BenchmarkRow> rows, const BenchmarkConfig& config) {
  using Json = nlohmann::ordered_json;
  Json datasets = Json::array();
  for (const auto& row : rows) {
    Json j = {{"dataset", row.dataset}, {"path", row.path}, {"ok", row.ok}};
    if (!row.ok) j["error"] = row.error;
    Json runs = Json::array();
    for (const auto& r : row.runs) {
      runs.push_back({{"seed", r.seed},
                      {"pool_size_max", r.pool_size_max},
                      {"n_pool", r.n_pool},
                      {"n_holdout", r.n_holdout},
                      {"params",
                       {{"q", r.chosen.q}, {"n_s", r.chosen.n_s}, {"n_ns", r.chosen.n_ns}, {"alpha", r.chosen.alpha}}},
                      {"cv_error", r.cv_error},
                      {"test_error", r.test_error},
                      {"runtime_seconds", r.seconds}});
    }
    j["runs"] = runs;
    if (row.ok) {
      j["mean_test_error"] = row.mean_error();
      j["test_error_spread"] = row.error_spread();
    }
    if (row.reported) {
      const auto& p = *row.reported;
      j["reported"] = {{"name", p.name},   {"pool_max", p.pool_max}, {"n_s", p.n_s},
                       {"n_ns", p.n_ns},   {"q", p.q},               {"error_percent", p.error_percent}};
    }
    datasets.push_back(j);
  }
  const Json root = {{"schema_version", 1},
                     {"config",
                      {{"seeds", config.seeds},
                       {"first_seed", config.first_seed},
                       {"pool_fraction", config.pool_fraction},
                       {"standardize", config.standardize},
                       {"grid",
                        {{"q_values", config.grid.q_values},
                         {"n_s_values", config.grid.n_s_values},
                         {"n_ns_values", config.grid.n_ns_values},
                         {"alpha_values", config.grid.alpha_values},
                         {"unit_normalize", config.grid.unit_normalize}}}}},
                     {"datasets", datasets}};
  return root.dump(2) + "\n";
}

void write_benchmark_summary(std::ostream& out, std::span<const BenchmarkRow> rows) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %5s %-22s %16s %10s | %-30s\n", "dataset", "pool", "q/N_s/N_ns/alpha (1st)",
                "error % (mean+-sd)", "runtime s", "published pool/N_s/N_ns/q/error%");
  out << line;
  for (const auto& row : rows) {
    std::string reported = "-";
    if (row.reported) {
      const auto& p = *row.reported;
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%zu/%zu/%zu/%g/%g", p.pool_max, p.n_s, p.n_ns, p.q, p.error_percent);
      reported = buf;
    }
    if (!row.ok) {
      std::snprintf(line, sizeof(line), "%-24s FAILED: %s | %s\n", row.dataset.c_str(), row.error.c_str(),
                    reported.c_str());
      out << line;
      continue;
    }
    if (row.runs.empty()) continue;
    const auto& first = row.runs.front();
    char params[64];
    std::snprintf(params, sizeof(params), "%g/%zu/%zu/%g", first.chosen.q, first.chosen.n_s, first.chosen.n_ns,
                  first.chosen.alpha);
    char err[48];
    std::snprintf(err, sizeof(err), "%.2f +- %.2f", 100.0 * row.mean_error(), 100.0 * row.error_spread());
    double secs = 0.0;
    for (const auto& r : row.runs) secs += r.seconds;
    std::snprintf(line, sizeof(line), "%-24s %5zu %-22s %16s %10.2f | %-30s\n", row.dataset.c_str(),
                  first.pool_size_max, params, err, secs / static_cast<double>(row.runs.size()), reported.c_str());
    out << line;
  }
}

}  // namespace qlear

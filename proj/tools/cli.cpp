#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "qlear/benchmark.hpp"
#include "qlear/demo.hpp"
#include "qlear/error.hpp"
#include "qlear/model_io.hpp"

namespace qlear::cli {
namespace {

namespace fs = std::filesystem;

struct CsvFlags {
  bool header = false;
  std::string label_column = "last";
  char delimiter = ',';

  void add_to(CLI::App* cmd) {
    cmd->add_flag("--header", header, "First row is a header");
    cmd->add_option("--label-column", label_column, "Label column: 0-based index, 'last' or 'none'")
        ->capture_default_str();
    cmd->add_option("--delimiter", delimiter, "Field delimiter")->capture_default_str();
  }

  CsvOptions options() const {
    CsvOptions o;
    o.has_header = header;
    o.delimiter = delimiter;
    if (label_column == "last") {
      o.label_column = LabelColumn::last();
    } else if (label_column == "none") {
      o.label_column = LabelColumn::none();
    } else {
      try {
        o.label_column = LabelColumn::at(std::stoul(label_column));
      } catch (const std::exception&) {
        throw Error(Errc::InvalidParams, "--label-column must be an index, 'last' or 'none'");
      }
    }
    return o;
  }
};

/// Output sink: a file, or `fallback` when the path is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error(Errc::IOError, "cannot write '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  bool is_file() const { return file_ != nullptr; }
  void close(const std::string& path) {
    if (file_) {
      file_->close();
      if (!*file_) throw Error(Errc::IOError, "failed writing '" + path + "'");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_report(std::ostream& out, const EvaluationReport& report) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "samples: %zu\nerrors: %zu\nerror_rate: %.6f (%.4f%%)\n", report.n_samples,
                report.n_samples - report.correct(), report.error_rate, 100.0 * report.error_rate);
  out << buf << "confusion (rows = true, columns = predicted):\n";
  out << "label";
  for (const auto& l : report.labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    out << report.labels[i];
    for (std::size_t c : report.confusion[i]) out << ',' << c;
    out << '\n';
  }
}

// ---- demo ----------------------------------------------------------------

struct DemoArgs {
  std::string problem;
  double q = 2.0;
  std::size_t resolution = 201;
  std::string out;
  bool lift = false;
  bool no_lift = false;
  std::vector<std::size_t> attributes{3, 4};
  std::string data;
  std::size_t workers = 0;
};

int run_demo(const DemoArgs& a, std::ostream& out, std::ostream& err) {
  DemoOptions options;
  options.q = a.q;
  options.resolution = a.resolution;
  if (a.lift) options.lift = true;
  if (a.no_lift) options.lift = false;
  options.workers = a.workers;

  Sink sink(a.out, out);
  std::ostream& info = sink.is_file() ? out : err;

  if (a.problem == "xor" || a.problem == "and") {
    const auto grid = a.problem == "xor" ? xor_demo(options) : and_demo(options);
    write_grid_csv(sink.stream(), grid);
    sink.close(a.out);
    info << a.problem << ": " << grid.resolution << "x" << grid.resolution << " grid on [-2,2]^2, q=" << a.q
         << (options.lift.value_or(true) ? ", lifted to z=1" : "") << '\n';
    return kSuccess;
  }
  if (a.problem == "iris34") {
    const std::string path = a.data.empty() ? std::string(QLEAR_BUNDLED_IRIS) : a.data;
    const auto iris = load_csv(path);
    const auto result = iris_demo(iris, a.attributes, options);
    if (result.grid) write_grid_csv(sink.stream(), *result.grid);
    sink.close(a.out);
    info << "iris34: attributes";
    for (std::size_t attr : result.attributes) info << ' ' << attr;
    if (options.lift.value_or(false)) info << " lifted to z=1";
    char buf[160];
    std::snprintf(buf, sizeof(buf), ", %zu singleton subclasses, held-out errors %zu / %zu (%.2f%%), q=%g\n",
                  result.n_representatives, result.errors, result.n_heldout, 100.0 * result.error_rate(), a.q);
    info << buf;
    if (!result.misclassified_rows.empty()) {
      info << "misclassified rows (1-based):";
      for (std::size_t r : result.misclassified_rows) info << ' ' << r + 1;
      info << '\n';
    }
    return kSuccess;
  }
  throw Error(Errc::UnknownProblem, "unknown demo '" + a.problem + "' (expected xor, and or iris34)");
}

// ---- fit -----------------------------------------------------------------

struct FitArgs {
  std::string data;
  double pool_fraction = 0.5;
  std::uint64_t seed = 0;
  std::string grid;
  bool standardize = false;
  std::string out;
  std::string table;
  std::size_t workers = 0;
  CsvFlags csv;
};

int run_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  const ParamGrid grid = a.grid.empty() ? ParamGrid::defaults() : read_grid_config(a.grid);
  LabeledDataset data = load_csv(a.data, a.csv.options());
  data.validate();
  if (data.labels.empty()) throw Error(Errc::InvalidParams, "fit needs labeled data");
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < 4) {
      throw Error(Errc::ClassTooSmall, "class '" + data.class_names[c] + "' has " + std::to_string(counts[c]) +
                                           " samples; fit needs at least 4 per class");
    }
  }

  ModelFile model;
  PoolSample sample = sample_pools(data, a.pool_fraction, a.seed);
  if (a.standardize) {
    std::vector<FeatureVector> rows;
    for (const auto& pool : sample.pools) rows.insert(rows.end(), pool.vectors.begin(), pool.vectors.end());
    auto stats = fit_standardization(rows);
    if (stats.any_constant()) err << "warning: constant feature columns kept with std = 1\n";
    for (auto& pool : sample.pools) pool.vectors = stats.apply(std::span<const FeatureVector>(pool.vectors));
    if (sample.holdout.size() > 0) sample.holdout = stats.apply(sample.holdout);
    model.preprocessing = std::move(stats);
  }
  const auto cv = two_fold_cv(sample.pools, grid, a.seed, a.workers);

  model.params = cv.best;
  model.pools = std::move(sample.pools);
  model.meta.seed = a.seed;
  model.meta.pool_fraction = a.pool_fraction;
  model.meta.grid = grid;
  model.meta.cv_error = cv.cv_error;
  model.meta.created = utc_timestamp();
  model.meta.tool = "qlear " + std::string(library_version());
  write_model(a.out, model);

  Sink table(a.table, out);
  table.stream() << "q,n_s,n_ns,alpha,errors,cv_error\n";
  for (const auto& e : cv.table) {
    table.stream() << num(e.params.q) << ',' << e.params.n_s << ',' << e.params.n_ns << ',' << num(e.params.alpha)
                   << ',' << e.errors << ',' << num(e.cv_error) << '\n';
  }
  table.close(a.table);

  char buf[256];
  std::snprintf(buf, sizeof(buf), "best: q=%g n_s=%zu n_ns=%zu alpha=%g cv_error=%.6f (%zu samples)\n", cv.best.q,
                cv.best.n_s, cv.best.n_ns, cv.best.alpha, cv.cv_error, cv.n_samples);
  out << buf;
  if (sample.holdout.size() > 0) {
    const auto report = evaluate(model.pools, model.params, sample.holdout, a.workers);
    std::snprintf(buf, sizeof(buf), "holdout (rows not used as representatives): %zu samples, error_rate %.6f\n",
                  report.n_samples, report.error_rate);
    out << buf;
  }
  out << "model written to " << a.out << '\n';
  return kSuccess;
}

// ---- predict -------------------------------------------------------------

struct PredictArgs {
  std::string model;
  std::string data;
  std::string out;
  bool header = false;
  char delimiter = ',';
  std::size_t workers = 0;
};

int run_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  const ModelFile model = read_model(a.model);
  const std::size_t dim = model.dim();
  const std::size_t columns = count_csv_columns(a.data, a.delimiter);

  CsvOptions csv;
  csv.has_header = a.header;
  csv.delimiter = a.delimiter;
  if (columns == dim + 1) {
    csv.label_column = LabelColumn::last();
  } else if (columns == dim) {
    csv.label_column = LabelColumn::none();
  } else {
    throw Error(Errc::DimensionMismatch, "model expects " + std::to_string(dim) + " features (or " +
                                             std::to_string(dim + 1) + " columns with a label), data has " +
                                             std::to_string(columns) + " columns");
  }
  LabeledDataset data = load_csv(a.data, csv);
  const bool labeled = !data.labels.empty();
  if (labeled) {
    for (const auto& name : data.class_names) {
      const bool known =
          std::any_of(model.pools.begin(), model.pools.end(), [&](const ClassPool& p) { return p.label == name; });
      if (!known) throw Error(Errc::UnknownLabel, "label '" + name + "' is not a class of the model");
    }
  }
  if (model.preprocessing) data = model.preprocessing->apply(data);

  const auto predictions = classify_batch(data.features, model.pools, model.params, a.workers);

  Sink sink(a.out, out);
  auto& s = sink.stream();
  s << "row_index,predicted_label";
  for (const auto& pool : model.pools) s << ",score_" << pool.label;
  s << '\n';
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    s << i << ',' << predictions[i].label;
    for (const auto& cs : predictions[i].scores) s << ',' << num(cs.score);
    s << '\n';
  }
  sink.close(a.out);

  if (labeled) print_report(sink.is_file() ? out : err, evaluation_report(model.pools, data, predictions));
  return kSuccess;
}

// ---- benchmark -----------------------------------------------------------

struct BenchmarkArgs {
  std::vector<std::string> data;
  std::size_t seeds = 5;
  std::uint64_t first_seed = 0;
  double pool_fraction = 0.5;
  std::string grid;
  bool standardize = false;
  std::string out;
  std::string json;
  std::size_t workers = 0;
  CsvFlags csv;
};

int run_benchmark_cmd(const BenchmarkArgs& a, std::ostream& out, std::ostream& err) {
  BenchmarkConfig config;
  config.seeds = a.seeds;
  config.first_seed = a.first_seed;
  config.pool_fraction = a.pool_fraction;
  config.grid = a.grid.empty() ? ParamGrid::defaults() : read_grid_config(a.grid);
  config.standardize = a.standardize;
  config.csv = a.csv.options();
  config.workers = a.workers;

  std::vector<fs::path> paths(a.data.begin(), a.data.end());
  const auto rows = run_benchmark(paths, config);

  if (!a.out.empty()) {
    Sink sink(a.out, out);
    write_benchmark_csv(sink.stream(), rows);
    sink.close(a.out);
  }
  if (!a.json.empty()) {
    Sink sink(a.json, out);
    sink.stream() << benchmark_json(rows, config);
    sink.close(a.json);
  }
  if (a.out.empty() && a.json.empty()) write_benchmark_csv(out, rows);
  write_benchmark_summary(a.out.empty() && a.json.empty() ? err : out, rows);
  return kSuccess;
}

int exit_code_for(const Error& e) {
  switch (category(e.code())) {
    case ErrorCategory::Usage: return kUsageError;
    case ErrorCategory::Numeric: return kNumericError;
    case ErrorCategory::Data: return kDataError;
  }
  return kDataError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"QLEAR: entropy-based nearest-representative classification", "qlear"};
  app.require_subcommand(1);

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo", "Decision grids for the xor, and and iris34 toy problems");
  demo_cmd->add_option("problem", demo.problem, "xor, and or iris34")->required();
  demo_cmd->add_option("--q", demo.q, "Tsallis entropy order")->capture_default_str();
  demo_cmd->add_option("--resolution", demo.resolution, "Grid points per axis")->capture_default_str();
  demo_cmd->add_option("--out", demo.out, "Grid CSV path (default stdout)");
  auto* lift = demo_cmd->add_flag("--lift", demo.lift, "Place points on the plane z = 1 (default for xor and and)");
  demo_cmd->add_flag("--no-lift", demo.no_lift, "Use the raw coordinates (default for iris34)")->excludes(lift);
  demo_cmd->add_option("--attributes", demo.attributes, "iris34: 1-based feature columns")
      ->delimiter(',')
      ->capture_default_str();
  demo_cmd->add_option("--data", demo.data, "iris34: Iris CSV (default: bundled copy)");
  demo_cmd->add_option("--workers", demo.workers, "Worker threads (0 = all cores)");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Sample pools, select parameters by 2-fold CV, write a model");
  fit_cmd->add_option("--data", fit.data, "Training CSV")->required();
  fit_cmd->add_option("--pool-fraction", fit.pool_fraction, "Share of each class kept as representatives")
      ->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Sampling and fold seed")->capture_default_str();
  fit_cmd->add_option("--grid", fit.grid, "Grid-config JSON (default: built-in grid)");
  fit_cmd->add_flag("--standardize", fit.standardize, "Z-score features before fitting");
  fit_cmd->add_option("--out", fit.out, "Model JSON path")->required();
  fit_cmd->add_option("--table", fit.table, "Write the CV table here instead of stdout");
  fit_cmd->add_option("--workers", fit.workers, "Worker threads (0 = all cores)");
  fit.csv.add_to(fit_cmd);

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Classify rows with a fitted model");
  predict_cmd->add_option("--model", predict.model, "Model JSON")->required();
  predict_cmd->add_option("--data", predict.data, "CSV with features, optionally followed by a label")->required();
  predict_cmd->add_option("--out", predict.out, "Predictions CSV (default stdout)");
  predict_cmd->add_flag("--header", predict.header, "First row is a header");
  predict_cmd->add_option("--delimiter", predict.delimiter, "Field delimiter")->capture_default_str();
  predict_cmd->add_option("--workers", predict.workers, "Worker threads (0 = all cores)");

  BenchmarkArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Pool/CV/holdout protocol over several datasets and seeds");
  bench_cmd->add_option("--data", bench.data, "Dataset CSV paths")->expected(0, -1);
  bench_cmd->add_option("--seeds", bench.seeds, "Number of seeds")->capture_default_str();
  bench_cmd->add_option("--first-seed", bench.first_seed, "First seed")->capture_default_str();
  bench_cmd->add_option("--pool-fraction", bench.pool_fraction, "Share of each class kept as representatives")
      ->capture_default_str();
  bench_cmd->add_option("--grid", bench.grid, "Grid-config JSON (default: built-in grid)");
  bench_cmd->add_flag("--standardize", bench.standardize, "Z-score features using pool statistics");
  bench_cmd->add_option("--out", bench.out, "Per-run CSV report");
  bench_cmd->add_option("--json", bench.json, "JSON report");
  bench_cmd->add_option("--workers", bench.workers, "Worker threads (0 = all cores)");
  bench.csv.add_to(bench_cmd);

  std::vector<std::string> argv_storage{"qlear"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*demo_cmd) return run_demo(demo, out, err);
    if (*fit_cmd) return run_fit(fit, out, err);
    if (*predict_cmd) return run_predict(predict, out, err);
    if (*bench_cmd) return run_benchmark_cmd(bench, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace qlear::cli

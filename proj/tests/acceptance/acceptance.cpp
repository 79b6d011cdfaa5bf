// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "qlear/benchmark.hpp"
#include "qlear/classifier.hpp"
#include "qlear/dataset.hpp"
#include "qlear/demo.hpp"
#include "qlear/density.hpp"
#include "qlear/model_selection.hpp"
#include "qlear/neighbors.hpp"

using namespace qlear;
namespace fs = std::filesystem;

namespace {

const std::string kIris = std::string(QLEAR_TEST_DATA_DIR) + "/iris.csv";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

FeatureVector gaussian_vector(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  FeatureVector v(d);
  for (double& x : v) x = g(rng);
  return v;
}

Spectrum spectrum_of(const std::vector<FeatureVector>& vectors) {
  return spectrum(normalize_to_density(gram_accumulate(vectors)));
}

double uniform_entropy(std::size_t n, double q) {
  return (1.0 - std::pow(static_cast<double>(n), 1.0 - q)) / (q - 1.0);
}

// ---------------------------------------------------------------------------

Outcome entropy_axioms() {
  Timer timer;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 10);
  const std::vector<double> qs{0.03, 0.5, 2.0, 5.0};
  double worst_pure = 0.0, worst_uniform = 0.0, worst_bound = 0.0, worst_shannon = 0.0;
  const int trials = 1000;

  for (int t = 0; t < trials; ++t) {
    const std::size_t d = dim(rng);

    const auto pure = spectrum_of({gaussian_vector(d, rng)});
    for (double q : qs) worst_pure = std::max(worst_pure, tsallis_entropy(pure, q));

    const std::size_t n = 1 + rng() % d;
    const auto basis = oracle::random_orthogonal(d, rng);
    std::vector<FeatureVector> rows(basis.begin(), basis.begin() + static_cast<std::ptrdiff_t>(n));
    const auto uniform = spectrum_of(rows);
    for (double q : qs) {
      worst_uniform = std::max(worst_uniform, std::abs(tsallis_entropy(uniform, q) - uniform_entropy(n, q)));
    }

    std::vector<FeatureVector> mixed;
    const std::size_t k = 1 + rng() % (2 * d);
    for (std::size_t i = 0; i < k; ++i) mixed.push_back(gaussian_vector(d, rng));
    const auto s = spectrum_of(mixed);
    for (double q : qs) {
      const double value = tsallis_entropy(s, q);
      const double max = uniform_entropy(d, q);
      worst_bound = std::max({worst_bound, -value, value - max});
    }
    const double h = shannon_entropy_limit(s);
    for (double q : {1.0 - 1e-5, 1.0 + 1e-5}) {
      worst_shannon = std::max(worst_shannon, std::abs(tsallis_entropy(s, q) - h));
    }
  }
  const double secs = timer.seconds();
  const bool pass = worst_pure <= 1e-10 && worst_uniform <= 1e-10 && worst_bound <= 1e-12 &&
                    worst_shannon <= 1e-4 && secs < 10.0;
  return {pass, fmt("%d states; max pure S_q %.2e, max uniform dev %.2e, max bound excess %.2e, "
                    "max |S_q - H| at q=1+-1e-5 %.2e; %.2fs",
                    trials, worst_pure, worst_uniform, std::max(0.0, worst_bound), worst_shannon, secs)};
}

Outcome xor_grid() {
  Timer timer;
  DemoOptions opts;
  opts.resolution = 201;
  const auto grid = xor_demo(opts);
  std::size_t mismatches = 0, checked = 0;
  for (std::size_t iy = 0; iy < grid.resolution; ++iy) {
    for (std::size_t ix = 0; ix < grid.resolution; ++ix) {
      const double xy = grid.x(ix) * grid.y(iy);
      if (std::abs(xy) <= 1e-6) continue;
      ++checked;
      if (grid.at(ix, iy) != (xy > 0 ? "A" : "B")) ++mismatches;
    }
  }
  const double secs = timer.seconds();
  return {mismatches == 0 && secs < 5.0,
          fmt("%zu/%zu cells disagree with sign(xy); %.2fs", mismatches, checked, secs)};
}

Outcome and_grid() {
  Timer timer;
  DemoOptions opts;
  opts.resolution = 201;
  const auto subclasses = and_subclasses(/*lift=*/true);  // and_demo default
  std::size_t corner_errors = 0;
  for (const auto& sub : subclasses) {
    for (const auto& v : sub.vectors) {
      if (simple_classify(v, subclasses, opts.q).label != sub.label) ++corner_errors;
    }
  }
  const auto grid = and_demo(opts);
  std::size_t region = 0, region_false = 0;
  // TRUE share per open quadrant: (+,+), (-,+), (-,-), (+,-)
  std::size_t quad_true[4] = {0, 0, 0, 0}, quad_total[4] = {0, 0, 0, 0};
  for (std::size_t iy = 0; iy < grid.resolution; ++iy) {
    for (std::size_t ix = 0; ix < grid.resolution; ++ix) {
      const double x = grid.x(ix), y = grid.y(iy);
      const bool is_true = grid.at(ix, iy) == "TRUE";
      if (std::min(x, y) > 0.25) {
        ++region;
        if (!is_true) ++region_false;
      }
      if (x == 0.0 || y == 0.0) continue;
      const int quad = x > 0 ? (y > 0 ? 0 : 3) : (y > 0 ? 1 : 2);
      ++quad_total[quad];
      if (is_true) ++quad_true[quad];
    }
  }
  const double secs = timer.seconds();
  auto share = [&](int i) { return 100.0 * static_cast<double>(quad_true[i]) / static_cast<double>(quad_total[i]); };
  return {corner_errors == 0 && region_false == 0 && secs < 5.0,
          fmt("corner errors %zu; %zu/%zu cells with min(x,y)>0.25 not TRUE; TRUE share by quadrant "
              "(+,+) %.1f%% (-,+) %.1f%% (-,-) %.1f%% (+,-) %.1f%%; %.2fs",
              corner_errors, region_false, region, share(0), share(1), share(2), share(3), secs)};
}

Outcome iris_subclasses() {
  Timer timer;
  const auto iris = load_csv(kIris);
  const auto qs = ParamGrid::defaults().q_values;
  const std::vector<std::size_t> full{1, 3, 4}, petal{3, 4};

  auto errors_by_q = [&](const std::vector<std::size_t>& attrs, std::optional<bool> lift) {
    std::vector<std::size_t> out;
    for (double q : qs) {
      DemoOptions opts;
      opts.q = q;
      opts.lift = lift;
      opts.resolution = 2;
      out.push_back(iris_demo(iris, attrs, opts).errors);
    }
    return out;
  };
  auto list = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t e : v) s += (s.empty() ? "" : ",") + std::to_string(e);
    return s;
  };

  const auto e_full = errors_by_q(full, std::nullopt);
  const auto e_petal = errors_by_q(petal, std::nullopt);
  const std::size_t n_heldout = 105;

  bool bound_met = false;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const bool petal_ok = e_petal[i] > 0 && static_cast<double>(e_petal[i]) <= 0.10 * n_heldout;
    if (e_full[i] <= 3 && petal_ok) bound_met = true;
  }
  const std::size_t best_full = *std::min_element(e_full.begin(), e_full.end());
  const std::size_t best_petal = *std::min_element(e_petal.begin(), e_petal.end());
  const bool dominates = best_full < best_petal;
  const bool pass = (bound_met || dominates) && timer.seconds() < 30.0;

  const auto lifted_full = errors_by_q(full, true);
  const auto lifted_petal = errors_by_q(petal, true);
  const double secs = timer.seconds();

  std::string detail = fmt("errors/105 over q grid, raw attributes: {1,3,4} [%s], {3,4} [%s]; ",
                           list(e_full).c_str(), list(e_petal).c_str());
  if (bound_met) {
    detail += "<=3 bound met";
  } else {
    detail += fmt("<=3 bound not met (best %zu = %.2f%%); fallback {1,3,4} best %zu vs {3,4} best %zu: %s", best_full,
                  100.0 * static_cast<double>(best_full) / n_heldout, best_full, best_petal,
                  dominates ? "strictly better" : "not strictly better");
  }
  detail += fmt("; info, lifted to z=1: {1,3,4} [%s], {3,4} [%s]; %.2fs", list(lifted_full).c_str(),
                list(lifted_petal).c_str(), secs);
  return {pass, detail};
}

Outcome iris_benchmark() {
  Timer timer;
  BenchmarkConfig config;
  config.seeds = 5;
  const auto row = benchmark_dataset(load_csv(kIris), "iris", config);
  const double mean = 100.0 * row.mean_error();
  std::string runs;
  for (const auto& r : row.runs) {
    runs += fmt("%s%.2f", runs.empty() ? "" : ",", 100.0 * r.test_error);
  }
  const auto published = reported_result("iris");
  return {mean <= 5.0,
          fmt("holdout error %% by seed [%s], mean %.3f%% +- %.3f (limit 5%%); gap to published %.1f%%: %+.3f points; "
              "pool %zu/class vs published %zu; %.2fs",
              runs.c_str(), mean, 100.0 * row.error_spread(), published ? published->error_percent : 0.0,
              mean - (published ? published->error_percent : 0.0), row.runs.empty() ? 0 : row.runs[0].pool_size_max,
              published ? published->pool_max : 0, timer.seconds())};
}

Outcome oracle_equivalence() {
  Timer timer;
  std::mt19937_64 rng(77);
  std::size_t knn_bad = 0;
  const int knn_trials = 1000;
  for (int t = 0; t < knn_trials; ++t) {
    const std::size_t d = 1 + rng() % 6, n = 1 + rng() % 40;
    const bool lattice = t % 2 == 1;  // integer points force distance ties
    std::vector<FeatureVector> pool(n, FeatureVector(d));
    FeatureVector query(d);
    auto draw = [&] { return lattice ? static_cast<double>(rng() % 5) : std::normal_distribution<double>()(rng); };
    for (auto& v : pool)
      for (double& x : v) x = draw();
    for (double& x : query) x = draw();
    const std::size_t k = 1 + rng() % n;
    if (k_nearest(query, pool, k).indices != oracle::brute_force_knn(query, pool, k)) ++knn_bad;
  }

  std::size_t subclass_bad = 0;
  const int subclass_trials = 500;
  const std::vector<double> qs{0.03, 0.5, 2.0, 5.0};
  for (int t = 0; t < subclass_trials; ++t) {
    const std::size_t d = 1 + rng() % 5, m = 1 + rng() % 8;
    std::vector<ClassPool> subclasses;
    std::vector<std::vector<oracle::Vec>> raw;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<oracle::Vec> vs;
      for (std::size_t i = 0, n = 1 + rng() % 4; i < n; ++i) vs.push_back(gaussian_vector(d, rng));
      raw.push_back(vs);
      subclasses.push_back({"s" + std::to_string(j), vs});
    }
    const auto query = gaussian_vector(d, rng);
    const double q = qs[static_cast<std::size_t>(t) % qs.size()];
    if (simple_classify(query, subclasses, q).class_index != oracle::total_entropy_argmin(raw, query, q)) {
      ++subclass_bad;
    }
  }
  const double secs = timer.seconds();
  return {knn_bad == 0 && subclass_bad == 0 && secs < 20.0,
          fmt("k_nearest vs brute force: %zu/%d mismatches; subclass delta vs total entropy: %zu/%d mismatches; %.2fs",
              knn_bad, knn_trials, subclass_bad, subclass_trials, secs)};
}

struct Instance {
  std::vector<ClassPool> pools;
  FeatureVector query;
  QlearParams params;
};

Instance random_instance(std::mt19937_64& rng) {
  const std::vector<double> qs{0.03, 0.1, 0.5, 0.95, 1.22, 1.5, 1.78, 2.0};
  std::uniform_real_distribution<double> shift(-2.0, 2.0), unit(0.0, 1.0);
  Instance inst;
  const std::size_t d = 1 + rng() % 6, k = 2 + rng() % 3;
  for (std::size_t c = 0; c < k; ++c) {
    FeatureVector centre(d);
    for (double& x : centre) x = shift(rng);
    ClassPool pool{"c" + std::to_string(c), {}};
    for (std::size_t i = 0, n = 1 + rng() % 12; i < n; ++i) {
      auto v = gaussian_vector(d, rng);
      for (std::size_t j = 0; j < d; ++j) v[j] = centre[j] + 0.7 * v[j];
      pool.vectors.push_back(v);
    }
    inst.pools.push_back(pool);
  }
  inst.query = gaussian_vector(d, rng);
  inst.params = {qs[rng() % qs.size()], 1 + rng() % 8, 1 + rng() % 6, unit(rng)};
  return inst;
}

Outcome invariance() {
  Timer timer;
  std::mt19937_64 rng(99);
  const int scale_trials = 300;
  std::size_t scale_bad = 0;
  for (int t = 0; t < scale_trials; ++t) {
    const auto inst = random_instance(rng);
    const auto base = classify(inst.query, inst.pools, inst.params).label;
    for (double c : {1e-3, 0.5, 7.0, 1e3}) {
      auto pools = inst.pools;
      for (auto& p : pools)
        for (auto& v : p.vectors)
          for (double& x : v) x *= c;
      auto query = inst.query;
      for (double& x : query) x *= c;
      if (classify(query, pools, inst.params).label != base) ++scale_bad;
    }
  }

  std::size_t perm_checked = 0, perm_bad = 0;
  for (int t = 0; t < 300; ++t) {
    const auto inst = random_instance(rng);
    const auto base = classify(inst.query, inst.pools, inst.params);
    std::vector<double> scores;
    for (const auto& s : base.scores) scores.push_back(s.score);
    std::sort(scores.begin(), scores.end());
    if (scores[1] - scores[0] <= 1e-9) continue;
    ++perm_checked;
    auto pools = inst.pools;
    std::shuffle(pools.begin(), pools.end(), rng);
    if (classify(inst.query, pools, inst.params).label != base.label) ++perm_bad;
  }

  const auto iris = load_csv(kIris);
  std::size_t table_bad = 0, table_size = 0;
  for (std::uint64_t seed : {0u, 1u}) {
    const auto sample = sample_pools(iris, 0.5, seed);
    const auto serial = two_fold_cv(sample.pools, ParamGrid::defaults(), seed, 1);
    const auto parallel = two_fold_cv(sample.pools, ParamGrid::defaults(), seed, 4);
    table_size += serial.table.size();
    for (std::size_t i = 0; i < serial.table.size(); ++i) {
      const auto& a = serial.table[i];
      const auto& b = parallel.table[i];
      if (!(a.params == b.params) || a.errors != b.errors || a.cv_error != b.cv_error) ++table_bad;
    }
    if (!(serial.best == parallel.best)) ++table_bad;
  }
  const double secs = timer.seconds();
  return {scale_bad == 0 && perm_checked > 0 && perm_bad == 0 && table_bad == 0 && secs < 30.0,
          fmt("scale: %zu/%d label changes; permutation: %zu/%zu changes on unique-argmin instances; "
              "serial vs 4 workers: %zu/%zu CV entries differ; %.2fs",
              scale_bad, scale_trials * 4, perm_bad, perm_checked, table_bad, table_size, secs)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_without_runtime(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

void drop_runtime(nlohmann::ordered_json& j) {
  if (j.is_object()) {
    j.erase("runtime_seconds");
    for (auto& [_, v] : j.items()) drop_runtime(v);
  } else if (j.is_array()) {
    for (auto& v : j) drop_runtime(v);
  }
}

Outcome determinism() {
  Timer timer;
  const fs::path dir = fs::temp_directory_path() / "qlear_acceptance_determinism";
  fs::create_directories(dir);
  std::vector<std::string> csv, json;
  for (int run = 0; run < 2; ++run) {
    const auto c = (dir / ("run" + std::to_string(run) + ".csv")).string();
    const auto j = (dir / ("run" + std::to_string(run) + ".json")).string();
    std::ostringstream out, err;
    const int code = cli::run({"benchmark", "--data", kIris, "--seeds", "5", "--workers", run == 0 ? "1" : "0",
                               "--out", c, "--json", j},
                              out, err);
    if (code != 0) {
      fs::remove_all(dir);
      return {false, "benchmark exited with " + std::to_string(code) + ": " + err.str()};
    }
    csv.push_back(slurp(c));
    json.push_back(slurp(j));
  }
  fs::remove_all(dir);
  const bool csv_same = csv_without_runtime(csv[0]) == csv_without_runtime(csv[1]);
  auto j0 = nlohmann::ordered_json::parse(json[0]);
  auto j1 = nlohmann::ordered_json::parse(json[1]);
  drop_runtime(j0);
  drop_runtime(j1);
  const bool json_same = j0.dump() == j1.dump();
  return {csv_same && json_same, fmt("CSV %s, JSON %s after removing runtime fields (%zu CSV bytes); %.2fs",
                                     csv_same ? "identical" : "DIFFERENT", json_same ? "identical" : "DIFFERENT",
                                     csv[0].size(), timer.seconds())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 entropy axioms", entropy_axioms},
      {"AC2 XOR decision grid", xor_grid},
      {"AC3 AND decision grid", and_grid},
      {"AC4 Iris singleton subclasses", iris_subclasses},
      {"AC5 Iris benchmark", iris_benchmark},
      {"AC6 oracle equivalence", oracle_equivalence},
      {"AC7 invariance suite", invariance},
      {"AC8 benchmark determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("%s %s: %s\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

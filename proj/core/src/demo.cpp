#include "qlear/demo.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "qlear/error.hpp"
#include "qlear/model_selection.hpp"
#include "qlear/parallel.hpp"

namespace qlear {
namespace {

double lattice(double lo, double hi, std::size_t i, std::size_t resolution) {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
}

std::vector<ClassPool> lifted(std::vector<ClassPool> pools, bool lift) {
  if (!lift) return pools;
  for (auto& pool : pools) {
    for (auto& v : pool.vectors) v = lift_to_plane(v);
  }
  return pools;
}

DemoOptions resolved(DemoOptions options, bool default_lift) {
  options.lift = options.lift.value_or(default_lift);
  return options;
}

}  // namespace

double DecisionGrid::x(std::size_t ix) const { return lattice(x_min, x_max, ix, resolution); }
double DecisionGrid::y(std::size_t iy) const { return lattice(y_min, y_max, iy, resolution); }

FeatureVector lift_to_plane(std::span<const double> v) {
  FeatureVector out(v.begin(), v.end());
  out.push_back(1.0);
  return out;
}

DecisionGrid evaluate_grid(std::span<const ClassPool> subclasses, double x_min, double x_max, double y_min,
                           double y_max, const DemoOptions& options) {
  if (options.resolution < 2) throw Error(Errc::InvalidParams, "grid resolution must be at least 2");
  if (!(x_max > x_min) || !(y_max > y_min)) throw Error(Errc::InvalidParams, "grid range is empty");
  if (!is_valid_q(options.q)) throw Error(Errc::InvalidQ, "q must be > 0 and != 1");

  DecisionGrid grid{x_min, x_max, y_min, y_max, options.resolution, {}};
  const std::size_t n = options.resolution;
  grid.labels.resize(n * n);
  parallel_for(n, options.workers, [&](std::size_t iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      FeatureVector query{grid.x(ix), grid.y(iy)};
      if (options.lift.value_or(false)) query = lift_to_plane(query);
      grid.labels[iy * n + ix] = simple_classify(query, subclasses, options.q).label;
    }
  });
  return grid;
}

std::vector<ClassPool> xor_subclasses(bool lift) {
  return lifted({{"A", {{1, 1}, {-1, -1}}}, {"B", {{1, -1}, {-1, 1}}}}, lift);
}

std::vector<ClassPool> and_subclasses(bool lift) {
  return lifted({{"TRUE", {{1, 1}}}, {"FALSE", {{-1, -1}}}, {"FALSE", {{1, -1}}}, {"FALSE", {{-1, 1}}}}, lift);
}

DecisionGrid xor_demo(const DemoOptions& options) {
  const auto opts = resolved(options, true);
  return evaluate_grid(xor_subclasses(*opts.lift), -2, 2, -2, 2, opts);
}

DecisionGrid and_demo(const DemoOptions& options) {
  const auto opts = resolved(options, true);
  return evaluate_grid(and_subclasses(*opts.lift), -2, 2, -2, 2, opts);
}

IrisDemoResult iris_demo(const LabeledDataset& iris, std::span<const std::size_t> attributes,
                         const DemoOptions& demo_options) {
  const DemoOptions options = resolved(demo_options, false);
  const bool lift = *options.lift;
  if (attributes.empty()) throw Error(Errc::InvalidParams, "iris demo needs at least one attribute");
  std::vector<std::size_t> columns;
  for (std::size_t a : attributes) {
    if (a < 1 || a > iris.dim()) {
      throw Error(Errc::InvalidParams, "attribute " + std::to_string(a) + " outside 1.." + std::to_string(iris.dim()));
    }
    columns.push_back(a - 1);
  }
  const LabeledDataset data = iris.select_features(columns);

  std::vector<std::size_t> positions;
  for (std::size_t p = 19; p <= 33; ++p) positions.push_back(p);
  std::map<Label, std::vector<std::size_t>> by_class;
  for (const auto& name : data.class_names) by_class[name] = positions;
  const PoolSample sample = sample_pools(data, by_class);

  std::vector<ClassPool> subclasses;
  for (const auto& pool : sample.pools) {
    for (const auto& v : pool.vectors) {
      subclasses.push_back({pool.label, {lift ? lift_to_plane(v) : v}});
    }
  }

  IrisDemoResult result;
  result.attributes.assign(attributes.begin(), attributes.end());
  result.n_representatives = subclasses.size();
  result.n_heldout = sample.holdout.size();

  // Holdout rows are ascending dataset rows outside the representative set.
  std::vector<std::size_t> holdout_rows;
  {
    std::vector<bool> is_rep(data.size(), false);
    for (std::size_t c = 0; c < data.class_names.size(); ++c) {
      const auto rows = data.rows_of_class(c);
      for (std::size_t p : positions) {
        if (p < rows.size()) is_rep[rows[p]] = true;
      }
    }
    for (std::size_t r = 0; r < data.size(); ++r) {
      if (!is_rep[r]) holdout_rows.push_back(r);
    }
  }

  std::vector<Label> predicted(sample.holdout.size());
  parallel_for(sample.holdout.size(), options.workers, [&](std::size_t i) {
    const auto& x = sample.holdout.features[i];
    predicted[i] = simple_classify(lift ? lift_to_plane(x) : x, subclasses, options.q).label;
  });
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] != sample.holdout.class_names[sample.holdout.labels[i]]) {
      ++result.errors;
      result.misclassified_rows.push_back(holdout_rows[i]);
    }
  }

  if (columns.size() == 2) {
    double x_lo = data.features.front()[0], x_hi = x_lo;
    double y_lo = data.features.front()[1], y_hi = y_lo;
    for (const auto& f : data.features) {
      x_lo = std::min(x_lo, f[0]);
      x_hi = std::max(x_hi, f[0]);
      y_lo = std::min(y_lo, f[1]);
      y_hi = std::max(y_hi, f[1]);
    }
    const double px = 0.1 * (x_hi - x_lo);
    const double py = 0.1 * (y_hi - y_lo);
    result.grid = evaluate_grid(subclasses, x_lo - px, x_hi + px, y_lo - py, y_hi + py, options);
  }
  return result;
}

void write_grid_csv(std::ostream& out, const DecisionGrid& grid) {
  out << "x,y,label\n";
  char buf[64];
  for (std::size_t iy = 0; iy < grid.resolution; ++iy) {
    for (std::size_t ix = 0; ix < grid.resolution; ++ix) {
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g,", grid.x(ix), grid.y(iy));
      out << buf << grid.at(ix, iy) << '\n';
    }
  }
}

}  // namespace qlear

#pragma once

// Decision-grid demos for the subclass rule: XOR, AND and Iris with
// per-representative subclasses.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlear/classifier.hpp"
#include "qlear/dataset.hpp"

namespace qlear {

struct DecisionGrid {
  double x_min = -2.0;
  double x_max = 2.0;
  double y_min = -2.0;
  double y_max = 2.0;
  std::size_t resolution = 2;
  /// labels[iy * resolution + ix]
  std::vector<Label> labels;

  double x(std::size_t ix) const;
  double y(std::size_t iy) const;
  const Label& at(std::size_t ix, std::size_t iy) const { return labels[iy * resolution + ix]; }
};

struct DemoOptions {
  double q = 2.0;
  std::size_t resolution = 201;
  /// Place points and queries on the plane z = 1 (append a constant 1).
  /// Unset means the problem default: on for xor/and, off for Iris.
  std::optional<bool> lift;
  std::size_t workers = 1;
};

/// Appends the constant coordinate used by DemoOptions::lift.
FeatureVector lift_to_plane(std::span<const double> v);

/// Evaluates simple_classify over a resolution x resolution lattice. Queries
/// are lifted only when options.lift is set to true.
/// Throws InvalidParams (resolution < 2, empty range), InvalidQ.
DecisionGrid evaluate_grid(std::span<const ClassPool> subclasses, double x_min, double x_max, double y_min,
                           double y_max, const DemoOptions& options);

/// Two subclasses A = {(1,1),(-1,-1)}, B = {(1,-1),(-1,1)} over [-2, 2]^2.
std::vector<ClassPool> xor_subclasses(bool lift);
/// Four singleton subclasses, (1,1) -> TRUE and the rest -> FALSE.
std::vector<ClassPool> and_subclasses(bool lift);

DecisionGrid xor_demo(const DemoOptions& options);
DecisionGrid and_demo(const DemoOptions& options);

struct IrisDemoResult {
  std::vector<std::size_t> attributes;  ///< 1-based
  std::size_t n_representatives = 0;
  std::size_t n_heldout = 0;
  std::size_t errors = 0;
  std::vector<std::size_t> misclassified_rows;  ///< 0-based dataset rows
  std::optional<DecisionGrid> grid;             ///< only for two attributes

  double error_rate() const { return n_heldout ? static_cast<double>(errors) / static_cast<double>(n_heldout) : 0.0; }
};

/// Within-class rows 20..34 (1-based) of every class become singleton
/// subclasses; the remaining rows are classified. `attributes` are 1-based
/// feature columns, used as given unless options.lift is true. With two attributes a decision grid over the padded
/// data bounding box is produced as well.
IrisDemoResult iris_demo(const LabeledDataset& iris, std::span<const std::size_t> attributes,
                         const DemoOptions& options);

/// Header "x,y,label" then one row per cell.
void write_grid_csv(std::ostream& out, const DecisionGrid& grid);

}  // namespace qlear

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace styll {

/// One labeled embedding row to project: label is "source", "target" or
/// "transfer:<method>", id names the author or pair.
struct ProjectionInput {
  std::string label;
  std::string id;
  Eigen::VectorXd values;
};

struct ProjectionRow {
  std::string label;
  std::string id;
  double x = 0.0;
  double y = 0.0;
};

struct ProjectionTable {
  std::vector<ProjectionRow> rows;
  double explained_x = 0.0;  // variance fraction carried by each axis
  double explained_y = 0.0;
};

/// Projects embeddings onto their top-2 principal components. Rows are
/// centered, the covariance is eigen-decomposed with Eigen's self-adjoint
/// solver, and each component's sign is fixed so its largest-magnitude
/// loading is positive (first such index on ties), making coordinates
/// deterministic across runs. Requires >= 3 rows of rank >= 2.
ProjectionTable export_pca(const std::vector<ProjectionInput>& inputs);

void save_projection_csv(const ProjectionTable& table, const std::filesystem::path& path);

}  // namespace styll

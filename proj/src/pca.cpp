#include "styll/pca.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace styll {

ProjectionTable export_pca(const std::vector<ProjectionInput>& inputs) {
  if (inputs.size() < 3) {
    throw std::invalid_argument("export_pca: need at least 3 embeddings, got " +
                                std::to_string(inputs.size()));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(inputs.size());
  const Eigen::Index d = inputs.front().values.size();
  if (d < 2) throw std::invalid_argument("export_pca: embeddings must have dimension >= 2");
  Eigen::MatrixXd data(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (inputs[static_cast<std::size_t>(i)].values.size() != d) {
      throw std::invalid_argument("export_pca: mixed embedding dimensions");
    }
    data.row(i) = inputs[static_cast<std::size_t>(i)].values.transpose();
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("export_pca: eigen decomposition failed");
  }
  // Eigenvalues come out ascending; the top two components sit at the end.
  const Eigen::VectorXd evals = solver.eigenvalues();
  const double total = std::max(evals.sum(), 0.0);
  const double lambda1 = evals[d - 1];
  const double lambda2 = evals[d - 2];
  if (!(lambda2 > 0.0) || lambda2 <= lambda1 * 1e-12) {
    throw std::runtime_error("export_pca: input has rank < 2, no plane to project onto");
  }
  Eigen::VectorXd pc1 = solver.eigenvectors().col(d - 1);
  Eigen::VectorXd pc2 = solver.eigenvectors().col(d - 2);
  auto fix_sign = [](Eigen::VectorXd& v) {
    Eigen::Index argmax = 0;
    v.cwiseAbs().maxCoeff(&argmax);
    if (v[argmax] < 0.0) v = -v;
  };
  fix_sign(pc1);
  fix_sign(pc2);

  ProjectionTable table;
  table.explained_x = total > 0.0 ? lambda1 / total : 0.0;
  table.explained_y = total > 0.0 ? lambda2 / total : 0.0;
  const Eigen::VectorXd xs = centered * pc1;
  const Eigen::VectorXd ys = centered * pc2;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& in = inputs[static_cast<std::size_t>(i)];
    table.rows.push_back({in.label, in.id, xs[i], ys[i]});
  }
  return table;
}

void save_projection_csv(const ProjectionTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write projection file: " + path.string());
  out << "label,id,x,y\n";
  char buf[128];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g", row.x, row.y);
    out << row.label << "," << row.id << "," << buf << "\n";
  }
}

}  // namespace styll

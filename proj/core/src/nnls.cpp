#include "runtrim/nnls.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "runtrim/error.hpp"

namespace runtrim {

std::vector<double> nnls_solve(const Matrix& a, std::span<const double> b) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  const auto p = static_cast<Eigen::Index>(a.cols());
  if (n == 0 || p == 0) throw ParameterError("nnls: empty design matrix");
  if (b.size() != a.rows()) throw ParameterError("nnls: right-hand side length mismatch");
  for (const double v : a.data()) {
    if (!std::isfinite(v)) throw ParameterError("nnls: non-finite design matrix entry");
  }
  for (const double v : b) {
    if (!std::isfinite(v)) throw ParameterError("nnls: non-finite right-hand side entry");
  }

  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      design(a.data().data(), n, p);
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);

  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     design.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(n, p));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  std::vector<bool> passive(static_cast<std::size_t>(p), false);
  // Columns whose entry would not move x; skipped until x changes again.
  std::vector<bool> blocked(static_cast<std::size_t>(p), false);
  Eigen::VectorXd w = design.transpose() * (rhs - design * x);

  // Least squares restricted to the passive columns; zeros elsewhere.
  auto solve_passive = [&]() {
    std::vector<Eigen::Index> columns;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (passive[static_cast<std::size_t>(j)]) columns.push_back(j);
    }
    Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      sub.col(static_cast<Eigen::Index>(c)) = design.col(columns[c]);
    }
    const Eigen::VectorXd solution = sub.completeOrthogonalDecomposition().solve(rhs);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(p);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      z(columns[c]) = solution(static_cast<Eigen::Index>(c));
    }
    return z;
  };

  const std::size_t max_iterations = 30 * static_cast<std::size_t>(p) + 30;
  std::size_t iterations = 0;
  while (iterations++ < max_iterations) {
    Eigen::Index entering = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto u = static_cast<std::size_t>(j);
      if (!passive[u] && !blocked[u] && w(j) > best) {
        best = w(j);
        entering = j;
      }
    }
    if (entering < 0) break;
    passive[static_cast<std::size_t>(entering)] = true;

    bool first_pass = true;
    while (iterations++ < max_iterations) {
      const Eigen::VectorXd z = solve_passive();
      if (first_pass && z(entering) <= 0.0) {
        passive[static_cast<std::size_t>(entering)] = false;
        blocked[static_cast<std::size_t>(entering)] = true;
        break;
      }
      if (first_pass) std::fill(blocked.begin(), blocked.end(), false);
      first_pass = false;
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < p; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
        }
      }
      if (!std::isfinite(alpha)) {
        x = z;
        break;
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < p; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
    w = design.transpose() * (rhs - design * x);
  }
  return {x.data(), x.data() + p};
}

}  // namespace runtrim

// Copyright 2026 The PTM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ptm/consensus/reducer.h"

#include <Eigen/Dense>

#include "ptm/base/error.h"

namespace ptm {

std::vector<Vector> PcaReduce(const std::vector<Vector> &points, int components) {
  if (components < 1) Fail(ErrorCode::kInvalidArgument, "components must be >= 1");
  const size_t n = points.size();
  if (n < static_cast<size_t>(components)) return points;
  const size_t d = points[0].size();
  if (static_cast<size_t>(components) >= d) return points;

  Eigen::MatrixXd x(n, d);
  for (size_t i = 0; i < n; ++i) {
    if (points[i].size() != d) Fail(ErrorCode::kInvalidArgument, "ragged embedding matrix");
    for (size_t j = 0; j < d; ++j) x(i, j) = points[i][j];
  }
  Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) Fail(ErrorCode::kInternal, "PCA eigensolver failed");

  // Eigenvalues ascend; take the last `components` columns, largest first.
  Eigen::MatrixXd axes(d, components);
  for (int c = 0; c < components; ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(d) - 1 - c);
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    axes.col(c) = v;
  }
  Eigen::MatrixXd y = x * axes;
  std::vector<Vector> out(n, Vector(static_cast<size_t>(components)));
  for (size_t i = 0; i < n; ++i) {
    for (int c = 0; c < components; ++c) out[i][static_cast<size_t>(c)] = y(i, c);
  }
  return out;
}

}  // namespace ptm

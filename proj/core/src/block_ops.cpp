#include "ddrhc/block_ops.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>

namespace ddrhc {

Mat psd_repair(const Mat& M) {
  if (M.rows() != M.cols()) throw ValidationError("psd_repair expects a square matrix");
  if (M.size() == 0) return M;
  {
    // Fast path: a strictly definite matrix needs no repair.
    Eigen::LLT<Mat> llt(M);
    if (llt.info() == Eigen::Success) return M;
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(M);
  if (eig.info() != Eigen::Success) throw SynthesisError("psd_repair: eigendecomposition failed");
  Vec lambda = eig.eigenvalues();
  // Eigenvalues within the rounding floor of a PSD matrix are not treated as
  // negative; lifting them to the smallest positive eigenvalue would distort
  // an otherwise healthy matrix.
  const double floor = 1e-12 * std::max(lambda.cwiseAbs().maxCoeff(), 1.0e-30);
  double smallest_positive = 0.0;
  for (int i = 0; i < lambda.size(); ++i)
    if (lambda[i] > floor && (smallest_positive == 0.0 || lambda[i] < smallest_positive))
      smallest_positive = lambda[i];
  bool repaired = false;
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < -floor) {
      lambda[i] = smallest_positive;
      repaired = true;
    } else if (lambda[i] < 0.0) {
      lambda[i] = 0.0;
    }
  }
  if (!repaired) return M;
  return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
}

Mat sqrt_psd(const Mat& M) {
  if (M.rows() != M.cols()) throw ValidationError("sqrt_psd expects a square matrix");
  if (M.isDiagonal(0.0)) {
    Mat S = Mat::Zero(M.rows(), M.cols());
    for (int i = 0; i < M.rows(); ++i) S(i, i) = std::sqrt(std::max(0.0, M(i, i)));
    return S;
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(M);
  if (eig.info() != Eigen::Success) throw SynthesisError("sqrt_psd: eigendecomposition failed");
  Vec lambda = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
}

int empirical_loss(const Topology& t, int i, int p, int q, int k) {
  const PairSet needed = pair_product(t.out_neighbors(p, k), t.out_neighbors(q, k));
  const PairSet known = t.psi(i, k);
  int missing = 0;
  for (const auto& pr : needed)
    if (!pair_contains(known, pr)) ++missing;
  return missing;
}

std::optional<BlockCandidate> select_block(const std::vector<BlockCandidate>& candidates) {
  if (candidates.empty()) return std::nullopt;
  double min_loss = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) min_loss = std::min(min_loss, c.loss);
  Mat acc;
  int count = 0;
  for (const auto& c : candidates) {
    if (c.loss > min_loss) continue;
    if (count == 0)
      acc = c.value;
    else
      acc += c.value;
    ++count;
  }
  return BlockCandidate{acc / static_cast<double>(count), min_loss};
}

}  // namespace ddrhc

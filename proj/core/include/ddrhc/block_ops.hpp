#pragma once

#include "ddrhc/topology.hpp"
#include "ddrhc/types.hpp"

#include <optional>

namespace ddrhc {

/// Eigendecomposes a symmetric matrix and lifts negative eigenvalues to the
/// smallest strictly positive one (to zero when none is positive), keeping
/// the eigenvector basis. Matrices that are already PSD pass through
/// unchanged. Symmetrize before calling.
Mat psd_repair(const Mat& M);

/// Symmetric PSD square root via eigendecomposition (tiny negative
/// eigenvalues are clamped to zero).
Mat sqrt_psd(const Mat& M);

/// Number of cross-block contributions a unit must mask when propagating the
/// stored pair (p, q): |(D+_p x D+_q) \ psi_i| at step k.
int empirical_loss(const Topology& t, int i, int p, int q, int k);

struct BlockCandidate {
  Mat value;
  double loss = 0.0;
};

/// Average of the candidates attaining the minimum loss; nullopt on an empty
/// list (the caller masks the block).
std::optional<BlockCandidate> select_block(const std::vector<BlockCandidate>& candidates);

/// Alternative block-source selection rules; the default is
/// kMinLossAverage.
enum class BlockSelectionRule {
  kMinLossAverage,  // average of minimum-loss candidates
  kPreferLocal,     // own copy when present, otherwise min-loss average
};

}  // namespace ddrhc

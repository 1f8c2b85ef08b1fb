#pragma once

#include <array>
#include <vector>

#include "personrank/linalg.hpp"
#include "personrank/types.hpp"

namespace personrank {

enum class MatrixKind { pairwise, hyper, hybrid };

inline constexpr int kRegionCount = 4; // Q

/// Labeled nonnegative interaction matrix. Entry (r, c) is the interaction
/// from node r to node c. pairwise: N x N, zero diagonal. hyper: Q x N,
/// region k -> focal person i. hybrid: (N+Q) x (N+Q) block layout
/// [[pairwise, 0], [hyper, 0]].
struct InteractionMatrix {
    MatrixKind kind = MatrixKind::pairwise;
    ChannelId channel = ChannelId::spatial;
    Matrix data;

    int rows() const { return data.rows(); }
    int cols() const { return data.cols(); }
};

/// Quadrant membership around one focal person. Others are assigned by the
/// sign of (center_j - center_focal); exact ties on an axis go positive.
/// Region index = (dy >= 0 ? 2 : 0) + (dx >= 0 ? 1 : 0).
struct FocalRegions {
    std::array<std::vector<int>, kRegionCount> members;
};

/// G^p for one channel: entry (i, j) = max(message(i -> j), 0), zero diagonal.
InteractionMatrix build_pairwise(const std::vector<FeatureBundle>& bundles, ChannelId channel,
                                 const WeightSet& weights);

FocalRegions partition_regions(const Scene& scene, int focal_index);

/// G^r for one channel: entry (k, i) = max(delta^T (phi_i - gamma), 0) where
/// gamma is the elementwise max over members of region k around focal i.
/// Empty regions contribute 0; a missing delta for the channel gives a zero
/// matrix.
InteractionMatrix build_hyper(const Scene& scene, const std::vector<FeatureBundle>& bundles,
                              ChannelId channel, const WeightSet& weights);

/// The (N+Q) x (N+Q) hybrid block matrix; blocks are copied bit-identically.
InteractionMatrix build_hybrid(const InteractionMatrix& gp, const InteractionMatrix& gr);

/// All-zero hyper matrix (used by the fusion stage).
InteractionMatrix zero_hyper(int n, ChannelId channel);

} // namespace personrank

#include "personrank/graph.hpp"

#include <algorithm>

#include "personrank/errors.hpp"
#include "personrank/messages.hpp"

namespace personrank {

namespace {

void require_channel(const std::vector<FeatureBundle>& bundles, ChannelId channel) {
    for (const auto& b : bundles)
        if (!b.has(channel))
            throw Error(ErrorCode::ChannelInactive,
                        std::string("channel ") + channel_name(channel) +
                            " is not active in every bundle");
}

} // namespace

InteractionMatrix build_pairwise(const std::vector<FeatureBundle>& bundles, ChannelId channel,
                                 const WeightSet& weights) {
    require_channel(bundles, channel);
    const int n = static_cast<int>(bundles.size());
    InteractionMatrix out{MatrixKind::pairwise, channel, Matrix(n, n)};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double value =
                channel_message(channel, bundles[i].features(channel), bundles[j].features(channel),
                                weights);
            out.data(i, j) = std::max(value, 0.0);
        }
    }
    return out;
}

FocalRegions partition_regions(const Scene& scene, int focal_index) {
    const int n = scene.person_count();
    if (focal_index < 0 || focal_index >= n)
        throw Error(ErrorCode::IndexOutOfRange, "focal index out of range");
    FocalRegions regions;
    const double fx = scene.persons[focal_index].box.center_x();
    const double fy = scene.persons[focal_index].box.center_y();
    for (int j = 0; j < n; ++j) {
        if (j == focal_index) continue;
        const double dx = scene.persons[j].box.center_x() - fx;
        const double dy = scene.persons[j].box.center_y() - fy;
        const int k = (dy >= 0.0 ? 2 : 0) + (dx >= 0.0 ? 1 : 0);
        regions.members[k].push_back(j);
    }
    return regions;
}

InteractionMatrix build_hyper(const Scene& scene, const std::vector<FeatureBundle>& bundles,
                              ChannelId channel, const WeightSet& weights) {
    require_channel(bundles, channel);
    const int n = static_cast<int>(bundles.size());
    InteractionMatrix out{MatrixKind::hyper, channel, Matrix(kRegionCount, n)};

    auto it = weights.delta.find(channel);
    if (it == weights.delta.end()) return out; // no consensus weights: zero prior
    const std::vector<double>& delta = it->second;

    for (int i = 0; i < n; ++i) {
        const auto& phi = bundles[i].features(channel);
        if (delta.size() != phi.size())
            throw Error(ErrorCode::DimensionMismatch,
                        std::string("delta dim for ") + channel_name(channel) +
                            " does not match feature dim");
        const FocalRegions regions = partition_regions(scene, i);
        for (int k = 0; k < kRegionCount; ++k) {
            const auto& members = regions.members[k];
            if (members.empty()) continue;
            // gamma = elementwise max over member features
            std::vector<double> gamma = bundles[members[0]].features(channel);
            for (std::size_t m = 1; m < members.size(); ++m) {
                const auto& other = bundles[members[m]].features(channel);
                for (std::size_t c = 0; c < gamma.size(); ++c)
                    gamma[c] = std::max(gamma[c], other[c]);
            }
            double value = 0.0;
            for (std::size_t c = 0; c < gamma.size(); ++c) value += delta[c] * (phi[c] - gamma[c]);
            out.data(k, i) = std::max(value, 0.0);
        }
    }
    return out;
}

InteractionMatrix build_hybrid(const InteractionMatrix& gp, const InteractionMatrix& gr) {
    if (gp.kind != MatrixKind::pairwise || gr.kind != MatrixKind::hyper)
        throw Error(ErrorCode::ShapeMismatch, "build_hybrid needs a pairwise and a hyper matrix");
    if (gp.channel != gr.channel)
        throw Error(ErrorCode::ChannelMismatch, "pairwise and hyper channels differ");
    const int n = gp.rows();
    if (gp.cols() != n || gr.rows() != kRegionCount || gr.cols() != n)
        throw Error(ErrorCode::ShapeMismatch, "inconsistent pairwise/hyper shapes");

    InteractionMatrix out{MatrixKind::hybrid, gp.channel, Matrix(n + kRegionCount, n + kRegionCount)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.data(i, j) = gp.data(i, j);
    for (int k = 0; k < kRegionCount; ++k)
        for (int i = 0; i < n; ++i) out.data(n + k, i) = gr.data(k, i);
    return out;
}

InteractionMatrix zero_hyper(int n, ChannelId channel) {
    return InteractionMatrix{MatrixKind::hyper, channel, Matrix(kRegionCount, n)};
}

} // namespace personrank

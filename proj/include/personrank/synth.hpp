#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "personrank/graph.hpp"
#include "personrank/types.hpp"

namespace personrank {

/// Controls for the synthetic scene generator. One person (the hub) is
/// planted as ground truth; hub_strength in [0, 1] scales how strongly
/// geometry, attention and embeddings single it out.
struct SynthSpec {
    int n_persons = 8;
    double hub_strength = 0.8;
    std::set<ChannelId> channels = {ChannelId::spatial, ChannelId::action, ChannelId::appearance,
                                    ChannelId::attention};
    std::uint64_t seed = 0;
    int embedding_dim = 16;
};

/// Deterministic per seed: persons placed uniformly in a 1000x1000 frame, the
/// hub box scaled by (1 + hub_strength), other yaws aimed at the hub with
/// (1 - hub_strength)-wide noise, hub embeddings offset from the crowd
/// cluster by hub_strength.
Scene generate_scene(const SynthSpec& spec);

/// Convenience batch: seeds spec.seed, spec.seed+1, ...
std::vector<Scene> generate_scenes(const SynthSpec& spec, int count);

/// Independent fixed-point solver used as a test oracle. Solves the damped
/// recursion in its self-consistent eigen form as a dense linear system
///   (Z I - alpha Ghat^T) lambda = prior,  Z = sum(prior) + alpha,
/// by Gaussian elimination with partial pivoting, then normalizes to sum 1.
/// Z is forced by summing the recursion over persons, so the system pins the
/// same vector the renormalized iteration converges to; with a zero hyper
/// block Z = 1 and this is literally (I - alpha Ghat^T) lambda = prior.
/// For the singular case (alpha = 1 with zero hyper mass) it falls back to a
/// long plain power iteration. Shares no code with the rank engine.
std::vector<double> oracle_fixed_point(const InteractionMatrix& gp, const InteractionMatrix& gr,
                                       double alpha);

/// Independent product-fusion ranking: R_i = prod_k lambda[k][i]^q[k], ranked
/// descending with ascending-index ties.
std::vector<int> oracle_rank_by_R(const std::vector<std::vector<double>>& per_channel_lambda,
                                  const std::vector<double>& q);

} // namespace personrank

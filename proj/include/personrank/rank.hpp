#pragma once

#include <string>
#include <vector>

#include "personrank/features.hpp"
#include "personrank/graph.hpp"
#include "personrank/linalg.hpp"
#include "personrank/types.hpp"

namespace personrank {

struct SolveConfig {
    double alpha = 0.85;      // damping, 0 < alpha <= 1
    double tol = 1e-10;       // L1 change per iteration
    int max_iter = 1000;
    double score_floor = 1e-12; // keeps every score strictly positive
};

/// Importance scores for one scene and channel. Scores are positive and sum
/// to 1; ranking sorts by descending score, ties broken by ascending index.
struct ScoreVector {
    std::string scene_id;
    ChannelId channel = ChannelId::spatial;
    std::vector<double> scores;
    std::vector<int> ranking;
    int iterations = 0;
};

/// Descending-score permutation with ascending-index tie break.
std::vector<int> ranking_from_scores(const std::vector<double>& scores);

/// Solves the damped fixed point on one hybrid graph by power iteration:
///   lambda <- prior + alpha * Ghat^T lambda,  renormalized to sum 1,
/// with prior_i = (1-alpha)/N + alpha * sum_k G^r(k,i) and Ghat the
/// row-normalized G^p (dangling rows become uniform). The renormalized
/// iteration is the power method on the matrix of build_gbar, so the result
/// is its dominant eigenvector. Scores are floored and renormalized before
/// return. Throws NoConvergence when max_iter is hit.
ScoreVector solve_channel(const InteractionMatrix& gp, const InteractionMatrix& gr,
                          const SolveConfig& cfg, const std::string& scene_id = "");

/// The N x N matrix Gbar = alpha*Ghat^T + alpha*(G^r^T 1)1^T + (1-alpha)/N 11^T
/// whose dominant eigenvector (sum-normalized) equals solve_channel's output.
Matrix build_gbar(const InteractionMatrix& gp, const InteractionMatrix& gr, const SolveConfig& cfg);

/// Fuses per-channel scores: builds a pairwise graph with entries
/// max(q^T (log lambda_j - log lambda_i), 0), zero hyper block, and solves it.
ScoreVector fuse(const std::vector<ScoreVector>& per_channel, const std::vector<double>& q,
                 const SolveConfig& cfg);

/// Product fusion R_i = prod_z lambda_z_i ^ q_z, for ranking directly by R.
std::vector<double> scores_by_R(const std::vector<ScoreVector>& per_channel,
                                const std::vector<double>& q);

enum class SelectBy { fused_solve, R };

struct RankResult {
    ScoreVector fused;                      // second eigen-analysis on the fused graph
    std::vector<ScoreVector> per_channel;   // one per active channel, fusion order
    std::vector<ChannelId> channels;        // aligned with per_channel
    std::vector<double> r_scores;           // product fusion values
    std::vector<int> r_ranking;
    int predicted_index = 0;                // per select_by

    const std::vector<int>& ranking(SelectBy select_by) const {
        return select_by == SelectBy::R ? r_ranking : fused.ranking;
    }
};

/// End-to-end scene ranking: per-channel graphs, per-channel solves, fusion.
/// Active channels are those present in every bundle and enabled in the
/// weight set; throws NoActiveChannels otherwise.
RankResult rank_scene(const Scene& scene, const std::vector<FeatureBundle>& bundles,
                      const WeightSet& weights, const SolveConfig& cfg,
                      SelectBy select_by = SelectBy::fused_solve);

} // namespace personrank

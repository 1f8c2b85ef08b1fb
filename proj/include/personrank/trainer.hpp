#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "personrank/features.hpp"
#include "personrank/rank.hpp"
#include "personrank/types.hpp"

namespace personrank {

struct TrainConfig {
    double reg_lambda = 1e-3; // margin regularizer, > 0
    int epochs = 30;
    std::uint64_t seed = 42;  // sample shuffling
    std::vector<double> val_grid_c = {0.5, 1.0, 2.0, 4.0};
    std::vector<double> val_grid_reg = {1e-4, 1e-3, 1e-2};
};

struct PairSample {
    std::vector<double> x;
    int label = 1; // +1 or -1
};

/// A scene with its feature bundles, the trainer's working unit.
struct TrainScene {
    Scene scene;
    std::vector<FeatureBundle> bundles;
};

std::vector<TrainScene> prepare_scenes(const std::vector<Scene>& scenes, const FeatureConfig& cfg);

/// Message-weight samples for one channel (spatial/action/appearance only):
/// positives T(phi_star - phi_i) for each non-important i, negatives
/// T(phi_j - phi_i) for ordered non-important pairs, where T is elementwise
/// exp (clamped) for spatial/action and |.| for appearance. With that
/// transform w^T x is exactly the message value.
std::vector<PairSample> make_channel_samples(const std::vector<TrainScene>& scenes,
                                             ChannelId channel);

/// Consensus-weight samples: x = phi_i - gamma(region k around i) for every
/// focal person and non-empty region; label +1 iff i is the important person.
std::vector<PairSample> make_delta_samples(const std::vector<TrainScene>& scenes, ChannelId channel);

/// Hinge-loss linear classifier without bias, Pegasos-style stochastic
/// subgradient with step 1/(reg_lambda * t), positives oversampled to balance
/// labels per epoch, averaged iterate returned. Deterministic given cfg.seed.
/// Single-label or empty input returns a zero vector with a diagnostic on
/// stderr instead of throwing.
std::vector<double> train_linear(const std::vector<PairSample>& samples, const TrainConfig& cfg);

/// Fusion-weight samples per Eq-8-style constraints on log per-channel scores.
std::vector<PairSample> make_fusion_samples(const std::vector<TrainScene>& scenes,
                                            const std::vector<std::vector<ScoreVector>>& per_scene_scores);

/// Learns q from per-channel scores of the training scenes.
std::vector<double> train_fusion_q(const std::vector<TrainScene>& scenes,
                                   const std::vector<std::vector<ScoreVector>>& per_scene_scores,
                                   const TrainConfig& cfg);

/// Trains every weight at a fixed grid point (reg_lambda from cfg, attention
/// scale c_att). Channels are those active in every training scene.
WeightSet train_weights(const std::vector<TrainScene>& scenes, double c_att, const TrainConfig& cfg,
                        const SolveConfig& solve_cfg);

struct TuneReport {
    double best_c_att = 1.0;
    double best_reg = 1e-3;
    double best_val_top1 = 0.0;
    std::vector<ChannelId> channels;
    std::vector<double> per_channel_val_top1; // ranking by each single channel
};

/// Grid search over val_grid_c x val_grid_reg, selecting the combination with
/// the highest top-1 accuracy on the validation scenes (earliest grid point on
/// ties). Throws EmptyValidation when val_scenes is empty.
WeightSet tune_validation(const std::vector<TrainScene>& train_scenes,
                          const std::vector<TrainScene>& val_scenes, const TrainConfig& cfg,
                          const SolveConfig& solve_cfg, TuneReport* report = nullptr);

/// Fraction of scenes whose predicted top person is the annotated one.
double top1_accuracy(const std::vector<TrainScene>& scenes, const WeightSet& weights,
                     const SolveConfig& solve_cfg, SelectBy select_by = SelectBy::fused_solve);

} // namespace personrank

#include "personrank/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "personrank/errors.hpp"
#include "personrank/graph.hpp"
#include "personrank/messages.hpp"
#include "personrank/rng.hpp"

namespace personrank {

namespace {

std::vector<double> transform_diff(ChannelId channel, const std::vector<double>& a,
                                   const std::vector<double>& b) {
    // x = T(a - b); exp keeps w^T x equal to the exp-of-difference message.
    std::vector<double> x(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        if (channel == ChannelId::appearance)
            x[k] = std::abs(d);
        else
            x[k] = std::exp(std::clamp(d, -kExpClamp, kExpClamp));
    }
    return x;
}

int require_gt(const TrainScene& ts) {
    const auto gt = ts.scene.gt_index();
    if (!gt)
        throw Error(ErrorCode::MissingGroundTruth,
                    "training scene '" + ts.scene.id + "' has no important-person flag");
    return *gt;
}

} // namespace

std::vector<TrainScene> prepare_scenes(const std::vector<Scene>& scenes, const FeatureConfig& cfg) {
    std::vector<TrainScene> out;
    out.reserve(scenes.size());
    for (const auto& scene : scenes) out.push_back({scene, build_bundles(scene, cfg)});
    return out;
}

std::vector<PairSample> make_channel_samples(const std::vector<TrainScene>& scenes,
                                             ChannelId channel) {
    if (channel != ChannelId::spatial && channel != ChannelId::action &&
        channel != ChannelId::appearance)
        throw Error(ErrorCode::ChannelInactive,
                    "message weights are trained for spatial/action/appearance only");
    std::vector<PairSample> samples;
    for (const auto& ts : scenes) {
        const int star = require_gt(ts);
        if (!ts.bundles[0].has(channel)) continue;
        const int n = static_cast<int>(ts.bundles.size());
        for (int i = 0; i < n; ++i) {
            if (i == star) continue;
            samples.push_back(
                {transform_diff(channel, ts.bundles[star].features(channel),
                                ts.bundles[i].features(channel)),
                 +1});
            for (int j = 0; j < n; ++j) {
                if (j == star || j == i) continue;
                samples.push_back(
                    {transform_diff(channel, ts.bundles[j].features(channel),
                                    ts.bundles[i].features(channel)),
                     -1});
            }
        }
    }
    return samples;
}

std::vector<PairSample> make_delta_samples(const std::vector<TrainScene>& scenes, ChannelId channel) {
    std::vector<PairSample> samples;
    for (const auto& ts : scenes) {
        const int star = require_gt(ts);
        if (!ts.bundles[0].has(channel)) continue;
        const int n = static_cast<int>(ts.bundles.size());
        for (int i = 0; i < n; ++i) {
            const FocalRegions regions = partition_regions(ts.scene, i);
            for (const auto& members : regions.members) {
                if (members.empty()) continue;
                std::vector<double> gamma = ts.bundles[members[0]].features(channel);
                for (std::size_t m = 1; m < members.size(); ++m) {
                    const auto& other = ts.bundles[members[m]].features(channel);
                    for (std::size_t c = 0; c < gamma.size(); ++c)
                        gamma[c] = std::max(gamma[c], other[c]);
                }
                PairSample sample;
                sample.label = i == star ? +1 : -1;
                sample.x = ts.bundles[i].features(channel);
                for (std::size_t c = 0; c < gamma.size(); ++c) sample.x[c] -= gamma[c];
                samples.push_back(std::move(sample));
            }
        }
    }
    return samples;
}

std::vector<double> train_linear(const std::vector<PairSample>& samples, const TrainConfig& cfg) {
    std::size_t dim = samples.empty() ? 0 : samples[0].x.size();
    std::vector<int> pos, neg;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].x.size() != dim)
            throw Error(ErrorCode::DimensionMismatch, "inconsistent sample dimensions");
        (samples[i].label > 0 ? pos : neg).push_back(static_cast<int>(i));
    }
    if (pos.empty() || neg.empty()) {
        std::cerr << "train_linear: degenerate data (" << pos.size() << " positive, " << neg.size()
                  << " negative samples), returning zero weights\n";
        return std::vector<double>(dim, 0.0);
    }

    // Oversample positives so each epoch sees balanced labels.
    const int repeat = std::max<int>(1, static_cast<int>((neg.size() + pos.size() - 1) / pos.size()));
    std::vector<int> epoch_indices = neg;
    for (int r = 0; r < repeat; ++r) epoch_indices.insert(epoch_indices.end(), pos.begin(), pos.end());

    Rng rng(cfg.seed);
    std::vector<double> w(dim, 0.0), w_avg(dim, 0.0);
    long t = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(epoch_indices);
        for (int idx : epoch_indices) {
            ++t;
            const double eta = 1.0 / (cfg.reg_lambda * t);
            const auto& s = samples[idx];
            double margin = 0.0;
            for (std::size_t k = 0; k < dim; ++k) margin += w[k] * s.x[k];
            margin *= s.label;
            const double shrink = 1.0 - eta * cfg.reg_lambda; // = 1 - 1/t
            for (std::size_t k = 0; k < dim; ++k) {
                w[k] *= shrink;
                if (margin < 1.0) w[k] += eta * s.label * s.x[k];
                w_avg[k] += (w[k] - w_avg[k]) / t;
            }
        }
    }
    return w_avg;
}

std::vector<PairSample> make_fusion_samples(
    const std::vector<TrainScene>& scenes,
    const std::vector<std::vector<ScoreVector>>& per_scene_scores) {
    if (scenes.size() != per_scene_scores.size())
        throw Error(ErrorCode::ChannelMisalignment, "scores not aligned with scenes");
    std::vector<PairSample> samples;
    for (std::size_t s = 0; s < scenes.size(); ++s) {
        const int star = require_gt(scenes[s]);
        const auto& channels = per_scene_scores[s];
        if (channels.empty()) continue;
        const int n = static_cast<int>(channels[0].scores.size());
        std::vector<std::vector<double>> logs(n, std::vector<double>(channels.size()));
        for (std::size_t k = 0; k < channels.size(); ++k)
            for (int i = 0; i < n; ++i) logs[i][k] = std::log(channels[k].scores[i]);

        for (int i = 0; i < n; ++i) {
            if (i == star) continue;
            PairSample positive;
            positive.label = +1;
            positive.x.resize(channels.size());
            for (std::size_t k = 0; k < channels.size(); ++k)
                positive.x[k] = logs[star][k] - logs[i][k];
            samples.push_back(std::move(positive));
            for (int j = 0; j < n; ++j) {
                if (j == star || j == i) continue;
                PairSample negative;
                negative.label = -1;
                negative.x.resize(channels.size());
                for (std::size_t k = 0; k < channels.size(); ++k)
                    negative.x[k] = logs[j][k] - logs[i][k];
                samples.push_back(std::move(negative));
            }
        }
    }
    return samples;
}

std::vector<double> train_fusion_q(const std::vector<TrainScene>& scenes,
                                   const std::vector<std::vector<ScoreVector>>& per_scene_scores,
                                   const TrainConfig& cfg) {
    return train_linear(make_fusion_samples(scenes, per_scene_scores), cfg);
}

namespace {

std::vector<ChannelId> shared_channels(const std::vector<TrainScene>& scenes) {
    std::vector<ChannelId> out;
    for (ChannelId channel : kChannelOrder) {
        bool everywhere = !scenes.empty();
        for (const auto& ts : scenes)
            if (!ts.bundles[0].has(channel)) everywhere = false;
        if (everywhere) out.push_back(channel);
    }
    return out;
}

} // namespace

WeightSet train_weights(const std::vector<TrainScene>& scenes, double c_att, const TrainConfig& cfg,
                        const SolveConfig& solve_cfg) {
    WeightSet weights;
    weights.alpha = solve_cfg.alpha;
    const std::vector<ChannelId> channels = shared_channels(scenes);
    if (channels.empty())
        throw Error(ErrorCode::NoActiveChannels, "no channel is active in every training scene");

    for (ChannelId channel : channels) {
        if (channel == ChannelId::attention) {
            weights.c_att = c_att;
        } else {
            const auto w = train_linear(make_channel_samples(scenes, channel), cfg);
            if (channel == ChannelId::spatial) weights.w_s = w;
            if (channel == ChannelId::action) weights.w_ac = w;
            if (channel == ChannelId::appearance) weights.w_ap = w;
        }
        weights.delta[channel] = train_linear(make_delta_samples(scenes, channel), cfg);
    }

    // Per-channel scores on the training scenes feed the fusion trainer.
    std::vector<std::vector<ScoreVector>> per_scene_scores;
    per_scene_scores.reserve(scenes.size());
    for (const auto& ts : scenes) {
        std::vector<ScoreVector> scores;
        for (ChannelId channel : channels) {
            const InteractionMatrix gp = build_pairwise(ts.bundles, channel, weights);
            const InteractionMatrix gr = build_hyper(ts.scene, ts.bundles, channel, weights);
            scores.push_back(solve_channel(gp, gr, solve_cfg, ts.scene.id));
        }
        per_scene_scores.push_back(std::move(scores));
    }
    const std::vector<double> q = train_fusion_q(scenes, per_scene_scores, cfg);
    for (std::size_t k = 0; k < channels.size(); ++k) weights.q[channels[k]] = q[k];
    return weights;
}

double top1_accuracy(const std::vector<TrainScene>& scenes, const WeightSet& weights,
                     const SolveConfig& solve_cfg, SelectBy select_by) {
    if (scenes.empty()) return 0.0;
    int hits = 0;
    for (const auto& ts : scenes) {
        const int star = require_gt(ts);
        const RankResult result = rank_scene(ts.scene, ts.bundles, weights, solve_cfg, select_by);
        if (result.predicted_index == star) ++hits;
    }
    return static_cast<double>(hits) / scenes.size();
}

WeightSet tune_validation(const std::vector<TrainScene>& train_scenes,
                          const std::vector<TrainScene>& val_scenes, const TrainConfig& cfg,
                          const SolveConfig& solve_cfg, TuneReport* report) {
    if (val_scenes.empty()) throw Error(ErrorCode::EmptyValidation, "validation set is empty");
    if (cfg.val_grid_c.empty() || cfg.val_grid_reg.empty())
        throw Error(ErrorCode::EmptyValidation, "validation grids must be non-empty");

    const bool attention_in_play =
        std::find(shared_channels(train_scenes).begin(), shared_channels(train_scenes).end(),
                  ChannelId::attention) != shared_channels(train_scenes).end();

    WeightSet best;
    double best_acc = -1.0;
    double best_c = cfg.val_grid_c.front(), best_reg = cfg.val_grid_reg.front();
    for (double c : cfg.val_grid_c) {
        for (double reg : cfg.val_grid_reg) {
            TrainConfig point = cfg;
            point.reg_lambda = reg;
            const WeightSet candidate = train_weights(train_scenes, c, point, solve_cfg);
            const double acc = top1_accuracy(val_scenes, candidate, solve_cfg);
            if (acc > best_acc) {
                best_acc = acc;
                best = candidate;
                best_c = c;
                best_reg = reg;
            }
        }
        if (!attention_in_play) break; // c only matters when attention is trained
    }

    if (report) {
        report->best_c_att = best_c;
        report->best_reg = best_reg;
        report->best_val_top1 = best_acc;
        report->channels = shared_channels(train_scenes);
        report->per_channel_val_top1.clear();
        for (ChannelId channel : report->channels) {
            int hits = 0;
            for (const auto& ts : val_scenes) {
                const InteractionMatrix gp = build_pairwise(ts.bundles, channel, best);
                const InteractionMatrix gr = build_hyper(ts.scene, ts.bundles, channel, best);
                const ScoreVector sv = solve_channel(gp, gr, solve_cfg, ts.scene.id);
                if (sv.ranking.front() == require_gt(ts)) ++hits;
            }
            report->per_channel_val_top1.push_back(static_cast<double>(hits) / val_scenes.size());
        }
    }
    return best;
}

} // namespace personrank

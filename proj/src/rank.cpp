#include "personrank/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "personrank/errors.hpp"
#include "personrank/messages.hpp"

namespace personrank {

namespace {

void check_solve_inputs(const InteractionMatrix& gp, const InteractionMatrix& gr,
                        const SolveConfig& cfg) {
    if (gp.kind != MatrixKind::pairwise || gr.kind != MatrixKind::hyper)
        throw Error(ErrorCode::ShapeMismatch, "solve_channel needs pairwise + hyper matrices");
    if (gp.rows() != gp.cols() || gr.cols() != gp.rows() || gr.rows() != kRegionCount)
        throw Error(ErrorCode::ShapeMismatch, "pairwise/hyper shapes disagree");
    if (gp.channel != gr.channel)
        throw Error(ErrorCode::ChannelMismatch, "pairwise and hyper channels differ");
    if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0)
        throw Error(ErrorCode::ShapeMismatch, "alpha must satisfy 0 < alpha <= 1");
}

// Row-normalized transition matrix; dangling rows become uniform 1/N.
Matrix row_normalize(const Matrix& gp) {
    const int n = gp.rows();
    Matrix ghat(n, n);
    for (int j = 0; j < n; ++j) {
        const double c = gp.row_sum(j);
        if (c > 0.0) {
            for (int k = 0; k < n; ++k) ghat(j, k) = gp(j, k) / c;
        } else {
            for (int k = 0; k < n; ++k) ghat(j, k) = 1.0 / n;
        }
    }
    return ghat;
}

std::vector<double> hyper_prior(const InteractionMatrix& gr, double alpha, int n) {
    std::vector<double> prior(n, (1.0 - alpha) / n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < kRegionCount; ++k) prior[i] += alpha * gr.data(k, i);
    return prior;
}

} // namespace

std::vector<int> ranking_from_scores(const std::vector<double>& scores) {
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });
    return order;
}

ScoreVector solve_channel(const InteractionMatrix& gp, const InteractionMatrix& gr,
                          const SolveConfig& cfg, const std::string& scene_id) {
    check_solve_inputs(gp, gr, cfg);
    const int n = gp.rows();
    const Matrix ghat = row_normalize(gp.data);
    const std::vector<double> prior = hyper_prior(gr, cfg.alpha, n);

    std::vector<double> lambda(n, 1.0 / n);
    std::vector<double> next(n);
    int iterations = 0;
    double change = 0.0;
    for (; iterations < cfg.max_iter; ++iterations) {
        for (int i = 0; i < n; ++i) {
            double acc = prior[i];
            for (int j = 0; j < n; ++j) acc += cfg.alpha * ghat(j, i) * lambda[j];
            next[i] = acc;
        }
        const double z = std::accumulate(next.begin(), next.end(), 0.0);
        change = 0.0;
        for (int i = 0; i < n; ++i) {
            next[i] /= z;
            change += std::abs(next[i] - lambda[i]);
        }
        lambda.swap(next);
        if (change < cfg.tol) break;
    }
    if (change >= cfg.tol)
        throw Error(ErrorCode::NoConvergence,
                    "no convergence after " + std::to_string(cfg.max_iter) +
                        " iterations, residual " + std::to_string(change));

    // Floor then renormalize so downstream logs stay finite.
    double total = 0.0;
    for (double& v : lambda) {
        v = std::max(v, cfg.score_floor);
        total += v;
    }
    for (double& v : lambda) v /= total;

    ScoreVector out;
    out.scene_id = scene_id;
    out.channel = gp.channel;
    out.scores = std::move(lambda);
    out.ranking = ranking_from_scores(out.scores);
    out.iterations = iterations + 1;
    return out;
}

Matrix build_gbar(const InteractionMatrix& gp, const InteractionMatrix& gr, const SolveConfig& cfg) {
    check_solve_inputs(gp, gr, cfg);
    const int n = gp.rows();
    const Matrix ghat = row_normalize(gp.data);

    std::vector<double> hyper_in(n, 0.0); // (G^r)^T 1
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < kRegionCount; ++k) hyper_in[i] += gr.data(k, i);

    Matrix gbar(n, n);
    const double teleport = (1.0 - cfg.alpha) / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            gbar(i, j) = cfg.alpha * ghat(j, i) + cfg.alpha * hyper_in[i] + teleport;
    return gbar;
}

ScoreVector fuse(const std::vector<ScoreVector>& per_channel, const std::vector<double>& q,
                 const SolveConfig& cfg) {
    if (per_channel.empty()) throw Error(ErrorCode::NoActiveChannels, "no channels to fuse");
    if (q.size() != per_channel.size())
        throw Error(ErrorCode::ChannelMisalignment, "q length does not match channel count");
    const std::size_t n = per_channel[0].scores.size();
    for (const auto& sv : per_channel) {
        if (sv.scores.size() != n || sv.scene_id != per_channel[0].scene_id)
            throw Error(ErrorCode::ChannelMisalignment, "per-channel scores are misaligned");
    }

    // log phi^lambda per person (K-dim); scores are floored, logs are finite.
    std::vector<std::vector<double>> logs(n, std::vector<double>(per_channel.size()));
    for (std::size_t k = 0; k < per_channel.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) logs[i][k] = std::log(per_channel[k].scores[i]);

    InteractionMatrix graph{MatrixKind::pairwise, ChannelId::fused,
                            Matrix(static_cast<int>(n), static_cast<int>(n))};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            graph.data(static_cast<int>(i), static_cast<int>(j)) =
                std::max(msg_fused(logs[i], logs[j], q), 0.0);
        }

    return solve_channel(graph, zero_hyper(static_cast<int>(n), ChannelId::fused), cfg,
                         per_channel[0].scene_id);
}

std::vector<double> scores_by_R(const std::vector<ScoreVector>& per_channel,
                                const std::vector<double>& q) {
    if (per_channel.empty()) throw Error(ErrorCode::NoActiveChannels, "no channels");
    if (q.size() != per_channel.size())
        throw Error(ErrorCode::ChannelMisalignment, "q length does not match channel count");
    const std::size_t n = per_channel[0].scores.size();
    std::vector<double> r(n, 1.0);
    for (std::size_t k = 0; k < per_channel.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) r[i] *= std::pow(per_channel[k].scores[i], q[k]);
    return r;
}

RankResult rank_scene(const Scene& scene, const std::vector<FeatureBundle>& bundles,
                      const WeightSet& weights, const SolveConfig& cfg, SelectBy select_by) {
    RankResult result;
    for (ChannelId channel : active_channels(bundles))
        if (weights.channel_active(channel)) result.channels.push_back(channel);
    if (result.channels.empty())
        throw Error(ErrorCode::NoActiveChannels,
                    "scene '" + scene.id + "' shares no active channel with the weight set");

    for (ChannelId channel : result.channels) {
        const InteractionMatrix gp = build_pairwise(bundles, channel, weights);
        const InteractionMatrix gr = build_hyper(scene, bundles, channel, weights);
        result.per_channel.push_back(solve_channel(gp, gr, cfg, scene.id));
    }

    const std::vector<double> q = weights.q_vector(result.channels);
    result.fused = fuse(result.per_channel, q, cfg);
    result.r_scores = scores_by_R(result.per_channel, q);
    result.r_ranking = ranking_from_scores(result.r_scores);
    result.predicted_index = result.ranking(select_by).front();
    return result;
}

} // namespace personrank

#include <cmath>
#include <numeric>

#include <doctest.h>

#include "personrank/errors.hpp"
#include "personrank/messages.hpp"
#include "personrank/rank.hpp"
#include "personrank/rng.hpp"
#include "personrank/synth.hpp"

using namespace personrank;

namespace {

InteractionMatrix random_pairwise(Rng& rng, int n, double zero_row_prob = 0.2) {
    InteractionMatrix gp{MatrixKind::pairwise, ChannelId::spatial, Matrix(n, n)};
    for (int i = 0; i < n; ++i) {
        const bool dangling = rng.unit() < zero_row_prob;
        for (int j = 0; j < n; ++j)
            if (i != j && !dangling) gp.data(i, j) = rng.uniform(0, 1);
    }
    return gp;
}

InteractionMatrix random_hyper(Rng& rng, int n, double scale = 1.0) {
    InteractionMatrix gr{MatrixKind::hyper, ChannelId::spatial, Matrix(kRegionCount, n)};
    for (int k = 0; k < kRegionCount; ++k)
        for (int i = 0; i < n; ++i) gr.data(k, i) = scale * rng.uniform(0, 0.5);
    return gr;
}

// Power iteration directly on an explicit matrix, L1-normalized.
std::vector<double> dominant_eigenvector(const Matrix& m, int iters = 20000) {
    const int n = m.rows();
    std::vector<double> x(n, 1.0 / n), next(n);
    for (int it = 0; it < iters; ++it) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += m(i, j) * x[j];
            next[i] = acc;
        }
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        double diff = 0.0;
        for (int i = 0; i < n; ++i) {
            next[i] /= total;
            diff += std::abs(next[i] - x[i]);
        }
        x.swap(next);
        if (diff < 1e-15) break;
    }
    return x;
}

} // namespace

TEST_CASE("solve_channel: N = 1 gives [1.0]") {
    InteractionMatrix gp{MatrixKind::pairwise, ChannelId::spatial, Matrix(1, 1)};
    const auto sv = solve_channel(gp, zero_hyper(1, ChannelId::spatial), {});
    REQUIRE(sv.scores.size() == 1);
    CHECK(sv.scores[0] == doctest::Approx(1.0));
    CHECK(sv.ranking == std::vector<int>{0});
}

TEST_CASE("solve_channel: all-dangling graph with no hyper mass is uniform") {
    const int n = 4;
    InteractionMatrix gp{MatrixKind::pairwise, ChannelId::spatial, Matrix(n, n)};
    const auto sv = solve_channel(gp, zero_hyper(n, ChannelId::spatial), {});
    for (double v : sv.scores) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("solve_channel matches the independent dense oracle on a 3x3 instance") {
    Rng rng(29);
    const auto gp = random_pairwise(rng, 3, 0.0);
    const auto gr = random_hyper(rng, 3);
    SolveConfig cfg;
    cfg.alpha = 0.85;
    const auto sv = solve_channel(gp, gr, cfg);
    const auto oracle = oracle_fixed_point(gp, gr, cfg.alpha);
    REQUIRE(oracle.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(sv.scores[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
}

TEST_CASE("solve_channel satisfies the fixed-point residual bound") {
    Rng rng(31);
    SolveConfig cfg;
    for (int trial = 0; trial < 25; ++trial) {
        const int n = rng.uniform_int(2, 12);
        const auto gp = random_pairwise(rng, n);
        const auto gr = random_hyper(rng, n);
        const auto sv = solve_channel(gp, gr, cfg);

        // Recompute prior and transitions locally.
        std::vector<double> prior(n, (1.0 - cfg.alpha) / n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < kRegionCount; ++k) prior[i] += cfg.alpha * gr.data(k, i);
        std::vector<double> image(n);
        for (int i = 0; i < n; ++i) {
            double acc = prior[i];
            for (int j = 0; j < n; ++j) {
                const double c = gp.data.row_sum(j);
                const double t = c > 0.0 ? gp.data(j, i) / c : 1.0 / n;
                acc += cfg.alpha * t * sv.scores[j];
            }
            image[i] = acc;
        }
        const double z = std::accumulate(image.begin(), image.end(), 0.0);
        double residual = 0.0;
        for (int i = 0; i < n; ++i) residual += std::abs(sv.scores[i] - image[i] / z);
        CHECK(residual < 10.0 * cfg.tol);

        // Distribution invariants.
        const double total = std::accumulate(sv.scores.begin(), sv.scores.end(), 0.0);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        for (double v : sv.scores)
            CHECK(v >= cfg.score_floor / (n * cfg.score_floor + 1.0) - 1e-18);
    }
}

TEST_CASE("build_gbar special cases") {
    Rng rng(37);
    SUBCASE("alpha = 1 and no hyper: gbar is the transposed transition matrix") {
        const auto gp = random_pairwise(rng, 4, 0.0);
        SolveConfig cfg;
        cfg.alpha = 1.0;
        const Matrix gbar = build_gbar(gp, zero_hyper(4, ChannelId::spatial), cfg);
        for (int i = 0; i < 4; ++i) {
            const double c = gp.data.row_sum(i);
            for (int j = 0; j < 4; ++j)
                CHECK(gbar(j, i) == doctest::Approx(gp.data(i, j) / c).epsilon(1e-14));
        }
    }
    SUBCASE("zero graphs: uniform teleport matrix with uniform eigenvector") {
        InteractionMatrix gp{MatrixKind::pairwise, ChannelId::spatial, Matrix(3, 3)};
        SolveConfig cfg;
        const Matrix gbar = build_gbar(gp, zero_hyper(3, ChannelId::spatial), cfg);
        // dangling rows become uniform: each entry = alpha/3 + (1-alpha)/3 = 1/3
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(gbar(i, j) == doctest::Approx(1.0 / 3));
        const auto ev = dominant_eigenvector(gbar);
        for (double v : ev) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-10));
    }
}

TEST_CASE("power-iterating gbar reproduces solve_channel") {
    Rng rng(41);
    SolveConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(2, 8);
        const auto gp = random_pairwise(rng, n);
        const auto gr = random_hyper(rng, n);
        const auto sv = solve_channel(gp, gr, cfg);
        const auto ev = dominant_eigenvector(build_gbar(gp, gr, cfg));
        for (int i = 0; i < n; ++i) CHECK(sv.scores[i] == doctest::Approx(ev[i]).epsilon(1e-8));
    }
}

TEST_CASE("scaling the pairwise graph leaves scores unchanged") {
    Rng rng(43);
    const int n = 6;
    const auto gp = random_pairwise(rng, n);
    const auto gr = random_hyper(rng, n);
    InteractionMatrix scaled = gp;
    for (auto& v : scaled.data.data()) v *= 37.5;
    const auto a = solve_channel(gp, gr, {});
    const auto b = solve_channel(scaled, gr, {});
    for (int i = 0; i < n; ++i) CHECK(a.scores[i] == doctest::Approx(b.scores[i]).epsilon(1e-12));
}

TEST_CASE("uniform rows with no hyper mass give uniform scores") {
    const int n = 5;
    InteractionMatrix gp{MatrixKind::pairwise, ChannelId::spatial, Matrix(n, n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) gp.data(i, j) = 0.4;
    const auto sv = solve_channel(gp, zero_hyper(n, ChannelId::spatial), {});
    for (double v : sv.scores) CHECK(v == doctest::Approx(1.0 / n).epsilon(1e-10));
}

TEST_CASE("fuse: identical uniform channels give uniform fused scores") {
    ScoreVector a;
    a.scene_id = "s";
    a.channel = ChannelId::spatial;
    a.scores = {0.25, 0.25, 0.25, 0.25};
    a.ranking = ranking_from_scores(a.scores);
    ScoreVector b = a;
    b.channel = ChannelId::action;
    const auto fused = fuse({a, b}, {1.0, 1.0}, {});
    for (double v : fused.scores) CHECK(v == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(fused.ranking == std::vector<int>{0, 1, 2, 3});
    CHECK(fused.channel == ChannelId::fused);
}

TEST_CASE("fuse: K = 1 with q = [1] preserves the channel ranking") {
    Rng rng(47);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 5;
        ScoreVector sv;
        sv.scene_id = "s";
        sv.channel = ChannelId::spatial;
        sv.scores.resize(n);
        double total = 0.0;
        for (double& v : sv.scores) {
            v = rng.uniform(0.05, 1.0);
            total += v;
        }
        for (double& v : sv.scores) v /= total;
        sv.ranking = ranking_from_scores(sv.scores);
        const auto fused = fuse({sv}, {1.0}, {});
        CHECK(fused.ranking == sv.ranking);
    }
}

TEST_CASE("fuse: fused graph entries equal rectified log R ratios") {
    // Two channels, three persons, hand-set scores.
    ScoreVector a, b;
    a.scene_id = b.scene_id = "s";
    a.channel = ChannelId::spatial;
    b.channel = ChannelId::action;
    a.scores = {0.5, 0.3, 0.2};
    b.scores = {0.2, 0.5, 0.3};
    a.ranking = ranking_from_scores(a.scores);
    b.ranking = ranking_from_scores(b.scores);
    const std::vector<double> q{1.0, 1.0};

    // R by direct products; entries must be max(log(R_j/R_i), 0).
    std::vector<double> r(3);
    for (int i = 0; i < 3; ++i) r[i] = a.scores[i] * b.scores[i];
    // R = [0.10, 0.15, 0.06]
    CHECK(r[0] == doctest::Approx(0.10));
    CHECK(r[1] == doctest::Approx(0.15));
    CHECK(r[2] == doctest::Approx(0.06));

    // Reproduce the fused matrix through the message function.
    std::vector<std::vector<double>> logs(3, std::vector<double>(2));
    for (int i = 0; i < 3; ++i) {
        logs[i][0] = std::log(a.scores[i]);
        logs[i][1] = std::log(b.scores[i]);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const double message = msg_fused(logs[i], logs[j], q);
            CHECK(message == doctest::Approx(std::log(r[j] / r[i])).epsilon(1e-12));
        }

    // And the solved fused ranking agrees with the independent R ranking.
    const auto fused = fuse({a, b}, q, {});
    const auto oracle = oracle_rank_by_R({a.scores, b.scores}, q);
    CHECK(fused.ranking == oracle);
    CHECK(oracle == std::vector<int>{1, 0, 2});
}

TEST_CASE("rank_scene basics") {
    SolveConfig cfg;
    SUBCASE("single person scores 1 and wins") {
        SynthSpec spec;
        spec.n_persons = 1;
        spec.seed = 5;
        const Scene scene = generate_scene(spec);
        const auto bundles = build_bundles(scene, {});
        WeightSet weights;
        weights.w_s = std::vector<double>(7, 1.0);
        const auto result = rank_scene(scene, bundles, weights, cfg);
        CHECK(result.predicted_index == 0);
        CHECK(result.fused.scores[0] == doctest::Approx(1.0));
    }
    SUBCASE("identical bundles tie-break to index 0") {
        Scene scene;
        scene.id = "tie";
        scene.image_w = scene.image_h = 500;
        for (int i = 0; i < 2; ++i) {
            PersonObservation p;
            p.id = "p" + std::to_string(i);
            // Mirror-symmetric boxes about the center.
            p.box = {i == 0 ? 100.0 : 360.0, 230, 40, 40};
            scene.persons.push_back(p);
        }
        const auto bundles = build_bundles(scene, {});
        WeightSet weights;
        weights.w_s = std::vector<double>(7, 0.5);
        const auto result = rank_scene(scene, bundles, weights, cfg);
        CHECK(result.fused.scores[0] == doctest::Approx(result.fused.scores[1]).epsilon(1e-9));
        CHECK(result.predicted_index == 0);
    }
    SUBCASE("no overlapping channels throws") {
        SynthSpec spec;
        spec.n_persons = 3;
        spec.channels = {ChannelId::spatial};
        const Scene scene = generate_scene(spec);
        const auto bundles = build_bundles(scene, {});
        WeightSet weights;
        weights.w_ac = {1.0};
        CHECK_THROWS_AS(rank_scene(scene, bundles, weights, cfg), Error);
    }
}

TEST_CASE("rank_scene puts an obvious hub first") {
    SynthSpec spec;
    spec.n_persons = 6;
    spec.hub_strength = 1.0;
    spec.seed = 77;
    spec.embedding_dim = 8;
    const Scene scene = generate_scene(spec);
    const auto bundles = build_bundles(scene, {});

    WeightSet weights;
    weights.w_s = std::vector<double>(7, 0.0);
    weights.w_s[kSpatialArea] = 1.0;
    weights.w_s[kSpatialSharpness] = 1.0;
    weights.w_ac = std::vector<double>(8, 1.0);
    weights.w_ap = std::vector<double>(8, 1.0);
    weights.c_att = 1.0;

    const auto result = rank_scene(scene, bundles, weights, {});
    CHECK(result.predicted_index == *scene.gt_index());

    // Full-pipeline oracle: per-channel scores recomputed by the dense solver,
    // fused by direct R products.
    std::vector<std::vector<double>> lambdas;
    for (ChannelId channel : result.channels) {
        const auto gp = build_pairwise(bundles, channel, weights);
        const auto gr = build_hyper(scene, bundles, channel, weights);
        lambdas.push_back(oracle_fixed_point(gp, gr, 0.85));
    }
    const auto oracle_rank = oracle_rank_by_R(lambdas, weights.q_vector(result.channels));
    CHECK(oracle_rank.front() == *scene.gt_index());
    CHECK(result.r_ranking == oracle_rank);
}

TEST_CASE("solve_channel reports non-convergence") {
    Rng rng(53);
    const auto gp = random_pairwise(rng, 6, 0.0);
    const auto gr = random_hyper(rng, 6);
    SolveConfig cfg;
    cfg.max_iter = 1;
    cfg.tol = 1e-16;
    try {
        solve_channel(gp, gr, cfg);
        FAIL("expected NoConvergence");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoConvergence);
        CHECK(std::string(e.what()).find("residual") != std::string::npos);
    }
}

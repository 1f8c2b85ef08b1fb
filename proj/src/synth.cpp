#include "personrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "personrank/errors.hpp"
#include "personrank/rng.hpp"

namespace personrank {

namespace {

constexpr double kFrame = 1000.0;

std::vector<double> unit_direction(Rng& rng, int dim) {
    std::vector<double> v = rng.gauss_vector(dim);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(std::max(norm, 1e-12));
    for (double& x : v) x /= norm;
    return v;
}

} // namespace

Scene generate_scene(const SynthSpec& spec) {
    if (spec.n_persons < 1) throw Error(ErrorCode::EmptyScene, "n_persons must be >= 1");
    Rng rng(spec.seed);
    const int n = spec.n_persons;
    const double s = std::clamp(spec.hub_strength, 0.0, 1.0);

    Scene scene;
    scene.id = "synth-" + std::to_string(spec.seed);
    scene.image_w = kFrame;
    scene.image_h = kFrame;
    scene.category = "synth";

    const int hub = rng.uniform_int(0, n - 1);

    // Geometry first, all persons, fixed draw order for reproducibility.
    std::vector<double> cx(n), cy(n), bw(n), bh(n);
    for (int i = 0; i < n; ++i) {
        cx[i] = rng.uniform(120.0, kFrame - 120.0);
        cy[i] = rng.uniform(120.0, kFrame - 120.0);
        bw[i] = rng.uniform(25.0, 75.0);
        bh[i] = bw[i] * rng.uniform(0.95, 1.15);
    }
    bw[hub] *= 1.0 + s;
    bh[hub] *= 1.0 + s;

    const bool with_attention = spec.channels.count(ChannelId::attention) > 0;
    const bool with_action = spec.channels.count(ChannelId::action) > 0;
    const bool with_appearance = spec.channels.count(ChannelId::appearance) > 0;

    // Crowd cluster bases; the hub sits hub_strength-scaled away from them.
    std::vector<double> action_base, appearance_base, action_dir, appearance_dir;
    if (with_action) {
        action_base = rng.gauss_vector(spec.embedding_dim);
        action_dir = unit_direction(rng, spec.embedding_dim);
    }
    if (with_appearance) {
        appearance_base = rng.gauss_vector(spec.embedding_dim);
        appearance_dir = unit_direction(rng, spec.embedding_dim);
    }

    for (int i = 0; i < n; ++i) {
        PersonObservation person;
        person.id = "p" + std::to_string(i);
        person.box = {cx[i] - 0.5 * bw[i], cy[i] - 0.5 * bh[i], bw[i], bh[i]};
        person.box_kind = BoxKind::face;
        person.sharpness = rng.uniform(0.2, 0.8) + (i == hub ? 0.45 * s : 0.0);
        person.detection_confidence = rng.uniform(0.5, 1.0);

        if (with_attention) {
            double yaw;
            if (i == hub) {
                yaw = rng.uniform(-180.0, 180.0);
            } else {
                // Aim at the hub in attention-feature space f = [x_center, 1/h]
                // (c = 1), then blur by up to (1-s)*180 degrees.
                const double ux = cx[hub] - cx[i];
                const double uy = 1.0 / bh[hub] - 1.0 / bh[i];
                const double aimed = std::atan2(ux, uy) * 180.0 / M_PI;
                yaw = aimed + rng.uniform(-1.0, 1.0) * (1.0 - s) * 180.0;
            }
            person.yaw_deg = yaw;
        }
        if (with_action) {
            person.action_embedding = action_base;
            for (int d = 0; d < spec.embedding_dim; ++d) {
                person.action_embedding[d] += 0.5 * rng.gauss();
                if (i == hub) person.action_embedding[d] += 3.0 * s * action_dir[d];
            }
        }
        if (with_appearance) {
            person.appearance_embedding = appearance_base;
            for (int d = 0; d < spec.embedding_dim; ++d) {
                person.appearance_embedding[d] += 0.5 * rng.gauss();
                if (i == hub) person.appearance_embedding[d] += 3.0 * s * appearance_dir[d];
            }
        }
        person.is_ground_truth_important = (i == hub);
        scene.persons.push_back(std::move(person));
    }
    return scene;
}

std::vector<Scene> generate_scenes(const SynthSpec& spec, int count) {
    std::vector<Scene> scenes;
    scenes.reserve(count);
    for (int i = 0; i < count; ++i) {
        SynthSpec s = spec;
        s.seed = spec.seed + static_cast<std::uint64_t>(i);
        scenes.push_back(generate_scene(s));
    }
    return scenes;
}

std::vector<double> oracle_fixed_point(const InteractionMatrix& gp, const InteractionMatrix& gr,
                                       double alpha) {
    const int n = gp.rows();
    if (gp.cols() != n || gr.cols() != n)
        throw Error(ErrorCode::ShapeMismatch, "oracle shapes disagree");
    if (n > 50) throw Error(ErrorCode::ShapeMismatch, "oracle is dense-only, N <= 50");

    // Row-stochastic transitions, written out independently of the engine.
    std::vector<std::vector<double>> t(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) {
        double c = 0.0;
        for (int k = 0; k < n; ++k) c += gp.data(j, k);
        for (int k = 0; k < n; ++k) t[j][k] = c > 0.0 ? gp.data(j, k) / c : 1.0 / n;
    }

    std::vector<double> prior(n, (1.0 - alpha) / n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < gr.rows(); ++k) prior[i] += alpha * gr.data(k, i);
    const double prior_mass = std::accumulate(prior.begin(), prior.end(), 0.0);
    const double z = prior_mass + alpha;

    if (prior_mass < 1e-14) {
        // alpha = 1 with no hyper mass: (I - Ghat^T) is singular; long power
        // iteration instead.
        std::vector<double> lambda(n, 1.0 / n), next(n);
        for (long step = 0; step < 1000000; ++step) {
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j) acc += t[j][i] * lambda[j];
                next[i] = acc;
            }
            const double total = std::accumulate(next.begin(), next.end(), 0.0);
            double diff = 0.0;
            for (int i = 0; i < n; ++i) {
                next[i] /= total;
                diff += std::abs(next[i] - lambda[i]);
            }
            lambda.swap(next);
            if (diff < 1e-15) break;
        }
        return lambda;
    }

    // Dense solve of (z I - alpha Ghat^T) lambda = prior, partial pivoting.
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = (i == j ? z : 0.0) - alpha * t[j][i];
        a[i][n] = prior[i];
    }
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-14)
            throw Error(ErrorCode::SingularSystem, "oracle system is singular");
        std::swap(a[col], a[pivot]);
        for (int r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (int k = col; k <= n; ++k) a[r][k] -= factor * a[col][k];
        }
    }
    std::vector<double> lambda(n);
    for (int i = n - 1; i >= 0; --i) {
        double acc = a[i][n];
        for (int j = i + 1; j < n; ++j) acc -= a[i][j] * lambda[j];
        lambda[i] = acc / a[i][i];
    }
    const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    for (double& v : lambda) v /= total;
    return lambda;
}

std::vector<int> oracle_rank_by_R(const std::vector<std::vector<double>>& per_channel_lambda,
                                  const std::vector<double>& q) {
    if (per_channel_lambda.empty() || per_channel_lambda.size() != q.size())
        throw Error(ErrorCode::ChannelMisalignment, "lambda/q size mismatch");
    const std::size_t n = per_channel_lambda[0].size();
    std::vector<double> r(n, 1.0);
    for (std::size_t k = 0; k < q.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) r[i] *= std::pow(per_channel_lambda[k][i], q[k]);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return r[x] > r[y]; });
    return order;
}

} // namespace personrank

#include "personrank/features.hpp"

#include <cmath>
#include <limits>

#include "personrank/errors.hpp"

namespace personrank {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// missing_as_nan distinguishes the public contract (missing scalars read 0)
// from bundle assembly, where missing values are imputed at the scene mean.
std::vector<double> spatial_raw(const Scene& scene, int person_index, const FeatureConfig& cfg,
                                bool missing_as_nan) {
    const int n = scene.person_count();
    if (person_index < 0 || person_index >= n)
        throw Error(ErrorCode::IndexOutOfRange,
                    "person index " + std::to_string(person_index) + " out of range for N=" +
                        std::to_string(n));

    const auto& person = scene.persons[person_index];
    const double diag = std::sqrt(scene.image_w * scene.image_w + scene.image_h * scene.image_h);

    double centroid_x = 0.0, centroid_y = 0.0;
    for (const auto& p : scene.persons) {
        centroid_x += p.box.center_x();
        centroid_y += p.box.center_y();
    }
    centroid_x /= n;
    centroid_y /= n;

    const double cx = person.box.center_x();
    const double cy = person.box.center_y();
    const double dx_img = cx - 0.5 * scene.image_w;
    const double dy_img = cy - 0.5 * scene.image_h;
    const double dx_grp = cx - centroid_x;
    const double dy_grp = cy - centroid_y;

    const double m = cfg.density_window_fraction * scene.image_w;
    int inside = 0;
    for (const auto& p : scene.persons) {
        if (std::abs(p.box.center_x() - cx) <= 0.5 * m && std::abs(p.box.center_y() - cy) <= 0.5 * m)
            ++inside;
    }

    const double missing = missing_as_nan ? kMissing : 0.0;
    std::vector<double> phi(7);
    phi[kSpatialArea] = person.box.area() / (scene.image_w * scene.image_h);
    phi[kSpatialSharpness] = person.sharpness ? *person.sharpness : missing;
    phi[kSpatialAspect] = person.box.w / person.box.h;
    phi[kSpatialConfidence] = person.detection_confidence ? *person.detection_confidence : missing;
    phi[kSpatialDistCenter] = std::sqrt(dx_img * dx_img + dy_img * dy_img) / diag;
    phi[kSpatialDistCentroid] = std::sqrt(dx_grp * dx_grp + dy_grp * dy_grp) / diag;
    phi[kSpatialDensity] = static_cast<double>(inside) / n;
    return phi;
}

// Per-coordinate over the scene: impute NaN at the mean of present values,
// then optionally z-score with sample std floored at eps_std.
void normalize_column(std::vector<FeatureBundle>& bundles, ChannelId channel, std::size_t coord,
                      const FeatureConfig& cfg) {
    double sum = 0.0;
    int present = 0;
    for (const auto& b : bundles) {
        const double v = b.features(channel)[coord];
        if (!std::isnan(v)) {
            sum += v;
            ++present;
        }
    }
    const double mean = present > 0 ? sum / present : 0.0;
    for (auto& b : bundles) {
        double& v = b.features(channel)[coord];
        if (std::isnan(v)) v = mean;
    }
    if (!cfg.standardize) return;

    const int n = static_cast<int>(bundles.size());
    double full_mean = 0.0;
    for (const auto& b : bundles) full_mean += b.features(channel)[coord];
    full_mean /= n;
    double ss = 0.0;
    for (const auto& b : bundles) {
        const double d = b.features(channel)[coord] - full_mean;
        ss += d * d;
    }
    const double std_dev = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    const double denom = std::max(std_dev, cfg.eps_std);
    for (auto& b : bundles) {
        double& v = b.features(channel)[coord];
        v = (v - full_mean) / denom;
    }
}

} // namespace

std::vector<double> spatial_feature(const Scene& scene, int person_index, const FeatureConfig& cfg) {
    return spatial_raw(scene, person_index, cfg, /*missing_as_nan=*/false);
}

std::vector<double> attention_feature(const PersonObservation& person) {
    if (!person.yaw_deg || person.box_kind != BoxKind::face)
        throw Error(ErrorCode::MissingYaw, "person '" + person.id + "' has no usable yaw");
    const double theta = *person.yaw_deg * M_PI / 180.0;
    return {person.box.center_x(), 1.0 / person.box.h, std::sin(theta), std::cos(theta)};
}

std::vector<FeatureBundle> build_bundles(const Scene& scene, const FeatureConfig& cfg) {
    const int n = scene.person_count();
    std::vector<FeatureBundle> bundles(n);

    bool attention_ok = true, action_ok = true, appearance_ok = true;
    for (const auto& person : scene.persons) {
        if (!person.yaw_deg || person.box_kind != BoxKind::face) attention_ok = false;
        if (person.action_embedding.empty()) action_ok = false;
        if (person.appearance_embedding.empty()) appearance_ok = false;
    }

    for (int i = 0; i < n; ++i) {
        bundles[i].spatial = spatial_raw(scene, i, cfg, /*missing_as_nan=*/true);
        if (attention_ok) bundles[i].attention = attention_feature(scene.persons[i]);
        if (action_ok) bundles[i].action = scene.persons[i].action_embedding;
        if (appearance_ok) bundles[i].appearance = scene.persons[i].appearance_embedding;
    }

    for (std::size_t c = 0; c < 7; ++c) normalize_column(bundles, ChannelId::spatial, c, cfg);
    if (action_ok)
        for (std::size_t c = 0; c < bundles[0].action.size(); ++c)
            normalize_column(bundles, ChannelId::action, c, cfg);
    if (appearance_ok)
        for (std::size_t c = 0; c < bundles[0].appearance.size(); ++c)
            normalize_column(bundles, ChannelId::appearance, c, cfg);
    // Attention stays raw: v must keep unit norm and f its image geometry.

    return bundles;
}

std::vector<ChannelId> active_channels(const std::vector<FeatureBundle>& bundles) {
    std::vector<ChannelId> out;
    if (bundles.empty()) return out;
    for (ChannelId channel : kChannelOrder) {
        bool everywhere = true;
        for (const auto& b : bundles)
            if (!b.has(channel)) everywhere = false;
        if (everywhere) out.push_back(channel);
    }
    return out;
}

} // namespace personrank

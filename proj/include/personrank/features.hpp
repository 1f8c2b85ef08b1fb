#pragma once

#include <vector>

#include "personrank/types.hpp"

namespace personrank {

struct FeatureConfig {
    double density_window_fraction = 0.1; // m = fraction * image_w
    bool standardize = true;
    double eps_std = 1e-8; // floor on the per-coordinate standard deviation
};

/// Spatial feature layout inside the 7-vector.
enum SpatialIndex {
    kSpatialArea = 0,
    kSpatialSharpness = 1,
    kSpatialAspect = 2,
    kSpatialConfidence = 3,
    kSpatialDistCenter = 4,
    kSpatialDistCentroid = 5,
    kSpatialDensity = 6,
};

/// Raw 7-dim spatial feature of one person:
/// [area, sharpness, aspect_ratio, confidence, dist_to_image_center,
///  dist_to_group_centroid, density]. Area is normalized by the image area,
/// the two distances by the image diagonal; density counts box centers in an
/// m x m window around the person's center, divided by N. Missing sharpness
/// or confidence read as 0 here.
std::vector<double> spatial_feature(const Scene& scene, int person_index, const FeatureConfig& cfg);

/// 4-dim attention feature [x_center, 1/h, sin yaw, cos yaw]; yaw in degrees.
std::vector<double> attention_feature(const PersonObservation& person);

/// One bundle per person, index-aligned with scene.persons. A channel missing
/// on any person is deactivated scene-wide. When cfg.standardize, spatial,
/// action and appearance coordinates are z-scored per scene (sample std,
/// floored at eps_std); missing sharpness/confidence are imputed at the scene
/// mean, which standardizes to 0. The attention channel is kept raw so that
/// ||v|| = 1 holds and c_att keeps its geometric meaning.
std::vector<FeatureBundle> build_bundles(const Scene& scene, const FeatureConfig& cfg);

/// Channels present in every bundle, in fusion order.
std::vector<ChannelId> active_channels(const std::vector<FeatureBundle>& bundles);

} // namespace personrank

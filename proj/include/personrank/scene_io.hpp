#pragma once

#include <string>
#include <vector>

#include "personrank/types.hpp"

namespace personrank {

/// Normalizes a scene: clamps boxes to the image frame, clamps negative
/// sharpness to zero and drops yaw on body boxes. Rejects empty scenes,
/// duplicate person ids, non-positive boxes, inconsistent embedding
/// dimensions and multiple ground-truth flags. Idempotent.
Scene validate_scene(const Scene& scene);

/// JSON codecs. Scene files hold either a single scene object or an array of
/// scene objects; load_scenes always returns the validated list.
std::string encode_scene(const Scene& scene);
Scene decode_scene(const std::string& json_text);

std::vector<Scene> load_scenes(const std::string& path);
void save_scenes(const std::vector<Scene>& scenes, const std::string& path);

std::string encode_weights(const WeightSet& weights);
WeightSet decode_weights(const std::string& json_text);

WeightSet load_weights(const std::string& path);
void save_weights(const WeightSet& weights, const std::string& path);

} // namespace personrank

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace personrank {

/// Axis-aligned box, origin at the image top-left, (x, y) = top-left corner.
struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0; // > 0
    double h = 0.0; // > 0

    double center_x() const { return x + 0.5 * w; }
    double center_y() const { return y + 0.5 * h; }
    double area() const { return w * h; }
};

enum class BoxKind { face, body };

/// One detected person. Embeddings arrive precomputed; empty vector = absent.
struct PersonObservation {
    std::string id;
    BoundingBox box;
    BoxKind box_kind = BoxKind::face;
    std::optional<double> yaw_deg;              // face boxes only
    std::optional<double> sharpness;            // >= 0
    std::optional<double> detection_confidence;
    std::vector<double> action_embedding;
    std::vector<double> appearance_embedding;
    bool is_ground_truth_important = false;
};

struct Scene {
    std::string id;
    double image_w = 0.0;
    double image_h = 0.0;
    std::vector<PersonObservation> persons; // N >= 1
    std::optional<std::string> category;

    int person_count() const { return static_cast<int>(persons.size()); }

    /// Index of the annotated important person, if any.
    std::optional<int> gt_index() const {
        for (std::size_t i = 0; i < persons.size(); ++i)
            if (persons[i].is_ground_truth_important) return static_cast<int>(i);
        return std::nullopt;
    }
};

enum class ChannelId { spatial, action, appearance, attention, fused };

/// Fixed fusion order: spatial, action, appearance, attention.
inline constexpr std::array<ChannelId, 4> kChannelOrder = {
    ChannelId::spatial, ChannelId::action, ChannelId::appearance, ChannelId::attention};

const char* channel_name(ChannelId channel);
ChannelId channel_from_name(const std::string& name);

/// Per-person feature vectors. An empty vector means the channel is absent
/// for this person; build_bundles deactivates a channel scene-wide if any
/// person misses it.
struct FeatureBundle {
    std::vector<double> spatial;    // dim 7
    std::vector<double> attention;  // dim 4 = [x_center, 1/h, sin yaw, cos yaw], ||v||=1
    std::vector<double> action;
    std::vector<double> appearance;

    bool has(ChannelId channel) const { return !features(channel).empty(); }
    const std::vector<double>& features(ChannelId channel) const;
    std::vector<double>& features(ChannelId channel);
};

/// All learned parameters. A channel is active on the weight side when its
/// message weights are present (non-empty vector; c_att engaged for attention).
struct WeightSet {
    std::vector<double> w_s;  // dim 7
    std::vector<double> w_ac;
    std::vector<double> w_ap;
    std::optional<double> c_att;                    // w^at = [1, c]; nullopt = attention off
    std::map<ChannelId, std::vector<double>> delta; // hyper weights, one per channel
    std::map<ChannelId, double> q;                  // fusion weight per channel
    double alpha = 0.85;                            // 0 < alpha <= 1

    bool channel_active(ChannelId channel) const;
    const std::vector<double>& message_weights(ChannelId channel) const;

    /// Fusion weights ordered like `channels`; a missing entry defaults to 1.
    std::vector<double> q_vector(const std::vector<ChannelId>& channels) const;
};

} // namespace personrank

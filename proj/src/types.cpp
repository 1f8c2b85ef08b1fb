#include "personrank/types.hpp"

#include "personrank/errors.hpp"

namespace personrank {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyScene: return "EmptyScene";
        case ErrorCode::DuplicatePersonId: return "DuplicatePersonId";
        case ErrorCode::NonPositiveBox: return "NonPositiveBox";
        case ErrorCode::MultipleGroundTruth: return "MultipleGroundTruth";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::MissingYaw: return "MissingYaw";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ChannelInactive: return "ChannelInactive";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::ChannelMismatch: return "ChannelMismatch";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::ChannelMisalignment: return "ChannelMisalignment";
        case ErrorCode::NoActiveChannels: return "NoActiveChannels";
        case ErrorCode::MissingGroundTruth: return "MissingGroundTruth";
        case ErrorCode::EmptyValidation: return "EmptyValidation";
        case ErrorCode::EmptyCategory: return "EmptyCategory";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "UnknownError";
}

const char* channel_name(ChannelId channel) {
    switch (channel) {
        case ChannelId::spatial: return "spatial";
        case ChannelId::action: return "action";
        case ChannelId::appearance: return "appearance";
        case ChannelId::attention: return "attention";
        case ChannelId::fused: return "fused";
    }
    return "unknown";
}

ChannelId channel_from_name(const std::string& name) {
    if (name == "spatial") return ChannelId::spatial;
    if (name == "action") return ChannelId::action;
    if (name == "appearance") return ChannelId::appearance;
    if (name == "attention") return ChannelId::attention;
    if (name == "fused") return ChannelId::fused;
    throw Error(ErrorCode::ParseError, "unknown channel name '" + name + "'");
}

const std::vector<double>& FeatureBundle::features(ChannelId channel) const {
    switch (channel) {
        case ChannelId::spatial: return spatial;
        case ChannelId::action: return action;
        case ChannelId::appearance: return appearance;
        case ChannelId::attention: return attention;
        default: throw Error(ErrorCode::ChannelInactive, "fused is not a feature channel");
    }
}

std::vector<double>& FeatureBundle::features(ChannelId channel) {
    return const_cast<std::vector<double>&>(
        static_cast<const FeatureBundle*>(this)->features(channel));
}

bool WeightSet::channel_active(ChannelId channel) const {
    switch (channel) {
        case ChannelId::spatial: return !w_s.empty();
        case ChannelId::action: return !w_ac.empty();
        case ChannelId::appearance: return !w_ap.empty();
        case ChannelId::attention: return c_att.has_value();
        default: return false;
    }
}

const std::vector<double>& WeightSet::message_weights(ChannelId channel) const {
    switch (channel) {
        case ChannelId::spatial: return w_s;
        case ChannelId::action: return w_ac;
        case ChannelId::appearance: return w_ap;
        default:
            throw Error(ErrorCode::ChannelInactive,
                        std::string("no message weight vector for channel ") + channel_name(channel));
    }
}

std::vector<double> WeightSet::q_vector(const std::vector<ChannelId>& channels) const {
    std::vector<double> out;
    out.reserve(channels.size());
    for (ChannelId channel : channels) {
        auto it = q.find(channel);
        out.push_back(it == q.end() ? 1.0 : it->second);
    }
    return out;
}

} // namespace personrank

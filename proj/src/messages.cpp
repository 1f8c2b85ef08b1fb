#include "personrank/messages.hpp"

#include <algorithm>
#include <cmath>

#include "personrank/errors.hpp"

namespace personrank {

namespace {

void require_same_dim(const std::vector<double>& a, const std::vector<double>& b,
                      const std::vector<double>& w, const char* what) {
    if (a.size() != b.size() || a.size() != w.size())
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": dims " + std::to_string(a.size()) + ", " +
                        std::to_string(b.size()) + ", " + std::to_string(w.size()));
}

double exp_diff_message(const std::vector<double>& phi_i, const std::vector<double>& phi_j,
                        const std::vector<double>& w, const char* what) {
    require_same_dim(phi_i, phi_j, w, what);
    double value = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double d = std::clamp(phi_j[k] - phi_i[k], -kExpClamp, kExpClamp);
        value += w[k] * std::exp(d);
    }
    return value;
}

} // namespace

double msg_spatial(const std::vector<double>& phi_i, const std::vector<double>& phi_j,
                   const std::vector<double>& w_s) {
    return exp_diff_message(phi_i, phi_j, w_s, "msg_spatial");
}

double msg_action(const std::vector<double>& phi_i, const std::vector<double>& phi_j,
                  const std::vector<double>& w_ac) {
    return exp_diff_message(phi_i, phi_j, w_ac, "msg_action");
}

double msg_appearance(const std::vector<double>& phi_i, const std::vector<double>& phi_j,
                      const std::vector<double>& w_ap) {
    require_same_dim(phi_i, phi_j, w_ap, "msg_appearance");
    double value = 0.0;
    for (std::size_t k = 0; k < w_ap.size(); ++k) value += w_ap[k] * std::abs(phi_j[k] - phi_i[k]);
    return value;
}

double msg_attention(const std::vector<double>& att_i, const std::vector<double>& att_j,
                     double c_att) {
    if (att_i.size() != 4 || att_j.size() != 4)
        throw Error(ErrorCode::DimensionMismatch, "attention features must be 4-dim");
    // u = [1, c] * (f_j - f_i); g(u) = u / ||u||.
    const double ux = att_j[0] - att_i[0];
    const double uy = c_att * (att_j[1] - att_i[1]);
    const double norm = std::sqrt(ux * ux + uy * uy);
    if (norm < 1e-12) return std::exp(-1.0); // no direction: neutral attention
    const double dot = att_i[2] * (ux / norm) + att_i[3] * (uy / norm);
    return std::exp(dot - 1.0);
}

double msg_fused(const std::vector<double>& log_lambda_i, const std::vector<double>& log_lambda_j,
                 const std::vector<double>& q) {
    require_same_dim(log_lambda_i, log_lambda_j, q, "msg_fused");
    double value = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) value += q[k] * (log_lambda_j[k] - log_lambda_i[k]);
    return value;
}

double channel_message(ChannelId channel, const std::vector<double>& phi_i,
                       const std::vector<double>& phi_j, const WeightSet& weights) {
    switch (channel) {
        case ChannelId::spatial: return msg_spatial(phi_i, phi_j, weights.w_s);
        case ChannelId::action: return msg_action(phi_i, phi_j, weights.w_ac);
        case ChannelId::appearance: return msg_appearance(phi_i, phi_j, weights.w_ap);
        case ChannelId::attention: {
            if (!weights.c_att)
                throw Error(ErrorCode::ChannelInactive, "attention weights not configured");
            return msg_attention(phi_i, phi_j, *weights.c_att);
        }
        default:
            throw Error(ErrorCode::ChannelInactive, "fused messages need log scores, not features");
    }
}

} // namespace personrank

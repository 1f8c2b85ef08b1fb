#pragma once

#include <vector>

#include "personrank/types.hpp"

namespace personrank {

/// Exponent arguments in the exp-of-difference messages are clamped here;
/// with standardized features the clamp is never active.
inline constexpr double kExpClamp = 30.0;

/// w^T exp(phi_j - phi_i), elementwise exp with clamped arguments.
double msg_spatial(const std::vector<double>& phi_i, const std::vector<double>& phi_j,
                   const std::vector<double>& w_s);

/// Same form as msg_spatial on action embeddings.
double msg_action(const std::vector<double>& phi_i, const std::vector<double>& phi_j,
                  const std::vector<double>& w_ac);

/// w^T |phi_j - phi_i|. Symmetric in (i, j).
double msg_appearance(const std::vector<double>& phi_i, const std::vector<double>& phi_j,
                      const std::vector<double>& w_ap);

/// exp(v_i . g([1, c] * (f_j - f_i)) - 1) with g the L2 normalizer; value in
/// [e^-2, 1]. Coincident f's have no direction, so the neutral e^-1 is
/// returned instead of an error.
double msg_attention(const std::vector<double>& att_i, const std::vector<double>& att_j,
                     double c_att);

/// q^T (log lambda_j - log lambda_i) on per-channel log scores.
/// Antisymmetric in (i, j).
double msg_fused(const std::vector<double>& log_lambda_i, const std::vector<double>& log_lambda_j,
                 const std::vector<double>& q);

/// Message value for a generic channel given the weight set. Dispatches to
/// the four functions above.
double channel_message(ChannelId channel, const std::vector<double>& phi_i,
                       const std::vector<double>& phi_j, const WeightSet& weights);

} // namespace personrank

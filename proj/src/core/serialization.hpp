#pragma once

// JSON forms of the library's value types.
//   GaussianState: {"n_modes": int, "mean": [...], "cov": [[...]]}
//   FockMatrix:    {"cutoff": int, "re": [[...]], "im": [[...]], "deficit": float}

#include "core/channel.hpp"
#include "core/distorting_field.hpp"
#include "core/epr.hpp"
#include "core/gaussian_state.hpp"
#include "core/simulator.hpp"

#include "json.hpp"

#include <string_view>

namespace cvtele {

nlohmann::json to_json(const GaussianState& state);
nlohmann::json to_json(const EprMoments& moments);
nlohmann::json to_json(const FockMatrix& fock);
nlohmann::json to_json(const ChannelReport& report);
nlohmann::json to_json(const EnsembleEstimate& estimate);
nlohmann::json to_json(const Comparison& comparison);

/// Validating reader; malformed documents raise ErrorCode::parse_error,
/// unphysical moments ErrorCode::unphysical.
GaussianState state_from_json(const nlohmann::json& doc);
GaussianState state_from_json_text(std::string_view text);

FockMatrix fock_from_json(const nlohmann::json& doc);

}  // namespace cvtele

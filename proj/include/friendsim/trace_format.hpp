#pragma once

#include "friendsim/protocol.hpp"
#include "friendsim/report.hpp"

#include <json.hpp>

#include <span>
#include <string>

namespace friendsim {

/// Human-readable trace: every state, then query results and claims.
/// Exact values always; decimal echo only when requested.
std::string render_trace_text(const Trace &trace, bool float_echo, std::span<const PredictionClaim> claims = {});

/*
 * JSON trace with a fixed key order:
 *
 *   { "perspective",
 *     "steps": [ { "id", "probability"?: {"exact", "float"},
 *                  "state": [ { "assignment": {reg: label}, "coeff": {"exact", "float"} } ] } ],
 *     "queries": [ { "at", "event", "exact", "float" } ] }
 *
 * The first step is the initial state, id "init".
 */
nlohmann::ordered_json trace_to_json(const Trace &trace);

}  // namespace friendsim

#pragma once

// JSON encodings shared by the CLI and by anything that persists qchannel
// objects.  Matrices are {"rows": R, "cols": C, "data": [[re, im], ...]} with
// row-major data.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qchannel/algebra.hpp"
#include "qchannel/algorithms.hpp"
#include "qchannel/channels.hpp"
#include "qchannel/qec.hpp"

namespace qchannel::io {

using Json = nlohmann::ordered_json;

Json toJson(const Matrix& m);
Json toJson(const StateVector& psi);
Json toJson(const KrausChannel& ch);
Json toJson(const BooleanOracle& f);
Json toJson(Complex z);

Matrix matrixFromJson(const Json& j);
Vector vectorFromJson(const Json& j);  // [[re, im], ...]
StateVector stateFromJson(const Json& j);
Measurement measurementFromJson(const Json& j);
std::vector<Matrix> matrixListFromJson(const Json& j);
BooleanOracle oracleFromJson(const Json& j);

/// {"dim": N, "kraus": [...], "cp_only": bool?} or {"builtin": name, "params": {...}}.
KrausChannel channelFromJson(const Json& j);
/// Builtin catalogue by name; missing parameters take documented defaults.
KrausChannel builtinChannel(std::string_view name, const Json& params);

/// {"ambient_dim": N, "basis": [StateVector, ...]} or {"builtin": name}.
QuantumCode codeFromJson(const Json& j);

/// List of matrices, or {"builtin": "x_flips" | "paulis", "params": {...}}.
std::vector<Matrix> errorListFromJson(const Json& j);
std::vector<Matrix> builtinErrors(std::string_view name, const Json& params);

/// Reads a JSON document from a file; throws ParseError on failure.
Json readJsonFile(const std::string& path);

/// Resolves a command-line reference: "builtin:<name>[?key=value&...]", a
/// path to a JSON file, or a bare builtin name.  Returns the JSON document
/// describing the object ({"builtin": ..., "params": ...} for builtins).
Json resolveReference(const std::string& reference);

}  // namespace qchannel::io

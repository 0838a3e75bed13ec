#include "qchannel/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qchannel::io {

namespace {

[[noreturn]] void parseError(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

Eigen::Index positiveIndex(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) parseError(std::string(what) + " must be a positive integer");
  return static_cast<Eigen::Index>(j.get<long long>());
}

Complex complexFromJson(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parseError("complex entries must be [re, im] pairs");
  const Complex z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) parseError("non-finite complex entry");
  return z;
}

double numberParam(const Json& params, const char* key, double fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_number()) parseError(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

int intParam(const Json& params, const char* key, int fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_number_integer()) parseError(std::string("parameter '") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> listParam(const Json& params, const char* key, std::vector<double> fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_array()) parseError(std::string("parameter '") + key + "' must be a list of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) parseError(std::string("parameter '") + key + "' must be a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<Vector> vectorListParam(const Json& params, const char* key) {
  if (!params.is_object() || !params.contains(key) || !params.at(key).is_array())
    parseError(std::string("parameter '") + key + "' must be a list of vectors");
  std::vector<Vector> out;
  for (const auto& v : params.at(key)) out.push_back(vectorFromJson(v));
  return out;
}

Json scalarFromText(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  try {
    std::size_t used = 0;
    if (text.find_first_of(".eE") == std::string::npos) {
      const long long value = std::stoll(text, &used);
      if (used == text.size()) return value;
    }
    const double value = std::stod(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  return text;
}

// "key=value&key=a,b,c" into a params object; comma lists become arrays.
Json parseQuery(const std::string& query) {
  Json params = Json::object();
  std::stringstream pairs(query);
  std::string pair;
  while (std::getline(pairs, pair, '&')) {
    if (pair.empty()) continue;
    const auto eq = pair.find('=');
    if (eq == std::string::npos) parseError("builtin parameter '" + pair + "' lacks '='");
    const std::string key = pair.substr(0, eq);
    const std::string value = pair.substr(eq + 1);
    if (value.find(',') != std::string::npos) {
      Json list = Json::array();
      std::stringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) list.push_back(scalarFromText(item));
      params[key] = list;
    } else {
      params[key] = scalarFromText(value);
    }
  }
  return params;
}

bool isBuiltinChannelName(std::string_view name) {
  for (auto known : {"bit_flip", "constant_half", "amplitude_damping", "random_unitary", "entanglement_breaking",
                     "phase_flip", "zz_dephasing", "collective_rotation", "permutation", "dead_row"})
    if (name == known) return true;
  return false;
}

bool isBuiltinName(std::string_view name) {
  return isBuiltinChannelName(name) || name == "repetition3" || name == "shor9" || name == "x_flips" ||
         name == "paulis";
}

}  // namespace

Json toJson(Complex z) { return Json::array({z.real(), z.imag()}); }

Json toJson(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(toJson(m(i, j)));
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["data"] = std::move(data);
  return out;
}

Json toJson(const StateVector& psi) {
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i) amps.push_back(toJson(psi.amplitudes()(i)));
  Json out;
  out["dim"] = psi.dim();
  out["amplitudes"] = std::move(amps);
  return out;
}

Json toJson(const KrausChannel& ch) {
  Json ops = Json::array();
  for (const auto& e : ch.operators()) ops.push_back(toJson(e));
  Json out;
  out["dim"] = ch.dim();
  out["kraus"] = std::move(ops);
  out["cp_only"] = !ch.isTracePreserving();
  return out;
}

Json toJson(const BooleanOracle& f) {
  Json out;
  out["m"] = f.inputBits();
  out["k"] = f.outputBits();
  out["table"] = f.table();
  return out;
}

Matrix matrixFromJson(const Json& j) {
  const auto rows = positiveIndex(field(j, "rows"), "rows");
  const auto cols = positiveIndex(field(j, "cols"), "cols");
  const auto& data = field(j, "data");
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
    parseError("matrix data must hold rows * cols entries");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complexFromJson(data[static_cast<std::size_t>(i * cols + c)]);
  return m;
}

Vector vectorFromJson(const Json& j) {
  if (!j.is_array() || j.empty()) parseError("vector must be a nonempty list of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complexFromJson(j[i]);
  return v;
}

StateVector stateFromJson(const Json& j) {
  const auto dim = positiveIndex(field(j, "dim"), "dim");
  const Vector amps = vectorFromJson(field(j, "amplitudes"));
  if (amps.size() != dim) parseError("amplitude count differs from dim");
  return StateVector(amps);
}

std::vector<Matrix> matrixListFromJson(const Json& j) {
  if (!j.is_array() || j.empty()) parseError("expected a nonempty list of matrices");
  std::vector<Matrix> out;
  for (const auto& m : j) out.push_back(matrixFromJson(m));
  return out;
}

Measurement measurementFromJson(const Json& j) { return Measurement(matrixListFromJson(j)); }

BooleanOracle oracleFromJson(const Json& j) {
  const auto m = positiveIndex(field(j, "m"), "m");
  const auto k = positiveIndex(field(j, "k"), "k");
  const auto& table = field(j, "table");
  if (!table.is_array()) parseError("oracle table must be a list of integers");
  std::vector<std::uint32_t> values;
  for (const auto& v : table) {
    if (!v.is_number_integer() || v.get<long long>() < 0) parseError("oracle table entries must be nonnegative integers");
    values.push_back(static_cast<std::uint32_t>(v.get<long long>()));
  }
  return BooleanOracle(static_cast<int>(m), static_cast<int>(k), std::move(values));
}

KrausChannel builtinChannel(std::string_view name, const Json& params) {
  if (name == "bit_flip") return bitFlip(numberParam(params, "p", 0.1));
  if (name == "phase_flip") return phaseFlip(numberParam(params, "p", 0.1));
  if (name == "zz_dephasing") return zzDephasing(numberParam(params, "p", 0.1));
  if (name == "amplitude_damping") return amplitudeDamping(numberParam(params, "r", 0.5));
  if (name == "constant_half") return constantHalf();
  if (name == "dead_row") return deadRow(intParam(params, "d", 4));
  if (name == "random_unitary") {
    if (!params.is_object() || !params.contains("unitaries")) parseError("random_unitary needs 'unitaries'");
    const auto unitaries = matrixListFromJson(params.at("unitaries"));
    const auto weights =
        listParam(params, "weights", std::vector<double>(unitaries.size(), 1.0 / static_cast<double>(unitaries.size())));
    return randomUnitaryChannel(weights, unitaries);
  }
  if (name == "entanglement_breaking")
    return entanglementBreaking(vectorListParam(params, "psi"), vectorListParam(params, "phi"));
  if (name == "collective_rotation") {
    CollectiveRotationParams p;
    p.qubits = intParam(params, "n", p.qubits);
    const auto angles = listParam(params, "angles", {p.angles.begin(), p.angles.end()});
    const auto weights = listParam(params, "weights", {p.weights.begin(), p.weights.end()});
    if (angles.size() != 3 || weights.size() != 3)
      throw Error(ErrorKind::InvalidParameter, "collective_rotation needs three angles and three weights");
    std::copy(angles.begin(), angles.end(), p.angles.begin());
    std::copy(weights.begin(), weights.end(), p.weights.begin());
    return collectiveRotation(p);
  }
  if (name == "permutation")
    return permutationChannel(intParam(params, "d", 2), intParam(params, "n", 3), listParam(params, "weights", {}));
  throw Error(ErrorKind::UnknownBuiltin, "unknown builtin channel '" + std::string(name) + "'");
}

KrausChannel channelFromJson(const Json& j) {
  if (j.is_object() && j.contains("builtin")) {
    const auto& name = j.at("builtin");
    if (!name.is_string()) parseError("builtin name must be a string");
    return builtinChannel(name.get<std::string>(), j.contains("params") ? j.at("params") : Json::object());
  }
  const auto dim = positiveIndex(field(j, "dim"), "dim");
  KrausChannel ch(matrixListFromJson(field(j, "kraus")));
  if (ch.dim() != dim) parseError("Kraus operators do not match dim");
  if (j.contains("cp_only")) {
    const auto& flag = j.at("cp_only");
    if (!flag.is_boolean()) parseError("cp_only must be a boolean");
    if (!flag.get<bool>() && !ch.isTracePreserving())
      throw Error(ErrorKind::InvalidParameter, "channel is declared trace preserving but is not");
  }
  return ch;
}

QuantumCode codeFromJson(const Json& j) {
  if (j.is_object() && j.contains("builtin")) {
    if (!j.at("builtin").is_string()) parseError("builtin name must be a string");
    return builtinCode(j.at("builtin").get<std::string>());
  }
  const auto dim = positiveIndex(field(j, "ambient_dim"), "ambient_dim");
  const auto& basis = field(j, "basis");
  if (!basis.is_array() || basis.empty()) parseError("code basis must be a nonempty list of states");
  std::vector<StateVector> kets;
  for (const auto& k : basis) kets.push_back(stateFromJson(k));
  if (kets.front().dim() != dim) throw Error(ErrorKind::DimMismatch, "basis kets do not match ambient_dim");
  return makeCode(kets);
}

std::vector<Matrix> builtinErrors(std::string_view name, const Json& params) {
  if (name == "x_flips") {
    const int n = intParam(params, "n", 3);
    if (n < 1 || n > 10) throw Error(ErrorKind::InvalidParameter, "n must lie in 1..10");
    const Eigen::Index dim = Eigen::Index{1} << n;
    std::vector<Matrix> out{Matrix::Identity(dim, dim)};
    for (int k = 1; k <= n; ++k) out.push_back(embedSingle(gate(Gate::X), k, n));
    return out;
  }
  if (name == "paulis") return singleQubitPaulis(intParam(params, "qubit", 1), intParam(params, "n", 9));
  throw Error(ErrorKind::UnknownBuiltin, "unknown builtin error list '" + std::string(name) + "'");
}

std::vector<Matrix> errorListFromJson(const Json& j) {
  if (j.is_object() && j.contains("builtin")) {
    if (!j.at("builtin").is_string()) parseError("builtin name must be a string");
    return builtinErrors(j.at("builtin").get<std::string>(), j.contains("params") ? j.at("params") : Json::object());
  }
  return matrixListFromJson(j);
}

Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) parseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parseError("invalid JSON in '" + path + "': " + e.what());
  }
}

Json resolveReference(const std::string& reference) {
  std::string spec;
  if (reference.rfind("builtin:", 0) == 0) {
    spec = reference.substr(8);
  } else if (std::filesystem::exists(reference)) {
    return readJsonFile(reference);
  } else {
    const auto name = reference.substr(0, reference.find('?'));
    if (!isBuiltinName(name)) parseError("no such file or builtin '" + reference + "'");
    spec = reference;
  }
  const auto q = spec.find('?');
  Json out;
  out["builtin"] = spec.substr(0, q);
  out["params"] = q == std::string::npos ? Json::object() : parseQuery(spec.substr(q + 1));
  return out;
}

}  // namespace qchannel::io

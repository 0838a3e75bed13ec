#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qchannel/cli.hpp"
#include "qchannel/io.hpp"
#include "support.hpp"

using namespace qchannel;
using namespace qchannel::test;
using io::Json;

namespace {

const std::string kData = QCHANNEL_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
  Json error() const { return Json::parse(err); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

}  // namespace

TEST_CASE("correctable report") {
  const auto r = run({"correctable", "--code", "repetition3", "--errors", data("xflips.json")});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = r.json();
  CHECK(j["correctable"] == true);
  CHECK(dist(io::matrixFromJson(j["lambda"]), Matrix::Identity(4, 4)) <= 1e-10);
  CHECK(j["offending_pair"].is_null());
  CHECK(j.back().is_string());
  CHECK(j.contains("paper_ref"));

  const auto bad = run({"correctable", "--code", data("repetition_code.json"), "--errors", data("z1.json")});
  CHECK(bad.code == cli::kExitInputError);
}

TEST_CASE("offending pair is reported 1-based") {
  const auto path = std::filesystem::temp_directory_path() / "qchannel_iz.json";
  {
    std::ofstream f(path);
    f << Json::array({io::toJson(Matrix(Matrix::Identity(8, 8))), io::readJsonFile(data("z1.json"))}).dump();
  }
  const auto r = run({"correctable", "--code", "repetition3", "--errors", path.string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.json()["correctable"] == false);
  CHECK(r.json()["offending_pair"] == Json::array({1, 2}));
}

TEST_CASE("noiseless report") {
  const auto r = run({"noiseless", "--channel", data("zz_dephasing.json")});
  REQUIRE(r.code == cli::kExitOk);
  const auto blocks = r.json()["blocks"];
  REQUIRE(blocks.size() == 2);
  for (const auto& b : blocks) {
    CHECK(b["m"] == 1);
    CHECK(b["n"] == 2);
    CHECK(b["decoherence_free"] == true);
  }
  const auto bad = run({"noiseless", "--channel", data("amplitude_damping.json")});
  CHECK(bad.code == cli::kExitPreconditionFailed);
  CHECK(bad.error()["error"] == "NotUnital");
}

TEST_CASE("deutsch report") {
  const auto r = run({"deutsch", "--oracle", data("const0.json")});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.rfind(R"({"verdict":"constant","probability":1.0,)", 0) == 0);
  CHECK(run({"deutsch", "--oracle", data("identity_oracle.json")}).json()["verdict"] == "balanced");

  const auto dj = run({"deutsch-jozsa", "--oracle", data("balanced3.json")});
  CHECK(dj.json()["verdict"] == "balanced");
  CHECK(std::abs(dj.json()["all_zeros_probability"].get<double>()) <= 1e-10);

  const auto promise = run({"deutsch-jozsa", "--oracle", data("unbalanced3.json")});
  CHECK(promise.code == cli::kExitPreconditionFailed);
  CHECK(promise.error()["error"] == "PromiseViolated");
  CHECK(run({"deutsch", "--oracle", data("balanced3.json")}).code == cli::kExitInputError);
}

TEST_CASE("channel verbs") {
  auto r = run({"classify", "--channel", "builtin:amplitude_damping?r=0.5"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["unital"] == false);
  CHECK(r.json()["trace_preserving"] == true);

  r = run({"classify", "--choi", data("transpose_choi.json")});
  REQUIRE(r.code == 0);
  CHECK(r.json()["completely_positive"] == false);

  r = run({"kraus-from-choi", "--choi", data("transpose_choi.json")});
  CHECK(r.code == cli::kExitPreconditionFailed);
  CHECK(r.error()["error"] == "NotPSD");

  r = run({"choi", "--channel", "bit_flip"});
  REQUIRE(r.code == 0);
  const ChoiMatrix choi{2, io::matrixFromJson(r.json()["choi"])};
  CHECK(choiDistance(krausFromChoi(choi), bitFlip(0.1)) <= 1e-12);

  r = run({"channels-equal", "--channel", "builtin:bit_flip?p=0.3", "--other", "builtin:phase_flip?p=0.3"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["equal"] == false);
  CHECK(r.json()["intertwiner"].is_null());

  r = run({"fix-vs-commutant", "--channel", "phase_flip"});
  CHECK(r.json()["equal"] == true);
  r = run({"fix", "--channel", data("amplitude_damping.json")});
  CHECK(r.json()["dimension"] == 1);
  r = run({"commutant", "--generators", data("phase_flip_generators.json")});
  CHECK(r.json()["dimension"] == 2);
  r = run({"interaction-algebra", "--channel", "builtin:collective_rotation"});
  CHECK(r.json()["dimension"] == 20);
  r = run({"structure", "--channel", "builtin:collective_rotation"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["algebra_dim"] == 5);
  r = run({"dead-subspace", "--channel", data("dead_projector_map.json")});
  CHECK(r.json()["hypothesis_holds"] == true);
  r = run({"dead-subspace", "--channel", "builtin:dead_row?d=4"});
  CHECK(r.json()["hypothesis_holds"] == false);
  r = run({"detect", "--code", "repetition3", "--error", data("z1.json")});
  CHECK(r.json()["detectable"] == false);
  r = run({"adder", "--bits", "2"});
  CHECK(io::matrixFromJson(r.json()["unitary"]).rows() == 16);
  r = run({"parallelism", "--oracle", data("identity_oracle.json")});
  CHECK(io::stateFromJson(r.json()["state"]).amplitudes()(3).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("recovery verbs") {
  auto r = run({"recovery", "--code", data("repetition_code.json"), "--errors", "builtin:x_flips"});
  REQUIRE(r.code == 0);
  const auto rec = io::channelFromJson(r.json()["recovery"]);
  CHECK(rec.size() == 4);
  CHECK(rec.isTracePreserving());

  r = run({"verify-recovery", "--code", "repetition3", "--errors", data("xflips.json"), "--channel",
           data("repetition_noise.json")});
  REQUIRE(r.code == 0);
  CHECK(r.json()["success"] == true);
  CHECK(r.json()["max_deviation"].get<double>() <= 1e-9);

  r = run({"verify-recovery", "--code", "repetition3", "--errors", data("xflips.json"), "--channel",
           "builtin:dead_row?d=8"});
  CHECK(r.code == 0);

  r = run({"recovery", "--code", "repetition3", "--errors", "builtin:paulis?qubit=1&n=3"});
  CHECK(r.code == cli::kExitPreconditionFailed);
  CHECK(r.error()["error"] == "ConditionViolated");
}

TEST_CASE("exit codes and error objects") {
  auto r = run({"classify", "--channel", data("missing.json")});
  CHECK(r.code == cli::kExitInputError);
  CHECK(r.error()["error"] == "ParseError");
  CHECK(r.err.find('\n') == r.err.size() - 1);

  r = run({"classify", "--channel", "builtin:no_such_channel"});
  CHECK(r.code == cli::kExitInputError);
  CHECK(r.error()["error"] == "UnknownBuiltin");

  r = run({"detect", "--code", "steane7", "--error", data("z1.json")});
  CHECK(r.code == cli::kExitInputError);

  r = run({"classify", "--channel", "builtin:bit_flip?p=1.5"});
  CHECK(r.code == cli::kExitInputError);
  CHECK(r.error()["error"] == "InvalidParameter");

  r = run({"frobnicate"});
  CHECK(r.code == cli::kExitInputError);
  r = run({});
  CHECK(r.code == cli::kExitInputError);
  r = run({"classify"});
  CHECK(r.code == cli::kExitInputError);
  r = run({"--tol", "-1", "classify", "--channel", "bit_flip"});
  CHECK(r.code == cli::kExitInputError);

  r = run({"adder", "--bits", "9"});
  CHECK(r.code == cli::kExitInputError);

  const auto path = std::filesystem::temp_directory_path() / "qchannel_bad.json";
  {
    std::ofstream f(path);
    f << "{\"dim\": 2, \"kraus\": [";
  }
  r = run({"classify", "--channel", path.string()});
  CHECK(r.code == cli::kExitInputError);
  CHECK(r.error()["error"] == "ParseError");

  {
    std::ofstream f(path);
    f << R"({"dim": 2, "kraus": [{"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0]]}]})";
  }
  r = run({"classify", "--channel", path.string()});
  CHECK(r.code == cli::kExitInputError);

  {
    std::ofstream f(path);
    f << R"({"dim": 2, "kraus": [{"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [0, 0]]}], "cp_only": false})";
  }
  r = run({"classify", "--channel", path.string()});
  CHECK(r.code == cli::kExitInputError);
}

TEST_CASE("global flags") {
  const auto path = std::filesystem::temp_directory_path() / "qchannel_out.json";
  std::filesystem::remove(path);
  auto r = run({"--out", path.string(), "classify", "--channel", "bit_flip"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  const Json written = Json::parse(f);
  CHECK(written["unital"] == true);

  r = run({"--quiet", "classify", "--channel", "bit_flip"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());

  // Flags are accepted after the verb as well.
  r = run({"classify", "--channel", "bit_flip", "--tol", "1e-6"});
  CHECK(r.code == 0);

  r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("noiseless") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"--seed", "5", "structure", "--channel", "builtin:collective_rotation"},
        std::vector<std::string>{"--seed", "5", "noiseless", "--channel", data("zz_dephasing.json")},
        std::vector<std::string>{"verify-recovery", "--code", "repetition3", "--errors", "x_flips", "--channel",
                                 data("repetition_noise.json")},
        std::vector<std::string>{"kraus-from-choi", "--choi", data("transpose_choi.json")}}) {
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}

TEST_CASE("JSON round trips") {
  std::mt19937_64 rng(31);
  const Matrix m = randomComplex(3, 4, rng);
  const Json j = io::toJson(m);
  CHECK(io::matrixFromJson(j) == m);
  CHECK(io::toJson(io::matrixFromJson(Json::parse(j.dump()))).dump() == j.dump());

  const auto ch = collectiveRotation({});
  const Json cj = io::toJson(ch);
  const auto back = io::channelFromJson(Json::parse(cj.dump()));
  CHECK(io::toJson(back).dump() == cj.dump());

  const auto choiReport = run({"choi", "--channel", "builtin:amplitude_damping"}).json();
  CHECK(io::toJson(io::matrixFromJson(choiReport["choi"])).dump() == choiReport["choi"].dump());
  const auto recovered = run({"kraus-from-choi", "--choi", data("transpose_choi.json")});
  CHECK(recovered.code == cli::kExitPreconditionFailed);
  const auto krausReport = run({"recovery", "--code", "repetition3", "--errors", "x_flips"}).json();
  CHECK(io::toJson(io::channelFromJson(krausReport["recovery"])).dump() == krausReport["recovery"].dump());

  const auto structure = run({"structure", "--channel", "builtin:zz_dephasing"}).json();
  const Json reparsed = Json::parse(structure.dump());
  CHECK(reparsed == structure);
  CHECK(io::toJson(io::matrixFromJson(structure["basis_change"])).dump() == structure["basis_change"].dump());

  const BooleanOracle f(2, 2, {1, 2, 3, 0});
  CHECK(io::toJson(io::oracleFromJson(io::toJson(f))).dump() == io::toJson(f).dump());

  const StateVector psi = randomState(4, rng);
  CHECK(io::toJson(io::stateFromJson(io::toJson(psi))).dump() == io::toJson(psi).dump());
}

TEST_CASE("references") {
  CHECK(io::resolveReference("builtin:bit_flip?p=0.3")["params"]["p"] == 0.3);
  CHECK(io::resolveReference("shor9")["builtin"] == "shor9");
  CHECK(io::resolveReference("builtin:permutation?d=2&n=3&weights=0.5,0.5,0,0,0,0")["params"]["weights"].size() == 6);
  CHECK(io::resolveReference(data("const0.json"))["table"].size() == 2);
  CHECK_THROWS_AS(io::resolveReference(data("missing.json")), Error);
  CHECK(io::builtinErrors("paulis", Json{{"qubit", 2}, {"n", 3}}).size() == 4);
  CHECK(io::builtinChannel("collective_rotation", Json{{"n", 2}}).dim() == 4);
}

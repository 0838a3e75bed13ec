#include "qchannel/cli.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "CLI11.hpp"
#include "qchannel/io.hpp"

namespace qchannel::cli {

namespace {

using io::Json;

struct Options {
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::string outPath;
  bool quiet = false;

  std::string channel;
  std::string other;
  std::string choi;
  std::string code;
  std::string errors;
  std::string error;
  std::string generators;
  std::string space;
  std::string oracle;
  std::string of = "commutant";
  int bits = 1;
  bool operators = false;
};

KrausChannel loadChannel(const std::string& ref) { return io::channelFromJson(io::resolveReference(ref)); }
QuantumCode loadCode(const std::string& ref) { return io::codeFromJson(io::resolveReference(ref)); }
std::vector<Matrix> loadErrors(const std::string& ref) { return io::errorListFromJson(io::resolveReference(ref)); }
Matrix loadMatrix(const std::string& ref) { return io::matrixFromJson(io::readJsonFile(ref)); }
BooleanOracle loadOracle(const std::string& ref) { return io::oracleFromJson(io::readJsonFile(ref)); }

ChoiMatrix loadChoi(const std::string& ref) {
  Matrix m = loadMatrix(ref);
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(m.rows()))));
  if (m.rows() != m.cols() || n * n != m.rows())
    throw Error(ErrorKind::ShapeMismatch, "Choi matrix must be N^2 x N^2");
  return {n, std::move(m)};
}

Json spaceJson(const OperatorSpace& space) {
  Json basis = Json::array();
  for (const auto& b : space.basis()) basis.push_back(io::toJson(b));
  Json out;
  out["dim"] = space.ambientDim();
  out["dimension"] = space.dim();
  out["basis"] = std::move(basis);
  return out;
}

Json structureJson(const AlgebraStructure& s, std::size_t algebraDim) {
  Json blocks = Json::array();
  for (const auto& b : s.blocks) blocks.push_back({{"m", b.multiplicity}, {"n", b.size}, {"offset", b.offset}});
  Json out;
  out["dim"] = s.basisChange.rows();
  out["algebra_dim"] = algebraDim;
  out["blocks"] = std::move(blocks);
  out["basis_change"] = io::toJson(s.basisChange);
  return out;
}

Json verdictJson(const AlgorithmVerdict& v) {
  Json out;
  out["verdict"] = v.verdict == Verdict::Constant ? "constant" : "balanced";
  out["probability"] = v.outcomeProbability;
  return out;
}

Json classifyJson(const ChannelClass& c, Eigen::Index dim) {
  Json out;
  out["dim"] = dim;
  out["completely_positive"] = c.completelyPositive;
  out["trace_preserving"] = c.tracePreserving;
  out["unital"] = c.unital;
  return out;
}

using Handler = std::function<Json(const Options&)>;

std::map<std::string, std::pair<Handler, const char*>> handlers() {
  std::map<std::string, std::pair<Handler, const char*>> h;

  h["classify"] = {[](const Options& o) {
                     if (!o.choi.empty()) {
                       const auto choi = loadChoi(o.choi);
                       return classifyJson(classify(choi, o.tol), choi.blockDim);
                     }
                     const auto ch = loadChannel(o.channel);
                     return classifyJson(classify(ch, o.tol), ch.dim());
                   },
                   "complete positivity iff the Choi matrix is positive"};

  h["choi"] = {[](const Options& o) {
                 const auto choi = choiOf(loadChannel(o.channel));
                 Json out;
                 out["block_dim"] = choi.blockDim;
                 out["choi"] = io::toJson(choi.matrix);
                 return out;
               },
               "Choi matrix (E(e_ij))"};

  h["kraus-from-choi"] = {[](const Options& o) {
                            const auto ch = krausFromChoi(loadChoi(o.choi), o.tol);
                            Json out;
                            out["count"] = ch.size();
                            out["channel"] = io::toJson(ch);
                            return out;
                          },
                          "operator-sum form read off the Choi matrix"};

  h["channels-equal"] = {[](const Options& o) {
                           const auto a = loadChannel(o.channel);
                           const auto b = loadChannel(o.other);
                           const auto u = krausIntertwiner(a, b, o.tol);
                           Json out;
                           out["equal"] = channelsEqual(a, b, o.tol);
                           out["choi_distance"] = choiDistance(a, b);
                           out["intertwiner"] = u ? io::toJson(*u) : Json(nullptr);
                           out["residual"] = u ? Json(intertwinerResidual(a, b, *u)) : Json(nullptr);
                           return out;
                         },
                         "unitary freedom of Kraus representations"};

  h["detect"] = {[](const Options& o) {
                   const auto result = detect(loadCode(o.code), loadMatrix(o.error), o.tol);
                   Json out;
                   out["detectable"] = result.detectable;
                   out["lambda"] = result.lambda ? io::toJson(*result.lambda) : Json(nullptr);
                   out["residual"] = result.residual;
                   return out;
                 },
                 "error detection P E P = lambda P"};

  h["correctable"] = {[](const Options& o) {
                        const auto result = correctability(loadCode(o.code), loadErrors(o.errors), o.tol);
                        Json out;
                        out["correctable"] = result.correctable;
                        out["lambda"] = result.lambdaMatrix ? io::toJson(*result.lambdaMatrix) : Json(nullptr);
                        // 1-based, matching the E_1..E_r labelling of the error list.
                        out["offending_pair"] =
                            result.offendingPair
                                ? Json::array({result.offendingPair->first + 1, result.offendingPair->second + 1})
                                : Json(nullptr);
                        return out;
                      },
                      "Knill-Laflamme conditions P E_i^dagger E_j P = lambda_ij P"};

  h["recovery"] = {[](const Options& o) {
                     const auto code = loadCode(o.code);
                     const auto errors = loadErrors(o.errors);
                     const auto check = correctability(code, errors, o.tol);
                     if (!check.correctable)
                       throw Error(ErrorKind::ConditionViolated, "errors are not correctable for this code");
                     const auto rec = buildRecovery(code, errors, *check.lambdaMatrix, o.tol);
                     Json ranks = Json::array();
                     for (const auto& p : rec.projections) ranks.push_back(std::llround(p.trace().real()));
                     Json out;
                     out["weights"] = rec.weights;
                     out["syndrome_ranks"] = std::move(ranks);
                     out["completed"] = rec.completed;
                     out["kraus_count"] = rec.channel.size();
                     const bool include = o.operators || code.ambientDim() <= 64;
                     out["recovery"] = include ? io::toJson(rec.channel) : Json(nullptr);
                     return out;
                   },
                   "recovery construction from the Knill-Laflamme conditions"};

  h["verify-recovery"] = {[](const Options& o) {
                            const auto code = loadCode(o.code);
                            const auto errors = loadErrors(o.errors);
                            const auto check = correctability(code, errors, o.tol);
                            if (!check.correctable)
                              throw Error(ErrorKind::ConditionViolated, "errors are not correctable for this code");
                            const auto rec = buildRecovery(code, errors, *check.lambdaMatrix, o.tol);
                            const auto result = verifyRecovery(loadChannel(o.channel), rec, code, o.tol, o.seed);
                            Json out;
                            out["max_deviation"] = result.maxDeviation;
                            out["success"] = result.success;
                            out["tol"] = o.tol;
                            out["seed"] = o.seed;
                            return out;
                          },
                          "recovery R(E(rho)) = rho on the code"};

  h["commutant"] = {[](const Options& o) {
                      if (!o.generators.empty())
                        return spaceJson(commutant(io::matrixListFromJson(io::readJsonFile(o.generators)), o.tol));
                      return spaceJson(commutant(loadChannel(o.channel).operators(), o.tol));
                    },
                    "noise commutant"};

  h["interaction-algebra"] = {[](const Options& o) { return spaceJson(interactionAlgebra(loadChannel(o.channel))); },
                              "interaction algebra Alg{E_i, E_i^dagger}"};

  h["fix"] = {[](const Options& o) { return spaceJson(fixedPointSet(loadChannel(o.channel), o.tol)); },
              "fixed-point set of the channel"};

  h["fix-vs-commutant"] = {[](const Options& o) {
                             const auto r = fixEqualsCommutant(loadChannel(o.channel), o.tol);
                             Json out;
                             out["equal"] = r.equal;
                             out["unital"] = r.unital;
                             out["fixed_dim"] = r.fixedDim;
                             out["commutant_dim"] = r.commutantDim;
                             return out;
                           },
                           "fixed points equal the noise commutant iff the channel is unital"};

  h["structure"] = {[](const Options& o) {
                      OperatorSpace space = [&] {
                        if (!o.space.empty()) {
                          const auto mats = io::matrixListFromJson(io::readJsonFile(o.space));
                          if (mats.empty()) throw Error(ErrorKind::ParseError, "--space needs at least one matrix");
                          return OperatorSpace::span(mats.front().rows(), mats);
                        }
                        const auto ch = loadChannel(o.channel);
                        if (o.of == "interaction") return interactionAlgebra(ch);
                        if (o.of != "commutant") throw Error(ErrorKind::InvalidParameter, "--of must be commutant or interaction");
                        return commutant(ch.operators(), o.tol);
                      }();
                      return structureJson(wedderburnStructure(space, o.tol, o.seed), space.dim());
                    },
                    "block structure of finite-dimensional *-algebras"};

  h["noiseless"] = {[](const Options& o) {
                      const auto report = noiselessSubsystems(loadChannel(o.channel), o.tol, o.seed);
                      Json blocks = Json::array();
                      for (const auto& s : report.subsystems)
                        blocks.push_back({{"m", s.multiplicity},
                                          {"n", s.size},
                                          {"offset", s.offset},
                                          {"decoherence_free", s.decoherenceFree}});
                      Json out;
                      out["dim"] = report.structure.basisChange.rows();
                      out["blocks"] = std::move(blocks);
                      out["structure"] = structureJson(report.structure, 0);
                      out["structure"].erase("algebra_dim");
                      return out;
                    },
                    "noiseless subsystems from the noise commutant"};

  h["dead-subspace"] = {[](const Options& o) {
                          const auto dead = deadSubspace(loadChannel(o.channel), o.tol);
                          Json out;
                          out["singular"] = dead.has_value();
                          out["dead_projector"] = dead ? io::toJson(dead->deadProjector) : Json(nullptr);
                          out["hypothesis_holds"] = dead ? Json(dead->hypothesisHolds) : Json(nullptr);
                          out["dead_output_norm"] = dead ? Json(dead->deadOutputNorm) : Json(nullptr);
                          return out;
                        },
                        "operators supported where E(I) vanishes are annihilated"};

  h["deutsch"] = {[](const Options& o) { return verdictJson(deutsch(loadOracle(o.oracle))); },
                  "Deutsch's algorithm"};

  h["deutsch-jozsa"] = {[](const Options& o) {
                          const auto v = deutschJozsa(loadOracle(o.oracle));
                          Json out = verdictJson(v);
                          out["all_zeros_probability"] = v.zeroOutcomeProbability;
                          return out;
                        },
                        "Deutsch-Jozsa algorithm"};

  h["parallelism"] = {[](const Options& o) {
                        Json out;
                        out["state"] = io::toJson(quantumParallelism(loadOracle(o.oracle)));
                        return out;
                      },
                      "quantum parallelism U_f (H^m (x) I)|0>|0>"};

  h["adder"] = {[](const Options& o) {
                  Json out;
                  out["bits"] = o.bits;
                  out["unitary"] = io::toJson(modularAdder(o.bits));
                  return out;
                },
                "modular adder |x>|y> -> |x>|x + y>"};
  return h;
}

void writeError(std::ostream& err, std::string_view kind, const std::string& message) {
  Json e;
  e["error"] = kind;
  e["message"] = message;
  err << e.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  CLI::App app{"qchannel: quantum channel, error correction and noiseless subsystem analysis", "qchannel"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", opts.tol, "relative tolerance for rank, positivity and equality decisions")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "seed for randomized steps");
  app.add_option("--out", opts.outPath, "write the report to this path instead of stdout");
  app.add_flag("--quiet", opts.quiet, "do not print the report to stdout");

  const auto table = handlers();
  auto add = [&](const std::string& verb, const char* help) { return app.add_subcommand(verb, help); };
  const char* channelHelp = "channel JSON file, or builtin:<name>[?key=value&...]";

  add("classify", "complete positivity, trace preservation and unitality")
      ->add_option("--channel", opts.channel, channelHelp);
  app.get_subcommand("classify")->add_option("--choi", opts.choi, "Choi matrix JSON file");
  add("choi", "Choi matrix of a channel")->add_option("--channel", opts.channel, channelHelp)->required();
  add("kraus-from-choi", "Kraus operators from a Choi matrix")->add_option("--choi", opts.choi)->required();
  {
    auto* sub = add("channels-equal", "channel equality and the Kraus intertwining unitary");
    sub->add_option("--channel", opts.channel, channelHelp)->required();
    sub->add_option("--other", opts.other, channelHelp)->required();
  }
  {
    auto* sub = add("detect", "detectability of one error operator");
    sub->add_option("--code", opts.code, "code JSON file or builtin name")->required();
    sub->add_option("--error", opts.error, "matrix JSON file")->required();
  }
  for (const char* verb : {"correctable", "recovery", "verify-recovery"}) {
    auto* sub = add(verb, verb == std::string("correctable")  ? "Knill-Laflamme correctability"
                          : verb == std::string("recovery") ? "synthesize the recovery channel"
                                                            : "check recovery against a noise channel");
    sub->add_option("--code", opts.code, "code JSON file or builtin name")->required();
    sub->add_option("--errors", opts.errors, "error list JSON file or builtin:x_flips / builtin:paulis")->required();
    if (verb == std::string("recovery")) sub->add_flag("--operators", opts.operators, "always include Kraus operators");
    if (verb == std::string("verify-recovery")) sub->add_option("--channel", opts.channel, channelHelp)->required();
  }
  {
    auto* sub = add("commutant", "noise commutant");
    sub->add_option("--channel", opts.channel, channelHelp);
    sub->add_option("--generators", opts.generators, "JSON list of generator matrices");
  }
  add("interaction-algebra", "interaction algebra of a channel")->add_option("--channel", opts.channel, channelHelp)->required();
  add("fix", "fixed-point set of a channel")->add_option("--channel", opts.channel, channelHelp)->required();
  add("fix-vs-commutant", "compare Fix(E) with the noise commutant")
      ->add_option("--channel", opts.channel, channelHelp)
      ->required();
  {
    auto* sub = add("structure", "block structure of an operator algebra");
    sub->add_option("--channel", opts.channel, channelHelp);
    sub->add_option("--of", opts.of, "commutant (default) or interaction");
    sub->add_option("--space", opts.space, "JSON list of matrices spanning a *-algebra");
  }
  add("noiseless", "noiseless subsystems of a unital channel")->add_option("--channel", opts.channel, channelHelp)->required();
  add("dead-subspace", "kernel of E(I) and the annihilation property")
      ->add_option("--channel", opts.channel, channelHelp)
      ->required();
  for (const char* verb : {"deutsch", "deutsch-jozsa", "parallelism"})
    add(verb, "oracle algorithm simulation")->add_option("--oracle", opts.oracle, "oracle JSON file")->required();
  add("adder", "modular adder unitary")->add_option("--bits", opts.bits, "register bits")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    writeError(err, "UsageError", e.what());
    return kExitInputError;
  }

  const auto* sub = app.get_subcommands().front();
  const auto& [handler, reference] = table.at(sub->get_name());
  try {
    if ((sub->get_name() == "classify" || sub->get_name() == "commutant" || sub->get_name() == "structure") &&
        opts.channel.empty() && opts.choi.empty() && opts.generators.empty() && opts.space.empty())
      throw Error(ErrorKind::ParseError, "an input (--channel, --choi, --generators or --space) is required");
    Json report = handler(opts);
    report["paper_ref"] = reference;
    const std::string text = report.dump() + "\n";
    if (!opts.outPath.empty()) {
      std::ofstream file(opts.outPath);
      if (!file) throw Error(ErrorKind::ParseError, "cannot write '" + opts.outPath + "'");
      file << text;
    } else if (!opts.quiet) {
      out << text;
    }
    return kExitOk;
  } catch (const Error& e) {
    writeError(err, to_string(e.kind()), e.message());
    return is_input_error(e.kind()) ? kExitInputError : kExitPreconditionFailed;
  } catch (const nlohmann::json::exception& e) {
    writeError(err, "ParseError", e.what());
    return kExitInputError;
  }
}

}  // namespace qchannel::cli

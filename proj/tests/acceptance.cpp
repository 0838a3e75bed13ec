// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "qchannel/algebra.hpp"
#include "qchannel/algorithms.hpp"
#include "qchannel/qec.hpp"

using namespace qchannel;

namespace {

constexpr double kProbabilityTol = 1e-10;
constexpr double kActionTol = 1e-12;
constexpr double kChoiTol = 1e-9;
constexpr double kLambdaTol = 1e-10;
constexpr double kRecoveryTol = 1e-9;
constexpr double kFixTol = 1e-9;
constexpr double kEncodedTol = 1e-8;
constexpr double kStructureTol = 1e-7;
constexpr double kPropertyTol = 1e-9;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

using Pattern = std::multiset<std::pair<Eigen::Index, Eigen::Index>>;

Pattern pattern(const AlgebraStructure& s) {
  Pattern out;
  for (const auto& b : s.blocks) out.insert({b.multiplicity, b.size});
  return out;
}

Matrix unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

std::vector<std::pair<std::string, KrausChannel>> builtinsUpTo8() {
  std::mt19937_64 rng(kSeed);
  std::vector<std::pair<std::string, KrausChannel>> out;
  out.emplace_back("bit_flip", bitFlip(0.3));
  out.emplace_back("constant_half", constantHalf());
  out.emplace_back("amplitude_damping", amplitudeDamping(0.5));
  const Matrix u1 = randomUnitary(3, rng), u2 = randomUnitary(3, rng), u3 = randomUnitary(3, rng);
  out.emplace_back("random_unitary", randomUnitaryChannel({0.5, 0.3, 0.2}, {u1, u2, u3}));
  {
    std::vector<Vector> psis, phis;
    for (int k = 0; k < 3; ++k) {
      psis.push_back(randomState(3, rng).amplitudes());
      phis.push_back(Vector::Unit(3, k));
    }
    out.emplace_back("entanglement_breaking", entanglementBreaking(psis, phis));
  }
  out.emplace_back("phase_flip", phaseFlip(0.25));
  out.emplace_back("zz_dephasing", zzDephasing(0.2));
  out.emplace_back("collective_rotation", collectiveRotation({}));
  out.emplace_back("permutation", permutationChannel(2, 3));
  out.emplace_back("dead_row(4)", deadRow(4));
  out.emplace_back("dead_row(8)", deadRow(8));
  return out;
}

// Criterion 1
void deutschDeterminism(Outcome& o) {
  double worst = 0.0;
  for (std::uint32_t code = 0; code < 4; ++code) {
    const BooleanOracle f(1, 1, {code & 1u, (code >> 1) & 1u});
    const auto v = deutsch(f);
    const Verdict expected = f.isConstant() ? Verdict::Constant : Verdict::Balanced;
    o.require(v.verdict == expected, "verdict for table " + std::to_string(code));
    worst = std::max(worst, std::abs(v.outcomeProbability - 1.0));
  }
  o.require(worst <= kProbabilityTol, "probability");
  o.note << "max |p-1| = " << worst;
}

// Criterion 2
void deutschJozsaExhaustive(Outcome& o) {
  int constants = 0, balanced = 0;
  double worst = 0.0;
  for (std::uint32_t code = 0; code < 256; ++code) {
    std::vector<std::uint32_t> table;
    for (int x = 0; x < 8; ++x) table.push_back((code >> x) & 1u);
    const BooleanOracle f(3, 1, table);
    if (!f.isConstant() && !f.isBalanced()) continue;
    const auto v = deutschJozsa(f);
    const double target = f.isConstant() ? 1.0 : 0.0;
    worst = std::max(worst, std::abs(v.zeroOutcomeProbability - target));
    if (f.isConstant()) {
      ++constants;
      o.require(v.verdict == Verdict::Constant, "constant verdict");
    } else {
      ++balanced;
      o.require(v.verdict == Verdict::Balanced, "balanced verdict");
    }
  }
  o.require(constants == 2 && balanced == 70, "table counts");
  o.require(worst <= kProbabilityTol, "all-zeros probability");
  o.note << constants << " constant + " << balanced << " balanced, max deviation " << worst;
}

// Criterion 3
void bitFlipAction(Outcome& o) {
  const Matrix out = applyChannel(bitFlip(0.3), unit(2, 0, 0));
  const Matrix expected = 0.7 * unit(2, 0, 0) + 0.3 * unit(2, 1, 1);
  const double err = (out - expected).cwiseAbs().maxCoeff();
  o.require(err <= kActionTol, "entrywise error");
  o.note << "entrywise error " << err;
}

// Criterion 4
void constantHalfAction(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Matrix rho = randomDensity(2, rng);
    worst = std::max(worst, (applyChannel(constantHalf(), rho) - Matrix::Identity(2, 2) / 2.0).norm());
  }
  o.require(worst <= kActionTol, "Frobenius error");
  o.note << "100 densities, max error " << worst;
}

// Criterion 5
void choiRoundTrip(Outcome& o) {
  double worst = 0.0;
  for (const auto& [name, ch] : builtinsUpTo8()) {
    const auto back = krausFromChoi(choiOf(ch));
    const double d = choiDistance(back, ch);
    worst = std::max(worst, d);
    o.require(d <= kChoiTol, name + " distance");
    o.require(back.size() <= static_cast<std::size_t>(ch.dim() * ch.dim()), name + " operator count");
  }
  o.note << "max Choi distance " << worst;
}

// Criterion 6
void unitaryFreedom(Outcome& o) {
  std::mt19937_64 rng(kSeed + 6);
  double worst = 0.0;
  for (const auto& [name, ch] : builtinsUpTo8()) {
    const auto mixed = remix(ch, randomUnitary(static_cast<Eigen::Index>(ch.size()), rng));
    o.require(channelsEqual(mixed, ch), name + " equality");
    const auto u = krausIntertwiner(mixed, ch);
    o.require(u.has_value(), name + " intertwiner");
    if (u) {
      const double r = intertwinerResidual(mixed, ch, *u);
      worst = std::max(worst, r);
      o.require(r <= kChoiTol && isUnitary(*u, kChoiTol), name + " residual");
    }
  }
  o.note << "max intertwiner residual " << worst;
}

// Criterion 7
void zOneUndetectable(Outcome& o) {
  const auto code = makeCode({StateVector::fromBits("000"), StateVector::fromBits("111")});
  const Matrix z1 = embedSingle(gate(Gate::Z), 1, 3);
  o.require(!detect(code, z1).detectable, "Z1 reported detectable");
  const Matrix c = code.isometry().adjoint() * z1 * code.isometry();
  o.require(c(0, 0) == Complex(1.0) && c(1, 1) == Complex(-1.0), "diagonal values");
  o.note << "code-basis diagonal (" << c(0, 0).real() << ", " << c(1, 1).real() << ")";
}

// Criterion 8
void repetitionPipeline(Outcome& o) {
  const auto code = builtinCode("repetition3");
  std::vector<Matrix> errors{Matrix::Identity(8, 8)};
  for (int k = 1; k <= 3; ++k) errors.push_back(embedSingle(gate(Gate::X), k, 3));
  const auto check = correctability(code, errors);
  o.require(check.correctable, "correctability");
  if (!check.correctable) return;
  const double lambdaErr = (*check.lambdaMatrix - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff();
  o.require(lambdaErr <= kLambdaTol, "Lambda = I4");
  const auto rec = buildRecovery(code, errors, *check.lambdaMatrix);
  const KrausChannel noise({std::sqrt(0.85) * errors[0], std::sqrt(0.05) * errors[1], std::sqrt(0.05) * errors[2],
                            std::sqrt(0.05) * errors[3]});
  const auto v = verifyRecovery(noise, rec, code, kRecoveryTol, kSeed, 20);
  o.require(v.maxDeviation <= kRecoveryTol, "recovery deviation");
  o.note << "|Lambda - I| = " << lambdaErr << ", recovery deviation " << v.maxDeviation;
}

// Criterion 9
void shorCode(Outcome& o) {
  const auto code = builtinCode("shor9");
  std::mt19937_64 rng(kSeed + 9);
  double worst = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const auto paulis = singleQubitPaulis(k, 9);
    const auto check = correctability(code, paulis);
    o.require(check.correctable, "qubit " + std::to_string(k) + " correctability");
    if (!check.correctable) continue;
    const auto rec = buildRecovery(code, paulis, *check.lambdaMatrix);
    const Matrix u = embedSingle(randomUnitary(2, rng), k, 9);
    const KrausChannel noise({std::sqrt(0.6) * Matrix::Identity(512, 512), std::sqrt(0.4) * u});
    const auto v = verifyRecovery(noise, rec, code, kRecoveryTol, kSeed + static_cast<std::uint64_t>(k), 20);
    worst = std::max(worst, v.maxDeviation);
    o.require(v.maxDeviation <= kRecoveryTol, "qubit " + std::to_string(k) + " recovery");
  }
  o.note << "9 qubits, max recovery deviation " << worst;
}

// Criterion 10
void noiseCommutants(Outcome& o) {
  const auto pf = phaseFlip(0.25);
  const auto pfc = commutant(pf.operators());
  const OperatorSpace diagonals(2, {unit(2, 0, 0), unit(2, 1, 1)});
  o.require(pfc.dim() == 2 && sameSubspace(pfc, diagonals), "phase flip commutant");
  o.require(pattern(wedderburnStructure(pfc)) == Pattern{{1, 1}, {1, 1}}, "phase flip structure");
  o.require(noiselessSubsystems(pf).subsystems.empty(), "phase flip noiseless subsystems");

  const auto zz = zzDephasing(0.2);
  const auto zzc = commutant(zz.operators());
  o.require(zzc.dim() == 8, "zz commutant dimension");
  o.require(pattern(wedderburnStructure(zzc)) == Pattern{{1, 2}, {1, 2}}, "zz structure");
  const auto report = noiselessSubsystems(zz);
  int dfs = 0;
  for (const auto& s : report.subsystems) dfs += s.decoherenceFree && s.size == 2;
  o.require(dfs == 2, "zz decoherence-free subsystems");
  o.note << "phase flip dim " << pfc.dim() << ", zz dim " << zzc.dim() << " with " << dfs << " DFS qubits";
}

// Criterion 11
void fixVersusCommutant(Outcome& o) {
  const std::vector<std::pair<std::string, KrausChannel>> unitalChannels{
      {"phase_flip", phaseFlip(0.25)},
      {"zz_dephasing", zzDephasing(0.2)},
      {"bit_flip", bitFlip(0.3)},
      {"collective_rotation", collectiveRotation({})},
      {"permutation", permutationChannel(2, 3)}};
  for (const auto& [name, ch] : unitalChannels) {
    const auto r = fixEqualsCommutant(ch);
    o.require(r.equal && r.unital, name);
  }
  const auto ad = amplitudeDamping(0.5);
  const auto r = fixEqualsCommutant(ad);
  o.require(!r.equal && !r.unital, "amplitude damping");

  // Oracle: kernel of the superoperator minus identity, assembled here directly.
  Matrix phi = Matrix::Zero(4, 4);
  for (const auto& e : ad.operators())
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) phi(a * 2 + b, c * 2 + d) += e(a, c) * std::conj(e(b, d));
  const Matrix kernel = Eigen::FullPivLU<Matrix>(phi - Matrix::Identity(4, 4)).kernel();
  const auto fix = fixedPointSet(ad);
  const double residual = fix.residual(unit(2, 0, 0));
  o.require(kernel.cols() == 1 && fix.dim() == 1, "fixed-point dimension");
  o.require(std::abs(kernel(1)) + std::abs(kernel(2)) + std::abs(kernel(3)) <= kFixTol * std::abs(kernel(0)),
            "oracle kernel is |0><0|");
  o.require(residual <= kFixTol, "Fix residual");
  o.note << "Fix(amplitude damping) residual " << residual;
}

// Criterion 12
void collectiveRotationQubit(Outcome& o) {
  const auto ch = collectiveRotation({});
  const auto comm = commutant(ch.operators());
  o.require(comm.dim() == 5, "commutant dimension");
  const auto s = wedderburnStructure(comm, kDefaultTol, kSeed);
  o.require(pattern(s) == Pattern{{4, 1}, {2, 2}}, "structure pattern");
  const auto report = noiselessSubsystems(ch, kDefaultTol, kSeed);
  double worst = 0.0;
  o.require(report.subsystems.size() == 1, "one noiseless block");
  if (report.subsystems.size() == 1) {
    std::mt19937_64 rng(kSeed + 12);
    for (int t = 0; t < 20; ++t) {
      const Matrix rho = report.subsystems.front().encode(randomDensity(2, rng));
      worst = std::max(worst, (applyChannel(ch, rho) - rho).norm());
    }
  }
  o.require(worst <= kEncodedTol, "encoded qubit invariance");
  o.note << "commutant dim " << comm.dim() << ", encoded deviation " << worst;
}

// Criterion 13
void deadSubspaces(Outcome& o) {
  const KrausChannel proj({unit(2, 0, 0)});
  const auto d = deadSubspace(proj);
  o.require(d.has_value() && (d->deadProjector - unit(2, 1, 1)).norm() <= kPropertyTol && d->hypothesisHolds,
            "projection map dead space");
  o.require(applyChannel(proj, unit(2, 1, 1)).norm() == 0.0, "E(|1><1|) = 0");
  const auto row = deadRow(4);
  o.require((applyChannel(row, Matrix::Identity(4, 4)) - 4.0 * unit(4, 0, 0)).norm() <= kActionTol, "E(I) = 4|0><0|");
  const auto dr = deadSubspace(row);
  o.require(dr.has_value() && !dr->hypothesisHolds, "dead row hypothesis");
  o.note << "dead row hypothesis holds: " << (dr && dr->hypothesisHolds ? "yes" : "no");
}

// Criterion 14
void propertySuites(Outcome& o) {
  std::mt19937_64 rng(kSeed + 14);
  int checks = 0;

  // Channel outputs are densities.
  for (const auto& [name, ch] : builtinsUpTo8()) {
    for (int t = 0; t < 5; ++t) {
      const Matrix out = applyChannel(ch, randomDensity(ch.dim(), rng));
      const bool valid = isHermitian(out, kPropertyTol) && std::abs(out.trace() - Complex(1.0)) <= kPropertyTol &&
                         hermitianEigen(out).eigenvalues(0) >= -kPropertyTol;
      o.require(valid, name + " output validity");
      ++checks;
    }
  }

  // Detectable operators form a linear space.
  const auto rep = builtinCode("repetition3");
  const auto form = detectableSpaceForm(rep);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = embedSingle(randomUnitary(2, rng), 1 + t % 3, 3);
    const Matrix b = embedSingle(gate(Gate::X), 1 + (t + 1) % 3, 3);
    const Matrix c = randomComplex(1, 2, rng);
    if (detect(rep, a).detectable && detect(rep, b).detectable) {
      const Matrix sum = c(0, 0) * a + c(0, 1) * b;
      o.require(detect(rep, sum).detectable && form.contains(sum), "detectable linearity");
    }
    ++checks;
  }

  // Lambda is PSD and recovery channels are trace preserving.
  const std::vector<Matrix> flips{Matrix::Identity(8, 8), embedSingle(gate(Gate::X), 1, 3),
                                  embedSingle(gate(Gate::X), 2, 3), embedSingle(gate(Gate::X), 3, 3)};
  for (int t = 0; t < 10; ++t) {
    const Matrix mix = randomComplex(4, 4, rng);
    std::vector<Matrix> errors;
    for (int j = 0; j < 4; ++j) {
      Matrix e = Matrix::Zero(8, 8);
      for (int i = 0; i < 4; ++i) e += mix(i, j) * flips[static_cast<std::size_t>(i)];
      errors.push_back(e);
    }
    const auto check = correctability(rep, errors);
    o.require(check.correctable, "mixed errors correctable");
    if (!check.correctable) continue;
    o.require(hermitianEigen(*check.lambdaMatrix).eigenvalues(0) >= -kPropertyTol * check.lambdaMatrix->norm(),
              "Lambda PSD");
    const auto rec = buildRecovery(rep, errors, *check.lambdaMatrix);
    o.require(rec.channel.isTracePreserving(), "recovery TP");
    ++checks;
  }

  // Algebra closure, bicommutant agreement, structure residual.
  for (const auto& ch : {phaseFlip(0.3), zzDephasing(0.2), collectiveRotation({}), amplitudeDamping(0.4),
                         permutationChannel(2, 3)}) {
    const auto alg = interactionAlgebra(ch);
    double closure = 0.0;
    for (const auto& x : alg.basis()) {
      closure = std::max(closure, alg.residual(x.adjoint()));
      for (const auto& y : alg.basis()) closure = std::max(closure, alg.residual(x * y));
    }
    o.require(closure <= kPropertyTol, "algebra closure");
    const auto comm = commutant(alg);
    o.require(commutant(comm).dim() == alg.dim(), "bicommutant dimension");
    for (const auto* space : {&alg, &comm}) {
      const auto s = wedderburnStructure(*space, kDefaultTol, kSeed);
      o.require(structureResidual(*space, s) <= kStructureTol, "structure residual");
    }
    ++checks;
  }

  // Oracles are permutation matrices and satisfy the phase kickback identity.
  const Vector minus = (Vector::Unit(2, 0) - Vector::Unit(2, 1)) / std::sqrt(2.0);
  std::uniform_int_distribution<std::uint32_t> bit(0, 1);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::uint32_t> table(8);
    for (auto& v : table) v = bit(rng);
    const BooleanOracle f(3, 1, table);
    const Matrix u = oracleUnitary(f);
    bool permutation = true;
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      permutation = permutation && u.col(j).cwiseAbs().sum() == 1.0 && u.col(j).cwiseAbs().maxCoeff() == 1.0;
    o.require(permutation && isUnitary(u, 0.0), "oracle permutation");
    for (int x = 0; x < 8; ++x) {
      const Vector in = kron(Vector::Unit(8, x), minus);
      const double sign = f(static_cast<std::uint32_t>(x)) ? -1.0 : 1.0;
      o.require((u * in - sign * in).norm() <= kActionTol, "phase kickback");
    }
    ++checks;
  }
  o.note << checks << " property groups";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"Deutsch determinism", deutschDeterminism},
      {"Deutsch-Jozsa exhaustive (m = 3)", deutschJozsaExhaustive},
      {"bit flip action", bitFlipAction},
      {"constant-half channel", constantHalfAction},
      {"Choi to Kraus round trip", choiRoundTrip},
      {"unitary freedom of Kraus lists", unitaryFreedom},
      {"Z1 undetectable on the repetition code", zOneUndetectable},
      {"repetition-code pipeline", repetitionPipeline},
      {"Shor code recovery", shorCode},
      {"noise commutants", noiseCommutants},
      {"fixed points versus commutant", fixVersusCommutant},
      {"collective rotation noiseless qubit", collectiveRotationQubit},
      {"dead subspaces", deadSubspaces},
      {"property suites", propertySuites}};

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s  %2zu  %-42s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.note.str().c_str(), seconds);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}

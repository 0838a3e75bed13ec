#pragma once

#include <cstdint>
#include <vector>

#include "qchannel/qcore.hpp"

namespace qchannel {

/// Truth table of f: Z_2^m -> Z_2^k; table[x] = f(x) with x read as a binary
/// number (first input bit most significant).
class BooleanOracle {
 public:
  BooleanOracle(int inputBits, int outputBits, std::vector<std::uint32_t> table);

  int inputBits() const { return m_; }
  int outputBits() const { return k_; }
  const std::vector<std::uint32_t>& table() const { return table_; }
  std::uint32_t operator()(std::uint32_t x) const { return table_[x]; }

  bool isConstant() const;
  /// k = 1 and f takes each value on exactly half of the inputs.
  bool isBalanced() const;

 private:
  int m_;
  int k_;
  std::vector<std::uint32_t> table_;
};

enum class Verdict { Constant, Balanced };

struct AlgorithmVerdict {
  Verdict verdict = Verdict::Constant;
  double outcomeProbability = 0.0;    // probability of the outcome that fixed the verdict
  double zeroOutcomeProbability = 0.0;  // probability of reading all zeros on the input register
};

/// |x>|y> -> |x>|y xor f(x)>, dimension 2^(m+k).
Matrix oracleUnitary(const BooleanOracle& f);
/// U_f (H^m (x) I) |0...0>|0...0> = 2^(-m/2) sum_x |x>|f(x)>.
StateVector quantumParallelism(const BooleanOracle& f);
/// (H (x) I) U_f (H (x) H) |0>|1>, first qubit measured.
AlgorithmVerdict deutsch(const BooleanOracle& f);
/// (H_m (x) I) U_f (H_m (x) H) |0>^m |1>, input register measured.
AlgorithmVerdict deutschJozsa(const BooleanOracle& f);
/// |x>|y> -> |x>|(x + y) mod 2^n>, dimension 4^n.
Matrix modularAdder(int n);

/// H applied to every one of n qubits.
Matrix hadamardLayer(int n);

}  // namespace qchannel

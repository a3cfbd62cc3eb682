#pragma once

// Optimal H2 synthesis under cone-causal structure.
//
// The cost ||T1 - T2 Q|| splits, after removing the inner factor of T2 and
// expanding along z^i, into independent one-variable model matching problems
//     min || T~_i(lambda) - lambda^{|i|} eta~_i(lambda) ||,
// each solved by keeping the causal part of T~_i / lambda^{|i|}. The Youla
// parameter is Q = (sum lambda^{|i|} eta~_i z^i) / T2out and the controller
// K = -Q (1 - Gyu Q)^{-1}.

#include <vector>

#include "conesynth/bivariate.hpp"
#include "conesynth/factorization.hpp"
#include "conesynth/rational.hpp"

namespace conesynth {

enum class ProblemMode { general, disturbance_attenuation };

struct Problem {
  ProblemMode mode = ProblemMode::general;
  RationalTransfer T1;
  RationalTransfer T2;
  RationalTransfer Gyu;
  // Factors whose product is T2 (just {T2} in general mode).
  std::vector<RationalTransfer> T2_factors;

  // T1 = W, T2 = G W, Gyu = G.
  static Problem disturbance_attenuation(const RationalTransfer& G, const RationalTransfer& W);
  static Problem general(const RationalTransfer& T1, const RationalTransfer& T2, const RationalTransfer& Gyu);
};

// Throws InvalidInput naming the offending coefficient when Gyu is not cone
// causal, or the offending root when Gyu is not open-loop stable.
void validate(const Problem& prob, int check_order = 16);

// T~_i for |i| <= S.
struct ModelMatchingFamily {
  int S = 0;
  int T = 0;
  int delay = 0;
  std::vector<LambdaSeries> slices;  // index i + S

  const LambdaSeries& at(int i) const { return slices.at(static_cast<std::size_t>(i + S)); }
};

// eta~_i for |i| <= S (empty series where nothing is kept).
struct EtaFamily {
  int S = 0;
  std::vector<LambdaSeries> eta;  // index i + S

  const LambdaSeries& at(int i) const { return eta.at(static_cast<std::size_t>(i + S)); }
};

ModelMatchingFamily decompose(const BiSeries& R, int S);

// Causal part of T~_i / lambda^{|i|}, truncated at temporal order m.
LambdaSeries solve_model_matching(const LambdaSeries& Ti, int i, int m);

// eta~_i for every index, truncated so that lambda^{|i|} eta~_i has total
// lambda-order <= m (indices with |i| > m are left empty). Indices are
// independent, so the parallel and serial paths give identical results.
EtaFamily solve_family(const ModelMatchingFamily& family, int m, Exec exec = Exec::parallel);

// sqrt( sum_i || anticausal part of T~_i / lambda^{|i|} ||^2 )
double optimal_cost(const ModelMatchingFamily& family);
// Same residual without the per-index shift: the unstructured benchmark.
double centralized_cost(const BiSeries& R);
// Energy of the causal parts discarded by truncating at total order m.
double truncation_tail_energy(const ModelMatchingFamily& family, int m);

// coeffs(i, |i| + j) = eta~_i[j], kept while |i| + j <= m.
BiSeries assemble_G1(const EtaFamily& eta, int m);

RationalTransfer youla_Q(const BiSeries& G1, const InnerOuter& fact);

// -Q (1 - Gyu Q)^{-1}; throws IllPosedFeedback when the loop has no causal inverse.
RationalTransfer controller_K(const RationalTransfer& Q, const RationalTransfer& Gyu, double tol = 1e-12);

struct ClosedLoopNorm {
  double value = 0.0;       // sqrt of the expanded energy over |i| <= S, t <= T
  double tail_bound = 0.0;  // bound on the norm of the discarded t > T tail
  double decay_rate = 0.0;  // max over theta of 1 / |smallest lambda-root| of the denominator
  int S = 0;
  int T = 0;
  bool tail_loose = false;  // tail_bound exceeded the requested tolerance
};

ClosedLoopNorm closed_loop_norm(const Problem& prob, const RationalTransfer& Q, int S, int T,
                                double tol = 1e-6);

struct SynthesisResult {
  int m = 0;
  int S = 0;
  int T = 0;
  InnerOuter fact;
  ModelMatchingFamily family;
  EtaFamily eta;
  BiSeries G1;
  RationalTransfer Q;
  RationalTransfer K;
  ClosedLoopNorm J;
  double J_opt = 0.0;
  double J_centralized = 0.0;
  double tail_energy = 0.0;  // truncation_tail_energy(family, m)
  int q_order = 0;           // lambda-degree of Q
};

SynthesisResult synthesize(const Problem& prob, int m, int S, int T, Exec exec = Exec::parallel);

}  // namespace conesynth

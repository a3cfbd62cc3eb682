#include "conesynth/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conesynth/errors.hpp"

namespace conesynth {

Problem Problem::disturbance_attenuation(const RationalTransfer& G, const RationalTransfer& W) {
  Problem p;
  p.mode = ProblemMode::disturbance_attenuation;
  p.T1 = W;
  p.T2 = rat_mul(G, W);
  p.Gyu = G;
  p.T2_factors = {G, W};
  return p;
}

Problem Problem::general(const RationalTransfer& T1, const RationalTransfer& T2, const RationalTransfer& Gyu) {
  Problem p;
  p.mode = ProblemMode::general;
  p.T1 = T1;
  p.T2 = T2;
  p.Gyu = Gyu;
  p.T2_factors = {T2};
  return p;
}

void validate(const Problem& prob, int check_order) {
  const char* where = "validate";
  const BiSeries g = expand(prob.Gyu, check_order, check_order);
  const auto& b = g.box();
  for (int t = b.temporal_min; t <= b.temporal_max; ++t) {
    for (int i = b.spatial_min; i <= b.spatial_max; ++i) {
      if (t < std::abs(i) && std::abs(g(i, t)) > 1e-12) {
        std::ostringstream msg;
        msg << "Gyu is not cone causal: coefficient " << g(i, t) << " at (i=" << i << ", t=" << t << ")";
        throw Error(ErrorCode::InvalidInput, where, msg.str());
      }
    }
  }
  double worst = std::numeric_limits<double>::infinity();
  double worst_theta = 0.0;
  for (const auto& rec : lambda_roots_on_circle(prob.Gyu.den(), 256)) {
    if (!rec.magnitudes.empty() && rec.magnitudes.front() < worst) {
      worst = rec.magnitudes.front();
      worst_theta = rec.theta;
    }
  }
  if (worst <= 1.0) {
    std::ostringstream msg;
    msg << "Gyu is not open-loop stable: denominator root of magnitude " << worst << " at theta=" << worst_theta;
    throw Error(ErrorCode::InvalidInput, where, msg.str());
  }
}

ModelMatchingFamily decompose(const BiSeries& R, int S) {
  ModelMatchingFamily f;
  f.S = S;
  f.T = R.box().temporal_max;
  f.delay = std::max(0, -R.box().temporal_min);
  f.slices.reserve(2 * S + 1);
  for (int i = -S; i <= S; ++i) {
    const bool inside = i >= R.box().spatial_min && i <= R.box().spatial_max;
    f.slices.push_back(inside ? spatial_slice(R, i) : LambdaSeries{});
  }
  return f;
}

LambdaSeries solve_model_matching(const LambdaSeries& Ti, int i, int m) {
  if (m < 0) return {};
  return Ti.shifted(-std::abs(i)).causal_part().truncated(m);
}

EtaFamily solve_family(const ModelMatchingFamily& family, int m, Exec exec) {
  EtaFamily out;
  out.S = family.S;
  out.eta.resize(family.slices.size());
  const int n = static_cast<int>(family.slices.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (int k = 0; k < n; ++k) {
    const int i = k - family.S;
    out.eta[k] = solve_model_matching(family.slices[k], i, m - std::abs(i));
  }
  return out;
}

double optimal_cost(const ModelMatchingFamily& family) {
  double s = 0.0;
  for (int i = -family.S; i <= family.S; ++i) s += family.at(i).shifted(-std::abs(i)).anticausal_part().norm_sq();
  return std::sqrt(s);
}

double centralized_cost(const BiSeries& R) { return std::sqrt(h2_norm_sq(anticausal_part(R))); }

double truncation_tail_energy(const ModelMatchingFamily& family, int m) {
  double s = 0.0;
  for (int i = -family.S; i <= family.S; ++i) {
    const LambdaSeries c = family.at(i).shifted(-std::abs(i)).causal_part();
    for (int t = std::max(c.temporal_min(), m - std::abs(i) + 1); t <= c.temporal_max(); ++t) s += c(t) * c(t);
  }
  return s;
}

BiSeries assemble_G1(const EtaFamily& eta, int m) {
  if (m < 0) return BiSeries();
  const int reach = std::min(m, eta.S);
  BiSeries G1(SupportBox::symmetric(reach, 0, m));
  for (int i = -reach; i <= reach; ++i) {
    const LambdaSeries& e = eta.at(i);
    if (e.empty()) continue;
    for (int j = std::max(0, e.temporal_min()); j <= e.temporal_max() && std::abs(i) + j <= m; ++j)
      G1.at(i, std::abs(i) + j) = e(j);
  }
  return G1;
}

RationalTransfer youla_Q(const BiSeries& G1, const InnerOuter& fact) {
  return {mul(G1, fact.outer.den()), fact.outer.num()};
}

RationalTransfer controller_K(const RationalTransfer& Q, const RationalTransfer& Gyu, double tol) {
  // -Q/(1 - Gyu Q) = -Qn Gd / (Gd Qd - Gn Qn)
  const BiSeries num = negate(mul(Q.num(), Gyu.den()));
  const BiSeries den = sub(mul(Gyu.den(), Q.den()), mul(Gyu.num(), Q.num())).trimmed(1e-15);
  const auto& b = den.box();
  for (int i = b.spatial_min; i <= b.spatial_max; ++i) {
    if (i != 0 && std::abs(den(i, 0)) > tol) {
      throw Error(ErrorCode::IllPosedFeedback, "controller_K",
                  "1 - Gyu Q has a z-dependent lambda^0 term (z^" + std::to_string(i) + ")");
    }
  }
  if (std::abs(den(0, 0)) < tol || !den.is_temporally_causal(tol)) {
    throw Error(ErrorCode::IllPosedFeedback, "controller_K", "1 - Gyu Q has no causal inverse (lambda^0 term vanishes)");
  }
  BiSeries clean = den;
  for (int i = b.spatial_min; i <= b.spatial_max; ++i)
    if (i != 0 && b.contains(i, 0)) clean.at(i, 0) = 0.0;
  return {num, clean};
}

ClosedLoopNorm closed_loop_norm(const Problem& prob, const RationalTransfer& Q, int S, int T, double tol) {
  const RationalTransfer E = rat_sub(prob.T1, rat_mul(prob.T2, Q));
  const BiSeries e = expand(E, S, T);
  ClosedLoopNorm out;
  out.S = S;
  out.T = T;
  out.value = std::sqrt(h2_norm_sq(e));

  double rate = 0.0;
  for (const auto& rec : lambda_roots_on_circle(E.den(), 512))
    if (!rec.magnitudes.empty()) rate = std::max(rate, 1.0 / rec.magnitudes.front());
  out.decay_rate = rate;
  double last = 0.0;
  for (double v : e.row(e.box().temporal_max)) last += v * v;
  last = std::sqrt(last);
  out.tail_bound = rate < 1.0 ? last * rate / (1.0 - rate) : std::numeric_limits<double>::infinity();
  out.tail_loose = out.tail_bound > tol;
  return out;
}

SynthesisResult synthesize(const Problem& prob, int m, int S, int T, Exec exec) {
  if (m < 0 || S < m || T < m) {
    throw Error(ErrorCode::InvalidInput, "synthesize", "orders must satisfy 0 <= m <= S and m <= T");
  }
  validate(prob);
  SynthesisResult r;
  r.m = m;
  r.S = S;
  r.T = T;
  r.fact = inner_outer(prob.T2_factors.empty() ? std::vector<RationalTransfer>{prob.T2} : prob.T2_factors);
  const BiSeries R = apply_inner_adjoint(prob.T1, r.fact.delay_d, S, T);
  r.family = decompose(R, S);
  r.eta = solve_family(r.family, m, exec);
  r.G1 = assemble_G1(r.eta, m);
  r.Q = youla_Q(r.G1, r.fact);
  r.K = controller_K(r.Q, prob.Gyu);
  r.J = closed_loop_norm(prob, r.Q, S, T);
  r.J_opt = optimal_cost(r.family);
  r.J_centralized = centralized_cost(R);
  r.tail_energy = truncation_tail_energy(r.family, m);
  r.q_order = r.Q.lambda_degree();
  return r;
}

}  // namespace conesynth

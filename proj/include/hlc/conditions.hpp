#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "hlc/errors.hpp"

namespace hlc {

/// Parameters of the colorability conditions. Part j is the distinguished
/// part left uncolored by the random procedure. q are list sizes, D
/// color-degree caps, Delta degree caps; real-valued so that asymptotic
/// regimes can be probed. eps is only read by the list-size helpers.
struct ParamVector {
  std::size_t k = 2;
  std::size_t j = 0;
  std::vector<double> q;
  std::vector<double> D;
  std::vector<double> Delta;
  double eps = 0.0;
};

/// Each condition is normalized to lhs <= rhs on a natural-log scale.
struct ConditionVerdict {
  bool satisfied = false;
  double lhs_log = 0.0;
  double rhs_log = 0.0;
  double margin = 0.0;  // rhs_log - lhs_log; satisfied iff margin >= 0

  static ConditionVerdict from_logs(double lhs_log, double rhs_log) {
    const double margin = rhs_log - lhs_log;
    return {margin >= 0.0, lhs_log, rhs_log, margin};
  }
};

enum class Condition { C1, C2, C3 };

inline std::string to_string(Condition c) {
  switch (c) {
    case Condition::C1: return "C1";
    case Condition::C2: return "C2";
    case Condition::C3: return "C3";
  }
  return "?";
}

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(1 - exp(a)) for a <= 0, accurate at both ends.
inline double log1mexp(double a) {
  if (a == 0.0) return kNegInf;
  return a > -std::numbers::ln2 ? std::log(-std::expm1(a)) : std::log1p(-std::exp(a));
}

/// log(1 - (1 - x)^n) for x in [0, 1], n >= 0.
inline double log_one_minus_pow(double x, double n) {
  if (n == 0.0 || x == 0.0) return kNegInf;
  if (x >= 1.0) return 0.0;
  return log1mexp(n * std::log1p(-x));
}

inline void require_shape(const ParamVector& pv) {
  if (pv.k < 2) throw InvalidInput("k must be at least 2");
  if (pv.j >= pv.k) throw InvalidInput("j must be a part index below k");
}

inline void require_vector(const std::vector<double>& v, std::size_t k, const char* name, bool allow_zero) {
  if (v.size() != k) {
    throw InvalidInput(std::string(name) + " must have " + std::to_string(k) + " entries");
  }
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0 || (!allow_zero && x == 0.0)) {
      throw InvalidInput(std::string(name) + " entries must be " + (allow_zero ? "non-negative" : "positive"));
    }
  }
}

/// ln prod_{i != j} q_i.
inline double log_other_product(const ParamVector& pv) {
  double s = 0.0;
  for (std::size_t i = 0; i < pv.k; ++i) {
    if (i != pv.j) s += std::log(pv.q[i]);
  }
  return s;
}

inline double other_weighted_sum(const ParamVector& pv, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < pv.k; ++i) {
    if (i != pv.j) s += pv.q[i] * w[i];
  }
  return s;
}

/// Smallest integer >= x, ignoring float noise of a few ulps above an integer.
inline double ceil_list_size(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return r;
  return std::ceil(x);
}

/// ln(e * count * inner) with count possibly non-positive.
inline double lll_lhs_log(double count, double log_inner) {
  if (count <= 0.0 || log_inner == kNegInf) return kNegInf;
  return 1.0 + std::log(count) + log_inner;
}

}  // namespace detail

/// D_j (e q_j sum_{i!=j} q_i D_i / D_j)^(1/q_j) <= prod_{i!=j} q_i.
inline ConditionVerdict eval_c1(const ParamVector& pv) {
  detail::require_shape(pv);
  detail::require_vector(pv.q, pv.k, "q", false);
  detail::require_vector(pv.D, pv.k, "D", false);
  const double qj = pv.q[pv.j];
  const double Dj = pv.D[pv.j];
  const double lhs = std::log(Dj) + (1.0 + std::log(qj) + std::log(detail::other_weighted_sum(pv, pv.D)) - std::log(Dj)) / qj;
  return ConditionVerdict::from_logs(lhs, detail::log_other_product(pv));
}

/// e (q_j D_j (sum_{i!=j} q_i D_i - 1) + 1) (1 - (1 - prod_{i!=j} 1/q_i)^{D_j})^{q_j} <= 1.
inline ConditionVerdict eval_c2(const ParamVector& pv) {
  detail::require_shape(pv);
  detail::require_vector(pv.q, pv.k, "q", false);
  detail::require_vector(pv.D, pv.k, "D", true);
  const double qj = pv.q[pv.j];
  const double Dj = pv.D[pv.j];
  const double p = std::exp(-detail::log_other_product(pv));
  const double count = qj * Dj * (detail::other_weighted_sum(pv, pv.D) - 1.0) + 1.0;
  const double inner = qj * detail::log_one_minus_pow(p, Dj);
  return ConditionVerdict::from_logs(detail::lll_lhs_log(count, inner), 0.0);
}

/// e (Delta_j (sum_{i!=j} Delta_i - 1) + 1)
///   (1 - (1 - prod_{i!=j} 1/q_i)^{Delta_j min_i q_i / q_j})^{q_j} <= 1.
inline ConditionVerdict eval_c3(const ParamVector& pv) {
  detail::require_shape(pv);
  detail::require_vector(pv.q, pv.k, "q", false);
  detail::require_vector(pv.Delta, pv.k, "Delta", true);
  const double qj = pv.q[pv.j];
  const double Dj = pv.Delta[pv.j];
  double other_delta = 0.0;
  for (std::size_t i = 0; i < pv.k; ++i) {
    if (i != pv.j) other_delta += pv.Delta[i];
  }
  const double qmin = *std::min_element(pv.q.begin(), pv.q.end());
  const double p = std::exp(-detail::log_other_product(pv));
  const double count = Dj * (other_delta - 1.0) + 1.0;
  const double inner = qj * detail::log_one_minus_pow(p, Dj * qmin / qj);
  return ConditionVerdict::from_logs(detail::lll_lhs_log(count, inner), 0.0);
}

inline ConditionVerdict evaluate(Condition c, const ParamVector& pv) {
  switch (c) {
    case Condition::C1: return eval_c1(pv);
    case Condition::C2: return eval_c2(pv);
    case Condition::C3: return eval_c3(pv);
  }
  throw InvalidInput("unknown condition");
}

/// ceil(((k-1+eps) Delta / ln Delta)^(1/(k-1))), the list size that suffices
/// for max degree Delta once Delta is large.
inline std::size_t main_theorem_list_size(std::size_t k, double eps, double Delta) {
  if (k < 2) throw InvalidInput("k must be at least 2");
  if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
  if (!(Delta >= 3.0)) throw InvalidInput("Delta must be at least 3");
  const double km1 = static_cast<double>(k - 1);
  const double log_base = std::log(km1 + eps) + std::log(Delta) - std::log(std::log(Delta));
  return static_cast<std::size_t>(detail::ceil_list_size(std::exp(log_base / km1)));
}

/// Symmetric local lemma premise e p (d + 1) <= 1.
inline bool lll_premise(double p, double d) {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidInput("p must lie in [0, 1)");
  if (!(d >= 0.0)) throw InvalidInput("d must be non-negative");
  // Compared against 1/e so that p = exp(-1), d = 0 ties exactly.
  return p * (d + 1.0) <= std::exp(-1.0);
}

inline ConditionVerdict lll_verdict(double p, double d) {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidInput("p must lie in [0, 1)");
  if (!(d >= 0.0)) throw InvalidInput("d must be non-negative");
  const double lhs = p == 0.0 ? detail::kNegInf : 1.0 + std::log(p) + std::log1p(d);
  auto v = ConditionVerdict::from_logs(lhs, 0.0);
  v.satisfied = lll_premise(p, d);
  return v;
}

/// ln of (1 - (1 - prod_{i!=j} 1/q_i)^{s/q_j})^{q_j}, the bound on
/// P[L_phi(v) empty] for v in V_j with sum of color-degrees s.
inline double lemma_41_log_bound(const ParamVector& pv, double s) {
  detail::require_shape(pv);
  detail::require_vector(pv.q, pv.k, "q", false);
  if (!(s >= 0.0)) throw InvalidInput("s must be non-negative");
  const double qj = pv.q[pv.j];
  const double p = std::exp(-detail::log_other_product(pv));
  return qj * detail::log_one_minus_pow(p, s / qj);
}

inline double lemma_41_bound(const ParamVector& pv, double s) { return std::exp(lemma_41_log_bound(pv, s)); }

/// 1 - (1 - prod_{i!=j} 1/q_i)^d, the bound on P[color c lost at v] with
/// color-degree d.
inline double claim_31_bound(const ParamVector& pv, double d) {
  detail::require_shape(pv);
  detail::require_vector(pv.q, pv.k, "q", false);
  if (!(d >= 0.0)) throw InvalidInput("d must be non-negative");
  if (d == 0.0) return 0.0;
  const double p = std::exp(-detail::log_other_product(pv));
  if (p >= 1.0) return 1.0;
  return -std::expm1(d * std::log1p(-p));
}

/// Outcome of a corollary check: whether the corollary's own hypotheses hold
/// and the verdict of the condition its proof reduces to, evaluated on the
/// constructed parameters.
struct CorollaryReport {
  bool premises_hold = false;
  std::string premise_note;
  bool large_enough = true;  // the proof's "sufficiently large" side bounds
  Condition witness_condition = Condition::C1;
  ParamVector witness;
  ConditionVerdict verdict;
  int case_used = 0;               // check_corollary_17 only: 1 or 2
  std::vector<std::size_t> order;  // check_corollary_17 only: normalized part order

  bool satisfied() const { return premises_hold && verdict.satisfied; }
};

/// D_i^{eps/(k-1)} list sizes with prod_{i<k} D_i >= D_k^{2(k-1)/eps}; the
/// proof lands on C1 for the last part. If pv.q is given it must meet the
/// list-size hypothesis and is used as is, otherwise minimal integer lists
/// are constructed.
inline CorollaryReport check_corollary_15(const ParamVector& pv, double eps) {
  if (pv.k < 2) throw InvalidInput("k must be at least 2");
  if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
  detail::require_vector(pv.D, pv.k, "D", false);
  const std::size_t k = pv.k;
  const double km1 = static_cast<double>(k - 1);

  CorollaryReport r;
  r.witness_condition = Condition::C1;
  r.witness.k = k;
  r.witness.j = k - 1;
  r.witness.D = pv.D;
  r.witness.eps = eps;
  r.witness.q.resize(k);
  r.premises_hold = true;
  for (std::size_t i = 0; i < k; ++i) {
    const double need = std::pow(pv.D[i], eps / km1);
    if (pv.q.empty()) {
      r.witness.q[i] = detail::ceil_list_size(need);
    } else {
      detail::require_vector(pv.q, k, "q", false);
      r.witness.q[i] = pv.q[i];
      if (pv.q[i] < need * (1.0 - 1e-12)) {
        r.premises_hold = false;
        r.premise_note = "list size of part " + std::to_string(i) + " below D_i^(eps/(k-1))";
      }
    }
  }
  double log_prod = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) log_prod += std::log(pv.D[i]);
  if (log_prod < 2.0 * km1 / eps * std::log(pv.D[k - 1])) {
    r.premises_hold = false;
    r.premise_note = "prod_{i<k} D_i < D_k^(2(k-1)/eps)";
  }
  r.large_enough = pv.D[k - 1] >= std::pow(8.0 * km1 / eps, 1.0 / eps);
  r.verdict = eval_c1(r.witness);
  return r;
}

/// b = (2^{k-1} / (2^{k-1} - 1))^k.
inline double corollary_16_base(std::size_t k) {
  if (k < 2) throw InvalidInput("k must be at least 2");
  const double t = std::ldexp(1.0, static_cast<int>(k - 1));
  return std::pow(t / (t - 1.0), static_cast<double>(k));
}

/// Small lists off the last part and one long list there; the proof lands on
/// C3 for the last part with Delta_i = Delta.
///   variant 1: q_i = 2, q_k = ((2+eps)/k) Delta / log_b Delta
///   variant 2: q_i = ln Delta, q_k = (1+eps) Delta / (ln Delta)^{k-1}
inline CorollaryReport check_corollary_16(std::size_t k, double eps, double Delta, int variant) {
  if (k < 2) throw InvalidInput("k must be at least 2");
  if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
  if (!(Delta > std::numbers::e)) throw InvalidInput("Delta must exceed e");
  if (variant != 1 && variant != 2) throw InvalidInput("variant must be 1 or 2");
  const double kd = static_cast<double>(k);
  const double lnD = std::log(Delta);

  CorollaryReport r;
  r.premises_hold = true;
  r.witness_condition = Condition::C3;
  r.witness.k = k;
  r.witness.j = k - 1;
  r.witness.eps = eps;
  r.witness.Delta.assign(k, Delta);
  r.witness.D.assign(k, Delta);
  r.witness.q.assign(k, 0.0);
  if (variant == 1) {
    const double log_b = lnD / std::log(corollary_16_base(k));
    for (std::size_t i = 0; i + 1 < k; ++i) r.witness.q[i] = 2.0;
    r.witness.q[k - 1] = detail::ceil_list_size((2.0 + eps) / kd * Delta / log_b);
  } else {
    for (std::size_t i = 0; i + 1 < k; ++i) r.witness.q[i] = detail::ceil_list_size(lnD);
    r.witness.q[k - 1] = detail::ceil_list_size((1.0 + eps) * Delta / std::pow(lnD, kd - 1.0));
  }
  r.verdict = eval_c3(r.witness);
  return r;
}

/// Lists of size ((k-1+eps) D_i / ln D_i)^{1/(k-1)}. The part of least D is
/// treated as the last part. If prod of the other D_i >= D_min^{2(k-1)} the
/// proof goes through C1 (case 1), otherwise through C2 (case 2). The
/// witness is reported in the caller's part order with j = the argmin part;
/// `order` lists the original part indices in normalized order (argmin last).
inline CorollaryReport check_corollary_17(const ParamVector& pv, double eps) {
  if (pv.k < 2) throw InvalidInput("k must be at least 2");
  if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
  detail::require_vector(pv.D, pv.k, "D", false);
  const std::size_t k = pv.k;
  const double km1 = static_cast<double>(k - 1);
  for (double d : pv.D) {
    if (!(d > 1.0)) throw InvalidInput("D entries must exceed 1");
  }
  const auto argmin = static_cast<std::size_t>(std::min_element(pv.D.begin(), pv.D.end()) - pv.D.begin());

  CorollaryReport r;
  r.premises_hold = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (i != argmin) r.order.push_back(i);
  }
  r.order.push_back(argmin);

  r.witness.k = k;
  r.witness.j = argmin;
  r.witness.eps = eps;
  r.witness.D = pv.D;
  r.witness.q.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    r.witness.q[i] = detail::ceil_list_size(std::pow((km1 + eps) * pv.D[i] / std::log(pv.D[i]), 1.0 / km1));
  }
  double log_prod = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (i != argmin) log_prod += std::log(pv.D[i]);
  }
  if (log_prod >= 2.0 * km1 * std::log(pv.D[argmin])) {
    r.case_used = 1;
    r.witness_condition = Condition::C1;
  } else {
    r.case_used = 2;
    r.witness_condition = Condition::C2;
  }
  r.verdict = evaluate(r.witness_condition, r.witness);
  return r;
}

}  // namespace hlc

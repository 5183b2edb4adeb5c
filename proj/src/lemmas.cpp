#include <cmath>

#include "opineq/inequalities.hpp"

namespace opineq {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::BadParams, what);
}

double required_r(const InequalityParams& p, const char* what) {
  require(p.r.has_value() && std::isfinite(*p.r) && *p.r >= 0.0, what);
  return *p.r;
}

}  // namespace

InequalityReport check_vector_lemma(LemmaId id, std::span<const Complex> a, std::span<const Complex> b,
                                    const InequalityParams& params, const Tolerances& tol,
                                    std::optional<std::span<const Complex>> e) {
  tol.validate();
  require(a.size() == b.size(), "vectors must have the same length");
  for (auto s : {a, b}) {
    for (Complex z : s) require(std::isfinite(z.real()) && std::isfinite(z.imag()), "vector entries must be finite");
  }

  InequalityReport rep;
  rep.lemma = id;
  rep.params = params;
  const double na = norm(a);
  const double nb = norm(b);

  switch (id) {
    case LemmaId::GRC_VEC: {
      const double r = required_r(params, "GRC_VEC needs r >= 0");
      rep.preconditions_met = na >= nb && nb > 0.0;
      if (!rep.preconditions_met) {
        rep.note = "hypothesis failed: need |a| >= |b| > 0";
        break;
      }
      const double d = norm(sub(a, b));
      // |a|^2r + |b|^2r - 2 |a|^r |b|^r cos(a, b), evaluated as a squared norm
      rep.lhs = norm_sq(combine(std::pow(na, r - 1), a, -std::pow(nb, r - 1), b));
      rep.rhs = r >= 1.0 ? r * r * std::pow(na, 2 * r - 2) * d * d : std::pow(nb, 2 * r - 2) * d * d;
      break;
    }
    case LemmaId::BUZANO: {
      require(e.has_value() && e->size() == a.size(), "BUZANO needs a unit vector e of matching length");
      require(std::abs(norm(*e) - 1.0) <= 1e-12, "BUZANO needs |e| = 1");
      rep.lhs = std::abs(inner(a, *e) * inner(*e, b));
      rep.rhs = 0.5 * (na * nb + std::abs(inner(a, b)));
      break;
    }
    case LemmaId::DUNKL_WILLIAMS_VEC: {
      rep.preconditions_met = na > 0.0 && nb > 0.0;
      if (!rep.preconditions_met) {
        rep.note = "hypothesis failed: need a, b nonzero";
        break;
      }
      rep.lhs = 0.5 * (na + nb) * norm(combine(1.0 / na, a, -1.0 / nb, b));
      rep.rhs = norm(sub(a, b));
      break;
    }
    case LemmaId::DRAGOMIR_QUAD: {
      require(params.lambda != 0.0, "DRAGOMIR_QUAD needs lambda != 0");
      const double ab = std::abs(inner(a, b));
      const double l = std::abs(params.lambda);
      const double d = norm(combine(1.0, a, -params.lambda, b));
      rep.lhs = na * na * nb * nb - ab * ab;
      rep.rhs = na * na * d * d / (l * l);
      break;
    }
    case LemmaId::DRAGOMIR_R: {
      const double r = required_r(params, "DRAGOMIR_R needs r >= 0");
      rep.preconditions_met = norm(sub(b, a)) <= r && r <= na;
      if (!rep.preconditions_met) {
        rep.note = "hypothesis failed: need |y - a| <= r <= |a|";
        break;
      }
      const double re = inner(b, a).real();
      rep.lhs = nb * nb * na * na - re * re;
      rep.rhs = r * r * nb * nb;
      break;
    }
    case LemmaId::DRAGOMIR_RRR: {
      const double r = required_r(params, "DRAGOMIR_RRR needs r >= 0");
      rep.preconditions_met = norm(sub(b, a)) <= r;
      if (!rep.preconditions_met) {
        rep.note = "hypothesis failed: need |y - a| <= r";
        break;
      }
      rep.lhs = nb * na - inner(b, a).real();
      rep.rhs = 0.5 * r * r;
      break;
    }
    case LemmaId::DS_UPPER: {
      require(params.p.has_value() && std::isfinite(*params.p) && *params.p >= 2.0, "DS_UPPER needs p >= 2");
      const double p = *params.p;
      rep.lhs = 2.0 * (std::pow(na, p) + std::pow(nb, p));
      rep.rhs = std::pow(norm(add(a, b)), p) + std::pow(norm(sub(a, b)), p);
      break;
    }
    case LemmaId::DS_LOWER_VEC: {
      require(params.p.has_value() && *params.p > 1.0 && *params.p < 2.0, "DS_LOWER_VEC needs p in (1, 2)");
      const double p = *params.p;
      rep.lhs = std::pow(na + nb, p) + std::pow(std::abs(na - nb), p);
      rep.rhs = std::pow(norm(add(a, b)), p) + std::pow(norm(sub(a, b)), p);
      break;
    }
    case LemmaId::POWER_MEAN: {
      require(params.p.has_value() && std::isfinite(*params.p) && *params.p >= 2.0, "POWER_MEAN needs p >= 2");
      const double q = *params.p / 2.0;
      const double s = na * na;
      const double t = nb * nb;
      rep.lhs = std::pow(0.5 * (s + t), q);
      rep.rhs = 0.5 * (std::pow(s, q) + std::pow(t, q));
      break;
    }
  }
  rep.slack = rep.rhs - rep.lhs;
  rep.passed = !rep.preconditions_met || rep.slack >= -tol.tol_slack;
  return rep;
}

}  // namespace opineq

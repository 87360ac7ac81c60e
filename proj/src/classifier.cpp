#include "polyharm/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace polyharm {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

std::string to_string(Status s) {
  switch (s) {
    case Status::NoNontrivialSolution: return "no_nontrivial_solution";
    case Status::ExistsNontrivial: return "exists_nontrivial";
    default: return "inconclusive";
  }
}

std::string to_string(CouplingForm f) {
  return f == CouplingForm::Cross ? "cross" : "self_coupled";
}

std::string to_string(NodeStatus s) {
  return s == NodeStatus::MustVanish ? "must_vanish" : "unconstrained";
}

std::string to_string(SystemStructure s) {
  switch (s) {
    case SystemStructure::ZeroSolution: return "zero_solution";
    case SystemStructure::AtMostOneNonzero: return "at_most_one_nonzero";
    case SystemStructure::SomeVanish: return "some_vanish";
    default: return "no_information";
  }
}

void validate(const ProblemParams& params) {
  if (params.N < 1) throw std::invalid_argument("params: N must be >= 1");
  if (params.m < 1) throw std::invalid_argument("params: m must be >= 1");
  if (!(params.p > 0.0) || !(params.q > 0.0))
    throw std::invalid_argument("params: p, q must be positive");
  validate_kernel(params.kernel, params.N);
}

RegionThresholds sharp_region_thresholds(int N, int m, double alpha) {
  if (!(N > 2 * m)) throw std::invalid_argument("region: needs N > 2m");
  if (!(alpha > 0.0) || !(alpha < N))
    throw std::invalid_argument("region: needs 0 < alpha < N");
  RegionThresholds t;
  t.min_threshold = (N - alpha) / double(N - 2 * m);
  t.sum_threshold = (2.0 * N - alpha) / double(N - 2 * m);
  return t;
}

bool in_existence_region(int N, int m, double alpha, double p, double q) {
  const RegionThresholds t = sharp_region_thresholds(N, m, alpha);
  return std::min(p, q) > t.min_threshold && p + q > t.sum_threshold;
}

Verdict classify_single(const ProblemParams& params) {
  validate(params);
  const int N = params.N, m = params.m;
  const double p = params.p, q = params.q;
  const bool sum_ge2 = p + q >= 2.0;
  const bool p_ge1 = p >= 1.0;
  const bool high_dim = N > 2 * m;

  Verdict v;
  auto clause = [&](const std::string& id, const std::string& cond, bool sat) {
    v.clauses.push_back({id, cond, sat});
    return sat;
  };
  auto decide = [&](Status st, const std::string& why) {
    v.status = st;
    v.reason = why;
  };

  // (a) reversed operator sign: Delta^m u >= (Psi*u^p) u^q forces u == 0
  // when p+q >= 2, or when N > 2m and p >= 1.
  const bool a_fires =
      params.sign == Sign::Minus && (sum_ge2 || (high_dim && p_ge1));
  clause("sign-minus-liouville",
         "sign minus and (p+q >= 2 or (N > 2m and p >= 1)); p+q = " + fmt(p + q),
         a_fires);
  if (a_fires) {
    decide(Status::NoNontrivialSolution,
           "reversed-sign inequality admits no nontrivial non-negative solution");
    return v;
  }
  if (params.sign == Sign::Minus) {
    decide(Status::Inconclusive, "no clause applies to these minus-sign exponents");
    return v;
  }

  // (b) low dimension
  const bool b_fires = (N >= 1 && N <= 2) && (p_ge1 || sum_ge2);
  clause("low-dimension-liouville",
         "1 <= N <= 2 and (p >= 1 or p+q >= 2); N = " + fmt(N), b_fires);
  if (b_fires) {
    decide(Status::NoNontrivialSolution, "dimension N <= 2 forbids nontrivial solutions");
    return v;
  }

  // (c) kernel integral divergence: int_{|y|>1} |y|^(-p(N-2m)) Psi(|y|) dy = inf
  bool c_fires = false;
  if (high_dim && (p_ge1 || sum_ge2)) {
    const IntegralCondition ic = integral_condition_ii1(params.kernel, N, m, p);
    c_fires = ic.holds == Ternary::True;
    clause("kernel-integral-liouville",
           "N > 2m, (p >= 1 or p+q >= 2), and the kernel integral diverges: " +
               ic.detail,
           c_fires);
  } else {
    clause("kernel-integral-liouville",
           "N > 2m and (p >= 1 or p+q >= 2) required before the integral test",
           false);
  }
  if (c_fires) {
    decide(Status::NoNontrivialSolution,
           "slow kernel decay makes the convolution term too strong");
    return v;
  }

  // (d) kernel tail weight: limsup r^(2N-(N-2m)(p+q)) Psi(r) > 0
  bool d_fires = false;
  if (high_dim && sum_ge2) {
    d_fires = tail_condition_ii2(params.kernel, N, m, p + q);
    clause("kernel-tail-liouville",
           "N > 2m, p+q >= 2, and limsup r^(2N-(N-2m)(p+q)) Psi(r) > 0 with p+q = " +
               fmt(p + q),
           d_fires);
  } else {
    clause("kernel-tail-liouville",
           "N > 2m and p+q >= 2 required before the tail test", false);
  }
  if (d_fires) {
    decide(Status::NoNontrivialSolution,
           "kernel tail is heavy enough to exclude nontrivial solutions");
    return v;
  }

  // (e) sharp Riesz region
  const auto* riesz = std::get_if<RieszPower>(&params.kernel);
  if (riesz && high_dim && p_ge1 && q > 1.0) {
    const RegionThresholds t = sharp_region_thresholds(N, m, riesz->alpha);
    const bool inside = in_existence_region(N, m, riesz->alpha, p, q);
    clause("riesz-sharp-region",
           "min{p,q} > " + fmt(t.min_threshold) + " and p+q > " +
               fmt(t.sum_threshold) + " (strict); min = " + fmt(std::min(p, q)) +
               ", sum = " + fmt(p + q),
           inside);
    if (inside) {
      decide(Status::ExistsNontrivial,
             "exponents lie strictly inside the sharp existence region");
    } else {
      decide(Status::NoNontrivialSolution,
             "exponents lie outside (or on the boundary of) the sharp region");
    }
    return v;
  }
  clause("riesz-sharp-region",
         "needs Riesz kernel, N > 2m, p >= 1, q > 1 to decide existence", false);

  decide(Status::Inconclusive, "no decisive clause applies");
  return v;
}

RegionTable region_boundary_table(int N, int m, double alpha, double p_lo,
                                  double p_hi, double q_lo, double q_hi,
                                  int samples) {
  if (samples < 1) throw std::invalid_argument("region table: samples must be >= 1");
  if (!(p_lo > 0.0) || !(p_hi >= p_lo) || !(q_lo > 0.0) || !(q_hi >= q_lo))
    throw std::invalid_argument("region table: bad exponent range");
  RegionTable table;
  table.N = N;
  table.m = m;
  table.alpha = alpha;
  table.thresholds = sharp_region_thresholds(N, m, alpha);
  ProblemParams params;
  params.N = N;
  params.m = m;
  params.sign = Sign::Plus;
  params.kernel = RieszPower{alpha};
  for (int i = 0; i < samples; ++i) {
    const double p =
        (samples == 1) ? p_lo : p_lo + (p_hi - p_lo) * i / double(samples - 1);
    for (int j = 0; j < samples; ++j) {
      const double q =
          (samples == 1) ? q_lo : q_lo + (q_hi - q_lo) * j / double(samples - 1);
      params.p = p;
      params.q = q;
      table.rows.push_back({p, q, classify_single(params).status});
    }
  }
  return table;
}

void write_region_csv(std::ostream& os, const RegionTable& table) {
  os << "p,q,verdict,q_boundary_min,q_boundary_sum\n";
  os.precision(17);
  for (const RegionRow& row : table.rows) {
    os << row.p << ',' << row.q << ',' << to_string(row.status) << ','
       << table.thresholds.min_threshold << ','
       << (table.thresholds.sum_threshold - row.p) << '\n';
  }
}

void validate(const SystemSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("system: n must be >= 1");
  if (spec.N < 1 || spec.m < 1)
    throw std::invalid_argument("system: N, m must be >= 1");
  if (!(spec.N > 2 * spec.m))
    throw std::invalid_argument("system: needs N > 2m");
  auto square = [&](size_t rows) { return int(rows) == spec.n; };
  if (!square(spec.e.size()) || !square(spec.p.size()) || !square(spec.q.size()) ||
      !square(spec.kernels.size()))
    throw std::invalid_argument("system: matrices must be n x n");
  for (int i = 0; i < spec.n; ++i) {
    if (!square(spec.e[i].size()) || !square(spec.p[i].size()) ||
        !square(spec.q[i].size()) || !square(spec.kernels[i].size()))
      throw std::invalid_argument("system: matrices must be n x n");
    for (int j = 0; j < spec.n; ++j) {
      if (spec.e[i][j] != 0 && spec.e[i][j] != 1)
        throw std::invalid_argument("system: adjacency entries must be 0 or 1");
      if (spec.e[i][j] != spec.e[j][i])
        throw std::invalid_argument("system: adjacency must be symmetric");
      if (spec.e[i][j] == 1) {
        if (!(spec.p[i][j] >= 1.0))
          throw std::invalid_argument("system: edge exponents need p_ij >= 1");
        if (!(spec.q[i][j] > 0.0))
          throw std::invalid_argument("system: edge exponents need q_ij > 0");
        validate_kernel(spec.kernels[i][j], spec.N);
      }
    }
  }
}

SystemVerdict classify_system(const SystemSpec& spec) {
  validate(spec);
  SystemVerdict out;
  out.nodes.assign(spec.n, NodeStatus::Unconstrained);

  // Pairwise elimination.  For each adjacent pair (k >= l to cover self
  // loops once) check the exponent hypotheses of the pair clause and the
  // joint kernel tail condition, both directions.
  std::vector<std::vector<bool>> pair_applied(spec.n, std::vector<bool>(spec.n, false));
  for (int k = 0; k < spec.n; ++k) {
    for (int l = 0; l <= k; ++l) {
      if (spec.e[k][l] != 1) continue;
      PairFinding f;
      f.k = k;
      f.l = l;
      if (spec.form == CouplingForm::Cross) {
        f.exponents_ok = (spec.p[k][l] + spec.q[k][l] >= 2.0) &&
                         (spec.p[l][k] + spec.q[l][k] >= 2.0);
      } else {
        f.exponents_ok = spec.p[k][l] >= 1.0 && spec.q[k][l] >= 1.0 &&
                         spec.p[l][k] >= 1.0 && spec.q[l][k] >= 1.0;
      }
      // limsup of the min is positive iff both weighted kernels keep a
      // positive limsup.
      f.tail_ok =
          tail_condition_ii2(spec.kernels[k][l], spec.N, spec.m,
                             spec.p[k][l] + spec.q[k][l]) &&
          tail_condition_ii2(spec.kernels[l][k], spec.N, spec.m,
                             spec.p[l][k] + spec.q[l][k]);
      f.applied = f.exponents_ok && f.tail_ok;
      out.pairs.push_back(f);

      std::ostringstream cond;
      cond << "pair (" << k << "," << l << "): "
           << (spec.form == CouplingForm::Cross
                   ? "p+q >= 2 both directions"
                   : "p, q >= 1 in all four exponents")
           << " and joint kernel tail condition";
      out.clauses.push_back({spec.form == CouplingForm::Cross
                                 ? "system-pair-vanish"
                                 : "system-pair-alternative",
                             cond.str(), f.applied});

      if (!f.applied) continue;
      pair_applied[k][l] = pair_applied[l][k] = true;
      if (spec.form == CouplingForm::Cross) {
        out.nodes[k] = NodeStatus::MustVanish;
        out.nodes[l] = NodeStatus::MustVanish;
      } else if (k == l) {
        // self loop: u_k == 0 or u_k == 0
        out.nodes[k] = NodeStatus::MustVanish;
      }
    }
  }

  const int vanished = int(std::count(out.nodes.begin(), out.nodes.end(),
                                      NodeStatus::MustVanish));

  // Complete-graph self-coupled case: every off-diagonal pair eliminated
  // leaves at most one nonzero component.
  bool complete_selfcoupled = spec.form == CouplingForm::SelfCoupled && spec.n >= 2;
  if (complete_selfcoupled) {
    for (int i = 0; i < spec.n && complete_selfcoupled; ++i)
      for (int j = 0; j < i && complete_selfcoupled; ++j)
        if (!pair_applied[i][j]) complete_selfcoupled = false;
  }

  if (vanished == spec.n) {
    out.structure = SystemStructure::ZeroSolution;
    out.reason = "every component must vanish; the only solution is (0,...,0)";
  } else if (complete_selfcoupled) {
    out.structure = SystemStructure::AtMostOneNonzero;
    out.reason =
        "pairwise elimination leaves at most one nonzero component, and any "
        "nonzero component satisfies (-Delta)^m u_j >= 0";
  } else if (vanished > 0) {
    out.structure = SystemStructure::SomeVanish;
    out.reason = std::to_string(vanished) + " of " + std::to_string(spec.n) +
                 " components must vanish";
  } else {
    out.structure = SystemStructure::NoInformation;
    out.reason = "no pair satisfies the elimination hypotheses";
  }
  out.decisive = out.structure != SystemStructure::NoInformation;
  return out;
}

void to_json(nlohmann::json& j, const ProblemParams& v) {
  j = nlohmann::json{{"N", v.N},           {"m", v.m},
                     {"sign", to_string(v.sign)}, {"kernel", v.kernel},
                     {"p", v.p},           {"q", v.q}};
}

void from_json(const nlohmann::json& j, ProblemParams& v) {
  j.at("N").get_to(v.N);
  j.at("m").get_to(v.m);
  const std::string sign = j.value("sign", "plus");
  if (sign == "plus")
    v.sign = Sign::Plus;
  else if (sign == "minus")
    v.sign = Sign::Minus;
  else
    throw std::invalid_argument("params json: sign must be plus or minus");
  j.at("kernel").get_to(v.kernel);
  j.at("p").get_to(v.p);
  j.at("q").get_to(v.q);
}

void to_json(nlohmann::json& j, const Clause& v) {
  j = nlohmann::json{{"id", v.id}, {"condition", v.condition}, {"satisfied", v.satisfied}};
}

void to_json(nlohmann::json& j, const Verdict& v) {
  j = nlohmann::json{{"status", to_string(v.status)},
                     {"clauses", v.clauses},
                     {"reason", v.reason}};
}

void to_json(nlohmann::json& j, const SystemSpec& v) {
  j = nlohmann::json{{"n", v.n},
                     {"N", v.N},
                     {"m", v.m},
                     {"form", to_string(v.form)},
                     {"e", v.e},
                     {"p", v.p},
                     {"q", v.q},
                     {"kernels", v.kernels}};
}

void from_json(const nlohmann::json& j, SystemSpec& v) {
  j.at("n").get_to(v.n);
  j.at("N").get_to(v.N);
  j.at("m").get_to(v.m);
  const std::string form = j.value("form", "cross");
  if (form == "cross")
    v.form = CouplingForm::Cross;
  else if (form == "self_coupled")
    v.form = CouplingForm::SelfCoupled;
  else
    throw std::invalid_argument("system json: form must be cross or self_coupled");
  j.at("e").get_to(v.e);
  j.at("p").get_to(v.p);
  j.at("q").get_to(v.q);
  v.kernels.clear();
  for (const auto& row : j.at("kernels")) {
    std::vector<Kernel> krow;
    for (const auto& cell : row) krow.push_back(cell.get<Kernel>());
    v.kernels.push_back(std::move(krow));
  }
}

void to_json(nlohmann::json& j, const PairFinding& v) {
  j = nlohmann::json{{"k", v.k},
                     {"l", v.l},
                     {"exponents_ok", v.exponents_ok},
                     {"tail_ok", v.tail_ok},
                     {"applied", v.applied}};
}

void to_json(nlohmann::json& j, const SystemVerdict& v) {
  std::vector<std::string> nodes;
  for (NodeStatus s : v.nodes) nodes.push_back(to_string(s));
  j = nlohmann::json{{"nodes", nodes},
                     {"structure", to_string(v.structure)},
                     {"decisive", v.decisive},
                     {"pairs", v.pairs},
                     {"clauses", v.clauses},
                     {"reason", v.reason}};
}

}  // namespace polyharm

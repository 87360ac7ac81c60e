#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

#include "polyharm/classifier.hpp"

using namespace polyharm;

namespace {

ProblemParams riesz_params(int N, int m, double alpha, double p, double q,
                           Sign sign = Sign::Plus) {
  ProblemParams prm;
  prm.N = N;
  prm.m = m;
  prm.sign = sign;
  prm.kernel = RieszPower{alpha};
  prm.p = p;
  prm.q = q;
  return prm;
}

bool fired(const Verdict& v, const std::string& id) {
  for (const auto& c : v.clauses)
    if (c.id == id && c.satisfied) return true;
  return false;
}

SystemSpec two_node_cross() {
  SystemSpec s;
  s.n = 2;
  s.N = 5;
  s.m = 1;
  s.form = CouplingForm::Cross;
  s.e = {{0, 1}, {1, 0}};
  s.p = {{1.0, 1.5}, {1.5, 1.0}};
  s.q = {{1.0, 1.0}, {1.0, 1.0}};
  s.kernels = {{RieszPower{2.0}, RieszPower{2.0}},
               {RieszPower{2.0}, RieszPower{2.0}}};
  return s;
}

}  // namespace

TEST_CASE("single-inequality worked examples") {
  // Inside the sharp region: min{2,2} > 1 and 4 > 8/3.
  Verdict v = classify_single(riesz_params(5, 1, 2.0, 2.0, 2.0));
  CHECK(v.status == Status::ExistsNontrivial);
  CHECK(fired(v, "riesz-sharp-region"));

  // min{p,q} = 1 is not strictly above the threshold 1.
  CHECK(classify_single(riesz_params(5, 1, 2.0, 1.0, 1.5)).status ==
        Status::NoNontrivialSolution);

  // Reversed operator sign with p + q >= 2.
  Verdict vm = classify_single(riesz_params(5, 1, 2.0, 2.0, 2.0, Sign::Minus));
  CHECK(vm.status == Status::NoNontrivialSolution);
  CHECK(fired(vm, "sign-minus-liouville"));
  // ... but not with p + q < 2 where that clause is silent.
  CHECK(classify_single(riesz_params(5, 1, 2.0, 0.5, 0.6, Sign::Minus))
            .status == Status::Inconclusive);

  // Low dimension N <= 2m kills everything with p >= 1 or p+q >= 2.
  Verdict vl = classify_single(riesz_params(2, 1, 1.5, 2.0, 2.0));
  CHECK(vl.status == Status::NoNontrivialSolution);
  CHECK(fired(vl, "low-dimension-liouville"));

  // Divergent kernel moment: N=5, m=1, alpha=2, p=1 gives
  // p(N-2m)+alpha = 5 <= N.
  Verdict vi = classify_single(riesz_params(5, 1, 2.0, 1.0, 3.0));
  CHECK(vi.status == Status::NoNontrivialSolution);
  CHECK(fired(vi, "kernel-integral-liouville"));

  // Heavy kernel tail: p+q <= (2N-alpha)/(N-2m) = 8/3 with p+q >= 2.
  Verdict vt = classify_single(riesz_params(5, 1, 2.0, 1.3, 1.3));
  CHECK(vt.status == Status::NoNontrivialSolution);
  CHECK(fired(vt, "kernel-tail-liouville"));

  // Conditions are reported with the numbers substituted in.
  bool has_digits = false;
  for (const auto& c : v.clauses)
    if (c.condition.find_first_of("0123456789") != std::string::npos)
      has_digits = true;
  CHECK(has_digits);
}

TEST_CASE("sharp region thresholds and membership") {
  RegionThresholds t = sharp_region_thresholds(5, 1, 2.0);
  CHECK(t.min_threshold == doctest::Approx(1.0));
  CHECK(t.sum_threshold == doctest::Approx(8.0 / 3.0));
  RegionThresholds t2 = sharp_region_thresholds(9, 2, 3.0);
  CHECK(t2.min_threshold == doctest::Approx(1.2));
  CHECK(t2.sum_threshold == doctest::Approx(3.0));

  CHECK(in_existence_region(5, 1, 2.0, 2.0, 2.0));
  CHECK(!in_existence_region(5, 1, 2.0, 1.0, 2.0));   // min at threshold
  CHECK(!in_existence_region(5, 1, 2.0, 1.3, 4.0 / 3.0 + 0.03));
  CHECK(in_existence_region(9, 2, 3.0, 1.25, 2.2));
  CHECK(!in_existence_region(9, 2, 3.0, 1.2, 2.2));   // min at threshold
  CHECK(!in_existence_region(9, 2, 3.0, 1.4, 1.6));   // sum at threshold
}

TEST_CASE("boundary equality always classifies as nonexistence") {
  // Exactly on the min boundary, sum strictly inside.
  CHECK(classify_single(riesz_params(5, 1, 2.0, 1.0, 2.5)).status ==
        Status::NoNontrivialSolution);
  // Exactly on the sum boundary, min strictly inside.
  CHECK(classify_single(riesz_params(5, 1, 2.0, 1.3, 8.0 / 3.0 - 1.3))
            .status == Status::NoNontrivialSolution);
  CHECK(classify_single(riesz_params(9, 2, 3.0, 1.2, 2.2)).status ==
        Status::NoNontrivialSolution);
  CHECK(classify_single(riesz_params(9, 2, 3.0, 1.4, 1.6)).status ==
        Status::NoNontrivialSolution);
}

TEST_CASE("riesz classification is total and matches the region") {
  // On the grid p >= 1, q > 1 the sharp clause always decides, and it must
  // agree with the region membership predicate.
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      double p = 1.0 + 0.15 * i;
      double q = 1.01 + 0.15 * j;
      Verdict v = classify_single(riesz_params(5, 1, 2.0, p, q));
      CHECK(v.status != Status::Inconclusive);
      CHECK((v.status == Status::ExistsNontrivial) ==
            in_existence_region(5, 1, 2.0, p, q));
    }
  }
}

TEST_CASE("existence region is upward closed") {
  const double step = 0.12;
  std::vector<std::vector<bool>> inside(30, std::vector<bool>(30));
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j)
      inside[i][j] =
          in_existence_region(9, 2, 3.0, 1.0 + step * i, 1.0 + step * j);
  for (int i = 0; i + 1 < 30; ++i) {
    for (int j = 0; j + 1 < 30; ++j) {
      if (inside[i][j]) {
        CHECK(inside[i + 1][j]);
        CHECK(inside[i][j + 1]);
      }
    }
  }
}

TEST_CASE("region table rows carry both boundary curves") {
  RegionTable tbl = region_boundary_table(5, 1, 2.0, 0.5, 3.5, 0.5, 3.5, 7);
  CHECK(tbl.rows.size() == 49);
  CHECK(tbl.thresholds.min_threshold == doctest::Approx(1.0));
  for (const auto& row : tbl.rows) {
    Verdict v = classify_single(riesz_params(5, 1, 2.0, row.p, row.q));
    CHECK(v.status == row.status);
  }
  std::ostringstream os;
  write_region_csv(os, tbl);
  std::string csv = os.str();
  CHECK(csv.find("p,q,verdict,q_boundary_min,q_boundary_sum") !=
        std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 50);  // header + rows
  CHECK_THROWS_AS(region_boundary_table(5, 1, 2.0, 0.5, 3.5, 0.5, 3.5, 0),
                  std::invalid_argument);
}

TEST_CASE("cross-coupled pair forces both components to vanish") {
  SystemSpec s = two_node_cross();
  SystemVerdict v = classify_system(s);
  CHECK(v.decisive);
  CHECK(v.structure == SystemStructure::ZeroSolution);
  REQUIRE(v.nodes.size() == 2);
  CHECK(v.nodes[0] == NodeStatus::MustVanish);
  CHECK(v.nodes[1] == NodeStatus::MustVanish);
  REQUIRE(!v.pairs.empty());
  CHECK(v.pairs[0].exponents_ok);
  CHECK(v.pairs[0].tail_ok);
  CHECK(v.pairs[0].applied);

  // Lighten one kernel so the joint tail condition fails: no information.
  SystemSpec weak = two_node_cross();
  weak.p = {{1.0, 4.0}, {4.0, 1.0}};
  weak.q = {{1.0, 4.0}, {4.0, 1.0}};
  SystemVerdict wv = classify_system(weak);
  CHECK(!wv.decisive);
  CHECK(wv.structure == SystemStructure::NoInformation);
  CHECK(wv.nodes[0] == NodeStatus::Unconstrained);
}

TEST_CASE("self-coupled systems eliminate all but one component") {
  // Complete graph on three nodes, self-coupled form: at most one survives.
  SystemSpec s;
  s.n = 3;
  s.N = 5;
  s.m = 1;
  s.form = CouplingForm::SelfCoupled;
  s.e = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  s.p.assign(3, std::vector<double>(3, 1.0));
  s.q.assign(3, std::vector<double>(3, 1.0));
  s.kernels.assign(3, std::vector<Kernel>(3, RieszPower{2.0}));
  SystemVerdict v = classify_system(s);
  CHECK(v.decisive);
  CHECK(v.structure == SystemStructure::AtMostOneNonzero);

  // A self-loop in the self-coupled form acts like a single inequality and
  // kills its own node.
  SystemSpec loop = s;
  loop.e = {{1, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  SystemVerdict lv = classify_system(loop);
  CHECK(lv.nodes[0] == NodeStatus::MustVanish);
  CHECK(lv.nodes[1] == NodeStatus::Unconstrained);
  CHECK(lv.structure == SystemStructure::SomeVanish);
}

TEST_CASE("system verdicts are invariant under node relabeling") {
  SystemSpec s;
  s.n = 3;
  s.N = 5;
  s.m = 1;
  s.form = CouplingForm::Cross;
  s.e = {{0, 1, 0}, {1, 0, 0}, {0, 0, 0}};
  s.p = {{1.0, 1.5, 1.0}, {1.5, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  s.q = {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  s.kernels.assign(3, std::vector<Kernel>(3, RieszPower{2.0}));
  SystemVerdict base = classify_system(s);
  CHECK(base.nodes[0] == NodeStatus::MustVanish);
  CHECK(base.nodes[1] == NodeStatus::MustVanish);
  CHECK(base.nodes[2] == NodeStatus::Unconstrained);
  CHECK(base.structure == SystemStructure::SomeVanish);

  std::vector<int> perm{2, 0, 1};  // new index -> old index
  SystemSpec ps = s;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ps.e[i][j] = s.e[perm[i]][perm[j]];
      ps.p[i][j] = s.p[perm[i]][perm[j]];
      ps.q[i][j] = s.q[perm[i]][perm[j]];
      ps.kernels[i][j] = s.kernels[perm[i]][perm[j]];
    }
  }
  SystemVerdict pv = classify_system(ps);
  CHECK(pv.structure == base.structure);
  CHECK(pv.decisive == base.decisive);
  for (int i = 0; i < 3; ++i) CHECK(pv.nodes[i] == base.nodes[perm[i]]);
}

TEST_CASE("specification validation") {
  SystemSpec s = two_node_cross();
  s.e[0][1] = 0;  // asymmetric adjacency
  CHECK_THROWS(validate(s));
  s = two_node_cross();
  s.p[0][1] = 0.5;  // exponent below one on an active edge
  CHECK_THROWS(validate(s));
  s = two_node_cross();
  s.N = 2;  // N <= 2m
  CHECK_THROWS(validate(s));
  s = two_node_cross();
  s.e[0][1] = s.e[1][0] = 7;  // adjacency must be 0/1
  CHECK_THROWS(validate(s));

  ProblemParams prm = riesz_params(5, 1, 6.0, 2.0, 2.0);  // alpha >= N
  CHECK_THROWS(validate(prm));
  prm = riesz_params(5, 1, 2.0, -1.0, 2.0);
  CHECK_THROWS(validate(prm));
}

TEST_CASE("json round trips") {
  ProblemParams prm = riesz_params(9, 2, 3.0, 1.7, 2.4, Sign::Minus);
  nlohmann::json j = prm;
  ProblemParams back = j.get<ProblemParams>();
  CHECK(back.N == 9);
  CHECK(back.sign == Sign::Minus);
  CHECK(back.p == doctest::Approx(1.7));
  CHECK(classify_single(back).status == classify_single(prm).status);

  SystemSpec s = two_node_cross();
  nlohmann::json js = s;
  SystemSpec sback = js.get<SystemSpec>();
  CHECK(sback.n == 2);
  CHECK(sback.form == CouplingForm::Cross);
  SystemVerdict v1 = classify_system(s);
  SystemVerdict v2 = classify_system(sback);
  CHECK(v1.structure == v2.structure);
  CHECK(nlohmann::json(v1).dump() == nlohmann::json(v2).dump());
}

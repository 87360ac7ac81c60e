#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "polyharm/kernels.hpp"

namespace polyharm {

enum class Sign { Plus, Minus };
enum class Status { NoNontrivialSolution, ExistsNontrivial, Inconclusive };

std::string to_string(Sign s);
std::string to_string(Status s);

// One inequality (-Delta)^m u >= (Psi * u^p) u^q (Plus) or the reversed
// operator sign Delta^m u >= ... (Minus).
struct ProblemParams {
  int N = 3;
  int m = 1;
  Sign sign = Sign::Plus;
  Kernel kernel = RieszPower{1.0};
  double p = 2.0;
  double q = 2.0;
};

void validate(const ProblemParams& params);

// Record of one classification clause: a stable identifier, the condition
// that was checked (with the numbers filled in), and whether it held for
// these parameters.
struct Clause {
  std::string id;
  std::string condition;
  bool satisfied = false;
};

struct Verdict {
  Status status = Status::Inconclusive;
  std::vector<Clause> clauses;
  std::string reason;
};

Verdict classify_single(const ProblemParams& params);

// Existence region for the Riesz kernel:
//   min{p,q} > (N-alpha)/(N-2m)  and  p+q > (2N-alpha)/(N-2m),
// both strict; boundary equality counts as outside.
struct RegionThresholds {
  double min_threshold = 0.0;  // lower bound for min{p,q}
  double sum_threshold = 0.0;  // lower bound for p+q
};

RegionThresholds sharp_region_thresholds(int N, int m, double alpha);
bool in_existence_region(int N, int m, double alpha, double p, double q);

struct RegionRow {
  double p = 0.0, q = 0.0;
  Status status = Status::Inconclusive;
};

struct RegionTable {
  int N = 0, m = 0;
  double alpha = 0.0;
  RegionThresholds thresholds;
  std::vector<RegionRow> rows;
};

// Verdict grid over [p_lo,p_hi] x [q_lo,q_hi] with the two boundary curves
// attached per row (columns q_boundary_min and q_boundary_sum = sum - p).
RegionTable region_boundary_table(int N, int m, double alpha, double p_lo,
                                  double p_hi, double q_lo, double q_hi,
                                  int samples);
void write_region_csv(std::ostream& os, const RegionTable& table);

enum class CouplingForm { Cross, SelfCoupled };
enum class NodeStatus { Unconstrained, MustVanish };

std::string to_string(CouplingForm f);
std::string to_string(NodeStatus s);

// n coupled inequalities sharing the operator (-Delta)^m:
//   Cross:       (-Delta)^m u_i >= sum_j e_ij (Psi_ij * u_j^p_ij) u_j^q_ij
//   SelfCoupled: (-Delta)^m u_i >= sum_j e_ij (Psi_ij * u_j^p_ij) u_i^q_ij
// e is a symmetric 0/1 adjacency matrix; exponents p_ij >= 1, q_ij > 0.
struct SystemSpec {
  int n = 2;
  int N = 5;
  int m = 1;
  CouplingForm form = CouplingForm::Cross;
  std::vector<std::vector<int>> e;
  std::vector<std::vector<double>> p;
  std::vector<std::vector<double>> q;
  std::vector<std::vector<Kernel>> kernels;
};

void validate(const SystemSpec& spec);

enum class SystemStructure {
  ZeroSolution,       // every component must vanish
  AtMostOneNonzero,   // complete-graph self-coupled elimination
  SomeVanish,         // a proper subset of components must vanish
  NoInformation
};

std::string to_string(SystemStructure s);

struct PairFinding {
  int k = 0, l = 0;
  bool exponents_ok = false;
  bool tail_ok = false;
  bool applied = false;  // both of the above
};

struct SystemVerdict {
  std::vector<NodeStatus> nodes;
  SystemStructure structure = SystemStructure::NoInformation;
  bool decisive = false;  // false only for NoInformation
  std::vector<PairFinding> pairs;
  std::vector<Clause> clauses;
  std::string reason;
};

SystemVerdict classify_system(const SystemSpec& spec);

void to_json(nlohmann::json& j, const ProblemParams& v);
void from_json(const nlohmann::json& j, ProblemParams& v);
void to_json(nlohmann::json& j, const Clause& v);
void to_json(nlohmann::json& j, const Verdict& v);
void to_json(nlohmann::json& j, const SystemSpec& v);
void from_json(const nlohmann::json& j, SystemSpec& v);
void to_json(nlohmann::json& j, const PairFinding& v);
void to_json(nlohmann::json& j, const SystemVerdict& v);

}  // namespace polyharm

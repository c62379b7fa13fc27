#pragma once

// Reduction from integer polynomials to quantum systems of linear forms:
// builders for L, M, V_j, E_j, T_j and psi(q*), the B_j / C_j directed-graph
// pipeline, the witness group and subset, and exhaustive verifiers.
//
// Variable layout: g_1..g_k occupy indices 0..k-1; z, z', z'' follow at
// k, k+1, k+2. V_j has k+1 variables, E_j has k+2, T_j has k+3.

#include "addforms/abelian.hpp"
#include "addforms/execution.hpp"
#include "addforms/linform.hpp"
#include "addforms/polynomial.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace addforms {

/// L(g) = {!(k+1)g_1} followed by p(g_j - j g_1) for p = 1..k+2 (outer),
/// j = 2..k (inner). Arity k.
LinearSystem build_L(unsigned k);
/// M(g) = L(g) followed by g_1, ..., g_k. Arity k.
LinearSystem build_M(unsigned k);
/// L(g) with g_j replaced by the linear combination `replacement` of the
/// variables of an `arity`-variable layout (arity >= k).
LinearSystem build_L_substituted(unsigned k, unsigned j, const std::vector<std::int64_t>& replacement);
/// L(g, j, z) with z the variable at index `zvar` of an `arity`-variable layout.
LinearSystem build_L_sub(unsigned k, unsigned j, std::size_t zvar, std::size_t arity);
LinearSystem build_V(unsigned k, unsigned j);
LinearSystem build_E(unsigned k, unsigned j);
LinearSystem build_T(unsigned k, unsigned j);

struct ReductionBundle {
  unsigned k = 0;
  IntPolynomial q;
  IntPolynomial qstar;
  LinearSystem L;
  LinearSystem M;
  std::vector<LinearSystem> V;  // V[j-1]
  std::vector<LinearSystem> E;
  std::vector<LinearSystem> T;
  /// Factor j-1 of block b refers to V, E or T of index j.
  struct FactorRef {
    char block;  // 'V', 'E' or 'T'
    unsigned j;  // 1-based
  };
  struct PsiTerm {
    BigInt coefficient;
    std::vector<FactorRef> factors;
  };
  std::vector<PsiTerm> psi_terms;

  const LinearSystem& system(const FactorRef& ref) const;
  /// psi(q*) as an explicit quantum system.
  QuantumSystem psi() const;
};

/// q over x1..xk, y1..yk. Expands every q*-monomial v^a e^b t^c into a term
/// with a_j copies of V_j, b_j of E_j and c_j of T_j.
ReductionBundle build_psi(const IntPolynomial& q, unsigned k);

/// t(psi(q*), A) with independent factors.
Rational eval_reduction(const ReductionBundle& bundle, const GroupSubset& a, const ExecutionOptions& options = {});

/// E_g q*(t(V_j(g,.)), t(E_j(g,.)), t(T_j(g,.))): the same expression with g
/// shared across the factors of each term.
Rational eval_reduction_shared_g(const ReductionBundle& bundle, const GroupSubset& a,
                                 const ExecutionOptions& options = {});

/// q*(t(V_1),...,t(V_k), t(E_1),...,t(T_k)) from independently evaluated densities.
Rational eval_qstar_at_densities(const ReductionBundle& bundle, const GroupSubset& a,
                                 const ExecutionOptions& options = {});

// ---------------------------------------------------------------------------

struct DirectedCayleyGraph {
  GroupSubset vertices;    // B
  GroupSubset connection;  // C; b1 -> b2 iff b1 - b2 in C
};

struct GraphDensities {
  Rational k2;  // ordered edges / |B|^2
  Rational k3;  // ordered directed 3-cycles / |B|^3
};

GraphDensities graph_densities(const DirectedCayleyGraph& u);

/// True when every form of M(g) is satisfied by A.
bool m_in_subset(unsigned k, const GroupSubset& a, std::span<const ElementIndex> g);

/// B_j(g) = {z : V_j(g, z) in A}, C_j(g) = (B_j(g) n A) - g_j.
DirectedCayleyGraph compute_B_C(const GroupSubset& a, std::span<const ElementIndex> g, unsigned j);

struct HomDensityReport {
  bool vacuous = false;  // M(g) not in A
  Rational v_density;    // t(V_j(g, z), A) with g fixed
  Rational e_density;
  Rational t_density;
  GraphDensities graph;  // from B_j, C_j directly
  Rational k2_from_densities;
  Rational k3_from_densities;
  bool k2_equal = true;
  bool k3_equal = true;
  bool holds() const { return vacuous || (k2_equal && k3_equal); }
};

/// Compares both sides of t(K2, U_j(g)) = t(E_j)/t(V_j)^2 and the K3 analogue
/// with g fixed. Mismatches are reported, not thrown.
HomDensityReport verify_homdensity_identity(const GroupSubset& a, std::span<const ElementIndex> g, unsigned j,
                                            const ExecutionOptions& options = {});

struct HomDensityFailure {
  std::vector<ElementIndex> g;
  unsigned j = 0;
  GroupSubset subset;
  HomDensityReport report;
};

struct HomDensityBatchReport {
  GroupPtr group;
  unsigned k = 0;
  std::uint64_t seed = 0;
  std::uint64_t pairs = 0;
  std::uint64_t checks = 0;  // pairs x k
  std::uint64_t k2_mismatches = 0;
  std::uint64_t k3_mismatches = 0;
  std::vector<HomDensityFailure> failures;  // first few
  bool passed() const { return k2_mismatches == 0 && k3_mismatches == 0; }
};

/// Random (A, g) with A of density about 1/2 and M(g) in A: g is uniform and A
/// is then adjusted so every positive form of M(g) lies in A and every negated
/// form outside it (g is redrawn when these conflict). Checks every j. Pair i
/// uses stream i of `seed`.
HomDensityBatchReport verify_homdensity_random(const GroupPtr& group, unsigned k, std::uint64_t pairs,
                                               std::uint64_t seed, const ExecutionOptions& options = {});

// ---------------------------------------------------------------------------

struct WitnessSpec {
  unsigned k = 0;
  std::vector<std::uint32_t> n;
  GroupPtr group;   // Z_{(k+1)^2} x Z_{n_1} x ... x Z_{n_k}
  GroupPtr h;       // Z_{n_1} x ... x Z_{n_k}
  GroupSubset subset;
  /// H_j = {h : coordinate j of h is 0}, j = 1..k, as subsets of H.
  std::vector<GroupSubset> h_subgroups;
};

/// A = {0} x H  u  union_{j=1..k} {j} x (H \ H_j).
WitnessSpec build_witness(unsigned k, const std::vector<std::uint32_t>& n, std::uint64_t max_order = kDefaultMaxOrder);

struct WitnessObservation {
  std::vector<ElementIndex> g;
  unsigned j = 0;
  std::uint32_t h_coordinate = 0;  // coordinate j of h where g_j = (j, h)
  bool b_is_slice = false;         // B_j(g) = {j} x H
  Rational k2;
  Rational k3;
  std::optional<bool> identity_holds;  // density identity for the graph, when requested
};

struct WitnessK3Class {
  unsigned j = 0;
  Rational k3;
  std::uint64_t count = 0;
  std::vector<std::uint32_t> h_coordinates;  // distinct coordinate-j values of h giving this k3
};

struct WitnessReport {
  unsigned k = 0;
  std::vector<std::uint32_t> n;
  std::uint64_t good_g = 0;  // g with M(g) in A
  std::uint64_t slice_violations = 0;
  std::uint64_t k2_violations = 0;
  std::uint64_t identity_failures = 0;
  std::vector<Rational> expected_k2;      // 1 - 1/n_j
  std::vector<Rational> claimed_k3;       // 2x^2 - x
  std::vector<WitnessK3Class> k3_classes;  // measured k3 grouped per j
  std::vector<bool> k3_agrees;            // every measured k3 for j equals the claim
  std::vector<WitnessObservation> observations;
  bool passed() const { return slice_violations == 0 && k2_violations == 0 && identity_failures == 0; }
};

WitnessReport verify_witness(const WitnessSpec& spec, bool check_identity = false,
                             const ExecutionOptions& options = {});

// ---------------------------------------------------------------------------

struct PinpointViolation {
  std::vector<ElementIndex> g;
  std::string reason;
};

struct PinpointReport {
  unsigned k = 0;
  std::uint64_t checked = 0;
  std::uint64_t l_satisfied = 0;
  std::uint64_t m_satisfied = 0;
  std::uint64_t violations = 0;
  std::vector<PinpointViolation> witnesses;  // first few violations
  bool passed() const { return violations == 0; }
};

/// Exhaustive over g in Z_{(k+1)^2}^k with S = {0..k}: L(g) in S forces
/// g_j = j g_1 != 0 and M(g) in S forces g_j = j.
PinpointReport verify_pinpoint(unsigned k, unsigned max_k = 4, const ExecutionOptions& options = {});

}  // namespace addforms

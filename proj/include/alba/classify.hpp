#ifndef ALBA_CLASSIFY_HPP
#define ALBA_CLASSIFY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alba/syntax.hpp"

namespace alba {

// Node-class flags; a node may hold several (e.g. +v is both a Delta-adjoint
// and SLA, a unary +f is both outer-skeleton SLR and SLA).
enum NodeFlag : uint8_t {
  DeltaAdjoint = 1 << 0,
  SLR_outer = 1 << 1,
  Binder_inner = 1 << 2,
  SLA = 1 << 3,
  SLR_inner = 1 << 4,
  Binder_PIA = 1 << 5,
  SRA = 1 << 6,
  SRR = 1 << 7,
};

struct NodeClass {
  uint8_t flags = 0;
  bool is_outer_skeleton() const { return flags & (DeltaAdjoint | SLR_outer); }
  bool is_inner_skeleton() const { return flags & (Binder_inner | SLA | SLR_inner); }
  bool is_skeleton() const { return is_outer_skeleton() || is_inner_skeleton(); }
  bool is_pia() const { return flags & (Binder_PIA | SRA | SRR); }
};

NodeClass classify_node(const TermNode* t, bool positive);

/// Epsilon over named letters.
using Epsilon = std::map<std::string, Pol>;

/// A root-to-leaf branch of a signed tree, as node indices.
struct Branch {
  const SignedTree* tree;
  std::vector<int> nodes;  // root..leaf
  int leaf() const { return nodes.back(); }
};

/// All branches ending in an epsilon-critical letter occurrence.
std::vector<Branch> critical_branches(const SignedTree& tree, const Epsilon& eps);

/// A split of a branch (excluding the leaf) into P1 (PIA, leaf side), P2
/// (inner skeleton) and P3 (outer skeleton, root side). Boundaries are counts
/// of inner nodes in leaf-to-root order.
struct BranchDecomposition {
  int p1_end = 0;  // inner nodes [0, p1_end) are P1
  int p2_end = 0;  // [p1_end, p2_end) are P2, the rest P3
};

std::vector<BranchDecomposition> decompose_branch(const Branch& branch);

bool check_good(const Branch& branch, const Epsilon& eps,
                const BranchDecomposition& dec);

struct BranchProps {
  bool nb_pia;
  bool nl;
};
BranchProps check_branch_props(const Branch& branch, const BranchDecomposition& dec);

/// Strict-order constraints p_j < p_i as edge set; acyclicity makes the
/// transitive closure a strict partial order.
struct StrictOrder {
  std::vector<std::pair<std::string, std::string>> edges;  // (smaller, larger)
  bool less(const std::string& a, const std::string& b) const;  // closure query
  bool acyclic() const;
};

bool check_omega_conf(const Branch& branch, const StrictOrder& omega);

enum class IneqClass { Recursive, Inductive, Restricted, Tame };

struct EpsFailure {
  std::vector<Pol> epsilon;        // over report letter order
  std::string reason;              // failing branch description or reason
};

struct ClassVerdict {
  bool holds = false;
  std::vector<Pol> epsilon;        // witness, when holds
  StrictOrder omega;               // witness, when holds
  std::vector<EpsFailure> failures;  // one entry per epsilon, when not
};

struct ClassReport {
  std::vector<std::string> letters;  // first-occurrence order
  ClassVerdict recursive, inductive, restricted, tame;

  const ClassVerdict& verdict(IneqClass c) const {
    switch (c) {
      case IneqClass::Recursive: return recursive;
      case IneqClass::Inductive: return inductive;
      case IneqClass::Restricted: return restricted;
      default: return tame;
    }
  }
};

/// Exhaustive classification over all 2^n order-types; input must be an L1
/// inequality over base connectives.
ClassReport classify_inequality(const Inequality& ineq);

std::string branch_to_string(const Branch& b);

}  // namespace alba

#endif

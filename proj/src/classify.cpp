#include "alba/classify.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace alba {

NodeClass classify_node(const TermNode* t, bool positive) {
  NodeClass nc;
  switch (t->kind) {
    case Tk::Join:
      nc.flags = positive ? (DeltaAdjoint | SLA) : SRA;
      break;
    case Tk::Meet:
      nc.flags = positive ? SRA : (DeltaAdjoint | SLA);
      break;
    case Tk::App: {
      bool f_family = t->conn->family == Family::F;
      int n = t->conn->arity;
      // "+f" behaviour at +nodes of F-connectives and -nodes of G-connectives
      bool as_f = f_family == positive;
      if (as_f) {
        nc.flags = SLR_outer;
        if (n == 1) nc.flags |= SLA;
        if (n >= 2) nc.flags |= SLR_inner;
      } else {
        if (n == 1) nc.flags = SRA;
        if (n >= 2) nc.flags = SRR;
      }
      break;
    }
    case Tk::Binder: {
      bool mu = is_mu_like(t->binder);
      // +mu / -nu are inner skeleton; +nu / -mu are PIA
      nc.flags = (mu == positive) ? Binder_inner : Binder_PIA;
      break;
    }
    default:
      break;  // leaves carry no class
  }
  return nc;
}

static void visit_subtree(const SignedTree& tree, int idx,
                          const std::function<void(int)>& fn) {
  fn(idx);
  for (int c : tree.nodes[idx].children) visit_subtree(tree, c, fn);
}

std::vector<Branch> critical_branches(const SignedTree& tree, const Epsilon& eps) {
  std::vector<Branch> out;
  for (size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& n = tree.nodes[i];
    if (n.term->kind != Tk::Prop) continue;
    auto it = eps.find(n.term->name);
    if (it == eps.end()) continue;
    bool critical = (n.positive && it->second == Pol::One) ||
                    (!n.positive && it->second == Pol::Del);
    if (critical) out.push_back({&tree, tree.branch_to(static_cast<int>(i))});
  }
  return out;
}

// Inner nodes of a branch in leaf-to-root order (leaf excluded).
static std::vector<int> inner_nodes(const Branch& b) {
  std::vector<int> inner(b.nodes.begin(), b.nodes.end() - 1);
  std::reverse(inner.begin(), inner.end());
  return inner;
}

static NodeClass node_class(const Branch& b, int idx) {
  const auto& n = b.tree->nodes[idx];
  return classify_node(n.term, n.positive);
}

std::vector<BranchDecomposition> decompose_branch(const Branch& branch) {
  auto inner = inner_nodes(branch);
  int len = static_cast<int>(inner.size());
  std::vector<NodeClass> cls;
  cls.reserve(len);
  for (int idx : inner) cls.push_back(node_class(branch, idx));
  std::vector<BranchDecomposition> out;
  for (int a = 0; a <= len; ++a) {
    bool p1_ok = true;
    for (int k = 0; k < a && p1_ok; ++k) p1_ok = cls[k].is_pia();
    if (!p1_ok) break;  // longer prefixes cannot recover
    for (int b = a; b <= len; ++b) {
      bool ok = true;
      for (int k = a; k < b && ok; ++k) ok = cls[k].is_inner_skeleton();
      if (!ok) break;
      for (int k = b; k < len && ok; ++k) ok = cls[k].is_outer_skeleton();
      if (ok) out.push_back({a, b});
    }
  }
  return out;
}

// Does every prop leaf under idx agree with eps^d (no eps-critical leaves)?
static bool agrees_with_eps_dual(const SignedTree& tree, int idx,
                                 const Epsilon& eps) {
  bool ok = true;
  visit_subtree(tree, idx, [&](int k) {
    const auto& n = tree.nodes[k];
    if (n.term->kind != Tk::Prop) return;
    auto it = eps.find(n.term->name);
    Pol e = it == eps.end() ? Pol::One : it->second;
    // eps^d-critical: +p with eps=d, -p with eps=1
    bool dual_critical = (n.positive && e == Pol::Del) || (!n.positive && e == Pol::One);
    if (!dual_critical) ok = false;
  });
  return ok;
}

static bool subtree_has_live_branch(const SignedTree& tree, int idx) {
  bool live = false;
  visit_subtree(tree, idx, [&](int k) {
    if (tree.nodes[k].term->kind == Tk::Prop) live = true;
  });
  return live;
}

// Children of `idx` that are off the branch.
static std::vector<int> side_children(const Branch& b, int idx) {
  std::vector<int> out;
  std::set<int> on(b.nodes.begin(), b.nodes.end());
  for (int c : b.tree->nodes[idx].children)
    if (!on.count(c)) out.push_back(c);
  return out;
}

static Term node_term(const SignedTree& tree, int idx) {
  // Terms are shared; rebuild a Term handle from the raw node pointer via a
  // shallow copy (cheap: nodes are immutable and children are shared).
  return std::make_shared<TermNode>(*tree.nodes[idx].term);
}

bool check_good(const Branch& branch, const Epsilon& eps,
                const BranchDecomposition& dec) {
  auto inner = inner_nodes(branch);
  // GB1: formula at the uppermost P1 node is a sentence (empty P1: the leaf).
  if (dec.p1_end > 0) {
    if (!is_sentence(node_term(*branch.tree, inner[dec.p1_end - 1]))) return false;
  }
  // GB2 on SRR nodes of P1 and GB3 on SLR nodes of P2: side trees are
  // mu-sentences agreeing with eps^d.
  auto side_ok = [&](int idx) {
    for (int c : side_children(branch, idx)) {
      if (!is_sentence(node_term(*branch.tree, c))) return false;
      if (!agrees_with_eps_dual(*branch.tree, c, eps)) return false;
    }
    return true;
  };
  for (int k = 0; k < dec.p1_end; ++k) {
    if ((node_class(branch, inner[k]).flags & SRR) && !side_ok(inner[k]))
      return false;
  }
  for (int k = dec.p1_end; k < dec.p2_end; ++k) {
    if ((node_class(branch, inner[k]).flags & SLR_inner) && !side_ok(inner[k]))
      return false;
  }
  return true;
}

BranchProps check_branch_props(const Branch& branch,
                               const BranchDecomposition& dec) {
  auto inner = inner_nodes(branch);
  BranchProps props{true, true};
  for (int k = 0; k < dec.p1_end; ++k)
    if (branch.tree->nodes[inner[k]].term->kind == Tk::Binder)
      props.nb_pia = false;
  for (int k = dec.p1_end; k < dec.p2_end; ++k) {
    if (!(node_class(branch, inner[k]).flags & SLR_inner)) continue;
    for (int c : side_children(branch, inner[k]))
      if (subtree_has_live_branch(*branch.tree, c)) props.nl = false;
  }
  return props;
}

bool StrictOrder::less(const std::string& a, const std::string& b) const {
  // reachability a -> b through the edge relation
  std::set<std::string> seen{a};
  std::vector<std::string> work{a};
  while (!work.empty()) {
    std::string cur = work.back();
    work.pop_back();
    for (const auto& [lo, hi] : edges) {
      if (lo != cur) continue;
      if (hi == b) return true;
      if (seen.insert(hi).second) work.push_back(hi);
    }
  }
  return false;
}

bool StrictOrder::acyclic() const {
  std::set<std::string> nodes;
  for (const auto& [a, b] : edges) {
    nodes.insert(a);
    nodes.insert(b);
  }
  for (const auto& n : nodes)
    if (less(n, n)) return false;
  return true;
}

// Omega constraints forced by a critical branch: SRR nodes sit in P1 in every
// valid decomposition, so each side-tree letter must be Omega-below the leaf.
static std::vector<std::pair<std::string, std::string>> branch_constraints(
    const Branch& branch) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string leaf_letter = branch.tree->nodes[branch.leaf()].term->name;
  for (size_t k = 0; k + 1 < branch.nodes.size(); ++k) {
    int idx = branch.nodes[k];
    if (!(node_class(branch, idx).flags & SRR)) continue;
    for (int c : side_children(branch, idx)) {
      visit_subtree(*branch.tree, c, [&](int m) {
        const auto& n = branch.tree->nodes[m];
        if (n.term->kind == Tk::Prop) out.push_back({n.term->name, leaf_letter});
      });
    }
  }
  return out;
}

bool check_omega_conf(const Branch& branch, const StrictOrder& omega) {
  for (const auto& [lo, hi] : branch_constraints(branch))
    if (!omega.less(lo, hi)) return false;
  return true;
}

static std::string node_ctor(const TermNode* t) {
  switch (t->kind) {
    case Tk::Bot: return "bot";
    case Tk::Top: return "top";
    case Tk::Prop: return t->name;
    case Tk::FpVar: return t->name;
    case Tk::Nom: return "j" + std::to_string(t->index);
    case Tk::Conom: return "m" + std::to_string(t->index);
    case Tk::Meet: return "/\\";
    case Tk::Join: return "\\/";
    case Tk::App: return t->conn->name;
    case Tk::Binder:
      switch (t->binder) {
        case BinderKind::Mu: return "mu";
        case BinderKind::Nu: return "nu";
        case BinderKind::Mu2: return "mu2";
        case BinderKind::Nu2: return "nu2";
        case BinderKind::MuStar: return "mu*";
        case BinderKind::NuStar: return "nu*";
      }
  }
  return "?";
}

std::string branch_to_string(const Branch& b) {
  std::string out;
  for (size_t i = 0; i < b.nodes.size(); ++i) {
    const auto& n = b.tree->nodes[b.nodes[i]];
    if (i) out += " ";
    out += (n.positive ? "+" : "-") + node_ctor(n.term);
  }
  return out;
}

ClassReport classify_inequality(const Inequality& ineq) {
  if (!in_L1(ineq.lhs) || !in_L1(ineq.rhs))
    throw SyntaxError("classification input must be an L1 inequality");

  ClassReport rep;
  rep.letters = collect_props(ineq);
  int n = static_cast<int>(rep.letters.size());
  if (n > 16) throw SyntaxError("too many proposition letters to classify");

  SignedTree lt = signed_tree(ineq.lhs, true);
  SignedTree rt = signed_tree(ineq.rhs, false);

  auto binder_nodes = [](const SignedTree& t) {
    std::vector<int> out;
    for (size_t i = 0; i < t.nodes.size(); ++i)
      if (t.nodes[i].term->kind == Tk::Binder) out.push_back(static_cast<int>(i));
    return out;
  };
  std::vector<int> lbinders = binder_nodes(lt), rbinders = binder_nodes(rt);

  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    Epsilon eps;
    std::vector<Pol> evec;
    for (int i = 0; i < n; ++i) {
      Pol p = (mask >> i) & 1 ? Pol::Del : Pol::One;
      eps[rep.letters[i]] = p;
      evec.push_back(p);
    }

    std::vector<Branch> branches = critical_branches(lt, eps);
    for (auto& b : critical_branches(rt, eps)) branches.push_back(b);

    bool rec_ok = true;
    bool restr_branches_ok = true;
    std::string bad_branch;
    StrictOrder omega;
    for (const auto& b : branches) {
      bool good = false, good_restr = false;
      for (const auto& dec : decompose_branch(b)) {
        if (!check_good(b, eps, dec)) continue;
        good = true;
        auto props = check_branch_props(b, dec);
        if (props.nb_pia && props.nl) good_restr = true;
      }
      if (!good && bad_branch.empty()) bad_branch = branch_to_string(b);
      rec_ok &= good;
      restr_branches_ok &= good_restr;
      for (auto& e : branch_constraints(b)) omega.edges.push_back(e);
    }
    // dedupe constraint edges for readability
    std::sort(omega.edges.begin(), omega.edges.end());
    omega.edges.erase(std::unique(omega.edges.begin(), omega.edges.end()),
                      omega.edges.end());

    auto on_critical = [&](const SignedTree& tree, int node,
                           const std::vector<Branch>& all) {
      for (const auto& b : all) {
        if (b.tree != &tree) continue;
        if (std::find(b.nodes.begin(), b.nodes.end(), node) != b.nodes.end())
          return true;
      }
      return false;
    };
    bool binders_on_critical = true;   // restricted 3(b)
    bool no_binder_on_critical = true; // tame 4(b)
    bool tame_binder_shapes = true;    // tame 4(c): only +nu / -mu
    for (int bn : lbinders) {
      if (!on_critical(lt, bn, branches)) binders_on_critical = false;
      if (on_critical(lt, bn, branches)) no_binder_on_critical = false;
      const auto& node = lt.nodes[bn];
      if (!(node.positive != is_mu_like(node.term->binder)))
        tame_binder_shapes = false;
    }
    for (int bn : rbinders) {
      if (!on_critical(rt, bn, branches)) binders_on_critical = false;
      if (on_critical(rt, bn, branches)) no_binder_on_critical = false;
      const auto& node = rt.nodes[bn];
      if (!(node.positive != is_mu_like(node.term->binder)))
        tame_binder_shapes = false;
    }

    bool ind_ok = rec_ok && omega.acyclic();
    bool restr_ok = ind_ok && restr_branches_ok && binders_on_critical;
    bool tame_ok = rec_ok && omega.edges.empty() && no_binder_on_critical &&
                   tame_binder_shapes;

    auto record = [&](ClassVerdict& v, bool ok, const std::string& why) {
      if (ok) {
        if (!v.holds) {
          v.holds = true;
          v.epsilon = evec;
          v.omega = omega;
        }
      } else if (!v.holds) {
        v.failures.push_back({evec, why});
      }
    };
    record(rep.recursive, rec_ok,
           bad_branch.empty() ? "no critical branch failure" : bad_branch);
    record(rep.inductive, ind_ok,
           !rec_ok ? bad_branch : "cyclic Omega constraints");
    record(rep.restricted, restr_ok,
           !ind_ok ? (!rec_ok ? bad_branch : "cyclic Omega constraints")
           : !restr_branches_ok ? "critical branch violates NB-PIA or NL"
                                : "binder off every critical branch");
    record(rep.tame, tame_ok,
           !rec_ok ? bad_branch
           : !omega.edges.empty() ? "nonempty Omega constraints"
           : !no_binder_on_critical ? "binder on a critical branch"
                                    : "binder shape other than +nu/-mu");
  }
  // tame witnesses carry the empty order by construction
  if (rep.tame.holds) rep.tame.omega.edges.clear();
  for (ClassVerdict* v :
       {&rep.recursive, &rep.inductive, &rep.restricted, &rep.tame})
    if (v->holds) v->failures.clear();
  return rep;
}

}  // namespace alba

#include "alba/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "alba/parse.hpp"

namespace alba {

// ---------------------------------------------------------------------------
// Systems
// ---------------------------------------------------------------------------

QuasiInequality to_quasi(const System& sys) { return {sys.S, sys.ineq}; }

bool is_pure(const System& sys) {
  auto pure = [](const Inequality& i) {
    return !has_props(i.lhs) && !has_props(i.rhs);
  };
  for (const auto& i : sys.S)
    if (!pure(i)) return false;
  return pure(sys.ineq);
}

std::string to_string(const System& sys) { return to_string(to_quasi(sys)); }

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::ElimMonotone: return "elim_monotone";
    case Rule::Distribute: return "distribute";
    case Rule::Split: return "split";
    case Rule::Star: return "star";
    case Rule::ApproxLPos: return "approx_L+";
    case Rule::ApproxLNeg: return "approx_L-";
    case Rule::ApproxRPos: return "approx_R+";
    case Rule::ApproxRNeg: return "approx_R-";
    case Rule::Residuate: return "residuate";
    case Rule::AckermannRA: return "ackermann_RA";
    case Rule::AckermannLA: return "ackermann_LA";
  }
  return "?";
}

std::string to_string(const DerivationStep& s) {
  auto list = [](const std::vector<QuasiInequality>& qs) {
    std::string out;
    for (size_t i = 0; i < qs.size(); ++i) {
      if (i) out += " ; ";
      out += to_string(qs[i]);
    }
    return out;
  };
  return std::string(rule_name(s.rule)) + " @ " + s.position + ": " +
         list(s.before) + "  ==>  " + list(s.after);
}

std::string to_string(const RunOutcome& o) {
  std::string out;
  for (const auto& s : o.pre_steps) out += "pre | " + to_string(s) + "\n";
  for (size_t k = 0; k < o.preprocessed.size(); ++k)
    out += "system " + std::to_string(k) + " | " +
           to_string(o.preprocessed[k]) + "\n";
  for (size_t k = 0; k < o.systems.size(); ++k) {
    for (const auto& s : o.systems[k].steps)
      out += "s" + std::to_string(k) + " | " + to_string(s) + "\n";
    out += "s" + std::to_string(k) + " | " +
           (o.systems[k].success ? "success" : "failure: " + o.systems[k].failure) +
           "\n";
  }
  if (o.success) {
    for (const auto& q : o.output) out += "out | " + to_string(q) + "\n";
  } else {
    out += "failure: " + o.failure_reason + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Syntactic shapes (Def. A.2 via the polarity characterization)
// ---------------------------------------------------------------------------

namespace {

struct ShapeAcc {
  bool ao = true, ac = true;      // almost open / almost closed
  bool o_ok = true, c_ok = true;  // extra binder-polarity conditions
};

void shape_walk(const Term& t, bool pos, ShapeAcc& a) {
  switch (t->kind) {
    case Tk::Nom:
      (pos ? a.ao : a.ac) = false;
      return;
    case Tk::Conom:
      (pos ? a.ac : a.ao) = false;
      return;
    case Tk::App: {
      if (t->conn->is_residual) {
        if (t->conn->family == Family::F)
          (pos ? a.ao : a.ac) = false;
        else
          (pos ? a.ac : a.ao) = false;
      }
      for (size_t i = 0; i < t->args.size(); ++i) {
        bool child = t->conn->order_type[static_cast<int>(i)] == Pol::One
                         ? pos
                         : !pos;
        shape_walk(t->args[i], child, a);
      }
      return;
    }
    case Tk::Meet:
    case Tk::Join:
      shape_walk(t->args[0], pos, a);
      shape_walk(t->args[1], pos, a);
      return;
    case Tk::Binder:
      if (!is_star(t->binder))
        throw EngineError("syntactic shape is defined on star terms only");
      if (t->binder == BinderKind::MuStar)
        (pos ? a.o_ok : a.c_ok) = false;
      else
        (pos ? a.c_ok : a.o_ok) = false;
      shape_walk(t->args[0], pos, a);
      return;
    default:
      return;  // bot, top, letters, fixed point variables: both grammars
  }
}

}  // namespace

SyntacticShape syntactic_shape(const Term& t) {
  ShapeAcc a;
  shape_walk(t, true, a);
  SyntacticShape s;
  s.almost_open = a.ao;
  s.almost_closed = a.ac;
  s.open = a.ao && a.o_ok;
  s.closed = a.ac && a.c_ok;
  return s;
}

// ---------------------------------------------------------------------------
// Engine: stage 1
// ---------------------------------------------------------------------------

Engine::Engine(const Signature& base)
    : sig_(base.expanded() ? base : expand_tense(base)) {}

Inequality Engine::eliminate_monotone(const Inequality& ineq) const {
  auto pos_ok = [](Polarity p) {
    return p == Polarity::Positive || p == Polarity::Both;
  };
  auto neg_ok = [](Polarity p) {
    return p == Polarity::Negative || p == Polarity::Both;
  };
  Inequality cur = ineq;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const std::string& p : collect_props(cur)) {
      Polarity pl = positivity(cur.lhs, p, false);
      Polarity pr = positivity(cur.rhs, p, false);
      if (pos_ok(pl) && neg_ok(pr)) {
        cur.lhs = substitute(cur.lhs, p, false, top());
        cur.rhs = substitute(cur.rhs, p, false, top());
        changed = true;
      } else if (neg_ok(pl) && pos_ok(pr)) {
        cur.lhs = substitute(cur.lhs, p, false, bot());
        cur.rhs = substitute(cur.rhs, p, false, bot());
        changed = true;
      }
      if (changed) break;
    }
  }
  return cur;
}

namespace {

Term distribute_term(const Term& t) {
  if (t->kind == Tk::Binder) return t;  // only outside binder bodies
  if (t->args.empty()) return t;
  std::vector<Term> args;
  args.reserve(t->args.size());
  bool child_changed = false;
  for (const auto& a : t->args) {
    Term d = distribute_term(a);
    child_changed = child_changed || d != a;
    args.push_back(std::move(d));
  }
  Term base = t;
  if (child_changed) {
    if (t->kind == Tk::Meet)
      base = meet(args[0], args[1]);
    else if (t->kind == Tk::Join)
      base = join(args[0], args[1]);
    else
      base = app(t->conn, args);
  }
  if (base->kind != Tk::App) return base;
  const ConnPtr& c = base->conn;
  for (size_t i = 0; i < base->args.size(); ++i) {
    Pol e = c->order_type[static_cast<int>(i)];
    const Term& arg = base->args[i];
    bool f_fires = c->family == Family::F &&
                   ((arg->kind == Tk::Join && e == Pol::One) ||
                    (arg->kind == Tk::Meet && e == Pol::Del));
    bool g_fires = c->family == Family::G &&
                   ((arg->kind == Tk::Meet && e == Pol::One) ||
                    (arg->kind == Tk::Join && e == Pol::Del));
    if (!f_fires && !g_fires) continue;
    std::vector<Term> a0 = base->args, a1 = base->args;
    a0[i] = arg->args[0];
    a1[i] = arg->args[1];
    Term split_term = f_fires ? join(app(c, a0), app(c, a1))
                              : meet(app(c, a0), app(c, a1));
    return distribute_term(split_term);
  }
  return base;
}

void split_rec(const Term& a, const Term& b, std::vector<Inequality>& out) {
  if (a->kind == Tk::Join) {
    split_rec(a->args[0], b, out);
    split_rec(a->args[1], b, out);
    return;
  }
  if (b->kind == Tk::Meet) {
    split_rec(a, b->args[0], out);
    split_rec(a, b->args[1], out);
    return;
  }
  out.push_back({a, b});
}

QuasiInequality bare(const Inequality& i) { return {{}, i}; }

}  // namespace

Inequality Engine::distribute(const Inequality& ineq) const {
  return {distribute_term(ineq.lhs), distribute_term(ineq.rhs)};
}

std::vector<Inequality> Engine::split_ineq(const Inequality& ineq) const {
  std::vector<Inequality> out;
  split_rec(ineq.lhs, ineq.rhs, out);
  return out;
}

std::vector<System> Engine::preprocess(const Inequality& ineq,
                                       std::vector<DerivationStep>* trace) const {
  auto record = [&](Rule r, const std::string& pos, std::vector<QuasiInequality> b,
                    std::vector<QuasiInequality> a) {
    if (trace) trace->push_back({r, pos, std::move(b), std::move(a)});
  };
  std::vector<Inequality> cur = {ineq};
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Inequality> next;
    for (size_t k = 0; k < cur.size(); ++k) {
      std::string pos = "input[" + std::to_string(k) + "]";
      Inequality e = eliminate_monotone(cur[k]);
      if (!ineq_equal(e, cur[k])) {
        record(Rule::ElimMonotone, pos, {bare(cur[k])}, {bare(e)});
        changed = true;
      }
      Inequality d = distribute(e);
      if (!ineq_equal(d, e)) {
        record(Rule::Distribute, pos, {bare(e)}, {bare(d)});
        changed = true;
      }
      std::vector<Inequality> parts = split_ineq(d);
      if (parts.size() > 1) {
        std::vector<QuasiInequality> after;
        for (const auto& p : parts) after.push_back(bare(p));
        record(Rule::Split, pos, {bare(d)}, std::move(after));
        changed = true;
      }
      next.insert(next.end(), parts.begin(), parts.end());
    }
    cur = std::move(next);
  }
  std::vector<System> out;
  for (size_t k = 0; k < cur.size(); ++k) {
    Inequality starred = {star_translation(cur[k].lhs),
                          star_translation(cur[k].rhs)};
    if (!ineq_equal(starred, cur[k]))
      record(Rule::Star, "input[" + std::to_string(k) + "]", {bare(cur[k])},
             {bare(starred)});
    out.push_back({{}, starred});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage 2 primitives
// ---------------------------------------------------------------------------

namespace {

void collect_nom_indices(const Term& t, bool conoms, std::set<int>& out) {
  if ((t->kind == Tk::Conom) == conoms &&
      (t->kind == Tk::Nom || t->kind == Tk::Conom))
    out.insert(t->index);
  for (const auto& a : t->args) collect_nom_indices(a, conoms, out);
}

int fresh_index(const System& sys, bool conoms) {
  std::set<int> used;
  for (const auto& i : sys.S) {
    collect_nom_indices(i.lhs, conoms, used);
    collect_nom_indices(i.rhs, conoms, used);
  }
  collect_nom_indices(sys.ineq.lhs, conoms, used);
  collect_nom_indices(sys.ineq.rhs, conoms, used);
  int k = 1;
  while (used.count(k)) ++k;
  return k;
}

bool subtree_has_letter(const SignedTree& tree, int node) {
  if (tree.nodes[node].term->kind == Tk::Prop) return true;
  for (int c : tree.nodes[node].children)
    if (subtree_has_letter(tree, c)) return true;
  return false;
}

int node_at_path(const SignedTree& tree, const Path& p) {
  for (size_t i = 0; i < tree.nodes.size(); ++i)
    if (tree.nodes[i].path == p) return static_cast<int>(i);
  return -1;
}

std::string path_str(const Path& p) {
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ".";
    s += std::to_string(p[i]);
  }
  return s.empty() ? "root" : s;
}

}  // namespace

System Engine::approximate(const System& sys, bool on_lhs, const Path& pos,
                           const RunConfig& cfg, Rule* used) const {
  const Term& side = on_lhs ? sys.ineq.lhs : sys.ineq.rhs;
  SignedTree tree = signed_tree(side, on_lhs);
  int x = node_at_path(tree, pos);
  if (x < 0) throw EngineError("approximation: no subterm at " + path_str(pos));
  Term gamma = subterm_at(side, pos);

  // restriction 1: operated side and gamma in the star language
  LangOpts star_ext{false, true, true};
  if (!in_language(side, star_ext) || !in_language(gamma, star_ext))
    throw EngineError("approximation restriction 1: term outside the star language");
  if (!free_fpvars(gamma).empty())
    throw EngineError("approximation: extracted subterm is not a sentence");

  std::vector<int> branch = tree.branch_to(x);
  // restriction 2 (+ tame restriction): all strict ancestors skeleton
  for (size_t k = 0; k + 1 < branch.size(); ++k) {
    const auto& nd = tree.nodes[branch[k]];
    NodeClass nc = classify_node(nd.term, nd.positive);
    if (!nc.is_skeleton())
      throw EngineError("approximation restriction 2: non-skeleton node above " +
                        path_str(pos));
    if (cfg.mode == RunMode::Tame && nd.term->kind == Tk::Binder)
      throw EngineError("tame restriction: binder on the approximation branch");
  }
  // restriction 3 certificate for uppermost binders on the branch
  for (size_t k = 0; k + 1 < branch.size(); ++k) {
    const auto& nd = tree.nodes[branch[k]];
    if (nd.term->kind != Tk::Binder) continue;
    bool scoped = false;
    for (size_t j = 0; j < k; ++j)
      if (tree.nodes[branch[j]].term->kind == Tk::Binder) scoped = true;
    if (scoped) continue;
    for (size_t m = k + 1; m + 1 < branch.size(); ++m) {
      const auto& body_nd = tree.nodes[branch[m]];
      NodeClass body_nc = classify_node(body_nd.term, body_nd.positive);
      if (!body_nc.is_inner_skeleton())
        throw EngineError(
            "approximation restriction 3: binder body path not inner skeleton");
      if (body_nc.flags & SLR_inner) {
        for (int c : body_nd.children) {
          if (c == branch[m + 1]) continue;
          if (subtree_has_letter(tree, c))
            throw EngineError(
                "approximation restriction 3: live side branch under binder");
        }
      }
    }
  }
  // pivotal maximality
  if (cfg.pivotal && !tree.is_leaf(x)) {
    const auto& nd = tree.nodes[x];
    bool blocked = !classify_node(nd.term, nd.positive).is_skeleton() ||
                   (cfg.mode == RunMode::Tame && nd.term->kind == Tk::Binder);
    if (!blocked)
      throw EngineError("pivotal restriction: skeleton branch not maximal at " +
                        path_str(pos));
  }

  bool positive = tree.nodes[x].positive;
  Rule rule = on_lhs ? (positive ? Rule::ApproxLPos : Rule::ApproxLNeg)
                     : (positive ? Rule::ApproxRPos : Rule::ApproxRNeg);
  if (used) *used = rule;
  System out = sys;
  if (positive) {
    Term j = nominal(fresh_index(sys, false));
    out.S.push_back({j, gamma});
    (on_lhs ? out.ineq.lhs : out.ineq.rhs) = replace_at(side, pos, j);
  } else {
    Term m = conominal(fresh_index(sys, true));
    out.S.push_back({gamma, m});
    (on_lhs ? out.ineq.lhs : out.ineq.rhs) = replace_at(side, pos, m);
  }
  return out;
}

Inequality Engine::residuate_side(const Inequality& ineq, bool f_side,
                                  int coordinate) const {
  const Term& root = f_side ? ineq.lhs : ineq.rhs;
  const Term& other = f_side ? ineq.rhs : ineq.lhs;
  if (root->kind != Tk::App)
    throw EngineError("residuation: connective-rooted side expected");
  const ConnPtr& c = root->conn;
  if ((c->family == Family::F) != f_side)
    throw EngineError("residuation: wrong connective family for this side");
  if (coordinate < 1 || coordinate > c->arity)
    throw EngineError("residuation: coordinate out of range");
  ConnPtr r = sig_.residual_of(c->name, coordinate);
  if (!r)
    throw EngineError("residuation: no residual for " + c->name +
                      " (already a residual?)");
  std::vector<Term> args = root->args;
  Term phi_i = args[coordinate - 1];
  args[coordinate - 1] = other;
  Term res = app(r, args);
  Pol e = c->order_type[coordinate - 1];
  if (f_side)
    return e == Pol::One ? Inequality{phi_i, res} : Inequality{res, phi_i};
  return e == Pol::One ? Inequality{res, phi_i} : Inequality{phi_i, res};
}

Inequality Engine::residuate(const Inequality& ineq, int coordinate) const {
  if (ineq.lhs->kind == Tk::App && ineq.lhs->conn->family == Family::F)
    return residuate_side(ineq, true, coordinate);
  if (ineq.rhs->kind == Tk::App && ineq.rhs->conn->family == Family::G)
    return residuate_side(ineq, false, coordinate);
  throw EngineError("residuation: no residuable side");
}

namespace {

bool pos_in(const Term& t, const std::string& p) {
  Polarity x = positivity(t, p, false);
  return x == Polarity::Positive || x == Polarity::Both;
}
bool neg_in(const Term& t, const std::string& p) {
  Polarity x = positivity(t, p, false);
  return x == Polarity::Negative || x == Polarity::Both;
}

}  // namespace

System Engine::ackermann_right(const System& sys, const std::string& p) const {
  std::vector<Inequality> members = sys.S;
  members.push_back(sys.ineq);  // last member is the goal
  std::vector<Term> alphas;
  std::vector<std::pair<Inequality, bool>> rest;  // (member, is_goal)
  for (size_t k = 0; k < members.size(); ++k) {
    const Inequality& m = members[k];
    bool goal = k + 1 == members.size();
    bool occurs = contains_prop(m.lhs, p) || contains_prop(m.rhs, p);
    if (occurs && !goal && m.rhs->kind == Tk::Prop && m.rhs->name == p &&
        !contains_prop(m.lhs, p)) {
      if (!syntactic_shape(m.lhs).closed)
        throw EngineError("(RA) alpha not syntactically closed in " +
                          to_string(m));
      alphas.push_back(m.lhs);
      continue;
    }
    if (occurs) {
      if (!pos_in(m.lhs, p))
        throw EngineError("(RA) left side not positive in " + p + ": " +
                          to_string(m));
      if (!syntactic_shape(m.lhs).closed)
        throw EngineError("(RA) beta not syntactically closed in " +
                          to_string(m));
      if (!neg_in(m.rhs, p))
        throw EngineError("(RA) right side not negative in " + p + ": " +
                          to_string(m));
      if (!syntactic_shape(m.rhs).open)
        throw EngineError("(RA) gamma not syntactically open in " +
                          to_string(m));
    }
    rest.push_back({m, goal});
  }
  Term sub = alphas.empty() ? bot() : alphas[0];
  for (size_t i = 1; i < alphas.size(); ++i) sub = join(sub, alphas[i]);
  System out;
  for (auto& [m, goal] : rest) {
    Inequality r{substitute(m.lhs, p, false, sub),
                 substitute(m.rhs, p, false, sub)};
    if (goal)
      out.ineq = r;
    else
      out.S.push_back(r);
  }
  return out;
}

System Engine::ackermann_left(const System& sys, const std::string& p) const {
  std::vector<Inequality> members = sys.S;
  members.push_back(sys.ineq);
  std::vector<Term> alphas;
  std::vector<std::pair<Inequality, bool>> rest;
  for (size_t k = 0; k < members.size(); ++k) {
    const Inequality& m = members[k];
    bool goal = k + 1 == members.size();
    bool occurs = contains_prop(m.lhs, p) || contains_prop(m.rhs, p);
    if (occurs && !goal && m.lhs->kind == Tk::Prop && m.lhs->name == p &&
        !contains_prop(m.rhs, p)) {
      if (!syntactic_shape(m.rhs).open)
        throw EngineError("(LA) alpha not syntactically open in " +
                          to_string(m));
      alphas.push_back(m.rhs);
      continue;
    }
    if (occurs) {
      if (!neg_in(m.lhs, p))
        throw EngineError("(LA) left side not negative in " + p + ": " +
                          to_string(m));
      if (!syntactic_shape(m.lhs).closed)
        throw EngineError("(LA) gamma not syntactically closed in " +
                          to_string(m));
      if (!pos_in(m.rhs, p))
        throw EngineError("(LA) right side not positive in " + p + ": " +
                          to_string(m));
      if (!syntactic_shape(m.rhs).open)
        throw EngineError("(LA) beta not syntactically open in " +
                          to_string(m));
    }
    rest.push_back({m, goal});
  }
  Term sub = alphas.empty() ? top() : alphas[0];
  for (size_t i = 1; i < alphas.size(); ++i) sub = meet(sub, alphas[i]);
  System out;
  for (auto& [m, goal] : rest) {
    Inequality r{substitute(m.lhs, p, false, sub),
                 substitute(m.rhs, p, false, sub)};
    if (goal)
      out.ineq = r;
    else
      out.S.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage 2/3 driver
// ---------------------------------------------------------------------------

namespace {

struct ExtractionPoint {
  bool on_lhs;
  Path xpath;
  std::vector<Path> critical_rel;  // leaf paths relative to xpath
};

struct SurfaceTarget {
  int idx;       // index into S
  bool on_left;  // side of S[idx] holding the tracked subtree
  Path rel;
};

void collect_system_props(const System& sys, std::vector<std::string>& out) {
  for (const auto& i : sys.S) {
    collect_props(i.lhs, out);
    collect_props(i.rhs, out);
  }
  collect_props(sys.ineq.lhs, out);
  collect_props(sys.ineq.rhs, out);
}

}  // namespace

RunOutcome Engine::run(const Inequality& input, const RunConfig& cfg) const {
  RunOutcome out;

  // strategy witness
  Epsilon eps;
  StrictOrder omega;
  if (cfg.epsilon) {
    eps = *cfg.epsilon;
    if (cfg.omega) omega = *cfg.omega;
  } else {
    ClassReport rep = classify_inequality(input);
    const ClassVerdict* v = nullptr;
    if (cfg.mode == RunMode::Tame && rep.tame.holds) v = &rep.tame;
    if (!v && rep.restricted.holds) v = &rep.restricted;
    if (!v && rep.inductive.holds) v = &rep.inductive;
    if (!v && rep.recursive.holds) v = &rep.recursive;
    if (v) {
      for (size_t i = 0; i < rep.letters.size(); ++i)
        eps[rep.letters[i]] = v->epsilon[i];
      omega = v->omega;
    } else {
      for (const auto& p : collect_props(input)) eps[p] = Pol::One;
    }
  }
  auto eps_of = [&](const std::string& p) {
    auto it = eps.find(p);
    return it == eps.end() ? Pol::One : it->second;
  };

  out.preprocessed = preprocess(input, &out.pre_steps);

  bool all_ok = true;
  for (const System& sys0 : out.preprocessed) {
    SystemTrace tr;
    tr.initial = sys0;
    System sys = sys0;
    auto step = [&](Rule r, const std::string& pos, const System& before,
                    const System& after) {
      tr.steps.push_back({r, pos, {to_quasi(before)}, {to_quasi(after)}});
    };
    auto fail = [&](const std::string& why) {
      tr.success = false;
      tr.failure = why;
      tr.final = sys;
      all_ok = false;
    };
    try {
      if (is_pure(sys)) {
        tr.success = true;
        tr.final = sys;
        out.systems.push_back(std::move(tr));
        continue;
      }
      // --- extraction at maximal skeleton prefixes of all letter branches
      std::vector<ExtractionPoint> points;
      for (bool on_lhs : {true, false}) {
        const Term& side = on_lhs ? sys.ineq.lhs : sys.ineq.rhs;
        SignedTree tree = signed_tree(side, on_lhs);
        for (size_t n = 0; n < tree.nodes.size(); ++n) {
          const auto& leaf = tree.nodes[n];
          if (leaf.term->kind != Tk::Prop) continue;
          std::vector<int> branch = tree.branch_to(static_cast<int>(n));
          size_t xpos = branch.size() - 1;
          for (size_t k = 0; k + 1 < branch.size(); ++k) {
            const auto& nd = tree.nodes[branch[k]];
            bool blocked = !classify_node(nd.term, nd.positive).is_skeleton() ||
                           (cfg.mode == RunMode::Tame &&
                            nd.term->kind == Tk::Binder);
            if (blocked) {
              xpos = k;
              break;
            }
          }
          const Path& xpath = tree.nodes[branch[xpos]].path;
          bool critical = leaf.positive == (eps_of(leaf.term->name) == Pol::One);
          ExtractionPoint* pt = nullptr;
          for (auto& q : points)
            if (q.on_lhs == on_lhs && q.xpath == xpath) pt = &q;
          if (!pt) {
            points.push_back({on_lhs, xpath, {}});
            pt = &points.back();
          }
          if (critical) {
            Path rel(leaf.path.begin() + xpath.size(), leaf.path.end());
            pt->critical_rel.push_back(std::move(rel));
          }
        }
      }
      std::stable_sort(points.begin(), points.end(),
                       [](const ExtractionPoint& a, const ExtractionPoint& b) {
                         if (a.on_lhs != b.on_lhs) return a.on_lhs;
                         return a.xpath < b.xpath;
                       });
      std::vector<SurfaceTarget> targets;
      for (const auto& pt : points) {
        Rule used;
        System next = approximate(sys, pt.on_lhs, pt.xpath, cfg, &used);
        step(used, (pt.on_lhs ? "lhs@" : "rhs@") + path_str(pt.xpath), sys,
             next);
        int idx = static_cast<int>(next.S.size()) - 1;
        // j <= gamma puts gamma on the right; gamma <= m puts it on the left
        bool gamma_on_right = next.S[idx].lhs->kind == Tk::Nom;
        for (const Path& rel : pt.critical_rel)
          targets.push_back({idx, !gamma_on_right, rel});
        sys = std::move(next);
      }
      // --- proper-run coverage: binders on live branches must sit on an
      // extraction branch
      if (cfg.mode == RunMode::Proper) {
        for (bool on_lhs : {true, false}) {
          const Term& side = on_lhs ? sys0.ineq.lhs : sys0.ineq.rhs;
          SignedTree tree = signed_tree(side, on_lhs);
          for (size_t n = 0; n < tree.nodes.size(); ++n) {
            const auto& nd = tree.nodes[n];
            if (nd.term->kind != Tk::Binder) continue;
            if (!subtree_has_letter(tree, static_cast<int>(n))) continue;
            bool covered = false;
            for (const auto& pt : points)
              if (pt.on_lhs == on_lhs && pt.xpath.size() > nd.path.size() &&
                  std::equal(nd.path.begin(), nd.path.end(), pt.xpath.begin()))
                covered = true;
            if (!covered)
              throw EngineError("proper run: binder at " +
                                std::string(on_lhs ? "lhs@" : "rhs@") +
                                path_str(nd.path) +
                                " not on an extraction branch");
          }
        }
      }
      // --- surfacing of critical occurrences through their PIA paths
      for (size_t ti = 0; ti < targets.size(); ++ti) {
        while (!targets[ti].rel.empty()) {
          SurfaceTarget& t = targets[ti];
          Inequality& m = sys.S[t.idx];
          const Term& tracked = t.on_left ? m.lhs : m.rhs;
          int k = t.rel.front();
          System before = sys;
          if (!t.on_left && tracked->kind == Tk::Meet) {
            Inequality other{m.lhs, tracked->args[1]};
            m.rhs = tracked->args[0];
            sys.S.push_back(other);
            int new_idx = static_cast<int>(sys.S.size()) - 1;
            for (auto& u : targets) {
              if (u.idx != t.idx || u.rel.empty()) continue;
              int first = u.rel.front();
              u.rel.erase(u.rel.begin());
              if (first == 1) u.idx = new_idx;
            }
            step(Rule::Split, "S[" + std::to_string(t.idx) + "]", before, sys);
          } else if (t.on_left && tracked->kind == Tk::Join) {
            Inequality other{tracked->args[1], m.rhs};
            m.lhs = tracked->args[0];
            sys.S.push_back(other);
            int new_idx = static_cast<int>(sys.S.size()) - 1;
            for (auto& u : targets) {
              if (u.idx != t.idx || u.rel.empty()) continue;
              int first = u.rel.front();
              u.rel.erase(u.rel.begin());
              if (first == 1) u.idx = new_idx;
            }
            step(Rule::Split, "S[" + std::to_string(t.idx) + "]", before, sys);
          } else if (tracked->kind == Tk::App) {
            bool f_side = t.on_left;
            if ((tracked->conn->family == Family::F) != f_side)
              throw EngineError("cannot surface letter: " +
                                std::string(f_side ? "G" : "F") +
                                "-connective on the wrong side in " +
                                to_string(m));
            for (const auto& u : targets)
              if (&u != &t && u.idx == t.idx && !u.rel.empty() &&
                  u.rel.front() != k)
                throw EngineError(
                    "cannot surface two coordinates of one connective in " +
                    to_string(m));
            Pol e = tracked->conn->order_type[k];
            Inequality r = residuate_side(m, f_side, k + 1);
            sys.S[t.idx] = r;
            bool new_on_left = f_side == (e == Pol::One);
            for (auto& u : targets) {
              if (u.idx != t.idx || u.rel.empty()) continue;
              u.rel.erase(u.rel.begin());
              u.on_left = new_on_left;
            }
            step(Rule::Residuate,
                 "S[" + std::to_string(t.idx) + "]@" + std::to_string(k + 1),
                 before, sys);
          } else {
            throw EngineError("cannot surface letter through " + to_string(m));
          }
        }
      }
      // --- Ackermann elimination, Omega-maximal letters first
      std::vector<std::string> letters;
      collect_system_props(sys, letters);
      std::sort(letters.begin(), letters.end());
      letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
      while (!letters.empty()) {
        std::string pick;
        for (const auto& p : letters) {
          bool maximal = true;
          for (const auto& q : letters)
            if (q != p && omega.less(p, q)) maximal = false;
          if (maximal) {
            pick = p;
            break;
          }
        }
        if (pick.empty()) pick = letters.front();  // cyclic Omega fallback
        System before = sys;
        if (eps_of(pick) == Pol::One) {
          sys = ackermann_right(sys, pick);
          step(Rule::AckermannRA, pick, before, sys);
        } else {
          sys = ackermann_left(sys, pick);
          step(Rule::AckermannLA, pick, before, sys);
        }
        letters.erase(std::find(letters.begin(), letters.end(), pick));
      }
      if (!is_pure(sys)) throw EngineError("letters remain after elimination");
      tr.success = true;
      tr.final = sys;
    } catch (const EngineError& e) {
      fail(e.what());
    }
    out.systems.push_back(std::move(tr));
  }

  out.success = all_ok;
  if (all_ok) {
    for (const auto& s : out.systems) out.output.push_back(to_quasi(s.final));
  } else {
    for (const auto& s : out.systems)
      if (!s.success) {
        out.failure_reason = s.failure;
        break;
      }
  }
  return out;
}

bool replay(const Engine& eng, const Inequality& input, const RunConfig& cfg,
            const RunOutcome& recorded, std::string* why) {
  auto complain = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  // chain consistency of every per-system trace
  for (size_t k = 0; k < recorded.systems.size(); ++k) {
    const SystemTrace& tr = recorded.systems[k];
    std::string cur = to_string(tr.initial);
    for (const auto& s : tr.steps) {
      if (s.before.size() != 1 || to_string(s.before[0]) != cur)
        return complain("trace chain broken before step " + to_string(s));
      if (s.after.size() != 1) return complain("malformed stage-2 step");
      cur = to_string(s.after[0]);
    }
    if (tr.success && to_string(tr.final) != cur)
      return complain("trace does not end at the recorded final system");
  }
  // deterministic re-run reproduces the recording bit-exactly
  RunOutcome again = eng.run(input, cfg);
  if (to_string(again) != to_string(recorded))
    return complain("re-run diverges from the recorded trace");
  return true;
}

}  // namespace alba

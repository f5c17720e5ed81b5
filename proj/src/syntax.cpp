#include "alba/syntax.hpp"

#include <algorithm>
#include <map>

namespace alba {

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

Signature declare_signature(const std::vector<Signature::Decl>& decls) {
  Signature sig;
  for (const auto& d : decls) {
    if (sig.find(d.name))
      throw SyntaxError("duplicate connective name: " + d.name);
    if (d.order_type.size() != d.arity)
      throw SyntaxError("order-type length mismatch for " + d.name);
    auto c = std::make_shared<Connective>();
    c->name = d.name;
    c->family = d.family;
    c->arity = d.arity;
    c->order_type = d.order_type;
    sig.conns_.push_back(std::move(c));
  }
  return sig;
}

Signature expand_tense(const Signature& sig) {
  if (sig.expanded_) throw SyntaxError("signature already tense-expanded");
  Signature out = sig;
  for (const auto& c : sig.conns_) {
    for (int i = 1; i <= c->arity; ++i) {
      auto r = std::make_shared<Connective>();
      r->is_residual = true;
      r->parent = c->name;
      r->coordinate = i;
      r->arity = c->arity;
      r->order_type = c->order_type;
      Pol ei = c->order_type[i - 1];
      if (ei == Pol::One) {
        // residual keeps coordinate i, flips the others
        for (int j = 0; j < c->arity; ++j)
          if (j != i - 1) r->order_type.entries[j] = flip(c->order_type[j]);
      }
      if (c->family == Family::F) {
        r->name = c->name + "#" + std::to_string(i);
        r->family = ei == Pol::One ? Family::G : Family::F;
      } else {
        r->name = c->name + "b" + std::to_string(i);
        r->family = ei == Pol::One ? Family::F : Family::G;
      }
      out.conns_.push_back(std::move(r));
    }
  }
  out.expanded_ = true;
  return out;
}

// ---------------------------------------------------------------------------
// Term construction
// ---------------------------------------------------------------------------

static Term mk(Tk kind) {
  auto n = std::make_shared<TermNode>();
  n->kind = kind;
  return n;
}

Term bot() { return mk(Tk::Bot); }
Term top() { return mk(Tk::Top); }

Term prop(const std::string& name) {
  auto n = std::make_shared<TermNode>();
  n->kind = Tk::Prop;
  n->name = name;
  return n;
}

Term fpvar(const std::string& name) {
  auto n = std::make_shared<TermNode>();
  n->kind = Tk::FpVar;
  n->name = name;
  return n;
}

Term nominal(int index) {
  auto n = std::make_shared<TermNode>();
  n->kind = Tk::Nom;
  n->index = index;
  return n;
}

Term conominal(int index) {
  auto n = std::make_shared<TermNode>();
  n->kind = Tk::Conom;
  n->index = index;
  return n;
}

Term meet(Term a, Term b) {
  auto n = std::make_shared<TermNode>();
  n->kind = Tk::Meet;
  n->args = {std::move(a), std::move(b)};
  return n;
}

Term join(Term a, Term b) {
  auto n = std::make_shared<TermNode>();
  n->kind = Tk::Join;
  n->args = {std::move(a), std::move(b)};
  return n;
}

Term app(ConnPtr c, std::vector<Term> args) {
  if (!c) throw SyntaxError("null connective");
  if (static_cast<int>(args.size()) != c->arity)
    throw SyntaxError("arity mismatch for " + c->name + ": got " +
                      std::to_string(args.size()) + ", expected " +
                      std::to_string(c->arity));
  auto n = std::make_shared<TermNode>();
  n->kind = Tk::App;
  n->conn = std::move(c);
  n->args = std::move(args);
  return n;
}

Term binder(BinderKind k, const std::string& var, Term body) {
  Polarity p = positivity(body, var, true);
  if (p != Polarity::Positive && p != Polarity::Both)
    throw SyntaxError("binder body not positive in " + var);
  auto n = std::make_shared<TermNode>();
  n->kind = Tk::Binder;
  n->binder = k;
  n->var = var;
  n->args = {std::move(body)};
  return n;
}

bool term_equal(const Term& a, const Term& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Tk::Bot:
    case Tk::Top:
      return true;
    case Tk::Prop:
    case Tk::FpVar:
      return a->name == b->name;
    case Tk::Nom:
    case Tk::Conom:
      return a->index == b->index;
    case Tk::App:
      if (a->conn->name != b->conn->name) return false;
      break;
    case Tk::Binder:
      if (a->binder != b->binder || a->var != b->var) return false;
      break;
    default:
      break;
  }
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Traversal
// ---------------------------------------------------------------------------

Term subterm_at(const Term& t, const Path& path) {
  Term cur = t;
  for (int i : path) cur = cur->args.at(i);
  return cur;
}

Term replace_at(const Term& t, const Path& path, const Term& s) {
  if (path.empty()) return s;
  auto n = std::make_shared<TermNode>(*t);
  Path rest(path.begin() + 1, path.end());
  n->args[path[0]] = replace_at(t->args.at(path[0]), rest, s);
  return n;
}

void collect_props(const Term& t, std::vector<std::string>& out) {
  if (t->kind == Tk::Prop) {
    if (std::find(out.begin(), out.end(), t->name) == out.end())
      out.push_back(t->name);
  }
  for (const auto& a : t->args) collect_props(a, out);
}

std::vector<std::string> collect_props(const Inequality& ineq) {
  std::vector<std::string> out;
  collect_props(ineq.lhs, out);
  collect_props(ineq.rhs, out);
  return out;
}

bool contains_prop(const Term& t, const std::string& p) {
  if (t->kind == Tk::Prop && t->name == p) return true;
  for (const auto& a : t->args)
    if (contains_prop(a, p)) return true;
  return false;
}

bool has_props(const Term& t) {
  if (t->kind == Tk::Prop) return true;
  for (const auto& a : t->args)
    if (has_props(a)) return true;
  return false;
}

bool has_binders(const Term& t) {
  if (t->kind == Tk::Binder) return true;
  for (const auto& a : t->args)
    if (has_binders(a)) return true;
  return false;
}

static void free_fpvars_rec(const Term& t, std::set<std::string>& bound,
                            std::set<std::string>& out) {
  if (t->kind == Tk::FpVar) {
    if (!bound.count(t->name)) out.insert(t->name);
    return;
  }
  if (t->kind == Tk::Binder) {
    bool added = bound.insert(t->var).second;
    free_fpvars_rec(t->args[0], bound, out);
    if (added) bound.erase(t->var);
    return;
  }
  for (const auto& a : t->args) free_fpvars_rec(a, bound, out);
}

std::set<std::string> free_fpvars(const Term& t) {
  std::set<std::string> bound, out;
  free_fpvars_rec(t, bound, out);
  return out;
}

bool is_sentence(const Term& t) { return free_fpvars(t).empty(); }

// ---------------------------------------------------------------------------
// Signed trees
// ---------------------------------------------------------------------------

std::vector<int> SignedTree::branch_to(int i) const {
  std::vector<int> b;
  for (int cur = i; cur != -1; cur = nodes[cur].parent) b.push_back(cur);
  std::reverse(b.begin(), b.end());
  return b;
}

static void build_signed(SignedTree& st, const Term& t, bool positive,
                         Path& path, int parent) {
  int idx = static_cast<int>(st.nodes.size());
  st.nodes.push_back({t.get(), positive, path, parent, {}});
  if (parent != -1) st.nodes[parent].children.push_back(idx);
  for (size_t i = 0; i < t->args.size(); ++i) {
    bool child_pos = positive;
    if (t->kind == Tk::App && t->conn->order_type[static_cast<int>(i)] == Pol::Del)
      child_pos = !positive;
    path.push_back(static_cast<int>(i));
    build_signed(st, t->args[i], child_pos, path, idx);
    path.pop_back();
  }
}

SignedTree signed_tree(const Term& t, bool positive) {
  SignedTree st;
  Path path;
  build_signed(st, t, positive, path, -1);
  return st;
}

static void polarity_rec(const Term& t, bool positive, const std::string& name,
                         bool is_fp, std::set<std::string>& shadow, int& pos,
                         int& neg) {
  if (!is_fp && t->kind == Tk::Prop && t->name == name) {
    (positive ? pos : neg)++;
    return;
  }
  if (is_fp && t->kind == Tk::FpVar && t->name == name && !shadow.count(name)) {
    (positive ? pos : neg)++;
    return;
  }
  if (t->kind == Tk::Binder) {
    bool shadows = is_fp && t->var == name;
    if (shadows) {
      if (shadow.count(name)) {
        polarity_rec(t->args[0], positive, name, is_fp, shadow, pos, neg);
      } else {
        shadow.insert(name);
        polarity_rec(t->args[0], positive, name, is_fp, shadow, pos, neg);
        shadow.erase(name);
      }
    } else {
      polarity_rec(t->args[0], positive, name, is_fp, shadow, pos, neg);
    }
    return;
  }
  for (size_t i = 0; i < t->args.size(); ++i) {
    bool child_pos = positive;
    if (t->kind == Tk::App && t->conn->order_type[static_cast<int>(i)] == Pol::Del)
      child_pos = !positive;
    polarity_rec(t->args[i], child_pos, name, is_fp, shadow, pos, neg);
  }
}

Polarity positivity(const Term& t, const std::string& name, bool is_fp) {
  int pos = 0, neg = 0;
  std::set<std::string> shadow;
  polarity_rec(t, true, name, is_fp, shadow, pos, neg);
  if (pos == 0 && neg == 0) return Polarity::Both;
  if (neg == 0) return Polarity::Positive;
  if (pos == 0) return Polarity::Negative;
  return Polarity::Neither;
}

// ---------------------------------------------------------------------------
// Substitution and star translation
// ---------------------------------------------------------------------------

static void used_fpvars(const Term& t, std::set<std::string>& out) {
  if (t->kind == Tk::FpVar) out.insert(t->name);
  if (t->kind == Tk::Binder) out.insert(t->var);
  for (const auto& a : t->args) used_fpvars(a, out);
}

std::string fresh_name(const std::string& prefix, const std::set<std::string>& used) {
  for (int k = 1;; ++k) {
    std::string cand = prefix + std::to_string(k);
    if (!used.count(cand)) return cand;
  }
}

static Term subst_rec(const Term& t, const std::string& name, bool is_fp,
                      const Term& s, const std::set<std::string>& s_free) {
  switch (t->kind) {
    case Tk::Prop:
      if (!is_fp && t->name == name) return s;
      return t;
    case Tk::FpVar:
      if (is_fp && t->name == name) return s;
      return t;
    case Tk::Binder: {
      if (is_fp && t->var == name) return t;  // shadowed
      // does the variable occur free below at all?
      bool occurs = is_fp ? free_fpvars(t).count(name) != 0
                          : contains_prop(t, name);
      if (!occurs) return t;
      if (s_free.count(t->var)) {
        // capture: rename the bound variable first
        std::set<std::string> used = s_free;
        used_fpvars(t->args[0], used);
        used.insert(t->var);
        std::string nv = fresh_name("X", used);
        Term renamed = subst_rec(t->args[0], t->var, true, fpvar(nv), {});
        auto n = std::make_shared<TermNode>(*t);
        n->var = nv;
        n->args = {subst_rec(renamed, name, is_fp, s, s_free)};
        return n;
      }
      auto n = std::make_shared<TermNode>(*t);
      n->args = {subst_rec(t->args[0], name, is_fp, s, s_free)};
      return n;
    }
    default: {
      if (t->args.empty()) return t;
      auto n = std::make_shared<TermNode>(*t);
      for (size_t i = 0; i < n->args.size(); ++i)
        n->args[i] = subst_rec(t->args[i], name, is_fp, s, s_free);
      return n;
    }
  }
}

Term substitute(const Term& t, const std::string& name, bool is_fp, const Term& s) {
  return subst_rec(t, name, is_fp, s, free_fpvars(s));
}

Term star_translation(const Term& t) {
  if (t->args.empty()) return t;
  auto n = std::make_shared<TermNode>(*t);
  if (t->kind == Tk::Binder) {
    if (is_mu_like(t->binder))
      n->binder = BinderKind::MuStar;
    else
      n->binder = BinderKind::NuStar;
  }
  for (size_t i = 0; i < n->args.size(); ++i)
    n->args[i] = star_translation(t->args[i]);
  return n;
}

bool in_language(const Term& t, const LangOpts& o) {
  switch (t->kind) {
    case Tk::Nom:
    case Tk::Conom:
      if (!o.extended) return false;
      break;
    case Tk::App:
      if (t->conn->is_residual && !o.extended) return false;
      break;
    case Tk::Binder: {
      bool star = is_star(t->binder);
      if (star && !o.binders_star) return false;
      if (!star && !o.binders_plain) return false;
      break;
    }
    default:
      break;
  }
  for (const auto& a : t->args)
    if (!in_language(a, o)) return false;
  return true;
}

}  // namespace alba

#include "alba/algebra.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace alba {

// ---------------------------------------------------------------------------
// Lattice construction
// ---------------------------------------------------------------------------

FiniteLattice FiniteLattice::from_covers(
    std::vector<std::string> names,
    const std::vector<std::pair<int, int>>& covers, std::string label) {
  FiniteLattice lat;
  lat.label = std::move(label);
  lat.n_ = static_cast<int>(names.size());
  lat.names_ = std::move(names);
  int n = lat.n_;
  if (n == 0) throw AlgebraError("empty lattice");
  lat.leq_.assign(n * n, 0);
  for (int i = 0; i < n; ++i) lat.leq_[i * n + i] = 1;
  for (auto [a, b] : covers) lat.leq_[a * n + b] = 1;
  // transitive closure
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (lat.leq_[i * n + k] && lat.leq_[k * n + j]) lat.leq_[i * n + j] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && lat.leq_[i * n + j] && lat.leq_[j * n + i])
        throw AlgebraError("order relation has a cycle");

  auto lub = [&](int a, int b) -> int {
    int best = -1;
    for (int u = 0; u < n; ++u) {
      if (!lat.leq_[a * n + u] || !lat.leq_[b * n + u]) continue;
      if (best == -1 || lat.leq_[u * n + best]) best = u;
    }
    if (best == -1) return -1;
    // verify least
    for (int u = 0; u < n; ++u)
      if (lat.leq_[a * n + u] && lat.leq_[b * n + u] && !lat.leq_[best * n + u])
        return -1;
    return best;
  };
  auto glb = [&](int a, int b) -> int {
    int best = -1;
    for (int u = 0; u < n; ++u) {
      if (!lat.leq_[u * n + a] || !lat.leq_[u * n + b]) continue;
      if (best == -1 || lat.leq_[best * n + u]) best = u;
    }
    if (best == -1) return -1;
    for (int u = 0; u < n; ++u)
      if (lat.leq_[u * n + a] && lat.leq_[u * n + b] && !lat.leq_[u * n + best])
        return -1;
    return best;
  };

  lat.meet_.assign(n * n, 0);
  lat.join_.assign(n * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int j = lub(a, b), m = glb(a, b);
      if (j < 0)
        throw AlgebraError("join of " + lat.names_[a] + " and " +
                           lat.names_[b] + " does not exist");
      if (m < 0)
        throw AlgebraError("meet of " + lat.names_[a] + " and " +
                           lat.names_[b] + " does not exist");
      lat.join_[a * n + b] = static_cast<uint8_t>(j);
      lat.meet_[a * n + b] = static_cast<uint8_t>(m);
    }

  lat.bot_ = lat.top_ = -1;
  for (int u = 0; u < n; ++u) {
    bool is_bot = true, is_top = true;
    for (int v = 0; v < n; ++v) {
      if (!lat.leq_[u * n + v]) is_bot = false;
      if (!lat.leq_[v * n + u]) is_top = false;
    }
    if (is_bot) lat.bot_ = u;
    if (is_top) lat.top_ = u;
  }
  if (lat.bot_ < 0 || lat.top_ < 0) throw AlgebraError("lattice has no bounds");
  return lat;
}

FiniteLattice chain_lattice(int k) {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> covers;
  for (int i = 0; i < k; ++i) {
    names.push_back("c" + std::to_string(i));
    if (i) covers.push_back({i - 1, i});
  }
  return FiniteLattice::from_covers(names, covers, "chain" + std::to_string(k));
}

FiniteLattice boolean_square() {
  return FiniteLattice::from_covers({"0", "a", "b", "1"},
                                    {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, "2^2");
}

FiniteLattice boolean_cube() {
  // elements as bitmasks 0..7, covers = single-bit additions
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> covers;
  for (int i = 0; i < 8; ++i) names.push_back("b" + std::to_string(i));
  for (int i = 0; i < 8; ++i)
    for (int bit = 0; bit < 3; ++bit)
      if (!(i & (1 << bit))) covers.push_back({i, i | (1 << bit)});
  return FiniteLattice::from_covers(names, covers, "2^3");
}

FiniteLattice m3_lattice() {
  return FiniteLattice::from_covers(
      {"0", "a", "b", "c", "1"},
      {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}}, "M3");
}

FiniteLattice n5_lattice() {
  return FiniteLattice::from_covers({"0", "a", "b", "c", "1"},
                                    {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}},
                                    "N5");
}

std::vector<FiniteLattice> lattice_catalog(int max_size) {
  std::vector<FiniteLattice> out;
  for (int k = 2; k <= 5; ++k)
    if (k <= max_size) out.push_back(chain_lattice(k));
  if (max_size >= 4) out.push_back(boolean_square());
  if (max_size >= 8) out.push_back(boolean_cube());
  if (max_size >= 5) {
    out.push_back(m3_lattice());
    out.push_back(n5_lattice());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operations, normality, residuals
// ---------------------------------------------------------------------------

static size_t table_size(int n, int arity) {
  size_t s = 1;
  for (int i = 0; i < arity; ++i) s *= n;
  return s;
}

static size_t tuple_index(int n, const std::vector<int>& args) {
  size_t idx = 0;
  for (size_t i = 0; i < args.size(); ++i) idx = idx * n + args[i];
  return idx;
}

int FiniteLE::op_value(const std::string& name, const std::vector<int>& args) const {
  auto it = ops.find(name);
  if (it == ops.end()) throw AlgebraError("no table for connective " + name);
  return it->second[tuple_index(lat.size(), args)];
}

// Enumerate all argument tuples of the given arity.
template <typename Fn>
static void for_tuples(int n, int arity, Fn fn) {
  std::vector<int> args(arity, 0);
  while (true) {
    fn(args);
    int i = arity - 1;
    for (; i >= 0; --i) {
      if (++args[i] < n) break;
      args[i] = 0;
    }
    if (i < 0) break;
  }
}

static std::string tuple_str(const FiniteLattice& lat, const std::vector<int>& args) {
  std::string s = "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += lat.name(args[i]);
  }
  return s + ")";
}

// Coordinatewise normality per family and order-type, empty joins/meets
// included.
static void check_normality(const FiniteLattice& lat, const Connective& c,
                            const std::vector<uint8_t>& tbl) {
  int n = lat.size();
  bool is_f = c.family == Family::F;
  auto value = [&](const std::vector<int>& args) {
    return static_cast<int>(tbl[tuple_index(n, args)]);
  };
  if (c.arity == 0) return;  // constants carry no coordinatewise laws
  for (int i = 0; i < c.arity; ++i) {
    Pol e = c.order_type[i];
    for_tuples(n, c.arity - 1, [&](const std::vector<int>& rest) {
      auto at = [&](int a) {
        std::vector<int> args(rest.begin(), rest.begin() + i);
        args.push_back(a);
        args.insert(args.end(), rest.begin() + i, rest.end());
        return value(args);
      };
      // empty case
      int unit = (is_f == (e == Pol::One)) ? lat.bot() : lat.top();
      int target = is_f ? lat.bot() : lat.top();
      if (at(unit) != target) {
        std::vector<int> w(rest.begin(), rest.begin() + i);
        w.push_back(unit);
        w.insert(w.end(), rest.begin() + i, rest.end());
        throw AlgebraError("normality violation for " + c.name +
                           " (empty case) at " + tuple_str(lat, w));
      }
      // binary case
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
          int combined = (is_f == (e == Pol::One)) ? lat.join(a, b) : lat.meet(a, b);
          int lhs = at(combined);
          int rhs = is_f ? lat.join(at(a), at(b)) : lat.meet(at(a), at(b));
          if (lhs != rhs) {
            std::vector<int> w(rest.begin(), rest.begin() + i);
            w.push_back(combined);
            w.insert(w.end(), rest.begin() + i, rest.end());
            throw AlgebraError("normality violation for " + c.name +
                               " in coordinate " + std::to_string(i + 1) +
                               " at " + tuple_str(lat, w));
          }
        }
    });
  }
}

// Residual of `base` in coordinate i by exhaustive adjunction. Existence is
// guaranteed by normality on a finite lattice.
static std::vector<uint8_t> residual_table(const FiniteLattice& lat,
                                           const Connective& base,
                                           const std::vector<uint8_t>& tbl,
                                           int i) {
  int n = lat.size();
  std::vector<uint8_t> out(table_size(n, base.arity), 0);
  Pol e = base.order_type[i];
  bool is_f = base.family == Family::F;
  for_tuples(n, base.arity, [&](const std::vector<int>& args) {
    // args: coordinate i holds b, the rest are passed through
    int b = args[i];
    // candidates a with f(..a..) <= b (F) resp. b <= g(..a..) (G)
    int acc = -1;
    bool want_max = (is_f == (e == Pol::One));
    for (int a = 0; a < n; ++a) {
      std::vector<int> inner = args;
      inner[i] = a;
      int v = tbl[tuple_index(n, inner)];
      bool sat = is_f ? lat.le(v, b) : lat.le(b, v);
      if (!sat) continue;
      acc = acc < 0 ? a : (want_max ? lat.join(acc, a) : lat.meet(acc, a));
    }
    if (acc < 0)
      throw AlgebraError("residual undefined for " + base.name);
    // acc must itself satisfy the bound (max/min exists under normality)
    std::vector<int> inner = args;
    inner[i] = acc;
    int v = tbl[tuple_index(n, inner)];
    bool sat = is_f ? lat.le(v, b) : lat.le(b, v);
    if (!sat) throw AlgebraError("residual not attained for " + base.name);
    out[tuple_index(n, args)] = static_cast<uint8_t>(acc);
  });
  return out;
}

void attach_operation(FiniteLE& le, const std::string& conn,
                      std::vector<uint8_t> table) {
  ConnPtr c = le.sig.find(conn);
  if (!c) throw AlgebraError("unknown connective: " + conn);
  if (c->is_residual)
    throw AlgebraError("residual tables are computed, not attached: " + conn);
  if (table.size() != table_size(le.lat.size(), c->arity))
    throw AlgebraError("table size mismatch for " + conn);
  check_normality(le.lat, *c, table);
  for (int i = 1; i <= c->arity; ++i) {
    ConnPtr r = le.sig.residual_of(conn, i);
    if (r) le.ops[r->name] = residual_table(le.lat, *c, table, i - 1);
  }
  le.ops[conn] = std::move(table);
}

bool residuals_consistent(const FiniteLE& le) {
  int n = le.lat.size();
  for (const auto& c : le.sig.connectives()) {
    if (c->is_residual || c->arity == 0) continue;
    auto base_it = le.ops.find(c->name);
    if (base_it == le.ops.end()) continue;
    for (int i = 0; i < c->arity; ++i) {
      ConnPtr r = le.sig.residual_of(c->name, i + 1);
      if (!r || !le.ops.count(r->name)) return false;
      const auto& rt = le.ops.at(r->name);
      bool ok = true;
      for_tuples(n, c->arity, [&](const std::vector<int>& args) {
        for (int b = 0; b < n && ok; ++b) {
          std::vector<int> rargs = args;
          rargs[i] = b;
          int res = rt[tuple_index(n, rargs)];
          int fv = base_it->second[tuple_index(n, args)];
          int a = args[i];
          Pol e = c->order_type[i];
          bool left, right;
          if (c->family == Family::F) {
            left = le.lat.le(fv, b);
            right = e == Pol::One ? le.lat.le(a, res) : le.lat.le(res, a);
          } else {
            left = le.lat.le(b, fv);
            right = e == Pol::One ? le.lat.le(res, a) : le.lat.le(a, res);
          }
          if (left != right) ok = false;
        }
      });
      if (!ok) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

std::string symbol_key(const TermNode* leaf) {
  switch (leaf->kind) {
    case Tk::Prop: return leaf->name;
    case Tk::FpVar: return leaf->name;
    case Tk::Nom: return "j" + std::to_string(leaf->index);
    case Tk::Conom: return "m" + std::to_string(leaf->index);
    default: return "";
  }
}

static void collect_symbols_rec(const Term& t, std::set<std::string>& bound,
                                std::vector<std::string>& out) {
  switch (t->kind) {
    case Tk::Prop:
    case Tk::Nom:
    case Tk::Conom: {
      std::string k = symbol_key(t.get());
      if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
      return;
    }
    case Tk::FpVar: {
      if (bound.count(t->name)) return;
      if (std::find(out.begin(), out.end(), t->name) == out.end())
        out.push_back(t->name);
      return;
    }
    case Tk::Binder: {
      bool added = bound.insert(t->var).second;
      collect_symbols_rec(t->args[0], bound, out);
      if (added) bound.erase(t->var);
      return;
    }
    default:
      for (const auto& a : t->args) collect_symbols_rec(a, bound, out);
  }
}

void collect_symbols(const Term& t, std::vector<std::string>& out) {
  std::set<std::string> bound;
  collect_symbols_rec(t, bound, out);
}

namespace {

struct EvalCtx {
  const FiniteLE& le;
  const Assignment& v;
  std::vector<std::pair<std::string, int>> fpenv;
};

int eval_rec(const Term& t, EvalCtx& ctx) {
  const FiniteLattice& lat = ctx.le.lat;
  switch (t->kind) {
    case Tk::Bot: return lat.bot();
    case Tk::Top: return lat.top();
    case Tk::FpVar: {
      for (auto it = ctx.fpenv.rbegin(); it != ctx.fpenv.rend(); ++it)
        if (it->first == t->name) return it->second;
      [[fallthrough]];
    }
    case Tk::Prop:
    case Tk::Nom:
    case Tk::Conom: {
      auto it = ctx.v.find(symbol_key(t.get()));
      if (it == ctx.v.end())
        throw AlgebraError("unbound symbol: " + symbol_key(t.get()));
      return it->second;
    }
    case Tk::Meet:
      return lat.meet(eval_rec(t->args[0], ctx), eval_rec(t->args[1], ctx));
    case Tk::Join:
      return lat.join(eval_rec(t->args[0], ctx), eval_rec(t->args[1], ctx));
    case Tk::App: {
      std::vector<int> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(eval_rec(a, ctx));
      return ctx.le.op_value(t->conn->name, args);
    }
    case Tk::Binder: {
      bool mu = is_mu_like(t->binder);
      int x = mu ? lat.bot() : lat.top();
      ctx.fpenv.push_back({t->var, x});
      for (int step = 0;; ++step) {
        if (step > lat.size() + 1)
          throw AlgebraError("fixed point iteration exceeded lattice size");
        ctx.fpenv.back().second = x;
        int next = eval_rec(t->args[0], ctx);
        if (next == x) break;
        x = next;
      }
      ctx.fpenv.pop_back();
      return x;
    }
  }
  throw AlgebraError("unreachable");
}

}  // namespace

int evaluate(const Term& t, const FiniteLE& le, const Assignment& v) {
  EvalCtx ctx{le, v, {}};
  return eval_rec(t, ctx);
}

// ---------------------------------------------------------------------------
// Validity checks
// ---------------------------------------------------------------------------

template <typename Fn>
static std::optional<Counterexample> search_assignments(
    const FiniteLE& le, const std::vector<std::string>& symbols, Fn holds) {
  int n = le.lat.size();
  std::vector<int> vals(symbols.size(), 0);
  while (true) {
    Assignment v;
    for (size_t i = 0; i < symbols.size(); ++i) v[symbols[i]] = vals[i];
    if (!holds(v)) return Counterexample{v};
    int i = static_cast<int>(vals.size()) - 1;
    for (; i >= 0; --i) {
      if (++vals[i] < n) break;
      vals[i] = 0;
    }
    if (i < 0) break;
    if (symbols.empty()) break;
  }
  if (symbols.empty()) {
    Assignment v;
    if (!holds(v)) return Counterexample{v};
  }
  return std::nullopt;
}

std::optional<Counterexample> check_inequality(const FiniteLE& le,
                                               const Inequality& ineq,
                                               Quantify) {
  std::vector<std::string> symbols;
  collect_symbols(ineq.lhs, symbols);
  collect_symbols(ineq.rhs, symbols);
  return search_assignments(le, symbols, [&](const Assignment& v) {
    return le.lat.le(evaluate(ineq.lhs, le, v), evaluate(ineq.rhs, le, v));
  });
}

std::optional<Counterexample> check_quasi(const FiniteLE& le,
                                          const QuasiInequality& q) {
  std::vector<std::string> symbols;
  for (const auto& a : q.antecedents) {
    collect_symbols(a.lhs, symbols);
    collect_symbols(a.rhs, symbols);
  }
  collect_symbols(q.consequent.lhs, symbols);
  collect_symbols(q.consequent.rhs, symbols);
  return search_assignments(le, symbols, [&](const Assignment& v) {
    for (const auto& a : q.antecedents)
      if (!le.lat.le(evaluate(a.lhs, le, v), evaluate(a.rhs, le, v)))
        return true;  // antecedent falsified, quasi holds
    return le.lat.le(evaluate(q.consequent.lhs, le, v),
                     evaluate(q.consequent.rhs, le, v));
  });
}

bool check_targeted_preservation(const FiniteLE& le, const Term& body,
                                 const std::vector<std::string>& vars,
                                 const OrderType& profile) {
  if (static_cast<int>(vars.size()) != profile.size())
    throw AlgebraError("profile length mismatch");
  std::vector<std::string> others;
  collect_symbols(body, others);
  others.erase(std::remove_if(others.begin(), others.end(),
                              [&](const std::string& s) {
                                return std::find(vars.begin(), vars.end(), s) !=
                                       vars.end();
                              }),
               others.end());
  int n = le.lat.size();
  auto eval_at = [&](const Assignment& base, const std::vector<int>& tuple) {
    Assignment v = base;
    for (size_t i = 0; i < vars.size(); ++i) v[vars[i]] = tuple[i];
    return evaluate(body, le, v);
  };
  bool ok = true;
  auto outer = search_assignments(le, others, [&](const Assignment& base) {
    // empty join of the profiled coordinates
    std::vector<int> units;
    for (int i = 0; i < profile.size(); ++i)
      units.push_back(profile[i] == Pol::One ? le.lat.bot() : le.lat.top());
    if (eval_at(base, units) != le.lat.bot()) return false;
    // pairwise joins
    bool inner_ok = true;
    for_tuples(n, static_cast<int>(vars.size()), [&](const std::vector<int>& s) {
      if (!inner_ok) return;
      for_tuples(n, static_cast<int>(vars.size()), [&](const std::vector<int>& t) {
        if (!inner_ok) return;
        std::vector<int> u(vars.size());
        for (size_t i = 0; i < vars.size(); ++i)
          u[i] = profile[static_cast<int>(i)] == Pol::One
                     ? le.lat.join(s[i], t[i])
                     : le.lat.meet(s[i], t[i]);
        if (eval_at(base, u) !=
            le.lat.join(eval_at(base, s), eval_at(base, t)))
          inner_ok = false;
      });
    });
    return inner_ok;
  });
  ok = !outer.has_value();
  return ok;
}

// ---------------------------------------------------------------------------
// Oracle corpus generation
// ---------------------------------------------------------------------------

namespace {

// Candidate tables for one connective; every candidate still passes through
// the normality checker before use.
std::vector<std::vector<uint8_t>> candidate_tables(const FiniteLattice& lat,
                                                   const Connective& c,
                                                   std::mt19937_64& rng,
                                                   int random_attempts) {
  int n = lat.size();
  std::vector<std::vector<uint8_t>> cands;
  auto push = [&](std::vector<uint8_t> t) { cands.push_back(std::move(t)); };
  bool is_f = c.family == Family::F;

  if (c.arity == 0) {
    for (int w = 0; w < n; ++w) push({static_cast<uint8_t>(w)});
  } else if (c.arity == 1) {
    Pol e = c.order_type[0];
    if (e == Pol::One) {
      // identity
      std::vector<uint8_t> id(n);
      for (int x = 0; x < n; ++x) id[x] = static_cast<uint8_t>(x);
      push(id);
    }
    // step maps: constant w away from the coordinate's unit element
    int unit = (is_f == (e == Pol::One)) ? lat.bot() : lat.top();
    int target = is_f ? lat.bot() : lat.top();
    for (int w = 0; w < n; ++w) {
      std::vector<uint8_t> t(n, static_cast<uint8_t>(w));
      t[unit] = static_cast<uint8_t>(target);
      push(t);
    }
    // meets/joins with a constant (valid on distributive shapes, filtered)
    for (int cst = 0; cst < n; ++cst) {
      std::vector<uint8_t> t(n);
      for (int x = 0; x < n; ++x)
        t[x] = static_cast<uint8_t>(is_f ? lat.meet(x, cst) : lat.join(x, cst));
      push(t);
    }
    // random monotone-or-antitone tables, rejection-filtered downstream
    for (int k = 0; k < random_attempts; ++k) {
      std::vector<uint8_t> t(n);
      for (int x = 0; x < n; ++x)
        t[x] = static_cast<uint8_t>(rng() % n);
      push(t);
    }
  } else {
    // gate family: unit element in any coordinate forces the family target,
    // any other input yields the fixed value w
    size_t sz = table_size(n, c.arity);
    int target = is_f ? lat.bot() : lat.top();
    for (int w = 0; w < n; ++w) {
      std::vector<uint8_t> t(sz, static_cast<uint8_t>(w));
      for_tuples(n, c.arity, [&](const std::vector<int>& args) {
        for (int i = 0; i < c.arity; ++i) {
          int unit = (is_f == (c.order_type[i] == Pol::One)) ? lat.bot()
                                                             : lat.top();
          if (args[i] == unit) {
            t[tuple_index(n, args)] = static_cast<uint8_t>(target);
            return;
          }
        }
      });
      push(t);
    }
  }
  return cands;
}

}  // namespace

std::vector<FiniteLE> enumerate_les(int max_size, const Signature& sig_expanded,
                                    int budget, uint64_t seed) {
  if (!sig_expanded.expanded())
    throw AlgebraError("enumerate_les expects a tense-expanded signature");
  std::vector<FiniteLE> out;
  std::mt19937_64 rng(seed);
  for (const auto& lat : lattice_catalog(max_size)) {
    // admissible tables per base connective
    std::vector<std::string> base_names;
    std::vector<std::vector<std::vector<uint8_t>>> tables;
    for (const auto& c : sig_expanded.connectives()) {
      if (c->is_residual) continue;
      std::vector<std::vector<uint8_t>> ok;
      std::set<std::vector<uint8_t>> seen;
      for (auto& t : candidate_tables(lat, *c, rng, 40)) {
        if (seen.count(t)) continue;
        try {
          check_normality(lat, *c, t);
        } catch (const AlgebraError&) {
          continue;
        }
        seen.insert(t);
        ok.push_back(std::move(t));
      }
      if (ok.empty()) break;
      base_names.push_back(c->name);
      tables.push_back(std::move(ok));
    }
    if (tables.size() !=
        static_cast<size_t>(std::count_if(
            sig_expanded.connectives().begin(), sig_expanded.connectives().end(),
            [](const ConnPtr& c) { return !c->is_residual; })))
      continue;

    std::set<std::vector<size_t>> chosen;
    for (int k = 0; k < budget; ++k) {
      std::vector<size_t> pick(base_names.size());
      for (size_t i = 0; i < pick.size(); ++i) {
        // the first op set is the most structured candidate of each family
        pick[i] = k == 0 ? 0 : rng() % tables[i].size();
      }
      if (!chosen.insert(pick).second) continue;
      FiniteLE le;
      le.lat = lat;
      le.sig = sig_expanded;
      le.label = lat.label + "/opset" + std::to_string(k);
      try {
        for (size_t i = 0; i < base_names.size(); ++i)
          attach_operation(le, base_names[i], tables[i][pick[i]]);
      } catch (const AlgebraError&) {
        continue;
      }
      out.push_back(std::move(le));
    }
  }
  return out;
}

}  // namespace alba

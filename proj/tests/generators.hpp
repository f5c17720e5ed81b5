#ifndef ALBA_TESTS_GENERATORS_HPP
#define ALBA_TESTS_GENERATORS_HPP

#include <map>
#include <random>
#include <string>
#include <vector>

#include "alba/syntax.hpp"

namespace alba::gen {

inline Signature base_signature() {
  return declare_signature({
      {"f", Family::F, 1, OrderType({Pol::One})},
      {"g", Family::G, 1, OrderType({Pol::One})},
  });
}

/// Base signature with a binary F-connective of mixed order-type and a binary
/// G-connective, for multi-coordinate coverage.
inline Signature wide_signature() {
  return declare_signature({
      {"f", Family::F, 1, OrderType({Pol::One})},
      {"g", Family::G, 1, OrderType({Pol::One})},
      {"h", Family::F, 2, OrderType({Pol::One, Pol::Del})},
      {"k", Family::G, 2, OrderType({Pol::One, Pol::One})},
  });
}

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) {
  return static_cast<int>(rng() % static_cast<uint64_t>(n));
}

// ---------------------------------------------------------------------------
// Unconstrained random L1 terms (classifier / round-trip fodder)
// ---------------------------------------------------------------------------

/// Random L1 term; bound fixed point variables are used only at positions
/// where their accumulated polarity is positive, keeping binders well-formed.
inline Term random_l1_term(Rng& rng, const Signature& sig, int depth,
                           const std::vector<std::string>& letters,
                           std::map<std::string, bool>* polarity = nullptr) {
  std::map<std::string, bool> local;
  std::map<std::string, bool>& pol = polarity ? *polarity : local;
  auto leaf = [&]() -> Term {
    std::vector<Term> opts = {bot(), top()};
    for (const auto& p : letters) opts.push_back(prop(p));
    for (const auto& [v, ok] : pol)
      if (ok) opts.push_back(fpvar(v));
    return opts[pick(rng, static_cast<int>(opts.size()))];
  };
  if (depth <= 0) return leaf();
  int choice = pick(rng, 10);
  if (choice < 2) return leaf();
  if (choice < 4)
    return meet(random_l1_term(rng, sig, depth - 1, letters, &pol),
                random_l1_term(rng, sig, depth - 1, letters, &pol));
  if (choice < 6)
    return join(random_l1_term(rng, sig, depth - 1, letters, &pol),
                random_l1_term(rng, sig, depth - 1, letters, &pol));
  if (choice < 9) {
    std::vector<ConnPtr> conns;
    for (const auto& c : sig.connectives())
      if (!c->is_residual && c->arity > 0) conns.push_back(c);
    ConnPtr c = conns[pick(rng, static_cast<int>(conns.size()))];
    std::vector<Term> args;
    for (int i = 0; i < c->arity; ++i) {
      std::map<std::string, bool> child = pol;
      if (c->order_type[i] == Pol::Del)
        for (auto& [v, ok] : child) ok = !ok;
      args.push_back(random_l1_term(rng, sig, depth - 1, letters, &child));
    }
    return app(c, args);
  }
  // binder
  std::string var = "X" + std::to_string(pol.size() + 1);
  std::map<std::string, bool> body_pol = pol;
  body_pol[var] = true;
  Term body = random_l1_term(rng, sig, depth - 1, letters, &body_pol);
  BinderKind kinds[] = {BinderKind::Mu, BinderKind::Nu, BinderKind::Mu2,
                       BinderKind::Nu2};
  return binder(kinds[pick(rng, 4)], var, body);
}

inline Inequality random_l1_inequality(Rng& rng, const Signature& sig,
                                       int depth, int n_letters) {
  std::vector<std::string> letters;
  const char* pool[] = {"p", "q", "r"};
  for (int i = 0; i < n_letters; ++i) letters.push_back(pool[i]);
  return {random_l1_term(rng, sig, depth, letters),
          random_l1_term(rng, sig, depth, letters)};
}

// ---------------------------------------------------------------------------
// Compositional generators for the success classes (unary f/g signature)
// ---------------------------------------------------------------------------

/// Letter-free, binder-free filler sentences.
inline Term closed_filler(Rng& rng, const Signature& sig) {
  ConnPtr f = sig.find("f"), g = sig.find("g");
  switch (pick(rng, 4)) {
    case 0: return bot();
    case 1: return top();
    case 2: return app(f, {bot()});
    default: return app(g, {top()});
  }
}

/// PIA cap over a critical letter: p, p /\ filler, g(P).
inline Term restricted_pia(Rng& rng, const Signature& sig,
                           const std::string& letter, int depth) {
  if (depth <= 0) return prop(letter);
  ConnPtr g = sig.find("g");
  switch (pick(rng, 3)) {
    case 0: return prop(letter);
    case 1:
      return meet(restricted_pia(rng, sig, letter, depth - 1),
                  closed_filler(rng, sig));
    default: return app(g, {restricted_pia(rng, sig, letter, depth - 1)});
  }
}

/// Skeleton over the PIA cap: joins with fillers, f-applications and
/// mu-binders whose bodies keep the critical path inner-skeleton.
inline Term restricted_skeleton(Rng& rng, const Signature& sig, Term core,
                                int depth, int* binders_left) {
  if (depth <= 0) return core;
  ConnPtr f = sig.find("f");
  switch (pick(rng, 4)) {
    case 0: return core;
    case 1:
      return restricted_skeleton(rng, sig,
                                 join(core, closed_filler(rng, sig)),
                                 depth - 1, binders_left);
    case 2:
      return restricted_skeleton(rng, sig, app(f, {core}), depth - 1,
                                 binders_left);
    default: {
      if (*binders_left <= 0) return core;
      --*binders_left;
      std::string var = "X" + std::to_string(*binders_left + 1);
      Term body = pick(rng, 2) ? join(core, app(f, {fpvar(var)}))
                               : join(core, fpvar(var));
      return restricted_skeleton(rng, sig,
                                 binder(BinderKind::Mu, var, body), depth - 1,
                                 binders_left);
    }
  }
}

/// Binder-free right side placing each letter once under g/meet structure.
inline Term negative_side(Rng& rng, const Signature& sig,
                          const std::vector<std::string>& letters) {
  ConnPtr g = sig.find("g");
  Term acc;
  for (const auto& p : letters) {
    Term piece = app(g, {prop(p)});
    if (pick(rng, 2)) piece = app(g, {piece});
    acc = acc ? meet(acc, piece) : piece;
  }
  if (!acc) acc = top();
  return acc;
}

/// Restricted inductive inequality: every binder is a mu on a critical
/// branch (P2), P1 is binder-free, the right side is binder-free.
inline Inequality random_restricted(Rng& rng, const Signature& sig) {
  int n_letters = 1 + pick(rng, 2);
  std::vector<std::string> letters;
  const char* pool[] = {"p", "q"};
  for (int i = 0; i < n_letters; ++i) letters.push_back(pool[i]);
  Term lhs;
  int binders_left = 2;
  for (const auto& p : letters) {
    Term core = restricted_pia(rng, sig, p, pick(rng, 3));
    Term piece = restricted_skeleton(rng, sig, core, 2 + pick(rng, 2),
                                     &binders_left);
    lhs = lhs ? join(lhs, piece) : piece;
  }
  return {lhs, negative_side(rng, sig, letters)};
}

/// Tame inductive inequality: no binder on any critical branch; the only
/// binders anywhere are +nu (left-side side trees) and -mu (right side).
inline Inequality random_tame(Rng& rng, const Signature& sig) {
  int n_letters = 1 + pick(rng, 2);
  std::vector<std::string> letters;
  const char* pool[] = {"p", "q"};
  for (int i = 0; i < n_letters; ++i) letters.push_back(pool[i]);
  ConnPtr f = sig.find("f"), g = sig.find("g");
  auto side_sentence = [&]() -> Term {
    switch (pick(rng, 3)) {
      case 0: return binder(BinderKind::Nu, "X", app(g, {fpvar("X")}));
      case 1: return binder(BinderKind::Nu, "X",
                            meet(app(g, {fpvar("X")}), top()));
      default: return closed_filler(rng, sig);
    }
  };
  Term lhs;
  for (const auto& p : letters) {
    Term piece = prop(p);
    int steps = 1 + pick(rng, 3);
    for (int s = 0; s < steps; ++s)
      piece = pick(rng, 2) ? app(f, {piece}) : join(piece, side_sentence());
    lhs = lhs ? join(lhs, piece) : piece;
  }
  Term rhs = negative_side(rng, sig, letters);
  if (pick(rng, 2))
    rhs = meet(rhs, binder(BinderKind::Mu, "Y", app(f, {fpvar("Y")})));
  return {lhs, rhs};
}

}  // namespace alba::gen

#endif

#ifndef ALBA_SYNTAX_HPP
#define ALBA_SYNTAX_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace alba {

struct SyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Order-types and connectives
// ---------------------------------------------------------------------------

/// One coordinate of an order-type: monotone (One) or antitone (Del).
enum class Pol : uint8_t { One, Del };

inline Pol flip(Pol p) { return p == Pol::One ? Pol::Del : Pol::One; }

struct OrderType {
  std::vector<Pol> entries;

  OrderType() = default;
  explicit OrderType(std::vector<Pol> e) : entries(std::move(e)) {}

  int size() const { return static_cast<int>(entries.size()); }
  Pol operator[](int i) const { return entries.at(i); }

  /// Entrywise involution; opposite(opposite(e)) == e.
  OrderType opposite() const {
    OrderType r;
    r.entries.reserve(entries.size());
    for (Pol p : entries) r.entries.push_back(flip(p));
    return r;
  }

  bool operator==(const OrderType& o) const { return entries == o.entries; }

  std::string str() const {
    std::string s = "(";
    for (size_t i = 0; i < entries.size(); ++i) {
      if (i) s += ",";
      s += entries[i] == Pol::One ? "1" : "d";
    }
    return s + ")";
  }
};

enum class Family : uint8_t { F, G };

struct Connective {
  std::string name;
  Family family;
  int arity = 0;
  OrderType order_type;
  bool is_residual = false;
  std::string parent;  // base connective name, residuals only
  int coordinate = 0;  // 1-based, residuals only
};

using ConnPtr = std::shared_ptr<const Connective>;

/// Connective families F and G plus, after tense expansion, their residuals.
class Signature {
 public:
  struct Decl {
    std::string name;
    Family family;
    int arity;
    OrderType order_type;
  };

  const std::vector<ConnPtr>& connectives() const { return conns_; }
  bool expanded() const { return expanded_; }

  ConnPtr find(const std::string& name) const {
    for (const auto& c : conns_)
      if (c->name == name) return c;
    return nullptr;
  }

  /// The residual of `base` in coordinate i (1-based); expanded signatures only.
  ConnPtr residual_of(const std::string& base, int i) const {
    for (const auto& c : conns_)
      if (c->is_residual && c->parent == base && c->coordinate == i) return c;
    return nullptr;
  }

  friend Signature declare_signature(const std::vector<Decl>& decls);
  friend Signature expand_tense(const Signature& sig);

 private:
  std::vector<ConnPtr> conns_;
  bool expanded_ = false;
};

Signature declare_signature(const std::vector<Signature::Decl>& decls);

/// Adds one level of residuals f#i / gbi per base connective coordinate.
Signature expand_tense(const Signature& sig);

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

enum class Tk : uint8_t { Bot, Top, Prop, FpVar, Nom, Conom, Meet, Join, App, Binder };

enum class BinderKind : uint8_t { Mu, Nu, Mu2, Nu2, MuStar, NuStar };

inline bool is_mu_like(BinderKind k) {
  return k == BinderKind::Mu || k == BinderKind::Mu2 || k == BinderKind::MuStar;
}
inline bool is_star(BinderKind k) {
  return k == BinderKind::MuStar || k == BinderKind::NuStar;
}

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  Tk kind;
  std::string name;       // Prop / FpVar
  int index = 0;          // Nom / Conom, 1-based
  ConnPtr conn;           // App
  BinderKind binder{};    // Binder
  std::string var;        // Binder-bound variable
  std::vector<Term> args; // children
};

Term bot();
Term top();
Term prop(const std::string& name);
Term fpvar(const std::string& name);
Term nominal(int index);
Term conominal(int index);
Term meet(Term a, Term b);
Term join(Term a, Term b);
Term app(ConnPtr c, std::vector<Term> args);
/// Validates that body is positive in var; throws SyntaxError otherwise.
Term binder(BinderKind k, const std::string& var, Term body);

bool term_equal(const Term& a, const Term& b);

struct Inequality {
  Term lhs, rhs;
};

inline bool ineq_equal(const Inequality& a, const Inequality& b) {
  return term_equal(a.lhs, b.lhs) && term_equal(a.rhs, b.rhs);
}

struct QuasiInequality {
  std::vector<Inequality> antecedents;
  Inequality consequent;
};

// ---------------------------------------------------------------------------
// Term traversal helpers
// ---------------------------------------------------------------------------

using Path = std::vector<int>;

Term subterm_at(const Term& t, const Path& path);
Term replace_at(const Term& t, const Path& path, const Term& s);

/// Proposition letters in first-occurrence order.
void collect_props(const Term& t, std::vector<std::string>& out);
std::vector<std::string> collect_props(const Inequality& ineq);

bool contains_prop(const Term& t, const std::string& p);
bool has_props(const Term& t);
bool has_binders(const Term& t);

/// Free fixed point variables of t.
std::set<std::string> free_fpvars(const Term& t);
bool is_sentence(const Term& t);

// ---------------------------------------------------------------------------
// Signs and polarity
// ---------------------------------------------------------------------------

/// Generation tree of a term with a sign at every node, flattened preorder.
struct SignedTree {
  struct Node {
    const TermNode* term;
    bool positive;
    Path path;
    int parent;                 // index into nodes, -1 for root
    std::vector<int> children;  // indices into nodes
  };
  std::vector<Node> nodes;

  bool is_leaf(int i) const { return nodes[i].children.empty(); }
  /// Indices root..leaf along the parent chain of node i.
  std::vector<int> branch_to(int i) const;
};

SignedTree signed_tree(const Term& t, bool positive);

enum class Polarity : uint8_t { Positive, Negative, Both, Neither };

/// Sign-based occurrence polarity of a proposition letter or (free) fixed
/// point variable; Both iff it does not occur.
Polarity positivity(const Term& t, const std::string& name, bool is_fp);

// ---------------------------------------------------------------------------
// Substitution, star translation, languages
// ---------------------------------------------------------------------------

/// Capture-avoiding substitution of s for free occurrences of the variable.
Term substitute(const Term& t, const std::string& name, bool is_fp, const Term& s);

/// mu -> mu*, nu -> nu* (mu2/nu2 treated as mu/nu), homomorphic elsewhere.
Term star_translation(const Term& t);

struct LangOpts {
  bool binders_plain = false;  // mu/nu/mu2/nu2
  bool binders_star = false;   // mu*/nu*
  bool extended = false;       // nominals, co-nominals, residual connectives
};

bool in_language(const Term& t, const LangOpts& o);

inline bool in_L(const Term& t) { return in_language(t, {}); }
inline bool in_L1(const Term& t) { return in_language(t, {true, false, false}); }
inline bool in_Lstar(const Term& t) { return in_language(t, {false, true, false}); }
inline bool in_L1_plus(const Term& t) { return in_language(t, {true, false, true}); }
inline bool in_Lstar_plus(const Term& t) { return in_language(t, {false, true, true}); }

/// Smallest index k >= 1 such that prefix+k is unused in `used`.
std::string fresh_name(const std::string& prefix, const std::set<std::string>& used);

}  // namespace alba

#endif

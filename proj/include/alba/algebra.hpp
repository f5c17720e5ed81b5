#ifndef ALBA_ALGEBRA_HPP
#define ALBA_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alba/syntax.hpp"

namespace alba {

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Finite bounded lattices
// ---------------------------------------------------------------------------

class FiniteLattice {
 public:
  std::string label;

  int size() const { return n_; }
  const std::string& name(int a) const { return names_.at(a); }
  bool le(int a, int b) const { return leq_[a * n_ + b]; }
  int meet(int a, int b) const { return meet_[a * n_ + b]; }
  int join(int a, int b) const { return join_[a * n_ + b]; }
  int bot() const { return bot_; }
  int top() const { return top_; }

  /// Builds from a cover (or any acyclic order-generating) relation; verifies
  /// the reflexive-transitive closure is a lattice order with bounds.
  static FiniteLattice from_covers(std::vector<std::string> names,
                                   const std::vector<std::pair<int, int>>& covers,
                                   std::string label = "");

 private:
  int n_ = 0, bot_ = 0, top_ = 0;
  std::vector<std::string> names_;
  std::vector<uint8_t> leq_;
  std::vector<uint8_t> meet_, join_;
};

/// Built-in shapes used by the oracle corpus.
FiniteLattice chain_lattice(int k);
FiniteLattice boolean_square();   // 2^2
FiniteLattice boolean_cube();     // 2^3
FiniteLattice m3_lattice();
FiniteLattice n5_lattice();
std::vector<FiniteLattice> lattice_catalog(int max_size);

// ---------------------------------------------------------------------------
// Finite normal lattice expansions
// ---------------------------------------------------------------------------

/// A finite normal LE; residual tables are computed on attach. On a finite
/// algebra closed = open = carrier, so nominal/co-nominal assignments range
/// over all elements and every binder interpretation coincides.
struct FiniteLE {
  FiniteLattice lat;
  Signature sig;  // tense-expanded
  std::map<std::string, std::vector<uint8_t>> ops;  // incl. residual tables
  std::string label;

  int op_value(const std::string& name, const std::vector<int>& args) const;
};

/// Validates normality of `table` for the named base connective (witness
/// reported on failure) and computes its residual tables by adjunction.
void attach_operation(FiniteLE& le, const std::string& conn,
                      std::vector<uint8_t> table);

/// Checks the adjunction equivalences of every residual table exhaustively.
bool residuals_consistent(const FiniteLE& le);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Total assignment for the free symbols of the terms under evaluation.
/// Keys: letters by name, nominals "j<k>", co-nominals "m<k>", free fixed
/// point variables by name.
using Assignment = std::map<std::string, int>;

std::string symbol_key(const TermNode* leaf);
void collect_symbols(const Term& t, std::vector<std::string>& out);

/// Kleene-iteration evaluation; mu/mu2/mu* all evaluated as the least fixed
/// point (iteration from bot, bound |elements| steps), nu kinds dually.
int evaluate(const Term& t, const FiniteLE& le, const Assignment& v);

struct Counterexample {
  Assignment assignment;
};

enum class Quantify { LettersOnly, All };

/// Exhaustive validity check; on finite algebras both quantification modes
/// range over the full carrier. Returns the first counterexample found.
std::optional<Counterexample> check_inequality(const FiniteLE& le,
                                               const Inequality& ineq,
                                               Quantify q = Quantify::All);
std::optional<Counterexample> check_quasi(const FiniteLE& le,
                                          const QuasiInequality& q);

inline bool valid(const FiniteLE& le, const Inequality& i) {
  return !check_inequality(le, i).has_value();
}
inline bool valid(const FiniteLE& le, const QuasiInequality& q) {
  return !check_quasi(le, q).has_value();
}

/// Exhaustively tests that the term function of `body`, jointly in the
/// profiled variables (join at Pol::One coordinates, meet at Pol::Del),
/// distributes over pairwise and empty joins. Spot check for the engine's
/// syntactic approximation side condition.
bool check_targeted_preservation(const FiniteLE& le, const Term& body,
                                 const std::vector<std::string>& vars,
                                 const OrderType& profile);

// ---------------------------------------------------------------------------
// Oracle corpus
// ---------------------------------------------------------------------------

/// Algebras over the built-in catalog with canned + randomly sampled normal
/// operation sets; `budget` op sets per lattice, rejection-filtered.
std::vector<FiniteLE> enumerate_les(int max_size, const Signature& sig_expanded,
                                    int budget, uint64_t seed = 1);

}  // namespace alba

#endif

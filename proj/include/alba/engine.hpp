#ifndef ALBA_ENGINE_HPP
#define ALBA_ENGINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "alba/classify.hpp"
#include "alba/syntax.hpp"

namespace alba {

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Systems
// ---------------------------------------------------------------------------

/// A system (S, Ineq) encoding the quasi-inequality &S => Ineq.
struct System {
  std::vector<Inequality> S;
  Inequality ineq;
};

QuasiInequality to_quasi(const System& sys);
/// True iff no proposition letter occurs anywhere in the system.
bool is_pure(const System& sys);
std::string to_string(const System& sys);

// ---------------------------------------------------------------------------
// Run configuration and traces
// ---------------------------------------------------------------------------

enum class RunMode { Tame, Proper };

struct RunConfig {
  RunMode mode = RunMode::Proper;
  bool pivotal = true;
  /// Explicit strategy witness; classifier-derived when absent.
  std::optional<Epsilon> epsilon;
  std::optional<StrictOrder> omega;
};

enum class Rule {
  ElimMonotone,
  Distribute,
  Split,
  Star,
  ApproxLPos,
  ApproxLNeg,
  ApproxRPos,
  ApproxRNeg,
  Residuate,
  AckermannRA,
  AckermannLA,
};

const char* rule_name(Rule r);

/// One rule application. Systems are recorded as quasi-inequalities; stage-1
/// steps on bare inequalities use antecedent-free quasis, and a step may fan
/// out into several results (splitting), in which case the conjunction of the
/// after-list is validity-equivalent to that of the before-list.
struct DerivationStep {
  Rule rule;
  std::string position;
  std::vector<QuasiInequality> before, after;
};

struct SystemTrace {
  System initial;
  std::vector<DerivationStep> steps;
  bool success = false;
  std::string failure;
  System final;
};

struct RunOutcome {
  bool success = false;
  std::vector<DerivationStep> pre_steps;
  std::vector<System> preprocessed;
  std::vector<SystemTrace> systems;
  std::vector<QuasiInequality> output;  // pure quasi-inequalities, on success
  std::string failure_reason;
};

// ---------------------------------------------------------------------------
// Syntactically (almost) open and closed formulas
// ---------------------------------------------------------------------------

/// Flags per the sign characterization: almost open iff nominals and residual
/// F-connectives occur only negatively while co-nominals and residual
/// G-connectives occur only positively; open additionally requires mu* only
/// negative and nu* only positive. Duals for (almost) closed.
struct SyntacticShape {
  bool open = false, closed = false;
  bool almost_open = false, almost_closed = false;
};

/// Input must contain star binders only (throws EngineError otherwise).
SyntacticShape syntactic_shape(const Term& t);

// ---------------------------------------------------------------------------
// The engine
// ---------------------------------------------------------------------------

class Engine {
 public:
  /// Expands the signature with one level of residuals if needed.
  explicit Engine(const Signature& base);

  const Signature& sig() const { return sig_; }

  // --- Stage 1 ------------------------------------------------------------

  /// Substitutes top for letters the inequality is negative in (lhs positive,
  /// rhs negative in the letter) and bot for letters it is positive in;
  /// iterated to fixpoint.
  Inequality eliminate_monotone(const Inequality& ineq) const;

  /// Distributes F-connectives over joins (meets at del coordinates) and
  /// G-connectives dually, outside binder bodies, to fixpoint.
  Inequality distribute(const Inequality& ineq) const;

  /// Top-level splitting: a \/ b <= c and a <= b /\ c, exhaustively.
  std::vector<Inequality> split_ineq(const Inequality& ineq) const;

  /// eliminate_monotone -> distribute -> split, iterated to fixpoint, then
  /// star translation; one system per resulting inequality.
  std::vector<System> preprocess(const Inequality& ineq,
                                 std::vector<DerivationStep>* trace = nullptr) const;

  // --- Stage 2 primitives --------------------------------------------------

  /// Applies the approximation rule determined by side and sign of the
  /// subterm at `pos` (path into lhs or rhs of sys.ineq). Validates all side
  /// conditions; throws EngineError naming the first violated restriction.
  System approximate(const System& sys, bool on_lhs, const Path& pos,
                     const RunConfig& cfg, Rule* used = nullptr) const;

  /// The four residuation displays; coordinate is 1-based. Applies to the
  /// F-rooted left side if present, else to the G-rooted right side.
  Inequality residuate(const Inequality& ineq, int coordinate) const;
  Inequality residuate_side(const Inequality& ineq, bool f_side,
                            int coordinate) const;

  /// Ackermann rules; eliminate letter p from S u {ineq}. Throws EngineError
  /// with the offending inequality and failed condition when the required
  /// partition does not exist.
  System ackermann_right(const System& sys, const std::string& p) const;
  System ackermann_left(const System& sys, const std::string& p) const;

  // --- Stage 2/3 driver ----------------------------------------------------

  RunOutcome run(const Inequality& ineq, const RunConfig& cfg) const;

 private:
  Signature sig_;
};

/// Validates a recorded outcome against the input: every step chains (each
/// after-state is the next step's before-state), and a deterministic re-run
/// reproduces the full serialized trace and outputs bit-exactly.
bool replay(const Engine& eng, const Inequality& input, const RunConfig& cfg,
            const RunOutcome& recorded, std::string* why = nullptr);

std::string to_string(const DerivationStep& s);
std::string to_string(const RunOutcome& o);

}  // namespace alba

#endif

#ifndef ALBA_JSONIO_HPP
#define ALBA_JSONIO_HPP

#include <json.hpp>

#include "alba/algebra.hpp"
#include "alba/classify.hpp"
#include "alba/engine.hpp"

namespace alba {

/// {letters, classes: [{class, holds, witnesses: [{epsilon, omega}],
///  failures: [{epsilon, branch}]}]}
nlohmann::json class_report_json(const ClassReport& rep);

/// {input, preprocessed, systems: [{steps: [{rule, position, before, after}],
///  outcome}], output}
nlohmann::json trace_json(const Inequality& input, const RunOutcome& out);

nlohmann::json counterexample_json(const Counterexample& cex,
                                   const FiniteLattice& lat);

/// Algebra description: {label, elements, covers: [[lo, hi]...],
///  ops: {name: [element names in odometer order, first coordinate most
///  significant]}}. Residual tables are computed, not read.
FiniteLE load_algebra(const nlohmann::json& doc, const Signature& sig_expanded);

}  // namespace alba

#endif

#pragma once

#include <map>
#include <string>

#include "cgramap/timesolver.hpp"

namespace cgramap {

/// QF_LIA script over integer constants s_<v> (slot) and k_<v> (fold) for
/// every node: domain membership, one disjunction per dependency edge, and
/// capacity / connectivity bounds as sums of ite terms. Ends with
/// (check-sat) and (get-model).
std::string emit_smtlib(const TimeModel& model);

/// Integer bindings from a (get-model) response: every
/// (define-fun <name> () Int <value>) found in `text`.
std::map<std::string, long long> parse_smt_model(const std::string& text);

/// Rebuilds a TimeSolution from s_<v> / k_<v> bindings. Throws InputError
/// when a binding is missing. The result is not checked against the model.
TimeSolution solution_from_smt_model(const TimeModel& model, const std::map<std::string, long long>& bindings);

struct SmtRun {
  std::string verdict;  // "sat", "unsat", "unknown", or "error"
  std::map<std::string, long long> model;
  std::string raw_output;
};

/// Runs an external SMT-LIB2 solver (e.g. `z3`) on `script` via a temporary
/// file; the executable is called as `<executable> -smt2 <file>`.
SmtRun run_smt_solver(const std::string& executable, const std::string& script);

}  // namespace cgramap

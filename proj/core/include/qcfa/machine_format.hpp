#pragma once

// JSON machine-definition files.
//
// {
//   "schema_version": 1, "name": ..., "kind": "two-way" | ..., "alphabet": "ab",
//   "prover_alphabet": "", "register_dim": 2, "initial_register": ["1", "0"],
//   "states": [{"name": ..., "role": "normal" | "accept" | "reject" | "restart",
//               "reads_prover": false}, ...],
//   "initial": <state name>, "restart_entry": <state name>,
//   "superoperators": [{"name": ..., "elements": [{"label": ..., "matrix": [[expr, ...], ...],
//                        "exact": {"scale_squared": "1/16", "matrix": [["4", "0"], ...]},
//                        "rotation": {"turns": "1/8", "sqrt2_halfturns": "0"}}]}],
//   "transitions": [{"state": ..., "symbol": "a", "counter_zero": true, "prover": "0",
//                    "superoperator": <name>, "outcomes": [{"next": ..., "move": 1, "counter_delta": 0}]}]
// }
//
// "exact" and "rotation" are optional; without them a matrix whose entries
// all share one surd sqrt(s) is loaded in exact form unless the element
// carries "inexact": true. "symbol",
// "counter_zero" and "prover" are optional (wildcards).

#include "qcfa/machine.hpp"

#include <string>
#include <string_view>

namespace qcfa {

inline constexpr int kMachineSchemaVersion = 1;

/// Throws ParseError for malformed JSON or expressions and StructuralError
/// for an invalid machine.
MachineSpec load_machine(std::string_view json_text);
MachineSpec load_machine_file(const std::string& path);

std::string dump_machine(const MachineSpec& spec);

}  // namespace qcfa

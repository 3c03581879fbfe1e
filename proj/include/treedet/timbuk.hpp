#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "treedet/dfta.hpp"
#include "treedet/fta.hpp"

namespace treedet {

// Timbuk text format:
//
//   Ops <name>:<arity> ...
//   Automaton <name>
//   States <state> ...
//   Final States [<state> ...]
//   Transitions
//   <sym>(<state>,...) -> <state>    |    <const> -> <state>
//
// Whitespace-insensitive; `%` starts a comment running to end of line.
Fta parse_timbuk(const std::string& text);
std::string serialize_timbuk(const Fta& fta);

// Product extension: argument positions are `{s1,...,sk}` brace sets or
// `_` (the full state set); an optional trailing `StateMap` block lists
// `d = {original,...}` per state.
Dfta parse_product(const std::string& text);
std::string serialize_product(const Dfta& dfta);

// One corpus measurement. Output sizes are absent when the run timed out
// or failed; exactCompletedDeltaD is present only for completing modes.
struct StatsRecord {
    std::string name;
    std::string mode;  // det | det+compl | det+compl+dc | textbook
    uint64_t size_q = 0;
    uint64_t size_delta = 0;
    uint64_t size_sigma = 0;
    std::optional<uint64_t> size_qd;
    std::optional<uint64_t> size_delta_pi;
    std::optional<uint64_t> est_delta_d;
    std::optional<uint64_t> exact_completed_delta_d;
    double time_millis = 0.0;
    bool timed_out = false;
    std::optional<std::string> error;
};

// Fills the size columns from an input/output pair.
StatsRecord stats_record(const std::string& name, const std::string& mode, const Fta& input,
                         const Dfta* output, double time_millis, bool timed_out);

// One JSON object (single line, stable key names).
std::string to_json(const StatsRecord& rec);
StatsRecord stats_from_json(const std::string& line);

}  // namespace treedet

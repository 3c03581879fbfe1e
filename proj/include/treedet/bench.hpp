#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treedet/timbuk.hpp"

namespace treedet {

enum class BenchMode { Textbook, Opt, OptCompl, OptComplDc };

std::string mode_name(BenchMode m);                 // textbook | det | det+compl | det+compl+dc
std::optional<BenchMode> parse_mode(const std::string& s);

struct BenchConfig {
    std::vector<std::string> input_paths;           // Timbuk files
    std::vector<BenchMode> modes = {BenchMode::OptCompl};
    double timeout_seconds = 120.0;
    uint64_t max_states = 20'000;
    uint64_t max_transitions = 5'000'000;
    unsigned jobs = 0;                              // 0 = hardware concurrency
};

struct BenchSummary {
    uint64_t solved = 0;
    uint64_t timeouts = 0;
    uint64_t errors = 0;
    double avg_seconds_solved = 0.0;
};

// One record per (file, mode), in input order (file-major). A task's
// failure or timeout never aborts the run; it yields an error/timeout
// record instead.
std::vector<StatsRecord> bench_corpus(const BenchConfig& cfg);

BenchSummary summarize(const std::vector<StatsRecord>& records);

// Fixed columns: file, mode, |Q|, |Delta|, |Sigma|, |Q_d|, |Delta_Pi|,
// estDeltaD, exactCompletedDeltaD, time_ms, status.
std::string to_csv(const std::vector<StatsRecord>& records);

// Runs one (already parsed) input under one mode with the configured
// caps; timeouts are caught and recorded.
StatsRecord run_one(const std::string& name, const Fta& input, BenchMode mode,
                    double timeout_seconds, uint64_t max_states, uint64_t max_transitions);

}  // namespace treedet

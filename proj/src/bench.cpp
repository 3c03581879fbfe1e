#include "treedet/bench.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "treedet/determinize.hpp"
#include "treedet/errors.hpp"

namespace treedet {

std::string mode_name(BenchMode m) {
    switch (m) {
        case BenchMode::Textbook: return "textbook";
        case BenchMode::Opt: return "det";
        case BenchMode::OptCompl: return "det+compl";
        case BenchMode::OptComplDc: return "det+compl+dc";
    }
    return "?";
}

std::optional<BenchMode> parse_mode(const std::string& s) {
    if (s == "textbook") return BenchMode::Textbook;
    if (s == "det" || s == "opt") return BenchMode::Opt;
    if (s == "det+compl" || s == "opt+compl") return BenchMode::OptCompl;
    if (s == "det+compl+dc" || s == "opt+compl+dc") return BenchMode::OptComplDc;
    return std::nullopt;
}

StatsRecord run_one(const std::string& name, const Fta& input, BenchMode mode,
                    double timeout_seconds, uint64_t max_states, uint64_t max_transitions) {
    DetOptions opts;
    opts.max_states = max_states;
    opts.max_transitions = max_transitions;
    opts.complete = (mode == BenchMode::OptCompl || mode == BenchMode::OptComplDc);
    opts.dontcare = (mode == BenchMode::OptComplDc);
    const auto start = std::chrono::steady_clock::now();
    opts.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(timeout_seconds));

    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start)
            .count();
    };
    try {
        Dfta out = (mode == BenchMode::Textbook) ? determinize_textbook(input, opts)
                                                 : determinize(input, opts);
        return stats_record(name, mode_name(mode), input, &out, elapsed_ms(), false);
    } catch (const ResourceLimitError& e) {
        StatsRecord rec = stats_record(name, mode_name(mode), input, nullptr, elapsed_ms(),
                                       e.timed_out());
        if (!e.timed_out()) rec.error = e.what();
        return rec;
    }
}

std::vector<StatsRecord> bench_corpus(const BenchConfig& cfg) {
    struct Task {
        size_t slot;
        const std::string* path;
        BenchMode mode;
    };
    std::vector<Task> tasks;
    for (size_t fi = 0; fi < cfg.input_paths.size(); ++fi)
        for (BenchMode m : cfg.modes)
            tasks.push_back({tasks.size(), &cfg.input_paths[fi], m});

    std::vector<StatsRecord> results(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            const Task& t = tasks[i];
            StatsRecord rec;
            rec.name = *t.path;
            rec.mode = mode_name(t.mode);
            try {
                std::ifstream in(*t.path);
                if (!in) throw InputError("cannot open file");
                std::stringstream buf;
                buf << in.rdbuf();
                Fta fta = parse_timbuk(buf.str());
                rec = run_one(*t.path, fta, t.mode, cfg.timeout_seconds, cfg.max_states,
                              cfg.max_transitions);
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
            results[t.slot] = std::move(rec);
        }
    };

    unsigned jobs = cfg.jobs ? cfg.jobs : std::thread::hardware_concurrency();
    if (jobs == 0) jobs = 1;
    jobs = std::min<unsigned>(jobs, tasks.size() ? tasks.size() : 1);
    std::vector<std::thread> pool;
    for (unsigned j = 0; j + 1 < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return results;
}

BenchSummary summarize(const std::vector<StatsRecord>& records) {
    BenchSummary s;
    double total = 0.0;
    for (const StatsRecord& r : records) {
        if (r.timed_out) {
            ++s.timeouts;
        } else if (r.error) {
            ++s.errors;
        } else {
            ++s.solved;
            total += r.time_millis / 1000.0;
        }
    }
    if (s.solved) s.avg_seconds_solved = total / static_cast<double>(s.solved);
    return s;
}

std::string to_csv(const std::vector<StatsRecord>& records) {
    std::ostringstream os;
    os << "file,mode,|Q|,|Δ|,|Σ|,|Q_d|,|Δ_Π|,estDeltaD,exactCompletedDeltaD,time_ms,status\n";
    auto opt = [](const std::optional<uint64_t>& v) {
        return v ? std::to_string(*v) : std::string();
    };
    for (const StatsRecord& r : records) {
        std::string status = r.timed_out ? "timeout" : (r.error ? "error" : "ok");
        os << r.name << ',' << r.mode << ',' << r.size_q << ',' << r.size_delta << ','
           << r.size_sigma << ',' << opt(r.size_qd) << ',' << opt(r.size_delta_pi) << ','
           << opt(r.est_delta_d) << ',' << opt(r.exact_completed_delta_d) << ','
           << r.time_millis << ',' << status << '\n';
    }
    return os.str();
}

}  // namespace treedet

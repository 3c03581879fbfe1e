#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "treedet/bench.hpp"
#include "treedet/boolean_ops.hpp"
#include "treedet/determinize.hpp"
#include "treedet/errors.hpp"
#include "treedet/synth.hpp"
#include "treedet/timbuk.hpp"

namespace {

using namespace treedet;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;      // parse / contract / file errors
constexpr int kExitResource = 2;   // timeout or cap exceeded

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write '" + out_path + "'");
    out << text;
}

Fta load_fta(const std::string& path) { return parse_timbuk(read_file(path)); }

// Product-format file, or a plain Timbuk automaton viewed in product form.
Dfta load_product_or_fta(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return parse_product(text);
    } catch (const ParseError&) {
        return product_view(parse_timbuk(text));
    }
}

struct DetFlags {
    bool complete = false;
    bool dontcare = false;
    bool states_only = false;
    bool expand_out = false;
    bool textbook = false;
    double timeout = 0.0;
    std::string format;  // "", timbuk, product, json
    std::string output;

    void attach(CLI::App* cmd, bool with_format = true) {
        cmd->add_flag("--complete", complete, "determinise and complete (inject the any-state)");
        cmd->add_flag("--dontcare", dontcare, "detect deciding arguments (requires --complete)");
        cmd->add_flag("--states-only", states_only, "skip transition generation");
        cmd->add_flag("--expand", expand_out, "emit explicit transitions instead of product form");
        cmd->add_flag("--textbook", textbook, "use the textbook algorithm");
        cmd->add_option("--timeout", timeout, "wall-clock timeout in seconds");
        if (with_format)
            cmd->add_option("--format", format, "output format: timbuk|product|json")
                ->check(CLI::IsMember({"timbuk", "product", "json"}));
        cmd->add_option("-o,--output", output, "write to a file instead of standard output");
    }

    DetOptions options(uint64_t max_states) const {
        DetOptions o;
        o.complete = complete;
        o.dontcare = dontcare;
        o.states_only = states_only;
        o.max_states = max_states;
        if (timeout > 0.0)
            o.deadline = std::chrono::steady_clock::now() +
                         std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(timeout));
        return o;
    }

    std::string mode_label() const {
        if (textbook) return "textbook";
        if (complete) return dontcare ? "det+compl+dc" : "det+compl";
        return "det";
    }
};

uint64_t env_max_states() {
    if (const char* v = std::getenv("TREEDET_MAX_STATES")) {
        char* end = nullptr;
        unsigned long long n = std::strtoull(v, &end, 10);
        if (end && *end == '\0' && n > 0) return n;
        throw InputError("TREEDET_MAX_STATES must be a positive integer");
    }
    return DetOptions{}.max_states;
}

std::string render_dfta(const Dfta& d, const DetFlags& flags, const Fta& input,
                        double time_ms) {
    std::string fmt = flags.format;
    if (fmt.empty()) fmt = flags.expand_out ? "timbuk" : "product";
    if (flags.expand_out && flags.format.empty()) fmt = "timbuk";
    if (fmt == "json")
        return to_json(stats_record(input.name, flags.mode_label(), input, &d, time_ms, false)) +
               "\n";
    if (fmt == "timbuk") return serialize_timbuk(defactor(d));
    return serialize_product(d);
}

int run(int argc, char** argv) {
    CLI::App app{"finite tree automata: determinisation, completion and Boolean operations"};
    app.require_subcommand(1);
    const uint64_t max_states = env_max_states();

    // determinize
    auto* det = app.add_subcommand("determinize", "determinise an automaton");
    DetFlags det_flags;
    std::string det_input;
    det_flags.attach(det);
    det->add_option("input", det_input, "Timbuk file")->required();

    // complement
    auto* comp = app.add_subcommand("complement", "complement an automaton");
    DetFlags comp_flags;
    std::string comp_input;
    comp_flags.attach(comp);
    comp->add_option("input", comp_input, "Timbuk file")->required();

    // intersect
    auto* inter = app.add_subcommand("intersect", "intersection in product form");
    DetFlags inter_flags;
    std::string inter_a, inter_b;
    inter_flags.attach(inter);
    inter->add_option("a", inter_a, "first automaton")->required();
    inter->add_option("b", inter_b, "second automaton")->required();

    // difference
    auto* diff = app.add_subcommand("difference", "language difference a \\ b");
    DetFlags diff_flags;
    std::string diff_a, diff_b;
    diff_flags.attach(diff);
    diff->add_option("a", diff_a, "first automaton")->required();
    diff->add_option("b", diff_b, "second automaton")->required();

    // include
    auto* inc = app.add_subcommand("include", "check L(a) included in L(b)");
    DetFlags inc_flags;
    std::string inc_a, inc_b;
    inc_flags.attach(inc, false);
    inc->add_option("a", inc_a, "first automaton")->required();
    inc->add_option("b", inc_b, "second automaton")->required();

    // universal
    auto* uni = app.add_subcommand("universal", "check L(a) = Term(Sigma)");
    DetFlags uni_flags;
    std::string uni_input;
    uni_flags.attach(uni, false);
    uni->add_option("input", uni_input, "Timbuk file")->required();

    // stats
    auto* st = app.add_subcommand("stats", "determinise and print a JSON stats record");
    DetFlags st_flags;
    std::string st_input;
    st_flags.attach(st, false);
    st->add_option("input", st_input, "Timbuk file")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "run a corpus and emit CSV stats");
    std::vector<std::string> bench_inputs, bench_modes;
    std::string bench_csv;
    double bench_timeout = 120.0;
    unsigned bench_jobs = 0;
    bench->add_option("inputs", bench_inputs, "Timbuk files or directories")->required();
    bench->add_option("--mode", bench_modes,
                      "textbook|det|det+compl|det+compl+dc (repeatable)");
    bench->add_option("--csv", bench_csv, "CSV output path (default: standard output)");
    bench->add_option("--timeout", bench_timeout, "per-task timeout in seconds");
    bench->add_option("--jobs", bench_jobs, "parallel tasks (default: processor count)");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a typed-lists scaling instance");
    uint32_t synth_k = 1;
    std::string synth_out;
    synth->add_option("k", synth_k, "family parameter (k >= 1)")->required();
    synth->add_option("-o,--output", synth_out, "write to a file");

    CLI11_PARSE(app, argc, argv);

    auto timed_determinize = [&](const Fta& fta, const DetFlags& flags, double& ms) {
        if (flags.dontcare && !flags.complete)
            throw InputError("--dontcare requires --complete");
        const auto start = std::chrono::steady_clock::now();
        Dfta d = flags.textbook ? determinize_textbook(fta, flags.options(max_states))
                                : determinize(fta, flags.options(max_states));
        ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                 .count();
        return d;
    };

    if (*det) {
        Fta fta = load_fta(det_input);
        double ms = 0;
        Dfta d = timed_determinize(fta, det_flags, ms);
        write_output(det_flags.output, render_dfta(d, det_flags, fta, ms));
        return kExitOk;
    }
    if (*comp) {
        Fta fta = load_fta(comp_input);
        if (comp_flags.textbook) throw InputError("complement uses the optimised pipeline");
        const auto start = std::chrono::steady_clock::now();
        DetOptions o = comp_flags.options(max_states);
        Dfta d = complement(fta, o);
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        DetFlags render = comp_flags;
        render.complete = true;
        write_output(comp_flags.output, render_dfta(d, render, fta, ms));
        return kExitOk;
    }
    if (*inter) {
        Dfta a = load_product_or_fta(inter_a);
        Dfta b = load_product_or_fta(inter_b);
        Dfta d = intersect_product(a, b);
        std::string fmt = inter_flags.format.empty() ? "product" : inter_flags.format;
        std::string text = (fmt == "timbuk" || inter_flags.expand_out)
                               ? serialize_timbuk(defactor(d))
                               : serialize_product(d);
        write_output(inter_flags.output, text);
        return kExitOk;
    }
    if (*diff) {
        Fta a = load_fta(diff_a);
        Fta b = load_fta(diff_b);
        const auto start = std::chrono::steady_clock::now();
        Dfta d = difference(a, b, diff_flags.options(max_states));
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        write_output(diff_flags.output, render_dfta(d, diff_flags, a, ms));
        return kExitOk;
    }
    if (*inc) {
        Fta a = load_fta(inc_a);
        Fta b = load_fta(inc_b);
        InclusionVerdict v = included(a, b, inc_flags.options(max_states));
        std::ostringstream os;
        if (v.holds) {
            os << "included\n";
        } else {
            os << "not included; counterexample state: {";
            const auto& names = *v.counterexample_state;
            for (size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
            os << "}\n";
        }
        write_output(inc_flags.output, os.str());
        return kExitOk;
    }
    if (*uni) {
        Fta fta = load_fta(uni_input);
        UniversalityVerdict v = universal(fta, uni_flags.options(max_states));
        std::ostringstream os;
        if (v.holds) {
            os << "universal\n";
        } else {
            os << "not universal; counterexample state: {";
            const auto& names = *v.counterexample_state;
            for (size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
            os << "}\n";
        }
        write_output(uni_flags.output, os.str());
        return kExitOk;
    }
    if (*st) {
        Fta fta = load_fta(st_input);
        double ms = 0;
        Dfta d = timed_determinize(fta, st_flags, ms);
        write_output(st_flags.output,
                     to_json(stats_record(fta.name, st_flags.mode_label(), fta, &d, ms, false)) +
                         "\n");
        return kExitOk;
    }
    if (*bench) {
        BenchConfig cfg;
        cfg.timeout_seconds = bench_timeout;
        cfg.jobs = bench_jobs;
        cfg.max_states = max_states;
        for (const std::string& in : bench_inputs) {
            namespace fs = std::filesystem;
            if (fs::is_directory(in)) {
                std::vector<std::string> files;
                for (const auto& e : fs::directory_iterator(in))
                    if (e.is_regular_file()) files.push_back(e.path().string());
                std::sort(files.begin(), files.end());
                cfg.input_paths.insert(cfg.input_paths.end(), files.begin(), files.end());
            } else {
                cfg.input_paths.push_back(in);
            }
        }
        cfg.modes.clear();
        for (const std::string& m : bench_modes) {
            auto mode = parse_mode(m);
            if (!mode) throw InputError("unknown mode '" + m + "'");
            cfg.modes.push_back(*mode);
        }
        if (cfg.modes.empty()) cfg.modes.push_back(BenchMode::OptCompl);

        std::vector<StatsRecord> records = bench_corpus(cfg);
        BenchSummary sum = summarize(records);
        std::ostringstream os;
        os << to_csv(records);
        char buf[160];
        std::snprintf(buf, sizeof buf, "# summary: solved=%llu timeouts=%llu errors=%llu avg_secs_solved=%.6f\n",
                      static_cast<unsigned long long>(sum.solved),
                      static_cast<unsigned long long>(sum.timeouts),
                      static_cast<unsigned long long>(sum.errors), sum.avg_seconds_solved);
        os << buf;
        write_output(bench_csv, os.str());
        if (!bench_csv.empty()) std::cerr << buf;
        return kExitOk;
    }
    if (*synth) {
        write_output(synth_out, serialize_timbuk(synth_family(synth_k)));
        return kExitOk;
    }
    return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

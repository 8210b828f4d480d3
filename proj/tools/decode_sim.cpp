// Command-line front end: BER sweeps, asymptote curves and graph-file
// validation for the stochastic decoding library.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stodec/stodec.hpp"

namespace {

using namespace stodec;

struct SweepCli {
    std::string code = "hamming16_11";
    std::string decoder = "sum_product";
    int l = -1;
    int iters = -1;
    std::string mode = "";
    double beta = 0.5;
    std::vector<double> ebno;
    std::int64_t stop_errors = 50;
    std::int64_t max_frames = 1000000;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
    std::string trace;
};

CodeId parse_code(const std::string& s) {
    if (s == "hamming16_11") return CodeId::kHamming16_11;
    if (s == "product256_121") return CodeId::kProduct256_121;
    throw ConfigInvalid("unknown code '" + s + "'");
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigInvalid("cannot open output file '" + path + "'");
    f << text;
}

// Dumps every directed edge symbol of the sweep's first frame, one line per
// (t, edge, direction, symbol).
void write_trace(const std::string& path, const CodeSystem& sys,
                 const SweepConfig& cfg) {
    std::ofstream f(path);
    if (!f) throw ConfigInvalid("cannot open trace file '" + path + "'");
    std::uint64_t frame_seed = derive_seed(cfg.root_seed, 0, 0);
    ChannelConfig chan = ChannelConfig::from_ebn0(cfg.ebn0_points[0], sys.rate());
    SplitMix64 info_rng(derive_seed(frame_seed, StreamKind::kFrameInfo));
    std::vector<int> info(static_cast<std::size_t>(sys.k));
    for (int& b : info) b = static_cast<int>(info_rng() >> 63);
    std::vector<double> y = transmit(sys.encoder(info), chan,
                                     derive_seed(frame_seed, StreamKind::kChannelNoise));
    StochasticConfig sc = cfg.stochastic;
    sc.seed = frame_seed;
    StochasticEngine engine(sys.graph, to_evidence(y, chan), sc);
    f << "# t edge dir symbol (dir 0: toward constraint, 1: toward variable)\n";
    while (engine.time() < engine.total_steps()) {
        engine.step();
        for (const Edge& e : sys.graph.edges())
            for (int dir = 0; dir < 2; ++dir)
                f << engine.time() << ' ' << e.id << ' ' << dir << ' '
                  << engine.symbol(e.id, dir) << '\n';
    }
}

int run_sweep_command(const SweepCli& cli) {
    SweepConfig cfg;
    cfg.code = parse_code(cli.code);
    if (cli.decoder == "sum_product") cfg.decoder = DecoderKind::kSumProduct;
    else if (cli.decoder == "relaxation") cfg.decoder = DecoderKind::kRelaxation;
    else if (cli.decoder == "stochastic") cfg.decoder = DecoderKind::kStochastic;
    else throw ConfigInvalid("unknown decoder '" + cli.decoder + "'");
    cfg.beta = cli.beta;
    apply_stochastic_defaults(cfg);
    if (cli.l > 0) cfg.stochastic.packet_length = cli.l;
    if (cli.iters > 0) {
        cfg.stochastic.iterations = cli.iters;
        cfg.ref_iterations = cli.iters;
    }
    if (!cli.mode.empty()) {
        if (cli.mode == "replacement") cfg.stochastic.mode = SupernodeMode::kReplacement;
        else if (cli.mode == "accumulation")
            cfg.stochastic.mode = SupernodeMode::kAccumulation;
        else throw ConfigInvalid("unknown mode '" + cli.mode + "'");
    }
    cfg.ebn0_points = cli.ebno;
    cfg.stop_errors = cli.stop_errors;
    cfg.max_frames = cli.max_frames;
    cfg.root_seed = cli.seed;
    cfg.threads = cli.threads;

    CodeSystem sys = make_code_system(cfg.code);
    if (!cli.trace.empty()) {
        if (cfg.decoder != DecoderKind::kStochastic)
            throw ConfigInvalid("--trace requires the stochastic decoder");
        if (cfg.ebn0_points.empty())
            throw ConfigInvalid("--trace requires at least one Eb/N0 point");
        write_trace(cli.trace, sys, cfg);
    }
    write_output(cli.out, emit_csv(run_sweep(cfg, sys)));
    return 0;
}

int run_asymptote_command(const std::string& code, const std::string& range,
                          const std::string& out) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(range);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':')
        throw ConfigInvalid("--ebno-range expects lo:hi:step");
    if (parse_code(code) != CodeId::kHamming16_11)
        throw CodebookTooLarge(
            "minimum-distance asymptote requires codeword enumeration (k <= 16); "
            "only hamming16_11 qualifies");
    write_output(out, emit_asymptote(hamming16_11(), lo, hi, step));
    return 0;
}

int run_validate_command(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigInvalid("cannot open graph file '" + path + "'");
    ConstraintGraph g = parse_graph(f);
    for (const ConstraintNode& c : g.constraints()) {
        ValidationResult r = validate_table(c.table);
        if (!r.ok())
            throw GraphError("constraint " + std::to_string(c.id) +
                             ": mapping for role " + name(r.violation->role) +
                             " is not single-valued at input (" +
                             std::to_string(r.violation->witness.first) + "," +
                             std::to_string(r.violation->witness.second) + ")");
    }
    auto cycles = detect_cycles(g);
    if (!cycles.empty()) {
        std::ostringstream msg;
        msg << "uncovered cycle of " << cycles[0].size() << " edges:";
        for (int e : cycles[0]) msg << ' ' << e;
        throw UncoveredCycle(msg.str());
    }
    std::cout << "graph ok: " << g.variables().size() << " variables ("
              << g.observables().size() << " observable), "
              << g.constraints().size() << " constraints, " << g.edges().size()
              << " edges, " << g.supernode_edges().size()
              << " supernode edges, diameter " << g.diameter() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterative decoding on constraint graphs: reference and "
                 "stochastic decoders with BER sweep harness"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value config file; command-line flags override");

    SweepCli sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a BER sweep");
    sweep_cmd->add_option("--code", sweep.code, "hamming16_11 or product256_121");
    sweep_cmd->add_option("--decoder", sweep.decoder,
                          "sum_product, relaxation or stochastic");
    sweep_cmd->add_option("--l", sweep.l, "Stochastic packet length");
    sweep_cmd->add_option("--iters", sweep.iters,
                          "Stochastic packets / flooding iterations");
    sweep_cmd->add_option("--mode", sweep.mode, "replacement or accumulation");
    sweep_cmd->add_option("--beta", sweep.beta, "Relaxation parameter in (0,1)");
    sweep_cmd->add_option("--ebno", sweep.ebno, "Eb/N0 points in dB")
        ->delimiter(',')
        ->required();
    sweep_cmd->add_option("--stop-errors", sweep.stop_errors,
                          "Stop a point after this many bit errors");
    sweep_cmd->add_option("--max-frames", sweep.max_frames, "Frame cap per point");
    sweep_cmd->add_option("--seed", sweep.seed, "Root seed")->required();
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads");
    sweep_cmd->add_option("--out", sweep.out, "CSV output file (default stdout)");
    sweep_cmd->add_option("--trace", sweep.trace,
                          "Dump edge symbols of the first frame to this file");

    std::string asy_code = "hamming16_11", asy_range, asy_out;
    CLI::App* asy_cmd =
        app.add_subcommand("asymptote", "Emit the minimum-distance asymptote");
    asy_cmd->add_option("--code", asy_code, "Code name");
    asy_cmd->add_option("--ebno-range", asy_range, "lo:hi:step in dB")->required();
    asy_cmd->add_option("--out", asy_out, "CSV output file (default stdout)");

    std::string graph_file;
    CLI::App* val_cmd =
        app.add_subcommand("validate-graph", "Check a graph description file");
    val_cmd->add_option("--graph", graph_file, "Graph file")->required();

    try {
        app.parse(argc, argv);
        if (sweep_cmd->parsed()) return run_sweep_command(sweep);
        if (asy_cmd->parsed()) return run_asymptote_command(asy_code, asy_range, asy_out);
        if (val_cmd->parsed()) return run_validate_command(graph_file);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const stodec::Error& e) {
        std::cerr << "error code=" << e.code() << " message=\"" << e.what() << "\"\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error code=internal message=\"" << e.what() << "\"\n";
        return 2;
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "stodec/channel.hpp"
#include "stodec/codes.hpp"
#include "stodec/reference.hpp"
#include "stodec/rng.hpp"
#include "stodec/stochastic.hpp"

namespace stodec {

enum class CodeId { kHamming16_11, kProduct256_121 };
enum class DecoderKind { kSumProduct, kRelaxation, kStochastic };

inline const char* name(CodeId c) {
    return c == CodeId::kHamming16_11 ? "hamming16_11" : "product256_121";
}

inline std::string name(DecoderKind d, SupernodeMode mode) {
    switch (d) {
        case DecoderKind::kSumProduct: return "sum_product";
        case DecoderKind::kRelaxation: return "relaxation";
        case DecoderKind::kStochastic:
            return mode == SupernodeMode::kReplacement ? "stochastic-replacement"
                                                       : "stochastic-accumulation";
    }
    return "?";
}

// A code wired for simulation: graph, encoder and the observable indices
// counted as information bits. Observable index i corresponds to codeword
// bit i for both codes.
struct CodeSystem {
    CodeId id = CodeId::kHamming16_11;
    int n = 0;
    int k = 0;
    LinearCode base;
    ConstraintGraph graph;
    std::vector<int> info_positions;
    std::function<std::vector<int>(const std::vector<int>&)> encoder;

    double rate() const { return static_cast<double>(k) / n; }
};

inline CodeSystem make_code_system(CodeId id) {
    CodeSystem sys;
    sys.id = id;
    sys.base = hamming16_11();
    if (id == CodeId::kHamming16_11) {
        sys.n = 16;
        sys.k = 11;
        sys.graph = build_hamming_graph().graph;
        for (int i = 0; i < 11; ++i) sys.info_positions.push_back(i);
        LinearCode code = sys.base;
        sys.encoder = [code](const std::vector<int>& info) {
            return encode(code, info);
        };
    } else {
        sys.n = 256;
        sys.k = 121;
        ProductGraph pg = build_product_graph();
        sys.graph = std::move(pg.graph);
        for (int r = 0; r < 11; ++r)
            for (int c = 0; c < 11; ++c) sys.info_positions.push_back(r * 16 + c);
        LinearCode code = sys.base;
        sys.encoder = [code](const std::vector<int>& info) {
            return encode_product(code, info);
        };
    }
    return sys;
}

struct SweepConfig {
    CodeId code = CodeId::kHamming16_11;
    DecoderKind decoder = DecoderKind::kSumProduct;
    double beta = 0.5;            // relaxation only
    StochasticConfig stochastic;  // l, iterations, mode (seed is ignored)
    int ref_iterations = 0;       // 0: use the graph diameter
    std::vector<double> ebn0_points;
    std::int64_t stop_errors = 50;
    std::int64_t max_frames = 1000000;
    std::uint64_t root_seed = 0;
    int threads = 1;
};

// Paper-scale stochastic defaults: l=250 with one packet for the acyclic
// Hamming graph; l=250 with eight accumulation packets (2000 time-steps)
// for the product code.
inline void apply_stochastic_defaults(SweepConfig& cfg) {
    cfg.stochastic.packet_length = 250;
    if (cfg.code == CodeId::kProduct256_121) {
        cfg.stochastic.iterations = 8;
        cfg.stochastic.mode = SupernodeMode::kAccumulation;
    } else {
        cfg.stochastic.iterations = 1;
        cfg.stochastic.mode = SupernodeMode::kReplacement;
    }
}

struct BerRecord {
    std::string code;
    std::string decoder;
    double ebn0_db = 0.0;
    std::int64_t frames = 0;
    std::int64_t bit_errors = 0;
    double ber = 0.0;
    int l = 0;            // stochastic only
    int iterations = 0;   // flooding iterations or packets
    double beta = 0.0;    // relaxation only
    std::uint64_t seed = 0;
};

namespace detail {

struct FrameContext {
    const CodeSystem* sys;
    ChannelConfig channel;
    const SweepConfig* cfg;
    int ref_iterations;
};

// Decodes one frame and returns its information-bit error count. Fully
// determined by the frame seed.
inline int simulate_frame(const FrameContext& ctx, std::uint64_t frame_seed) {
    const CodeSystem& sys = *ctx.sys;
    SplitMix64 info_rng(derive_seed(frame_seed, StreamKind::kFrameInfo));
    std::vector<int> info(static_cast<std::size_t>(sys.k));
    for (int& b : info) b = static_cast<int>(info_rng() >> 63);
    std::vector<int> codeword = sys.encoder(info);
    std::vector<double> y = transmit(
        codeword, ctx.channel, derive_seed(frame_seed, StreamKind::kChannelNoise));
    std::vector<Mass> evidence = to_evidence(y, ctx.channel);

    std::vector<Symbol> decisions;
    switch (ctx.cfg->decoder) {
        case DecoderKind::kSumProduct:
            decisions = decode(sys.graph, evidence, DecodeRule::sum_product(),
                               ctx.ref_iterations)
                            .decisions;
            break;
        case DecoderKind::kRelaxation:
            decisions = decode(sys.graph, evidence,
                               DecodeRule::relaxation(ctx.cfg->beta),
                               ctx.ref_iterations)
                            .decisions;
            break;
        case DecoderKind::kStochastic: {
            StochasticConfig sc = ctx.cfg->stochastic;
            sc.seed = frame_seed;
            decisions = run_stochastic(sys.graph, evidence, sc).decisions;
            break;
        }
    }
    int errors = 0;
    for (int pos : sys.info_positions)
        if (decisions[static_cast<std::size_t>(pos)] !=
            codeword[static_cast<std::size_t>(pos)])
            ++errors;
    return errors;
}

}  // namespace detail

// BER sweep with an early-stopping rule: each Eb/N0 point runs frames until
// stop_errors bit errors or max_frames. Frame seeds derive from
// (root_seed, point index, frame index), and the stop decision folds frame
// results in frame order, so the records are identical for any thread
// count.
inline std::vector<BerRecord> run_sweep(const SweepConfig& cfg,
                                        const CodeSystem& sys) {
    if (cfg.ebn0_points.empty())
        throw ConfigInvalid("sweep requires at least one Eb/N0 point");
    if (cfg.stop_errors < 1 || cfg.max_frames < 1)
        throw ConfigInvalid("stop_errors and max_frames must be >= 1");
    if (cfg.code != sys.id) throw ConfigInvalid("code system does not match config");
    if (cfg.decoder == DecoderKind::kStochastic) {
        if (cfg.stochastic.packet_length < 1 || cfg.stochastic.iterations < 1)
            throw ConfigInvalid("stochastic l and iterations must be >= 1");
        if (!detect_cycles(sys.graph).empty())
            throw UncoveredCycle("graph has a cycle with no supernode edge");
    }
    int threads = std::max(1, cfg.threads);

    std::vector<BerRecord> records;
    for (std::size_t pi = 0; pi < cfg.ebn0_points.size(); ++pi) {
        detail::FrameContext ctx;
        ctx.sys = &sys;
        ctx.channel = ChannelConfig::from_ebn0(cfg.ebn0_points[pi], sys.rate());
        ctx.cfg = &cfg;
        ctx.ref_iterations =
            cfg.ref_iterations > 0 ? cfg.ref_iterations : sys.graph.diameter();

        std::int64_t frames = 0;
        std::int64_t errors = 0;
        std::vector<int> chunk_errors;
        while (frames < cfg.max_frames && errors < cfg.stop_errors) {
            std::int64_t chunk =
                std::min<std::int64_t>(cfg.max_frames - frames, 4 * threads);
            chunk_errors.assign(static_cast<std::size_t>(chunk), 0);
            auto worker = [&](std::int64_t begin, std::int64_t end) {
                for (std::int64_t f = begin; f < end; ++f)
                    chunk_errors[static_cast<std::size_t>(f)] = detail::simulate_frame(
                        ctx, derive_seed(cfg.root_seed, static_cast<std::uint64_t>(pi),
                                         static_cast<std::uint64_t>(frames + f)));
            };
            if (threads == 1) {
                worker(0, chunk);
            } else {
                std::vector<std::thread> pool;
                std::int64_t per = (chunk + threads - 1) / threads;
                for (int tid = 0; tid < threads; ++tid) {
                    std::int64_t begin = tid * per;
                    std::int64_t end = std::min<std::int64_t>(chunk, begin + per);
                    if (begin >= end) break;
                    pool.emplace_back(worker, begin, end);
                }
                for (auto& th : pool) th.join();
            }
            // Sequential fold in frame order; later frames in the chunk are
            // discarded once the stop threshold is crossed.
            for (std::int64_t f = 0; f < chunk; ++f) {
                ++frames;
                errors += chunk_errors[static_cast<std::size_t>(f)];
                if (errors >= cfg.stop_errors) break;
            }
        }

        BerRecord rec;
        rec.code = name(cfg.code);
        rec.decoder = name(cfg.decoder, cfg.stochastic.mode);
        rec.ebn0_db = cfg.ebn0_points[pi];
        rec.frames = frames;
        rec.bit_errors = errors;
        rec.ber = static_cast<double>(errors) /
                  (static_cast<double>(frames) * static_cast<double>(sys.k));
        rec.l = cfg.decoder == DecoderKind::kStochastic ? cfg.stochastic.packet_length
                                                        : 0;
        rec.iterations = cfg.decoder == DecoderKind::kStochastic
                             ? cfg.stochastic.iterations
                             : ctx.ref_iterations;
        rec.beta = cfg.decoder == DecoderKind::kRelaxation ? cfg.beta : 0.0;
        rec.seed = cfg.root_seed;
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<BerRecord> run_sweep(const SweepConfig& cfg) {
    CodeSystem sys = make_code_system(cfg.code);
    return run_sweep(cfg, sys);
}

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

}  // namespace detail

inline std::string emit_csv(const std::vector<BerRecord>& records) {
    std::ostringstream out;
    out << "code,decoder,ebn0_db,frames,bit_errors,ber,l,iterations,beta,seed\n";
    for (const BerRecord& r : records) {
        out << r.code << ',' << r.decoder << ',' << detail::format_double(r.ebn0_db)
            << ',' << r.frames << ',' << r.bit_errors << ','
            << detail::format_double(r.ber) << ',';
        if (r.l > 0) out << r.l;
        out << ',' << r.iterations << ',';
        if (r.beta > 0.0) out << detail::format_double(r.beta);
        out << ',' << r.seed << '\n';
    }
    return out.str();
}

// Minimum-distance asymptote curve over [lo, hi] in steps of `step` dB.
inline std::string emit_asymptote(const LinearCode& code, double lo, double hi,
                                  double step) {
    if (step <= 0.0) throw ConfigInvalid("asymptote step must be positive");
    std::ostringstream out;
    out << "ebn0_db,ber_asymptote\n";
    for (double e = lo; e <= hi + 1e-9; e += step)
        out << detail::format_double(e) << ','
            << detail::format_double(min_distance_asymptote(code, e)) << '\n';
    return out.str();
}

}  // namespace stodec

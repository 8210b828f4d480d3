// Dev probe: warmup and decision-rule变 variants at 6 dB, l=250.
#include <cstdio>
#include <vector>

#include "stodec/stodec.hpp"

using namespace stodec;

int main() {
    CodeSystem sys = make_code_system(CodeId::kHamming16_11);
    ChannelConfig chan = ChannelConfig::from_ebn0(6.0, sys.rate());
    const int frames = 6000;
    const int l = 250;

    for (int warmup : {0, 16, 33, 50, 66, 100}) {
        int flips_gated = 0, flips_product = 0, flips_raw = 0;
        int err_gated = 0, err_product = 0, err_raw = 0, err_sp = 0;
        for (int f = 0; f < frames; ++f) {
            std::uint64_t seed = derive_seed(909, 1, (std::uint64_t)f);
            SplitMix64 info_rng(derive_seed(seed, StreamKind::kFrameInfo));
            std::vector<int> info(11);
            for (int& b : info) b = (int)(info_rng() >> 63);
            std::vector<int> cw = sys.encoder(info);
            std::vector<double> y =
                transmit(cw, chan, derive_seed(seed, StreamKind::kChannelNoise));
            std::vector<Mass> ev = to_evidence(y, chan);
            DecodeResult sp = decode(sys.graph, ev, DecodeRule::sum_product(),
                                     sys.graph.diameter());
            StochasticConfig sc;
            sc.packet_length = l;
            sc.seed = seed;
            sc.warmup = warmup;
            StochasticEngine::Options opt;
            opt.zero_initial_state = (warmup == 16);  // abuse the loop: row2 = zero-init
            sc.warmup = 0;
            StochasticEngine eng(sys.graph, ev, sc, opt);
            eng.run();
            StochasticResult st = eng.result();
            for (int j = 0; j < 16; ++j) {
                int gated = st.decisions[j];
                // Product decision: matches-only counting.
                const Histogram& mh = eng.match_histogram(j);
                int product = mh.total > 0 ? histogram_decide(mh) : gated;
                int raw = histogram_decide(st.arrival_histograms[j]);
                if (gated != sp.decisions[j]) flips_gated++;
                if (product != sp.decisions[j]) flips_product++;
                if (raw != sp.decisions[j]) flips_raw++;
                if (j < 11) {
                    if (gated != cw[j]) err_gated++;
                    if (product != cw[j]) err_product++;
                    if (raw != cw[j]) err_raw++;
                    if (sp.decisions[j] != cw[j]) err_sp++;
                }
            }
        }
        std::printf(
            "warmup=%3d  flips(gated/product/raw)=%3d/%3d/%3d  err(g/p/r/sp)=%d/%d/%d/%d\n",
            warmup, flips_gated, flips_product, flips_raw, err_gated, err_product,
            err_raw, err_sp);
    }
    return 0;
}
// (state profile printer appended as a second main is not allowed; see probe2)

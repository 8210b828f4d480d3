// Dev probe: anatomy of gated-decision flips vs sum-product at 6 dB.
#include <cstdio>
#include <vector>

#include "stodec/stodec.hpp"

using namespace stodec;

int main() {
    CodeSystem sys = make_code_system(CodeId::kHamming16_11);
    ChannelConfig chan = ChannelConfig::from_ebn0(6.0, sys.rate());
    const int frames = 6000;
    const int l = 250;
    int flips = 0;
    for (int f = 0; f < frames; ++f) {
        std::uint64_t seed = derive_seed(909, 1, (std::uint64_t)f);
        SplitMix64 info_rng(derive_seed(seed, StreamKind::kFrameInfo));
        std::vector<int> info(11);
        for (int& b : info) b = (int)(info_rng() >> 63);
        std::vector<int> cw = sys.encoder(info);
        std::vector<double> y =
            transmit(cw, chan, derive_seed(seed, StreamKind::kChannelNoise));
        std::vector<Mass> ev = to_evidence(y, chan);
        DecodeResult sp =
            decode(sys.graph, ev, DecodeRule::sum_product(), sys.graph.diameter());
        StochasticConfig sc;
        sc.packet_length = l;
        sc.seed = seed;
        StochasticEngine eng(sys.graph, ev, sc);
        eng.run();
        auto dec = eng.decisions();
        for (int j = 0; j < 16; ++j) {
            if (dec[j] == sp.decisions[j]) continue;
            ++flips;
            const Histogram& sh = eng.decision_histogram(j);
            const Histogram& mh = eng.match_histogram(j);
            const Histogram& ah = eng.arrival_histogram(j);
            std::printf(
                "frame %d bit %2d: sp_dec %d post=(%.4f) ev=(%.4f) gated=(%ld,%ld) "
                "match=(%ld,%ld) arr=(%ld,%ld)\n",
                f, j, sp.decisions[j], sp.marginals[j][0], ev[j][0], sh.counts[0],
                sh.counts[1], mh.counts[0], mh.counts[1], ah.counts[0], ah.counts[1]);
        }
        if (flips > 40) break;
    }
    return 0;
}

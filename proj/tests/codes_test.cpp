#include "stodec/codes.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "stodec/reference.hpp"
#include "test_util.hpp"

using namespace stodec;

namespace {

int gf2_rank(std::vector<std::vector<std::uint8_t>> m) {
    if (m.empty()) return 0;
    std::size_t cols = m[0].size();
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.size() && !m[pivot][col]) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[pivot], m[row]);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r != row && m[r][col])
                for (std::size_t c = 0; c < cols; ++c) m[r][c] ^= m[row][c];
        }
        ++row;
        ++rank;
    }
    return rank;
}

std::vector<int> random_info(SplitMix64& rng, int k) {
    std::vector<int> info(static_cast<std::size_t>(k));
    for (int& b : info) b = static_cast<int>(rng() & 1);
    return info;
}

// Walks a bit sequence through the Hamming trellis graph; true iff it labels
// an end-to-end path. Section j carries the codeword position of its B-slot
// variable (bit variables are created in codeword order, so id == position).
bool labels_trellis_path(const ConstraintGraph& g, const std::vector<int>& bits) {
    Symbol state = 0;
    for (int j = 0; j < 16; ++j) {
        const ConstraintNode& c = g.constraint(j);
        int pos = g.edge(c.slot_edge[1]).variable;
        Symbol next =
            c.table.lookup(Role::C, state, bits[static_cast<std::size_t>(pos)]);
        if (next == SatisfactionTable::kNoSymbol) return false;
        state = next;
    }
    return state == 0;  // singleton final alphabet
}

}  // namespace

TEST(Hamming16_11, GeneratorAndParityCheckAreConsistent) {
    LinearCode code = hamming16_11();
    ASSERT_EQ(code.n, 16);
    ASSERT_EQ(code.k, 11);
    for (const auto& grow : code.generator) {
        for (const auto& hrow : code.parity_check) {
            int dot = 0;
            for (int j = 0; j < 16; ++j)
                dot ^= grow[static_cast<std::size_t>(j)] & hrow[static_cast<std::size_t>(j)];
            EXPECT_EQ(dot, 0);
        }
    }
    EXPECT_EQ(gf2_rank(code.generator), 11);
    EXPECT_EQ(gf2_rank(code.parity_check), 5);
}

TEST(Encode, SystematicExamplesAndRandomChecks) {
    LinearCode code = hamming16_11();
    std::vector<int> zero(11, 0);
    EXPECT_EQ(encode(code, zero), std::vector<int>(16, 0));

    std::vector<int> e0(11, 0);
    e0[0] = 1;
    std::vector<int> cw = encode(code, e0);
    for (int j = 0; j < 16; ++j)
        EXPECT_EQ(cw[static_cast<std::size_t>(j)],
                  static_cast<int>(code.generator[0][static_cast<std::size_t>(j)]));

    SplitMix64 rng(derive_seed(31, StreamKind::kTest));
    for (int trial = 0; trial < 1000; ++trial)
        EXPECT_TRUE(satisfies_checks(code, encode(code, random_info(rng, 11))));

    EXPECT_THROW(encode(code, std::vector<int>(10, 0)), LengthMismatch);
}

TEST(Hamming16_11, WeightEnumerationGivesDmin4WithMultiplicity140) {
    LinearCode code = hamming16_11();
    auto book = enumerate_codebook(code);
    ASSERT_EQ(book.size(), 2048u);
    std::set<std::vector<int>> distinct(book.begin(), book.end());
    EXPECT_EQ(distinct.size(), 2048u);

    std::map<int, int> spectrum;
    for (const auto& cw : book)
        spectrum[std::accumulate(cw.begin(), cw.end(), 0)]++;
    EXPECT_EQ(spectrum[0], 1);
    EXPECT_EQ(spectrum.count(1), 0u);
    EXPECT_EQ(spectrum.count(2), 0u);
    EXPECT_EQ(spectrum.count(3), 0u);
    EXPECT_EQ(spectrum[4], 140);

    MinWeight mw = min_weight(code);
    EXPECT_EQ(mw.d_min, 4);
    EXPECT_EQ(mw.multiplicity, 140);
}

TEST(Asymptote, MonotonicallyDecreasingInEbn0) {
    LinearCode code = hamming16_11();
    double prev = 1.0;
    for (double e = 0.0; e <= 10.0; e += 0.5) {
        double v = min_distance_asymptote(code, e);
        EXPECT_LT(v, prev);
        EXPECT_GT(v, 0.0);
        prev = v;
    }
}

TEST(HammingGraph, StructureCounts) {
    TrellisGraph tg = build_hamming_graph();
    const ConstraintGraph& g = tg.graph;
    EXPECT_EQ(g.constraints().size(), 16u);
    EXPECT_EQ(g.observables().size(), 16u);
    int internal = 0, state_like = 0;
    for (const VariableNode& v : g.variables()) {
        if (v.observable) continue;
        ++internal;
        if (v.alphabet.size >= 2) ++state_like;
    }
    // 15 interior state variables plus the two singleton chain anchors.
    EXPECT_EQ(state_like, 15);
    EXPECT_EQ(internal, 17);
    EXPECT_TRUE(detect_cycles(g).empty());
    ASSERT_EQ(tg.bit_variables.size(), 16u);
    for (int j = 0; j < 16; ++j) {
        const VariableNode& v = g.variable(tg.bit_variables[static_cast<std::size_t>(j)]);
        EXPECT_TRUE(v.observable);
        EXPECT_EQ(v.role, j < 11 ? VarRole::kInfo : VarRole::kParity);
        EXPECT_EQ(g.observables()[static_cast<std::size_t>(j)], v.id);
    }
    // Syndrome states stay within 2^5.
    for (const ConstraintNode& c : g.constraints())
        for (Role r : kRoles) EXPECT_LE(c.table.alphabet(r).size, 32);
}

TEST(HammingGraph, AllZeroPathAndPathCount) {
    TrellisGraph tg = build_hamming_graph();
    const ConstraintGraph& g = tg.graph;
    for (int j = 0; j < 16; ++j)
        EXPECT_EQ(g.constraint(j).table.lookup(Role::C, 0, 0), 0);

    // Path count by forward DP equals the codebook size.
    std::vector<std::int64_t> count{1};
    for (int j = 0; j < 16; ++j) {
        const SatisfactionTable& t = g.constraint(j).table;
        std::vector<std::int64_t> next(
            static_cast<std::size_t>(t.alphabet(Role::C).size), 0);
        for (const Row& r : t.rows())
            next[static_cast<std::size_t>(r[2])] += count[static_cast<std::size_t>(r[0])];
        count = std::move(next);
    }
    ASSERT_EQ(count.size(), 1u);
    EXPECT_EQ(count[0], 2048);
}

TEST(HammingGraph, PathSetEqualsCodebook) {
    TrellisGraph tg = build_hamming_graph();
    LinearCode code = hamming16_11();
    for (const auto& cw : enumerate_codebook(code))
        EXPECT_TRUE(labels_trellis_path(tg.graph, cw));

    SplitMix64 rng(derive_seed(37, StreamKind::kTest));
    int rejected = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<int> word(16);
        for (int& b : word) b = static_cast<int>(rng() & 1);
        if (satisfies_checks(code, word)) continue;  // rare: 1/32 of words
        EXPECT_FALSE(labels_trellis_path(tg.graph, word));
        ++rejected;
    }
    EXPECT_GT(rejected, 900);
}

TEST(HammingGraph, SumProductMatchesBruteForceMap) {
    TrellisGraph tg = build_hamming_graph();
    LinearCode code = hamming16_11();
    auto book = enumerate_codebook(code);
    SplitMix64 rng(derive_seed(41, StreamKind::kTest));
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Mass> ev;
        for (int j = 0; j < 16; ++j) ev.push_back(test::random_mass(rng, 2, 0.2, 0.8));
        DecodeResult sp =
            decode(tg.graph, ev, DecodeRule::sum_product(), tg.graph.diameter());
        std::vector<Mass> map = brute_force_map(book, ev);
        for (int j = 0; j < 16; ++j)
            for (int s = 0; s < 2; ++s)
                EXPECT_NEAR(sp.marginals[static_cast<std::size_t>(j)][s],
                            map[static_cast<std::size_t>(j)][s], 1e-9);
    }
}

TEST(ProductGraph, StructureCounts) {
    ProductGraph pg = build_product_graph();
    const ConstraintGraph& g = pg.graph;
    int trellis_nodes = 0, equality_supernodes = 0;
    for (const ConstraintNode& c : g.constraints())
        (c.supernode ? equality_supernodes : trellis_nodes)++;
    EXPECT_EQ(trellis_nodes, 512);
    EXPECT_EQ(equality_supernodes, 256);
    EXPECT_EQ(g.observables().size(), 256u);
    EXPECT_EQ(g.supernode_edges().size(), 512u);
    EXPECT_TRUE(detect_cycles(g).empty());

    // Cell observables follow row-major order.
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            EXPECT_EQ(g.observables()[static_cast<std::size_t>(r * 16 + c)],
                      pg.layout.cell(r, c));

    // Every equality supernode joins two internal relays and one observable.
    for (int eq : pg.layout.equality_constraint) {
        const ConstraintNode& c = g.constraint(eq);
        EXPECT_TRUE(c.supernode);
        EXPECT_FALSE(g.variable(g.edge(c.slot_edge[0]).variable).observable);
        EXPECT_FALSE(g.variable(g.edge(c.slot_edge[1]).variable).observable);
        EXPECT_TRUE(g.variable(g.edge(c.slot_edge[2]).variable).observable);
        EXPECT_TRUE(g.edge(c.slot_edge[0]).super);
        EXPECT_TRUE(g.edge(c.slot_edge[1]).super);
        EXPECT_FALSE(g.edge(c.slot_edge[2]).super);
    }
}

TEST(ProductEncode, AllLinesAreComponentCodewords) {
    LinearCode code = hamming16_11();
    SplitMix64 rng(derive_seed(43, StreamKind::kTest));
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> grid = encode_product(code, random_info(rng, 121));
        ASSERT_EQ(grid.size(), 256u);
        for (int r = 0; r < 16; ++r) {
            std::vector<int> line(16);
            for (int c = 0; c < 16; ++c)
                line[static_cast<std::size_t>(c)] = grid[static_cast<std::size_t>(r * 16 + c)];
            EXPECT_TRUE(satisfies_checks(code, line)) << "row " << r;
        }
        for (int c = 0; c < 16; ++c) {
            std::vector<int> line(16);
            for (int r = 0; r < 16; ++r)
                line[static_cast<std::size_t>(r)] = grid[static_cast<std::size_t>(r * 16 + c)];
            EXPECT_TRUE(satisfies_checks(code, line)) << "col " << c;
        }
    }
    EXPECT_THROW(encode_product(code, std::vector<int>(120, 0)), LengthMismatch);
}

TEST(ProductEncode, InfoBitsOccupyTopLeftSubgrid) {
    LinearCode code = hamming16_11();
    SplitMix64 rng(derive_seed(47, StreamKind::kTest));
    std::vector<int> info = random_info(rng, 121);
    std::vector<int> grid = encode_product(code, info);
    for (int r = 0; r < 11; ++r)
        for (int c = 0; c < 11; ++c)
            EXPECT_EQ(grid[static_cast<std::size_t>(r * 16 + c)],
                      info[static_cast<std::size_t>(r * 11 + c)]);
}

TEST(EnumerateCodebook, GuardsAgainstLargeK) {
    LinearCode big;
    big.n = 20;
    big.k = 17;
    big.generator.assign(17, std::vector<std::uint8_t>(20, 0));
    EXPECT_THROW(enumerate_codebook(big), CodebookTooLarge);
}

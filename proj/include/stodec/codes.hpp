#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "stodec/channel.hpp"
#include "stodec/graph.hpp"
#include "stodec/satisfaction.hpp"

namespace stodec {

// Systematic binary linear block code: generator [I_k | P], parity check
// H with G * H^T = 0 over GF(2).
struct LinearCode {
    int n = 0;
    int k = 0;
    std::vector<std::vector<std::uint8_t>> generator;     // k x n
    std::vector<std::vector<std::uint8_t>> parity_check;  // (n-k) x n
};

inline std::vector<int> encode(const LinearCode& code, const std::vector<int>& info) {
    if (static_cast<int>(info.size()) != code.k)
        throw LengthMismatch("encode: expected " + std::to_string(code.k) +
                             " information bits");
    std::vector<int> out(static_cast<std::size_t>(code.n), 0);
    for (int i = 0; i < code.k; ++i) {
        if (info[static_cast<std::size_t>(i)] == 0) continue;
        if (info[static_cast<std::size_t>(i)] != 1)
            throw ConfigInvalid("encode: bits must be 0 or 1");
        for (int j = 0; j < code.n; ++j)
            out[static_cast<std::size_t>(j)] ^=
                code.generator[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return out;
}

// The (16,11) extended Hamming code: the (15,11) Hamming code in systematic
// form plus an overall even-parity bit. d_min = 4.
inline LinearCode hamming16_11() {
    LinearCode code;
    code.n = 16;
    code.k = 11;
    // Parity columns of the (15,11) code: the 4-bit patterns of weight >= 2,
    // in ascending numeric order, one per information position.
    std::vector<int> info_cols;
    for (int v = 3; v < 16; ++v) {
        if ((v & (v - 1)) != 0) info_cols.push_back(v);  // skip powers of two
    }
    code.generator.assign(11, std::vector<std::uint8_t>(16, 0));
    for (int i = 0; i < 11; ++i) {
        auto& row = code.generator[static_cast<std::size_t>(i)];
        row[static_cast<std::size_t>(i)] = 1;
        int pattern = info_cols[static_cast<std::size_t>(i)];
        int weight = 1;
        for (int b = 0; b < 4; ++b) {
            if ((pattern >> b) & 1) {
                row[static_cast<std::size_t>(11 + b)] = 1;
                ++weight;
            }
        }
        row[15] = static_cast<std::uint8_t>(weight & 1);  // overall even parity
    }
    code.parity_check.assign(5, std::vector<std::uint8_t>(16, 0));
    for (int b = 0; b < 4; ++b) {
        auto& row = code.parity_check[static_cast<std::size_t>(b)];
        for (int i = 0; i < 11; ++i)
            row[static_cast<std::size_t>(i)] =
                static_cast<std::uint8_t>((info_cols[static_cast<std::size_t>(i)] >> b) & 1);
        row[static_cast<std::size_t>(11 + b)] = 1;
    }
    code.parity_check[4].assign(16, 1);  // even overall weight
    return code;
}

inline bool satisfies_checks(const LinearCode& code, const std::vector<int>& word) {
    if (static_cast<int>(word.size()) != code.n) return false;
    for (const auto& row : code.parity_check) {
        int s = 0;
        for (int j = 0; j < code.n; ++j)
            s ^= row[static_cast<std::size_t>(j)] & word[static_cast<std::size_t>(j)];
        if (s) return false;
    }
    return true;
}

inline std::vector<std::vector<int>> enumerate_codebook(const LinearCode& code) {
    if (code.k > 16)
        throw CodebookTooLarge("codebook enumeration requires k <= 16");
    std::vector<std::vector<int>> book;
    book.reserve(1u << code.k);
    std::vector<int> info(static_cast<std::size_t>(code.k), 0);
    for (std::uint32_t m = 0; m < (1u << code.k); ++m) {
        for (int i = 0; i < code.k; ++i)
            info[static_cast<std::size_t>(i)] = static_cast<int>((m >> i) & 1);
        book.push_back(encode(code, info));
    }
    return book;
}

struct MinWeight {
    int d_min = 0;
    std::int64_t multiplicity = 0;  // number of codewords at weight d_min
};

inline MinWeight min_weight(const LinearCode& code) {
    MinWeight result;
    for (const auto& cw : enumerate_codebook(code)) {
        int w = 0;
        for (int b : cw) w += b;
        if (w == 0) continue;
        if (result.d_min == 0 || w < result.d_min) {
            result.d_min = w;
            result.multiplicity = 1;
        } else if (w == result.d_min) {
            ++result.multiplicity;
        }
    }
    return result;
}

// Dominant union-bound BER term:
// (A_dmin * d_min / n) * Q(sqrt(2 * (k/n) * d_min * Eb/N0)).
inline double min_distance_asymptote(const LinearCode& code, double ebn0_db) {
    MinWeight mw = min_weight(code);
    double rate = static_cast<double>(code.k) / code.n;
    double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    double coeff = static_cast<double>(mw.multiplicity) * mw.d_min / code.n;
    return coeff * q_function(std::sqrt(2.0 * rate * mw.d_min * ebn0));
}

namespace detail {

// GF(2) span of a set of column masks, kept in reduced echelon form.
struct Gf2Basis {
    std::array<std::uint32_t, 32> rows{};
    int rank = 0;

    bool insert(std::uint32_t v) {
        for (int i = 0; i < rank; ++i)
            if (v > (v ^ rows[static_cast<std::size_t>(i)]))
                v ^= rows[static_cast<std::size_t>(i)];
        if (v == 0) return false;
        rows[static_cast<std::size_t>(rank++)] = v;
        // Keep rows sorted by leading bit for a canonical reduction order.
        for (int i = rank - 1; i > 0; --i)
            if (rows[static_cast<std::size_t>(i)] > rows[static_cast<std::size_t>(i - 1)])
                std::swap(rows[static_cast<std::size_t>(i)],
                          rows[static_cast<std::size_t>(i - 1)]);
        return true;
    }
};

// Column visit order minimizing the peak trellis state dimension. The state
// dimension at a cut depends only on the set S of columns before the cut:
// rank(S) + rank(complement) - rank(all). Subset DP over the 2^n sets gives
// the exact optimum; ties resolve toward the lexicographically first order.
inline std::vector<int> min_peak_column_order(const std::vector<std::uint32_t>& columns) {
    int n = static_cast<int>(columns.size());
    if (n > 20) throw ConfigInvalid("column-order search supports n <= 20");
    std::uint32_t full = (n == 32) ? 0xFFFFFFFFu : ((1u << n) - 1u);
    std::vector<std::uint8_t> rank(static_cast<std::size_t>(full) + 1, 0);
    for (std::uint32_t s = 1; s <= full; ++s) {
        Gf2Basis b;
        for (int j = 0; j < n; ++j)
            if (s & (1u << j)) b.insert(columns[static_cast<std::size_t>(j)]);
        rank[s] = static_cast<std::uint8_t>(b.rank);
    }
    int total = rank[full];
    std::vector<std::uint8_t> best(static_cast<std::size_t>(full) + 1, 0);
    std::vector<std::int8_t> last(static_cast<std::size_t>(full) + 1, -1);
    for (std::uint32_t s = 1; s <= full; ++s) {
        int cut = rank[s] + rank[full ^ s] - total;
        int best_here = 127;
        int pick = -1;
        for (int j = 0; j < n; ++j) {
            if (!(s & (1u << j))) continue;
            int candidate = std::max<int>(best[s ^ (1u << j)], cut);
            if (candidate < best_here) {
                best_here = candidate;
                pick = j;
            }
        }
        best[s] = static_cast<std::uint8_t>(best_here);
        last[s] = static_cast<std::int8_t>(pick);
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::uint32_t s = full;
    for (int j = n - 1; j >= 0; --j) {
        order[static_cast<std::size_t>(j)] = last[s];
        s ^= (1u << last[s]);
    }
    return order;
}

// One-bit-per-section syndrome trellis for a parity-check matrix given as
// column masks. States at depth j are the partial syndromes reachable from
// zero and co-reachable to zero, densely renumbered.
inline std::vector<SatisfactionTable> syndrome_trellis_sections(
    const std::vector<std::uint32_t>& columns) {
    int n = static_cast<int>(columns.size());
    std::vector<std::vector<std::uint32_t>> forward(static_cast<std::size_t>(n + 1));
    std::vector<std::vector<std::uint32_t>> states(static_cast<std::size_t>(n + 1));
    auto insert_sorted = [](std::vector<std::uint32_t>& v, std::uint32_t s) {
        auto it = std::lower_bound(v.begin(), v.end(), s);
        if (it == v.end() || *it != s) v.insert(it, s);
    };
    forward[0] = {0};
    for (int j = 0; j < n; ++j) {
        for (std::uint32_t s : forward[static_cast<std::size_t>(j)]) {
            insert_sorted(forward[static_cast<std::size_t>(j + 1)], s);
            insert_sorted(forward[static_cast<std::size_t>(j + 1)],
                          s ^ columns[static_cast<std::size_t>(j)]);
        }
    }
    std::vector<std::vector<std::uint32_t>> backward(static_cast<std::size_t>(n + 1));
    backward[static_cast<std::size_t>(n)] = {0};
    for (int j = n - 1; j >= 0; --j) {
        for (std::uint32_t s : backward[static_cast<std::size_t>(j + 1)]) {
            insert_sorted(backward[static_cast<std::size_t>(j)], s);
            insert_sorted(backward[static_cast<std::size_t>(j)],
                          s ^ columns[static_cast<std::size_t>(j)]);
        }
    }
    for (int j = 0; j <= n; ++j) {
        std::vector<std::uint32_t> both;
        std::set_intersection(forward[static_cast<std::size_t>(j)].begin(),
                              forward[static_cast<std::size_t>(j)].end(),
                              backward[static_cast<std::size_t>(j)].begin(),
                              backward[static_cast<std::size_t>(j)].end(),
                              std::back_inserter(both));
        states[static_cast<std::size_t>(j)] = std::move(both);
    }

    std::vector<SatisfactionTable> sections;
    sections.reserve(static_cast<std::size_t>(n));
    Alphabet bit{2};
    for (int j = 0; j < n; ++j) {
        const auto& left = states[static_cast<std::size_t>(j)];
        const auto& right = states[static_cast<std::size_t>(j + 1)];
        auto right_index = [&](std::uint32_t s) -> int {
            auto it = std::lower_bound(right.begin(), right.end(), s);
            return (it != right.end() && *it == s)
                       ? static_cast<int>(it - right.begin())
                       : -1;
        };
        std::vector<Row> rows;
        for (std::size_t li = 0; li < left.size(); ++li) {
            for (Symbol b = 0; b < 2; ++b) {
                std::uint32_t next =
                    left[li] ^ (b ? columns[static_cast<std::size_t>(j)] : 0u);
                int ri = right_index(next);
                if (ri >= 0) rows.push_back({static_cast<Symbol>(li), b, ri});
            }
        }
        sections.emplace_back(
            std::array<Alphabet, 3>{Alphabet(static_cast<int>(left.size())), bit,
                                    Alphabet(static_cast<int>(right.size()))},
            std::move(rows));
    }
    return sections;
}

inline std::vector<std::uint32_t> parity_check_columns(const LinearCode& code) {
    std::vector<std::uint32_t> cols(static_cast<std::size_t>(code.n), 0);
    for (std::size_t r = 0; r < code.parity_check.size(); ++r)
        for (int j = 0; j < code.n; ++j)
            if (code.parity_check[r][static_cast<std::size_t>(j)])
                cols[static_cast<std::size_t>(j)] |= (1u << r);
    return cols;
}

// Sections in visit order plus the codeword position each section carries.
struct TrellisPlan {
    std::vector<SatisfactionTable> sections;
    std::vector<int> section_bit;
};

inline TrellisPlan hamming_trellis_plan() {
    LinearCode code = hamming16_11();
    std::vector<std::uint32_t> cols = parity_check_columns(code);
    std::vector<int> order = min_peak_column_order(cols);
    std::vector<std::uint32_t> permuted;
    permuted.reserve(cols.size());
    for (int j : order) permuted.push_back(cols[static_cast<std::size_t>(j)]);
    return {syndrome_trellis_sections(permuted), std::move(order)};
}

// Appends a trellis chain. Bit variables are created in codeword order;
// section j attaches the bit at position plan.section_bit[j]. States
// (including the two singleton end anchors) are internal. Returns the
// bit-variable ids in codeword order.
inline std::vector<int> append_trellis_chain(ConstraintGraph& g,
                                             const TrellisPlan& plan, int info_bits,
                                             bool observable_bits) {
    int n = static_cast<int>(plan.sections.size());
    std::vector<int> bit_vars(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        VarRole role = VarRole::kInternal;
        if (observable_bits)
            role = j < info_bits ? VarRole::kInfo : VarRole::kParity;
        bit_vars[static_cast<std::size_t>(j)] = g.add_variable(Alphabet{2}, role);
    }
    std::vector<int> state_vars(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        const Alphabet& a =
            j < n ? plan.sections[static_cast<std::size_t>(j)].alphabet(Role::A)
                  : plan.sections[static_cast<std::size_t>(n - 1)].alphabet(Role::C);
        state_vars[static_cast<std::size_t>(j)] = g.add_variable(a, VarRole::kInternal);
    }
    for (int j = 0; j < n; ++j) {
        int c = g.add_constraint(plan.sections[static_cast<std::size_t>(j)]);
        g.connect(state_vars[static_cast<std::size_t>(j)], c, Role::A);
        g.connect(bit_vars[static_cast<std::size_t>(plan.section_bit[static_cast<std::size_t>(j)])],
                  c, Role::B);
        g.connect(state_vars[static_cast<std::size_t>(j + 1)], c, Role::C);
    }
    return bit_vars;
}

}  // namespace detail

struct TrellisGraph {
    ConstraintGraph graph;
    std::vector<int> bit_variables;  // observable, in codeword order
    std::vector<int> section_bit;    // codeword position carried by section j
};

// Acyclic chain of 16 degree-3 trellis sections for the (16,11) extended
// Hamming code. Section j joins state S_j, a bit variable and state S_{j+1};
// the end states are singleton alphabets, pinning the trellis to the zero
// state. Sections visit codeword positions in the order that minimizes the
// peak state-space size.
inline TrellisGraph build_hamming_graph() {
    LinearCode code = hamming16_11();
    detail::TrellisPlan plan = detail::hamming_trellis_plan();
    TrellisGraph out;
    out.section_bit = plan.section_bit;
    out.bit_variables = detail::append_trellis_chain(out.graph, plan, code.k, true);
    out.graph.validate();
    return out;
}

struct ProductCodeLayout {
    int rows = 16;
    int cols = 16;
    int info_rows = 11;
    int info_cols = 11;
    std::vector<int> cell_variable;        // row-major observable variable ids
    std::vector<int> equality_constraint;  // row-major equality supernode ids

    int cell(int r, int c) const {
        return cell_variable[static_cast<std::size_t>(r * cols + c)];
    }
    bool is_info(int r, int c) const { return r < info_rows && c < info_cols; }
};

struct ProductGraph {
    ConstraintGraph graph;
    ProductCodeLayout layout;
};

// (256,121) Block Turbo product graph: 16 row and 16 column copies of the
// Hamming trellis with internal bit variables; each grid cell joins the row
// bit, the column bit and one observable variable at an equality supernode.
// The two non-observable edges of every equality node are supernode edges,
// which covers every cycle.
inline ProductGraph build_product_graph() {
    LinearCode code = hamming16_11();
    detail::TrellisPlan plan = detail::hamming_trellis_plan();
    ProductGraph out;
    ConstraintGraph& g = out.graph;
    std::vector<std::vector<int>> row_bits, col_bits;
    for (int r = 0; r < 16; ++r)
        row_bits.push_back(detail::append_trellis_chain(g, plan, code.k, false));
    for (int c = 0; c < 16; ++c)
        col_bits.push_back(detail::append_trellis_chain(g, plan, code.k, false));
    Alphabet bit{2};
    out.layout.cell_variable.resize(256);
    out.layout.equality_constraint.resize(256);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
            VarRole role = out.layout.is_info(r, c) ? VarRole::kInfo : VarRole::kParity;
            int v = g.add_variable(bit, role);
            int eq = g.add_constraint(make_equality_table(bit), /*supernode=*/true);
            g.connect(row_bits[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                      eq, Role::A, /*super=*/true);
            g.connect(col_bits[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)],
                      eq, Role::B, /*super=*/true);
            g.connect(v, eq, Role::C);
            out.layout.cell_variable[static_cast<std::size_t>(r * 16 + c)] = v;
            out.layout.equality_constraint[static_cast<std::size_t>(r * 16 + c)] = eq;
        }
    }
    g.validate();
    return out;
}

// Systematic product encoding: the 11x11 information grid is encoded by
// rows, then every column is encoded (including the checks-on-checks block).
// Returns the 256 bits row-major.
inline std::vector<int> encode_product(const LinearCode& code,
                                       const std::vector<int>& info) {
    if (code.n != 16 || code.k != 11)
        throw ConfigInvalid("encode_product expects the (16,11) component code");
    if (info.size() != 121)
        throw LengthMismatch("encode_product: expected 121 information bits");
    std::vector<int> grid(256, 0);
    std::vector<int> line(11);
    for (int r = 0; r < 11; ++r) {
        for (int c = 0; c < 11; ++c)
            line[static_cast<std::size_t>(c)] = info[static_cast<std::size_t>(r * 11 + c)];
        std::vector<int> cw = encode(code, line);
        for (int c = 0; c < 16; ++c)
            grid[static_cast<std::size_t>(r * 16 + c)] = cw[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < 16; ++c) {
        for (int r = 0; r < 11; ++r)
            line[static_cast<std::size_t>(r)] = grid[static_cast<std::size_t>(r * 16 + c)];
        std::vector<int> cw = encode(code, line);
        for (int r = 11; r < 16; ++r)
            grid[static_cast<std::size_t>(r * 16 + c)] = cw[static_cast<std::size_t>(r)];
    }
    return grid;
}

}  // namespace stodec

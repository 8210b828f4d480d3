#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "stodec/errors.hpp"

namespace stodec {

using Symbol = int;

// Finite symbol alphabet {0..size-1}. Variable alphabets have size >= 2;
// size 1 is reserved for degenerate roles (trellis terminators and the
// padding slot of degree-2 constraints).
struct Alphabet {
    int size = 0;

    explicit Alphabet(int s) : size(s) {
        if (s < 1) throw GraphError("alphabet size must be >= 1");
    }

    bool contains(Symbol s) const { return s >= 0 && s < size; }
    bool operator==(const Alphabet&) const = default;
};

// Edge roles of a degree-3 constraint.
enum class Role : int { A = 0, B = 1, C = 2 };

inline constexpr std::array<Role, 3> kRoles{Role::A, Role::B, Role::C};

inline int index(Role r) { return static_cast<int>(r); }

inline const char* name(Role r) {
    switch (r) {
        case Role::A: return "A";
        case Role::B: return "B";
        case Role::C: return "C";
    }
    return "?";
}

// The two roles other than `out`, in ascending role order.
inline std::pair<Role, Role> other_roles(Role out) {
    switch (out) {
        case Role::A: return {Role::B, Role::C};
        case Role::B: return {Role::A, Role::C};
        case Role::C: return {Role::A, Role::B};
    }
    return {Role::A, Role::B};
}

using Row = std::array<Symbol, 3>;

struct TableViolation {
    Role role;                       // the induced mapping that is not single-valued
    std::pair<Symbol, Symbol> witness;  // input pair mapping to two distinct symbols
};

struct ValidationResult {
    std::optional<TableViolation> violation;
    bool ok() const { return !violation.has_value(); }
};

// A constraint function represented by its satisfaction set: the rows
// (a,b,c) the constraint permits. Construction rejects out-of-alphabet
// symbols and duplicate rows; the single-valuedness of the three induced
// mappings is checked by validate_table. Immutable once built.
class SatisfactionTable {
public:
    SatisfactionTable(std::array<Alphabet, 3> alphabets, std::vector<Row> rows)
        : alphabets_(alphabets) {
        std::set<Row> seen;
        for (const Row& r : rows) {
            for (Role role : kRoles) {
                if (!alphabets_[static_cast<std::size_t>(index(role))].contains(
                        r[static_cast<std::size_t>(index(role))]))
                    throw GraphError("row symbol outside its alphabet");
            }
            if (!seen.insert(r).second) throw GraphError("duplicate satisfaction row");
        }
        rows_.assign(seen.begin(), seen.end());
        build_index();
    }

    const std::array<Alphabet, 3>& alphabets() const { return alphabets_; }
    const Alphabet& alphabet(Role r) const {
        return alphabets_[static_cast<std::size_t>(index(r))];
    }
    const std::vector<Row>& rows() const { return rows_; }

    static constexpr Symbol kNoSymbol = -1;

    // Induced mapping lookup: f_out(x, y) where (x, y) are the other two
    // roles' symbols in ascending role order. kNoSymbol when (x, y) is
    // outside the projection of S.
    Symbol lookup(Role out, Symbol x, Symbol y) const {
        const auto& idx = index_[static_cast<std::size_t>(index(out))];
        auto [r1, r2] = other_roles(out);
        int stride = alphabet(r2).size;
        return idx[static_cast<std::size_t>(x * stride + y)];
    }

    bool operator==(const SatisfactionTable& other) const {
        return alphabets_ == other.alphabets_ && rows_ == other.rows_;
    }

private:
    // Dense (x,y) -> symbol tables for the three induced mappings. When two
    // rows share an input pair the map keeps the first; validate_table
    // reports the conflict.
    void build_index() {
        for (Role out : kRoles) {
            auto [r1, r2] = other_roles(out);
            auto& idx = index_[static_cast<std::size_t>(index(out))];
            idx.assign(static_cast<std::size_t>(alphabet(r1).size) *
                           static_cast<std::size_t>(alphabet(r2).size),
                       kNoSymbol);
            for (const Row& r : rows_) {
                Symbol x = r[static_cast<std::size_t>(index(r1))];
                Symbol y = r[static_cast<std::size_t>(index(r2))];
                std::size_t at =
                    static_cast<std::size_t>(x * alphabet(r2).size + y);
                if (idx[at] == kNoSymbol)
                    idx[at] = r[static_cast<std::size_t>(index(out))];
            }
        }
    }

    std::array<Alphabet, 3> alphabets_;
    std::vector<Row> rows_;
    std::array<std::vector<Symbol>, 3> index_;
};

// OK iff each of the three induced mappings is single-valued: no input pair
// maps to two distinct symbols. Reports the first violated role with a
// witness pair.
inline ValidationResult validate_table(const SatisfactionTable& table) {
    for (Role out : kRoles) {
        auto [r1, r2] = other_roles(out);
        int stride = table.alphabet(r2).size;
        std::vector<Symbol> seen(
            static_cast<std::size_t>(table.alphabet(r1).size) *
                static_cast<std::size_t>(stride),
            SatisfactionTable::kNoSymbol);
        for (const Row& r : table.rows()) {
            Symbol x = r[static_cast<std::size_t>(index(r1))];
            Symbol y = r[static_cast<std::size_t>(index(r2))];
            Symbol v = r[static_cast<std::size_t>(index(out))];
            Symbol& slot = seen[static_cast<std::size_t>(x * stride + y)];
            if (slot == SatisfactionTable::kNoSymbol) {
                slot = v;
            } else if (slot != v) {
                return {TableViolation{out, {x, y}}};
            }
        }
    }
    return {};
}

// S restricted to role=symbol, projected onto the other two roles (in
// ascending role order). Empty when no rows match.
inline std::vector<std::pair<Symbol, Symbol>> project(const SatisfactionTable& table,
                                                      Role role, Symbol symbol) {
    if (!table.alphabet(role).contains(symbol))
        throw GraphError("projection symbol outside the role's alphabet");
    auto [r1, r2] = other_roles(role);
    std::vector<std::pair<Symbol, Symbol>> out;
    for (const Row& r : table.rows()) {
        if (r[static_cast<std::size_t>(index(role))] == symbol)
            out.emplace_back(r[static_cast<std::size_t>(index(r1))],
                             r[static_cast<std::size_t>(index(r2))]);
    }
    return out;
}

// Two-column state graph equivalent of a satisfaction table: left states
// from alphabet A, right states from alphabet C, one branch per row labeled
// with the B symbol.
struct TrellisSection {
    Alphabet left_states{1};
    Alphabet right_states{1};
    struct Branch {
        Symbol left;
        Symbol label;
        Symbol right;
        bool operator==(const Branch&) const = default;
    };
    std::vector<Branch> branches;
};

inline TrellisSection to_trellis(const SatisfactionTable& table) {
    TrellisSection t;
    t.left_states = table.alphabet(Role::A);
    t.right_states = table.alphabet(Role::C);
    for (const Row& r : table.rows()) t.branches.push_back({r[0], r[1], r[2]});
    return t;
}

inline SatisfactionTable from_trellis(const TrellisSection& t, Alphabet labels) {
    std::vector<Row> rows;
    for (const auto& b : t.branches) rows.push_back({b.left, b.label, b.right});
    return SatisfactionTable({t.left_states, labels, t.right_states}, std::move(rows));
}

// v == v == v over the given alphabet.
inline SatisfactionTable make_equality_table(Alphabet a) {
    std::vector<Row> rows;
    for (Symbol v = 0; v < a.size; ++v) rows.push_back({v, v, v});
    return SatisfactionTable({a, a, a}, std::move(rows));
}

// a XOR b XOR c == 0 over binary alphabets.
inline SatisfactionTable make_parity_table() {
    Alphabet bin{2};
    std::vector<Row> rows;
    for (Symbol a = 0; a < 2; ++a)
        for (Symbol b = 0; b < 2; ++b) rows.push_back({a, b, a ^ b});
    return SatisfactionTable({bin, bin, bin}, std::move(rows));
}

}  // namespace stodec

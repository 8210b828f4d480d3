#pragma once

#include <cstdint>
#include <vector>

#include "stodec/graph.hpp"
#include "stodec/mass.hpp"
#include "stodec/satisfaction.hpp"

namespace stodec {

// Normalized sum-product update: rho_out(c) is the sum of in1(a)*in2(b) over
// the satisfying pairs projected at c, divided by the sum over the whole
// projection. Inputs are the two non-output roles' masses in ascending role
// order. Output is clamped and renormalized.
inline Mass sum_product_update(const SatisfactionTable& table, Role out,
                               const Mass& in1, const Mass& in2) {
    auto [r1, r2] = other_roles(out);
    if (in1.size() != table.alphabet(r1).size || in2.size() != table.alphabet(r2).size)
        throw LengthMismatch("sum_product_update: input masses do not match roles");
    std::vector<double> num(static_cast<std::size_t>(table.alphabet(out).size), 0.0);
    double den = 0.0;
    for (const Row& row : table.rows()) {
        double w = in1[row[static_cast<std::size_t>(index(r1))]] *
                   in2[row[static_cast<std::size_t>(index(r2))]];
        num[static_cast<std::size_t>(row[static_cast<std::size_t>(index(out))])] += w;
        den += w;
    }
    if (den <= 0.0)
        throw DegenerateMass("sum_product_update: normalizer underflowed to zero");
    return Mass::normalized(std::move(num));
}

// Relaxation update rho = prev + beta*(nu - prev), 0 < beta < 1. A convex
// blend of normalized masses, so no renormalization is needed.
inline Mass relaxation_update(const Mass& prev, const Mass& nu, double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw BetaOutOfRange("relaxation beta must lie in (0,1)");
    if (prev.size() != nu.size())
        throw LengthMismatch("relaxation_update: alphabet mismatch");
    std::vector<double> out(static_cast<std::size_t>(prev.size()));
    for (int i = 0; i < prev.size(); ++i)
        out[static_cast<std::size_t>(i)] = prev[i] + beta * (nu[i] - prev[i]);
    return Mass::normalized(std::move(out), /*clamp=*/false);
}

struct DecodeRule {
    enum class Kind { kSumProduct, kRelaxation };
    Kind kind = Kind::kSumProduct;
    double beta = 0.0;

    static DecodeRule sum_product() { return {}; }
    static DecodeRule relaxation(double beta) {
        if (!(beta > 0.0 && beta < 1.0))
            throw BetaOutOfRange("relaxation beta must lie in (0,1)");
        return {Kind::kRelaxation, beta};
    }
};

// Per-directed-edge masses under a flooding schedule. Constraint updates
// read toward_constraint and write toward_variable; variable updates read
// toward_variable and write toward_constraint. Each phase reads one buffer
// and writes the other, so all updates within a phase are simultaneous.
class MessageState {
public:
    MessageState(const ConstraintGraph& g, std::vector<Mass> evidence)
        : evidence_(std::move(evidence)) {
        if (!g.validated()) throw GraphError("decode requires a validated graph");
        if (evidence_.size() != g.observables().size())
            throw LengthMismatch("one evidence mass per observable variable required");
        evidence_of_.assign(g.variables().size(), -1);
        for (std::size_t i = 0; i < g.observables().size(); ++i) {
            int v = g.observables()[i];
            if (evidence_[i].size() != g.variable(v).alphabet.size)
                throw LengthMismatch("evidence alphabet mismatch at variable " +
                                     std::to_string(v));
            evidence_of_[static_cast<std::size_t>(v)] = static_cast<int>(i);
        }
        toward_constraint_.reserve(g.edges().size());
        toward_variable_.reserve(g.edges().size());
        for (const Edge& e : g.edges()) {
            const VariableNode& v = g.variable(e.variable);
            int ev = evidence_of_[static_cast<std::size_t>(e.variable)];
            toward_constraint_.push_back(ev >= 0 ? evidence_[static_cast<std::size_t>(ev)]
                                                 : Mass::uniform(v.alphabet.size));
            toward_variable_.push_back(Mass::uniform(v.alphabet.size));
        }
    }

    const Mass& toward_constraint(int edge) const {
        return toward_constraint_[static_cast<std::size_t>(edge)];
    }
    const Mass& toward_variable(int edge) const {
        return toward_variable_[static_cast<std::size_t>(edge)];
    }
    const Mass& evidence(int observable_index) const {
        return evidence_[static_cast<std::size_t>(observable_index)];
    }
    int evidence_index(int variable) const {
        return evidence_of_[static_cast<std::size_t>(variable)];
    }
    int iteration() const { return iteration_; }

private:
    friend void flood_iteration(const ConstraintGraph&, MessageState&,
                                const DecodeRule&);

    std::vector<Mass> evidence_;       // per observable, in observables() order
    std::vector<int> evidence_of_;     // variable id -> observable index or -1
    std::vector<Mass> toward_constraint_;  // per edge
    std::vector<Mass> toward_variable_;    // per edge
    int iteration_ = 0;
};

// One flooding iteration: all constraint nodes emit sum-product (or relaxed)
// messages from the previous iteration's variable messages, then all
// variables re-emit. Observable variables re-emit their fixed channel mass;
// internal variables emit the product of their other incoming messages.
inline void flood_iteration(const ConstraintGraph& g, MessageState& state,
                            const DecodeRule& rule = DecodeRule::sum_product()) {
    for (const ConstraintNode& c : g.constraints()) {
        std::array<Mass, 3> nu;
        for (Role out : kRoles) {
            auto [r1, r2] = other_roles(out);
            const Mass& in1 = state.toward_constraint_[static_cast<std::size_t>(
                c.slot_edge[static_cast<std::size_t>(index(r1))])];
            const Mass& in2 = state.toward_constraint_[static_cast<std::size_t>(
                c.slot_edge[static_cast<std::size_t>(index(r2))])];
            nu[static_cast<std::size_t>(index(out))] =
                sum_product_update(c.table, out, in1, in2);
        }
        for (Role out : kRoles) {
            int e = c.slot_edge[static_cast<std::size_t>(index(out))];
            Mass& slot = state.toward_variable_[static_cast<std::size_t>(e)];
            const Mass& fresh = nu[static_cast<std::size_t>(index(out))];
            if (rule.kind == DecodeRule::Kind::kRelaxation && state.iteration_ > 0)
                slot = relaxation_update(slot, fresh, rule.beta);
            else
                slot = fresh;
        }
    }
    for (const VariableNode& v : g.variables()) {
        if (v.observable) continue;  // fixed emission, set at init
        if (v.edges.size() == 1) continue;
        for (int e : v.edges) {
            std::vector<double> prod(static_cast<std::size_t>(v.alphabet.size), 1.0);
            for (int other : v.edges) {
                if (other == e) continue;
                const Mass& m =
                    state.toward_variable_[static_cast<std::size_t>(other)];
                for (int s = 0; s < v.alphabet.size; ++s)
                    prod[static_cast<std::size_t>(s)] *= m[s];
            }
            state.toward_constraint_[static_cast<std::size_t>(e)] =
                Mass::normalized(std::move(prod));
        }
    }
    ++state.iteration_;
}

struct DecodeResult {
    std::vector<Symbol> decisions;  // per observable, in observables() order
    std::vector<Mass> marginals;
};

// Flooding decode. The final marginal at each observable is the normalized
// product of its evidence and incoming message; hard decisions take the
// argmax with ties toward the lowest symbol.
inline DecodeResult decode(const ConstraintGraph& g, const std::vector<Mass>& evidence,
                           const DecodeRule& rule, int iterations) {
    if (iterations < 1) throw ConfigInvalid("decode requires iterations >= 1");
    MessageState state(g, evidence);
    for (int i = 0; i < iterations; ++i) flood_iteration(g, state, rule);
    DecodeResult result;
    for (std::size_t i = 0; i < g.observables().size(); ++i) {
        const VariableNode& v = g.variable(g.observables()[i]);
        Mass marginal = hadamard(state.evidence(static_cast<int>(i)),
                                 state.toward_variable(v.edges[0]),
                                 /*clamp=*/false);
        result.decisions.push_back(marginal.argmax());
        result.marginals.push_back(std::move(marginal));
    }
    return result;
}

// Exact bitwise a-posteriori marginals by codebook enumeration:
// marginal(bit=v) is proportional to the total evidence weight of the
// codewords whose bit equals v. Oracle for tree exactness checks.
inline std::vector<Mass> brute_force_map(const std::vector<std::vector<int>>& codebook,
                                         const std::vector<Mass>& evidence) {
    if (codebook.empty()) throw ConfigInvalid("brute_force_map: empty codebook");
    if (codebook.size() > (1u << 16))
        throw CodebookTooLarge("brute_force_map handles at most 2^16 codewords");
    std::size_t n = codebook.front().size();
    if (evidence.size() != n)
        throw LengthMismatch("brute_force_map: evidence length mismatch");
    std::vector<std::vector<double>> acc(n);
    for (std::size_t i = 0; i < n; ++i)
        acc[i].assign(static_cast<std::size_t>(evidence[i].size()), 0.0);
    for (const auto& cw : codebook) {
        if (cw.size() != n)
            throw LengthMismatch("brute_force_map: ragged codebook");
        double w = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            w *= evidence[i][cw[i]];
        for (std::size_t i = 0; i < n; ++i)
            acc[i][static_cast<std::size_t>(cw[i])] += w;
    }
    std::vector<Mass> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(Mass::normalized(std::move(acc[i]), /*clamp=*/false));
    return out;
}

}  // namespace stodec

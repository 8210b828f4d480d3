#include "stodec/reference.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "stodec/graph.hpp"
#include "test_util.hpp"

using namespace stodec;

namespace {

void expect_mass_near(const Mass& got, const std::vector<double>& want, double tol) {
    ASSERT_EQ(got.size(), static_cast<int>(want.size()));
    for (int i = 0; i < got.size(); ++i)
        EXPECT_NEAR(got[i], want[static_cast<std::size_t>(i)], tol) << "entry " << i;
}

// Independent tree oracle: exact message passing by recursive elimination,
// no flooding, no iteration schedule.
struct TreeOracle {
    const ConstraintGraph& g;
    const std::vector<Mass>& evidence;

    Mass var_to_cons(int var, int via_edge) const {
        const VariableNode& v = g.variable(var);
        std::vector<double> prod(static_cast<std::size_t>(v.alphabet.size), 1.0);
        if (v.observable) {
            int idx = 0;
            for (std::size_t i = 0; i < g.observables().size(); ++i)
                if (g.observables()[i] == var) idx = static_cast<int>(i);
            for (int s = 0; s < v.alphabet.size; ++s)
                prod[static_cast<std::size_t>(s)] =
                    evidence[static_cast<std::size_t>(idx)][s];
        }
        for (int e : v.edges) {
            if (e == via_edge) continue;
            Mass m = cons_to_var(g.edge(e).constraint, e);
            for (int s = 0; s < v.alphabet.size; ++s)
                prod[static_cast<std::size_t>(s)] *= m[s];
        }
        return Mass::normalized(std::move(prod));
    }

    Mass cons_to_var(int cons, int via_edge) const {
        const ConstraintNode& c = g.constraint(cons);
        Role out = g.edge(via_edge).slot;
        auto [r1, r2] = other_roles(out);
        int e1 = c.slot_edge[static_cast<std::size_t>(index(r1))];
        int e2 = c.slot_edge[static_cast<std::size_t>(index(r2))];
        return sum_product_update(c.table, out,
                                  var_to_cons(g.edge(e1).variable, e1),
                                  var_to_cons(g.edge(e2).variable, e2));
    }

    Mass marginal(int var) const {
        const VariableNode& v = g.variable(var);
        int idx = 0;
        for (std::size_t i = 0; i < g.observables().size(); ++i)
            if (g.observables()[i] == var) idx = static_cast<int>(i);
        int e = v.edges[0];
        return hadamard(evidence[static_cast<std::size_t>(idx)],
                        cons_to_var(g.edge(e).constraint, e), /*clamp=*/false);
    }
};

// Observable-heavy single node: one constraint, three observables.
ConstraintGraph single_node_graph(const SatisfactionTable& t) {
    ConstraintGraph g;
    int c = g.add_constraint(t);
    for (Role r : kRoles) {
        int v = g.add_variable(t.alphabet(r), VarRole::kInfo);
        g.connect(v, c, r);
    }
    g.validate();
    return g;
}

// Chain of two example constraints through one internal variable.
ConstraintGraph two_node_chain() {
    ConstraintGraph g;
    SatisfactionTable t = test::example_table();
    int c1 = g.add_constraint(t);
    int c2 = g.add_constraint(t);
    int a = g.add_variable(Alphabet{4}, VarRole::kInfo);
    int b1 = g.add_variable(Alphabet{4}, VarRole::kInfo);
    int mid = g.add_variable(Alphabet{4}, VarRole::kInternal);
    int b2 = g.add_variable(Alphabet{4}, VarRole::kInfo);
    int z = g.add_variable(Alphabet{4}, VarRole::kInfo);
    g.connect(a, c1, Role::A);
    g.connect(b1, c1, Role::B);
    g.connect(mid, c1, Role::C);
    g.connect(mid, c2, Role::A);
    g.connect(b2, c2, Role::B);
    g.connect(z, c2, Role::C);
    g.validate();
    return g;
}

}  // namespace

TEST(SumProductUpdate, UniformInputsStayUniformOnExampleTable) {
    SatisfactionTable t = test::example_table();
    Mass out = sum_product_update(t, Role::C, Mass::uniform(4), Mass::uniform(4));
    expect_mass_near(out, {0.25, 0.25, 0.25, 0.25}, 1e-12);
}

TEST(SumProductUpdate, ExampleTableSkewedInput) {
    SatisfactionTable t = test::example_table();
    Mass in1 = Mass::normalized({0.7, 0.1, 0.1, 0.1});
    Mass out = sum_product_update(t, Role::C, in1, Mass::uniform(4));
    expect_mass_near(out, {0.4, 0.4, 0.1, 0.1}, 1e-9);
}

TEST(SumProductUpdate, EqualityPassesThroughAgainstUniform) {
    SatisfactionTable eq = make_equality_table(Alphabet{2});
    Mass out = sum_product_update(eq, Role::C, Mass::normalized({0.8, 0.2}),
                                  Mass::uniform(2));
    expect_mass_near(out, {0.8, 0.2}, 1e-9);
}

TEST(SumProductUpdate, InvariantUnderInputRescaling) {
    SatisfactionTable t = test::example_table();
    SplitMix64 rng(derive_seed(11, StreamKind::kTest));
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> raw(4);
        for (double& x : raw) x = 0.05 + rng.next_unit();
        std::vector<double> scaled = raw;
        for (double& x : scaled) x *= 37.5;
        Mass m1 = Mass::normalized(raw);
        Mass m2 = Mass::normalized(scaled);
        Mass b = test::random_mass(rng, 4);
        Mass o1 = sum_product_update(t, Role::B, m1, b);
        Mass o2 = sum_product_update(t, Role::B, m2, b);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(o1[i], o2[i], 1e-12);
    }
}

TEST(RelaxationUpdate, ExampleAndFixedPoint) {
    Mass prev = Mass::normalized({0.5, 0.5});
    Mass nu = Mass::normalized({0.9, 0.1});
    expect_mass_near(relaxation_update(prev, nu, 0.5), {0.7, 0.3}, 1e-12);

    Mass same = Mass::normalized({0.3, 0.7});
    expect_mass_near(relaxation_update(same, same, 0.25), {0.3, 0.7}, 1e-12);
}

TEST(RelaxationUpdate, SmallBetaStaysNearPrev) {
    Mass prev = Mass::normalized({0.25, 0.75});
    Mass nu = Mass::normalized({0.75, 0.25});
    double beta = 1e-6;
    Mass out = relaxation_update(prev, nu, beta);
    for (int i = 0; i < 2; ++i)
        EXPECT_LE(std::abs(out[i] - prev[i]), beta * 0.5 + 1e-15);
}

TEST(RelaxationUpdate, RejectsBetaOutsideOpenInterval) {
    Mass m = Mass::normalized({0.5, 0.5});
    EXPECT_THROW(relaxation_update(m, m, 0.0), BetaOutOfRange);
    EXPECT_THROW(relaxation_update(m, m, 1.0), BetaOutOfRange);
    EXPECT_THROW(relaxation_update(m, m, -0.3), BetaOutOfRange);
    EXPECT_THROW(DecodeRule::relaxation(1.5), BetaOutOfRange);
}

TEST(RelaxationUpdate, GeometricConvergenceToConstantNu) {
    Mass rho = Mass::normalized({0.9, 0.1});
    Mass nu = Mass::normalized({0.2, 0.8});
    double beta = 0.3;
    double prev_gap = rho.total_variation(nu);
    for (int i = 0; i < 20; ++i) {
        rho = relaxation_update(rho, nu, beta);
        double gap = rho.total_variation(nu);
        EXPECT_NEAR(gap, prev_gap * (1.0 - beta), 1e-12);
        prev_gap = gap;
    }
}

TEST(FloodIteration, SingleNodeReachesFixedPointAfterOneIteration) {
    ConstraintGraph g = single_node_graph(test::example_table());
    SplitMix64 rng(derive_seed(3, StreamKind::kTest));
    std::vector<Mass> ev;
    for (int i = 0; i < 3; ++i) ev.push_back(test::random_mass(rng, 4));
    MessageState st(g, ev);
    flood_iteration(g, st);
    std::vector<Mass> after_one;
    for (const Edge& e : g.edges()) after_one.push_back(st.toward_variable(e.id));
    flood_iteration(g, st);
    for (const Edge& e : g.edges())
        for (int s = 0; s < 4; ++s)
            EXPECT_NEAR(st.toward_variable(e.id)[s],
                        after_one[static_cast<std::size_t>(e.id)][s], 1e-15);
}

TEST(FloodIteration, TwoNodeChainMatchesRecursiveEliminationAfterTwoIterations) {
    ConstraintGraph g = two_node_chain();
    SplitMix64 rng(derive_seed(5, StreamKind::kTest));
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Mass> ev;
        for (std::size_t i = 0; i < g.observables().size(); ++i)
            ev.push_back(test::random_mass(rng, 4));
        DecodeResult flooded = decode(g, ev, DecodeRule::sum_product(), 2);
        TreeOracle oracle{g, ev};
        for (std::size_t i = 0; i < g.observables().size(); ++i) {
            Mass want = oracle.marginal(g.observables()[i]);
            for (int s = 0; s < 4; ++s)
                EXPECT_NEAR(flooded.marginals[i][s], want[s], 1e-12);
        }
    }
}

TEST(Decode, RelaxationConvergesToSumProductOnAcyclicGraph) {
    ConstraintGraph g = two_node_chain();
    SplitMix64 rng(derive_seed(17, StreamKind::kTest));
    std::vector<Mass> ev;
    for (std::size_t i = 0; i < g.observables().size(); ++i)
        ev.push_back(test::random_mass(rng, 4));
    DecodeResult sp = decode(g, ev, DecodeRule::sum_product(), g.diameter());
    DecodeResult rel = decode(g, ev, DecodeRule::relaxation(0.99), 64);
    for (std::size_t i = 0; i < sp.marginals.size(); ++i)
        for (int s = 0; s < 4; ++s)
            EXPECT_NEAR(rel.marginals[i][s], sp.marginals[i][s], 1e-6);
}

TEST(Decode, PointMassEvidenceReproducesSatisfyingAssignment) {
    // Clamp all three observables of a single node toward row (1,3,2).
    ConstraintGraph g = single_node_graph(test::example_table());
    auto point = [](int size, Symbol s) {
        std::vector<double> v(static_cast<std::size_t>(size), Mass::kEpsilon);
        v[static_cast<std::size_t>(s)] = 1.0;
        return Mass::normalized(std::move(v));
    };
    std::vector<Mass> ev{point(4, 1), point(4, 3), point(4, 2)};
    DecodeResult r = decode(g, ev, DecodeRule::sum_product(), 2);
    EXPECT_EQ(r.decisions, (std::vector<Symbol>{1, 3, 2}));
}

TEST(Decode, ArgmaxTieBreaksTowardLowestSymbol) {
    Mass tie = Mass::normalized({0.5, 0.5});
    EXPECT_EQ(tie.argmax(), 0);
}

TEST(BruteForceMap, TwoWordExamples) {
    std::vector<std::vector<int>> book{{0, 0}, {1, 1}};
    std::vector<Mass> uniform{Mass::uniform(2), Mass::uniform(2)};
    auto m = brute_force_map(book, uniform);
    expect_mass_near(m[0], {0.5, 0.5}, 1e-12);
    expect_mass_near(m[1], {0.5, 0.5}, 1e-12);

    std::vector<Mass> skew{Mass::normalized({0.9, 0.1}), Mass::uniform(2)};
    m = brute_force_map(book, skew);
    expect_mass_near(m[1], {0.9, 0.1}, 1e-12);
}

TEST(BruteForceMap, RejectsOversizedCodebook) {
    std::vector<std::vector<int>> book((1u << 16) + 1, std::vector<int>{0});
    std::vector<Mass> ev{Mass::uniform(2)};
    EXPECT_THROW(brute_force_map(book, ev), CodebookTooLarge);
}

TEST(Mass, InvariantsAfterOperations) {
    SatisfactionTable t = test::example_table();
    SplitMix64 rng(derive_seed(23, StreamKind::kTest));
    for (int trial = 0; trial < 50; ++trial) {
        Mass a = test::random_mass(rng, 4, 0.001, 1.0);
        Mass b = test::random_mass(rng, 4, 0.001, 1.0);
        for (Role out : kRoles) {
            Mass o = sum_product_update(t, out, a, b);
            double sum = 0.0;
            for (int s = 0; s < o.size(); ++s) {
                EXPECT_GT(o[s], 0.0);
                EXPECT_LT(o[s], 1.0);
                sum += o[s];
            }
            EXPECT_NEAR(sum, 1.0, 1e-9);
        }
    }
    EXPECT_THROW(Mass::normalized({0.0, -0.1}), DegenerateMass);
    EXPECT_THROW(Mass::normalized({0.0, 0.0}), DegenerateMass);
    EXPECT_THROW(Mass::normalized({}), DegenerateMass);
}

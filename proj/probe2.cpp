#include <cstdio>
#include "stodec/stodec.hpp"
using namespace stodec;
int main() {
    TrellisGraph tg = build_hamming_graph();
    std::printf("section order:");
    for (int b : tg.section_bit) std::printf(" %d", b);
    std::printf("\nstate sizes:");
    for (int j = 0; j < 16; ++j)
        std::printf(" %d", tg.graph.constraint(j).table.alphabet(Role::A).size);
    std::printf(" %d\n", tg.graph.constraint(15).table.alphabet(Role::C).size);
    int branches = 0;
    for (const ConstraintNode& c : tg.graph.constraints())
        branches += (int)c.table.rows().size();
    std::printf("total branches: %d, diameter %d\n", branches, tg.graph.diameter());
    return 0;
}

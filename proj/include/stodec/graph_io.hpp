#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "stodec/graph.hpp"

namespace stodec {

// Line-oriented graph description:
//
//   # comment
//   alphabet <name> <size>
//   variable <name> <alphabet> <info|parity|internal>
//   constraint <name> <alphA> <alphB> <alphC> [super]
//   row <constraint> <a> <b> <c>
//   edge <variable> <constraint> <A|B|C> [super]
//
// Edges attach in file order, which fixes the slot order at each variable.
// `super` on an edge flags it as a supernode interruption point; on a
// constraint it marks the node as packetized (histogram + regeneration).

inline ConstraintGraph parse_graph(std::istream& in) {
    struct ConstraintDecl {
        std::array<std::string, 3> alphabets;
        bool super = false;
        std::vector<Row> rows;
    };
    std::map<std::string, int> alphabet_sizes;
    std::vector<std::pair<std::string, ConstraintDecl>> constraints;
    std::map<std::string, std::size_t> constraint_index;
    struct VarDecl {
        std::string alphabet;
        VarRole role;
    };
    std::vector<std::pair<std::string, VarDecl>> variables;
    std::map<std::string, std::size_t> variable_index;
    struct EdgeDecl {
        std::string variable, constraint;
        Role slot;
        bool super;
    };
    std::vector<EdgeDecl> edge_decls;

    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "alphabet") {
            std::string name;
            int size = 0;
            if (!(ls >> name >> size)) fail("expected: alphabet <name> <size>");
            if (!alphabet_sizes.emplace(name, size).second)
                fail("duplicate alphabet " + name);
        } else if (kw == "variable") {
            std::string name, alph, role;
            if (!(ls >> name >> alph >> role))
                fail("expected: variable <name> <alphabet> <role>");
            VarRole r;
            if (role == "info") r = VarRole::kInfo;
            else if (role == "parity") r = VarRole::kParity;
            else if (role == "internal") r = VarRole::kInternal;
            else { fail("unknown variable role " + role); return {}; }
            if (variable_index.count(name)) fail("duplicate variable " + name);
            variable_index[name] = variables.size();
            variables.emplace_back(name, VarDecl{alph, r});
        } else if (kw == "constraint") {
            std::string name;
            ConstraintDecl d;
            if (!(ls >> name >> d.alphabets[0] >> d.alphabets[1] >> d.alphabets[2]))
                fail("expected: constraint <name> <alphA> <alphB> <alphC> [super]");
            std::string tail;
            if (ls >> tail) {
                if (tail != "super") fail("unexpected token " + tail);
                d.super = true;
            }
            if (constraint_index.count(name)) fail("duplicate constraint " + name);
            constraint_index[name] = constraints.size();
            constraints.emplace_back(name, std::move(d));
        } else if (kw == "row") {
            std::string name;
            Row r{};
            if (!(ls >> name >> r[0] >> r[1] >> r[2]))
                fail("expected: row <constraint> <a> <b> <c>");
            auto it = constraint_index.find(name);
            if (it == constraint_index.end()) fail("row for unknown constraint " + name);
            constraints[it->second].second.rows.push_back(r);
        } else if (kw == "edge") {
            EdgeDecl e;
            std::string slot;
            if (!(ls >> e.variable >> e.constraint >> slot))
                fail("expected: edge <variable> <constraint> <slot> [super]");
            if (slot == "A") e.slot = Role::A;
            else if (slot == "B") e.slot = Role::B;
            else if (slot == "C") e.slot = Role::C;
            else { fail("unknown slot " + slot); return {}; }
            e.super = false;
            std::string tail;
            if (ls >> tail) {
                if (tail != "super") fail("unexpected token " + tail);
                e.super = true;
            }
            edge_decls.push_back(std::move(e));
        } else {
            fail("unknown keyword " + kw);
        }
    }

    auto alphabet_of = [&](const std::string& name) -> Alphabet {
        auto it = alphabet_sizes.find(name);
        if (it == alphabet_sizes.end())
            throw ParseError("unknown alphabet " + name);
        return Alphabet(it->second);
    };

    ConstraintGraph g;
    for (const auto& [name, d] : variables)
        g.add_variable(alphabet_of(d.alphabet), d.role);
    for (const auto& [name, d] : constraints) {
        SatisfactionTable t({alphabet_of(d.alphabets[0]), alphabet_of(d.alphabets[1]),
                             alphabet_of(d.alphabets[2])},
                            d.rows);
        g.add_constraint(std::move(t), d.super);
    }
    for (const EdgeDecl& e : edge_decls) {
        auto vi = variable_index.find(e.variable);
        if (vi == variable_index.end())
            throw ParseError("edge references unknown variable " + e.variable);
        auto ci = constraint_index.find(e.constraint);
        if (ci == constraint_index.end())
            throw ParseError("edge references unknown constraint " + e.constraint);
        g.connect(static_cast<int>(vi->second), static_cast<int>(ci->second), e.slot,
                  e.super);
    }
    g.validate();
    return g;
}

inline ConstraintGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

inline void serialize_graph(const ConstraintGraph& g, std::ostream& out) {
    std::map<int, std::string> alphabets;  // size -> name
    auto alphabet_name = [&](const Alphabet& a) -> std::string {
        auto it = alphabets.find(a.size);
        if (it != alphabets.end()) return it->second;
        std::string name = "a" + std::to_string(a.size);
        alphabets.emplace(a.size, name);
        out << "alphabet " << name << " " << a.size << "\n";
        return name;
    };
    // Declare alphabets on first use, before the node lines that need them.
    std::ostringstream body;
    for (const VariableNode& v : g.variables())
        body << "variable v" << v.id << " " << alphabet_name(v.alphabet) << " "
             << name(v.role) << "\n";
    for (const ConstraintNode& c : g.constraints()) {
        body << "constraint c" << c.id;
        for (Role r : kRoles) body << " " << alphabet_name(c.table.alphabet(r));
        if (c.supernode) body << " super";
        body << "\n";
        for (const Row& r : c.table.rows())
            body << "row c" << c.id << " " << r[0] << " " << r[1] << " " << r[2]
                 << "\n";
    }
    for (const Edge& e : g.edges()) {
        body << "edge v" << e.variable << " c" << e.constraint << " "
             << name(e.slot);
        if (e.super) body << " super";
        body << "\n";
    }
    out << body.str();
}

inline std::string serialize_graph(const ConstraintGraph& g) {
    std::ostringstream out;
    serialize_graph(g, out);
    return out.str();
}

}  // namespace stodec

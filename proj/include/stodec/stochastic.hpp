#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "stodec/graph.hpp"
#include "stodec/mass.hpp"
#include "stodec/reference.hpp"
#include "stodec/rng.hpp"
#include "stodec/satisfaction.hpp"

namespace stodec {

// Deterministic random symbol stream: draws symbol s with probability
// mass(s). Same seed, same sequence.
class StreamSource {
public:
    StreamSource() = default;
    StreamSource(Mass mass, std::uint64_t seed)
        : mass_(std::move(mass)), rng_(seed) {
        cdf_.resize(static_cast<std::size_t>(mass_.size()));
        double acc = 0.0;
        for (int i = 0; i < mass_.size(); ++i) {
            acc += mass_[i];
            cdf_[static_cast<std::size_t>(i)] = acc;
        }
        cdf_.back() = 1.0;
    }

    Symbol draw() {
        double u = rng_.next_unit();
        for (std::size_t i = 0; i + 1 < cdf_.size(); ++i)
            if (u < cdf_[i]) return static_cast<Symbol>(i);
        return static_cast<Symbol>(cdf_.size() - 1);
    }

    const Mass& mass() const { return mass_; }

private:
    Mass mass_;
    std::vector<double> cdf_;
    SplitMix64 rng_;
};

inline Symbol source_step(StreamSource& source) { return source.draw(); }

struct Histogram {
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;

    Histogram() = default;
    explicit Histogram(int size)
        : counts(static_cast<std::size_t>(size), 0) {}

    void add(Symbol s) {
        ++counts[static_cast<std::size_t>(s)];
        ++total;
    }
    void clear() {
        std::fill(counts.begin(), counts.end(), 0);
        total = 0;
    }
    void merge(const Histogram& other) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
        total += other.total;
    }
    Mass to_mass() const {
        std::vector<double> v(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i)
            v[i] = static_cast<double>(counts[i]);
        return Mass::normalized(std::move(v));
    }
};

// Argmax of the counts, ties toward the lowest symbol index.
inline Symbol histogram_decide(const Histogram& h) {
    if (h.total < 1) throw EmptyHistogram("histogram_decide on empty histogram");
    std::size_t best = 0;
    for (std::size_t i = 1; i < h.counts.size(); ++i)
        if (h.counts[i] > h.counts[best]) best = i;
    return static_cast<Symbol>(best);
}

// Held output registers of a stochastic constraint node, one per slot.
struct StochasticNodeState {
    std::array<Symbol, 3> held{0, 0, 0};
};

// Deterministic node update: when the input pair satisfies the constraint,
// emit the induced symbol and latch it; otherwise repeat the held symbol.
// Inputs are the two non-output roles' symbols in ascending role order.
inline Symbol node_step(const SatisfactionTable& table, Role out, Symbol a, Symbol b,
                        StochasticNodeState& state) {
    Symbol c = table.lookup(out, a, b);
    Symbol& held = state.held[static_cast<std::size_t>(index(out))];
    if (c != SatisfactionTable::kNoSymbol) held = c;
    return held;
}

enum class SupernodeMode { kReplacement, kAccumulation };

// Packetized stream estimator: tabulates one packet of l symbols, then
// updates its mass estimate and regenerates an uncorrelated outgoing
// sequence from a fresh substream. Replacement keeps only the latest
// packet; accumulation keeps all history, which realizes relaxation with
// beta = 1/m.
class SupernodeUnit {
public:
    SupernodeUnit() = default;
    SupernodeUnit(int alphabet_size, int packet_length, SupernodeMode mode,
                  std::uint64_t seed)
        : mode_(mode),
          packet_length_(packet_length),
          packet_(alphabet_size),
          accumulated_(alphabet_size),
          current_mass_(Mass::uniform(alphabet_size)),
          raw_estimate_(static_cast<std::size_t>(alphabet_size),
                        1.0 / alphabet_size),
          source_(current_mass_, seed) {}

    void observe(Symbol s) { packet_.add(s); }
    Symbol emit() { return source_.draw(); }

    SupernodeMode mode() const { return mode_; }
    int packet_length() const { return packet_length_; }
    const Histogram& packet() const { return packet_; }
    const Histogram& accumulated() const { return accumulated_; }
    // Clamped estimate driving the source.
    const Mass& current_mass() const { return current_mass_; }
    // Unclamped per-symbol frequencies from the integer counts.
    const std::vector<double>& raw_estimate() const { return raw_estimate_; }
    int packets_done() const { return packets_; }

    friend void supernode_packet_update(SupernodeUnit& unit, std::uint64_t reseed);

private:
    SupernodeMode mode_ = SupernodeMode::kReplacement;
    int packet_length_ = 0;
    Histogram packet_;
    Histogram accumulated_;
    Mass current_mass_;
    std::vector<double> raw_estimate_;
    int packets_ = 0;
    StreamSource source_;
};

// Packet-boundary update. Replacement: the estimate becomes the packet
// frequencies. Accumulation: the packet is folded into the running counts
// and the estimate becomes total counts over m*l observations, which equals
// rho' + (1/m)(N_c/l - rho'). The source is re-seeded onto the new mass.
inline void supernode_packet_update(SupernodeUnit& unit, std::uint64_t reseed) {
    if (unit.packet_.total != unit.packet_length_)
        throw IncompletePacket("supernode packet has " +
                               std::to_string(unit.packet_.total) + " of " +
                               std::to_string(unit.packet_length_) + " symbols");
    ++unit.packets_;
    const Histogram* basis = nullptr;
    std::int64_t denom = 0;
    if (unit.mode_ == SupernodeMode::kReplacement) {
        basis = &unit.packet_;
        denom = unit.packet_length_;
    } else {
        unit.accumulated_.merge(unit.packet_);
        basis = &unit.accumulated_;
        denom = static_cast<std::int64_t>(unit.packets_) * unit.packet_length_;
    }
    for (std::size_t i = 0; i < basis->counts.size(); ++i)
        unit.raw_estimate_[i] =
            static_cast<double>(basis->counts[i]) / static_cast<double>(denom);
    unit.current_mass_ = Mass::normalized(unit.raw_estimate_);
    unit.packet_.clear();
    unit.source_ = StreamSource(unit.current_mass_, reseed);
}

struct EqualitySupernodeMasses {
    Mass to_first;       // product of channel and the second edge's estimate
    Mass to_second;      // product of channel and the first edge's estimate
    Mass to_observable;  // product of the two edge estimates
};

// Packet-boundary update of an equality supernode joining two tabulated
// edges and one channel-facing observable. Fires both unit updates, then
// computes each outgoing mass by the sum-product rule from the other
// inputs, with the channel mass used exactly.
inline EqualitySupernodeMasses equality_supernode_update(SupernodeUnit& first,
                                                         SupernodeUnit& second,
                                                         const Mass& channel,
                                                         std::uint64_t reseed_first,
                                                         std::uint64_t reseed_second) {
    supernode_packet_update(first, reseed_first);
    supernode_packet_update(second, reseed_second);
    return {hadamard(channel, second.current_mass()),
            hadamard(channel, first.current_mass()),
            hadamard(first.current_mass(), second.current_mass())};
}

struct StochasticConfig {
    int packet_length = 250;  // l
    int iterations = 1;       // packets; total run is l * iterations steps
    SupernodeMode mode = SupernodeMode::kReplacement;
    std::uint64_t seed = 0;
    int warmup = 0;  // dev knob: steps skipped by the decision histograms
};

struct StochasticResult {
    std::vector<Symbol> decisions;          // per observable, in observables() order
    std::vector<Histogram> decision_histograms;
    std::vector<Histogram> arrival_histograms;
};

// Synchronous stochastic decoder. Each time-step the observable variables
// draw fresh symbols and the draws propagate through the whole cascade of
// constraint nodes within the step, the way a combinational decoder settles
// once per clock: the only registers are the per-slot hold registers, the
// supernode estimators and the stream sources. Supernode outputs are
// regenerated sources, so every supernode-covered cycle is cut and the
// in-step dataflow is acyclic. Edges on uncovered cycles (the latching
// demos) fall back to registered semantics: their symbols update from the
// previous step's values.
//
// Decisions come from per-observable histograms accumulated over the whole
// run: each arriving symbol is gated against the variable's own evidence
// draw (an equality combine), so the tabulated stream estimates the
// evidence-times-incoming product that the reference decoder uses for its
// hard decisions. Raw arrivals are tabulated separately.
class StochasticEngine {
public:
    struct Options {
        bool check_cycles = true;
        bool zero_initial_state = false;  // start held registers and lines at 0
    };

    StochasticEngine(const ConstraintGraph& g, const std::vector<Mass>& evidence,
                     StochasticConfig cfg)
        : StochasticEngine(g, evidence, cfg, Options{true, false}) {}

    StochasticEngine(const ConstraintGraph& g, const std::vector<Mass>& evidence,
                     StochasticConfig cfg, Options options)
        : g_(g), cfg_(cfg) {
        if (!g.validated())
            throw GraphError("stochastic engine requires a validated graph");
        if (cfg.packet_length < 1 || cfg.iterations < 1)
            throw ConfigInvalid("packet length and iterations must be >= 1");
        if (options.check_cycles && !detect_cycles(g).empty())
            throw UncoveredCycle("graph has a cycle with no supernode edge");
        if (evidence.size() != g.observables().size())
            throw LengthMismatch("one evidence mass per observable variable required");
        warmup_ = cfg.warmup;

        evidence_of_.assign(g.variables().size(), -1);
        for (std::size_t i = 0; i < g.observables().size(); ++i) {
            int v = g.observables()[i];
            if (evidence[i].size() != g.variable(v).alphabet.size)
                throw LengthMismatch("evidence alphabet mismatch at variable " +
                                     std::to_string(v));
            evidence_of_[static_cast<std::size_t>(v)] = static_cast<int>(i);
        }
        evidence_ = evidence;

        const std::uint64_t seed = cfg.seed;
        val_.resize(2 * g.edges().size());
        for (const Edge& e : g.edges()) {
            for (int dir = 0; dir < 2; ++dir) {
                int size = g.variable(e.variable).alphabet.size;
                Symbol s = 0;
                if (!options.zero_initial_state) {
                    SplitMix64 r(derive_seed(seed, StreamKind::kEdgeInit,
                                             static_cast<std::uint64_t>(e.id),
                                             static_cast<std::uint64_t>(dir)));
                    s = static_cast<Symbol>(r.next_unit() * size);
                }
                val_[dir_index(e.id, dir)] = s;
            }
        }

        held_.resize(g.constraints().size());
        for (const ConstraintNode& c : g.constraints()) {
            for (Role r : kRoles) {
                Symbol s = 0;
                if (!options.zero_initial_state) {
                    SplitMix64 rr(derive_seed(seed, StreamKind::kHeldInit,
                                              static_cast<std::uint64_t>(c.id),
                                              static_cast<std::uint64_t>(index(r))));
                    int size = c.table.alphabet(r).size;
                    s = static_cast<Symbol>(rr.next_unit() * size);
                }
                held_[static_cast<std::size_t>(c.id)]
                    .held[static_cast<std::size_t>(index(r))] = s;
            }
        }

        var_sources_.reserve(g.observables().size());
        sink_hist_.reserve(g.observables().size());
        arrival_hist_.reserve(g.observables().size());
        sink_held_.reserve(g.observables().size());
        for (std::size_t i = 0; i < g.observables().size(); ++i) {
            int v = g.observables()[i];
            int size = g.variable(v).alphabet.size;
            var_sources_.emplace_back(
                evidence_[i],
                derive_seed(seed, StreamKind::kVariableSource,
                            static_cast<std::uint64_t>(v)));
            sink_hist_.emplace_back(size);
            match_hist_.emplace_back(size);
            arrival_hist_.emplace_back(size);
            SplitMix64 r(derive_seed(seed, StreamKind::kSinkInit,
                                     static_cast<std::uint64_t>(v)));
            sink_held_.push_back(options.zero_initial_state
                                     ? 0
                                     : static_cast<Symbol>(r.next_unit() * size));
        }

        // Degree-1 internal variables (trellis terminators) emit uniform
        // draws; singleton alphabets make that a constant zero.
        free_source_of_.assign(g.variables().size(), -1);
        for (const VariableNode& v : g.variables()) {
            if (v.observable || v.edges.size() != 1) continue;
            free_source_of_[static_cast<std::size_t>(v.id)] =
                static_cast<int>(free_sources_.size());
            free_sources_.emplace_back(
                Mass::uniform(v.alphabet.size),
                derive_seed(seed, StreamKind::kVariableSource,
                            static_cast<std::uint64_t>(v.id)));
        }
        for (const VariableNode& v : g.variables()) {
            if (!v.observable && v.edges.size() > 2)
                throw ConfigInvalid(
                    "stochastic engine supports internal variables of degree <= 2");
        }

        // Supernode constraints: per-slot incoming units (exact evidence for
        // observable-attached slots) and per-slot outgoing sources.
        cons_super_of_.assign(g.constraints().size(), -1);
        for (const ConstraintNode& c : g.constraints()) {
            if (!c.supernode) continue;
            cons_super_of_[static_cast<std::size_t>(c.id)] =
                static_cast<int>(cons_supers_.size());
            ConstraintSupernode cs;
            cs.constraint = c.id;
            for (Role r : kRoles) {
                int e = c.slot_edge[static_cast<std::size_t>(index(r))];
                const VariableNode& v = g.variable(g.edge(e).variable);
                std::size_t slot = static_cast<std::size_t>(index(r));
                if (v.observable) {
                    cs.exact_in[slot] =
                        static_cast<int>(evidence_of_[static_cast<std::size_t>(v.id)]);
                } else {
                    cs.units[slot] = std::make_unique<SupernodeUnit>(
                        v.alphabet.size, cfg.packet_length, cfg.mode,
                        derive_seed(seed, StreamKind::kConstraintSupernode,
                                    static_cast<std::uint64_t>(c.id),
                                    static_cast<std::uint64_t>(index(r)), 0));
                }
            }
            cons_supers_.push_back(std::move(cs));
        }
        for (ConstraintSupernode& cs : cons_supers_) refresh_outgoing(cs, 0);

        // Stream supernodes on flagged edges not owned by a supernode
        // constraint: one unit per direction.
        edge_super_of_.assign(g.edges().size(), -1);
        for (const Edge& e : g.edges()) {
            if (!e.super || g.constraint(e.constraint).supernode) continue;
            edge_super_of_[static_cast<std::size_t>(e.id)] =
                static_cast<int>(edge_supers_.size());
            EdgeSupernode es;
            es.edge = e.id;
            int size = g.variable(e.variable).alphabet.size;
            for (int dir = 0; dir < 2; ++dir)
                es.units[static_cast<std::size_t>(dir)] =
                    std::make_unique<SupernodeUnit>(
                        size, cfg.packet_length, cfg.mode,
                        derive_seed(seed, StreamKind::kEdgeSupernode,
                                    static_cast<std::uint64_t>(e.id),
                                    static_cast<std::uint64_t>(dir), 0));
            edge_supers_.push_back(std::move(es));
        }

        build_schedule();
    }

    int time() const { return t_; }
    int total_steps() const { return cfg_.packet_length * cfg_.iterations; }

    static constexpr int kTowardConstraint = 0;
    static constexpr int kTowardVariable = 1;

    Symbol symbol(int edge, int dir) const { return val_[dir_index(edge, dir)]; }

    const Histogram& decision_histogram(int obs_index) const {
        return sink_hist_[static_cast<std::size_t>(obs_index)];
    }
    const Histogram& arrival_histogram(int obs_index) const {
        return arrival_hist_[static_cast<std::size_t>(obs_index)];
    }
    const Histogram& match_histogram(int obs_index) const {
        return match_hist_[static_cast<std::size_t>(obs_index)];
    }
    const SupernodeUnit* edge_unit(int edge, int dir) const {
        int i = edge_super_of_[static_cast<std::size_t>(edge)];
        return i < 0 ? nullptr
                     : edge_supers_[static_cast<std::size_t>(i)]
                           .units[static_cast<std::size_t>(dir)]
                           .get();
    }
    const SupernodeUnit* constraint_unit(int constraint, Role slot) const {
        int i = cons_super_of_[static_cast<std::size_t>(constraint)];
        return i < 0 ? nullptr
                     : cons_supers_[static_cast<std::size_t>(i)]
                           .units[static_cast<std::size_t>(index(slot))]
                           .get();
    }
    // Current outgoing mass of a supernode constraint's slot.
    const Mass* constraint_out_mass(int constraint, Role slot) const {
        int i = cons_super_of_[static_cast<std::size_t>(constraint)];
        return i < 0 ? nullptr
                     : &cons_supers_[static_cast<std::size_t>(i)]
                            .out[static_cast<std::size_t>(index(slot))]
                            .mass();
    }

    // One synchronous time-step; fires packet updates every l steps.
    void step() {
        // Registered productions (edges on uncovered cycles) sample their
        // inputs as they stood at the end of the previous step.
        for (std::size_t i = 0; i < registered_.size(); ++i)
            staged_[i] = evaluate(registered_[i]);
        // Combinational cascade in dependency order.
        for (const Production& p : schedule_) {
            Symbol s = evaluate(p);
            if (p.observe_unit)
                p.observe_unit->observe(s);
            else
                val_[dir_index(p.edge, p.dir)] = s;
        }
        for (std::size_t i = 0; i < registered_.size(); ++i) {
            const Production& p = registered_[i];
            if (p.observe_unit)
                p.observe_unit->observe(staged_[i]);
            else
                val_[dir_index(p.edge, p.dir)] = staged_[i];
        }
        // Tabulation: supernode constraints and observable sinks see the
        // settled symbols of this step.
        for (ConstraintSupernode& cs : cons_supers_) {
            const ConstraintNode& c = g_.constraint(cs.constraint);
            for (Role r : kRoles) {
                std::size_t slot = static_cast<std::size_t>(index(r));
                if (cs.units[slot])
                    cs.units[slot]->observe(val_[dir_index(
                        c.slot_edge[slot], kTowardConstraint)]);
            }
        }
        if (t_ >= warmup_) {
            for (std::size_t obs = 0; obs < sink_hist_.size(); ++obs) {
                int e = g_.variable(g_.observables()[obs]).edges[0];
                Symbol arrival = val_[dir_index(e, kTowardVariable)];
                arrival_hist_[obs].add(arrival);
                if (arrival == ys_[obs]) {
                    sink_held_[obs] = arrival;
                    match_hist_[obs].add(arrival);
                }
                sink_hist_[obs].add(sink_held_[obs]);
            }
        }
        ++t_;
        if (t_ % cfg_.packet_length == 0) fire_packet_updates();
    }

    void run() {
        while (t_ < total_steps()) step();
    }

    std::vector<Symbol> decisions() const {
        std::vector<Symbol> out;
        out.reserve(sink_hist_.size());
        for (const Histogram& h : sink_hist_) out.push_back(histogram_decide(h));
        return out;
    }

    StochasticResult result() const {
        return {decisions(), sink_hist_, arrival_hist_};
    }

private:
    struct ConstraintSupernode {
        int constraint = -1;
        std::array<std::unique_ptr<SupernodeUnit>, 3> units;  // null: exact evidence
        std::array<int, 3> exact_in{-1, -1, -1};              // observable index
        std::array<StreamSource, 3> out;
    };
    struct EdgeSupernode {
        int edge = -1;
        std::array<std::unique_ptr<SupernodeUnit>, 2> units;  // per direction
    };

    static std::size_t dir_index(int edge, int dir) {
        return static_cast<std::size_t>(2 * edge + dir);
    }

    // One value computation per directed edge and step. A flagged edge gets
    // two productions: an emit from its stream supernode (which is what
    // consumers see) and the raw value, which only feeds the unit.
    struct Production {
        enum class Kind {
            kObsSource,   // observable emission: fresh evidence draw
            kFreeSource,  // degree-1 internal: uniform draw
            kWire,        // degree-2 internal relay
            kNodeOut,     // hold-rule constraint output
            kSuperOut,    // supernode constraint output source
            kUnitEmit,    // stream supernode regenerated output
        };
        Kind kind;
        int edge = -1;
        int dir = 0;
        int a = -1;  // obs index / free-source index / constraint id / unit owner
        int b = -1;  // slot index for node outputs, direction for unit emits
        SupernodeUnit* observe_unit = nullptr;  // raw value sink, if flagged
    };

    Symbol evaluate(const Production& p) {
        switch (p.kind) {
            case Production::Kind::kObsSource: {
                Symbol y = var_sources_[static_cast<std::size_t>(p.a)].draw();
                ys_[static_cast<std::size_t>(p.a)] = y;
                return y;
            }
            case Production::Kind::kFreeSource:
                return free_sources_[static_cast<std::size_t>(p.a)].draw();
            case Production::Kind::kWire:
                return val_[dir_index(p.a, kTowardVariable)];
            case Production::Kind::kNodeOut: {
                const ConstraintNode& c = g_.constraint(p.a);
                Role out = static_cast<Role>(p.b);
                auto [r1, r2] = other_roles(out);
                Symbol sa = val_[dir_index(
                    c.slot_edge[static_cast<std::size_t>(index(r1))],
                    kTowardConstraint)];
                Symbol sb = val_[dir_index(
                    c.slot_edge[static_cast<std::size_t>(index(r2))],
                    kTowardConstraint)];
                return node_step(c.table, out, sa, sb,
                                 held_[static_cast<std::size_t>(p.a)]);
            }
            case Production::Kind::kSuperOut:
                return cons_supers_[static_cast<std::size_t>(p.a)]
                    .out[static_cast<std::size_t>(p.b)]
                    .draw();
            case Production::Kind::kUnitEmit:
                return edge_supers_[static_cast<std::size_t>(p.a)]
                    .units[static_cast<std::size_t>(p.b)]
                    ->emit();
        }
        return 0;
    }

    // Builds the per-step evaluation schedule: one production per directed
    // edge (plus raw observe-productions for flagged edges), topologically
    // ordered by same-step data dependencies. Dependencies are cut at
    // sources and at supernode-regenerated outputs, so supernode-covered
    // cycles order cleanly; productions stuck on uncovered cycles fall into
    // the registered set.
    void build_schedule() {
        std::size_t n = 2 * g_.edges().size();
        std::vector<Production> producer(n);
        std::vector<std::vector<int>> deps(n);  // dir-edge -> dir-edges it reads
        std::vector<Production> observers;

        for (const Edge& e : g_.edges()) {
            // Toward-variable side.
            Production pv;
            pv.edge = e.id;
            pv.dir = kTowardVariable;
            int super = cons_super_of_[static_cast<std::size_t>(e.constraint)];
            if (super >= 0) {
                pv.kind = Production::Kind::kSuperOut;
                pv.a = super;
                pv.b = index(e.slot);
            } else {
                pv.kind = Production::Kind::kNodeOut;
                pv.a = e.constraint;
                pv.b = index(e.slot);
                auto [r1, r2] = other_roles(e.slot);
                const ConstraintNode& c = g_.constraint(e.constraint);
                deps[dir_index(e.id, kTowardVariable)] = {
                    static_cast<int>(dir_index(
                        c.slot_edge[static_cast<std::size_t>(index(r1))],
                        kTowardConstraint)),
                    static_cast<int>(dir_index(
                        c.slot_edge[static_cast<std::size_t>(index(r2))],
                        kTowardConstraint))};
            }
            producer[dir_index(e.id, kTowardVariable)] = pv;

            // Toward-constraint side.
            Production pc;
            pc.edge = e.id;
            pc.dir = kTowardConstraint;
            const VariableNode& v = g_.variable(e.variable);
            if (v.observable) {
                pc.kind = Production::Kind::kObsSource;
                pc.a = evidence_of_[static_cast<std::size_t>(v.id)];
            } else if (v.edges.size() == 1) {
                pc.kind = Production::Kind::kFreeSource;
                pc.a = free_source_of_[static_cast<std::size_t>(v.id)];
            } else {
                pc.kind = Production::Kind::kWire;
                pc.a = v.edges[0] == e.id ? v.edges[1] : v.edges[0];
                deps[dir_index(e.id, kTowardConstraint)] = {
                    static_cast<int>(dir_index(pc.a, kTowardVariable))};
            }
            producer[dir_index(e.id, kTowardConstraint)] = pc;
        }

        // Flagged edges: consumers read the unit's regenerated stream (no
        // dependencies); the raw production becomes observe-only.
        for (const EdgeSupernode& es : edge_supers_) {
            int unit_index = edge_super_of_[static_cast<std::size_t>(es.edge)];
            for (int dir = 0; dir < 2; ++dir) {
                std::size_t d = dir_index(es.edge, dir);
                Production raw = producer[d];
                raw.observe_unit = es.units[static_cast<std::size_t>(dir)].get();
                observers.push_back(raw);
                Production emit;
                emit.kind = Production::Kind::kUnitEmit;
                emit.edge = es.edge;
                emit.dir = dir;
                emit.a = unit_index;
                emit.b = dir;
                producer[d] = emit;
                deps[d].clear();
            }
        }

        // Kahn's algorithm over directed-edge values.
        std::vector<std::vector<int>> consumers(n);
        std::vector<int> missing(n, 0);
        for (std::size_t d = 0; d < n; ++d) {
            missing[d] = static_cast<int>(deps[d].size());
            for (int in : deps[d]) consumers[static_cast<std::size_t>(in)].push_back(
                static_cast<int>(d));
        }
        std::vector<int> ready;
        for (std::size_t d = 0; d < n; ++d)
            if (missing[d] == 0) ready.push_back(static_cast<int>(d));
        std::vector<bool> ordered(n, false);
        for (std::size_t head = 0; head < ready.size(); ++head) {
            int d = ready[static_cast<std::size_t>(head)];
            ordered[static_cast<std::size_t>(d)] = true;
            schedule_.push_back(producer[static_cast<std::size_t>(d)]);
            for (int c : consumers[static_cast<std::size_t>(d)])
                if (--missing[static_cast<std::size_t>(c)] == 0)
                    ready.push_back(c);
        }
        // Anything unordered sits on an uncovered cycle: registered.
        for (std::size_t d = 0; d < n; ++d)
            if (!ordered[d]) registered_.push_back(producer[d]);
        // Raw productions of flagged edges: combinational when their inputs
        // ordered, registered otherwise.
        for (const Production& raw : observers) {
            bool all_ordered = true;
            std::size_t d = dir_index(raw.edge, raw.dir);
            (void)d;
            if (raw.kind == Production::Kind::kWire) {
                all_ordered = ordered[dir_index(raw.a, kTowardVariable)];
            } else if (raw.kind == Production::Kind::kNodeOut) {
                const ConstraintNode& c = g_.constraint(raw.a);
                auto [r1, r2] = other_roles(static_cast<Role>(raw.b));
                all_ordered =
                    ordered[dir_index(
                        c.slot_edge[static_cast<std::size_t>(index(r1))],
                        kTowardConstraint)] &&
                    ordered[dir_index(
                        c.slot_edge[static_cast<std::size_t>(index(r2))],
                        kTowardConstraint)];
            }
            if (all_ordered)
                schedule_.push_back(raw);
            else
                registered_.push_back(raw);
        }
        staged_.assign(registered_.size(), 0);
        ys_.assign(sink_hist_.size(), 0);
    }

    const Mass& estimate(const ConstraintSupernode& cs, Role r) const {
        std::size_t slot = static_cast<std::size_t>(index(r));
        if (cs.units[slot]) return cs.units[slot]->current_mass();
        return evidence_[static_cast<std::size_t>(cs.exact_in[slot])];
    }

    // Outgoing masses of a supernode constraint from the current per-slot
    // estimates, via the exact sum-product rule.
    void refresh_outgoing(ConstraintSupernode& cs, int packet) {
        const ConstraintNode& c = g_.constraint(cs.constraint);
        for (Role out : kRoles) {
            auto [r1, r2] = other_roles(out);
            Mass m = sum_product_update(c.table, out, estimate(cs, r1),
                                        estimate(cs, r2));
            cs.out[static_cast<std::size_t>(index(out))] = StreamSource(
                std::move(m),
                derive_seed(cfg_.seed, StreamKind::kConstraintSupernode,
                            static_cast<std::uint64_t>(cs.constraint),
                            static_cast<std::uint64_t>(8 + index(out)),
                            static_cast<std::uint64_t>(packet)));
        }
    }

    void fire_packet_updates() {
        int packet = t_ / cfg_.packet_length;  // completed packets so far
        for (EdgeSupernode& es : edge_supers_) {
            for (int dir = 0; dir < 2; ++dir)
                supernode_packet_update(
                    *es.units[static_cast<std::size_t>(dir)],
                    derive_seed(cfg_.seed, StreamKind::kEdgeSupernode,
                                static_cast<std::uint64_t>(es.edge),
                                static_cast<std::uint64_t>(dir),
                                static_cast<std::uint64_t>(packet)));
        }
        for (ConstraintSupernode& cs : cons_supers_) {
            for (Role r : kRoles) {
                std::size_t slot = static_cast<std::size_t>(index(r));
                if (cs.units[slot])
                    supernode_packet_update(
                        *cs.units[slot],
                        derive_seed(cfg_.seed, StreamKind::kConstraintSupernode,
                                    static_cast<std::uint64_t>(cs.constraint),
                                    static_cast<std::uint64_t>(index(r)),
                                    static_cast<std::uint64_t>(packet)));
            }
            refresh_outgoing(cs, packet);
        }
    }

    const ConstraintGraph& g_;
    StochasticConfig cfg_;
    std::vector<Mass> evidence_;
    std::vector<int> evidence_of_;
    std::vector<Symbol> val_;         // settled symbol per directed edge
    std::vector<Production> schedule_;    // combinational, in dependency order
    std::vector<Production> registered_;  // uncovered-cycle fallback
    std::vector<Symbol> staged_;
    std::vector<Symbol> ys_;  // this step's evidence draws, for sink gating
    std::vector<StochasticNodeState> held_;
    std::vector<StreamSource> var_sources_;
    std::vector<StreamSource> free_sources_;
    std::vector<int> free_source_of_;
    std::vector<Histogram> sink_hist_;
    std::vector<Histogram> match_hist_;
    std::vector<Histogram> arrival_hist_;
    std::vector<Symbol> sink_held_;
    std::vector<ConstraintSupernode> cons_supers_;
    std::vector<int> cons_super_of_;
    std::vector<EdgeSupernode> edge_supers_;
    std::vector<int> edge_super_of_;
    int t_ = 0;
    int warmup_ = 0;
};

// Runs the full stochastic decode. Refuses graphs with a cycle that no
// supernode edge interrupts.
inline StochasticResult run_stochastic(const ConstraintGraph& g,
                                       const std::vector<Mass>& evidence,
                                       const StochasticConfig& cfg) {
    StochasticEngine engine(g, evidence, cfg);
    engine.run();
    return engine.result();
}

// Small cyclic gadget for the latching regression: three equality
// constraints, each carrying one observable, cross-connected to two parity
// constraints through internal relay variables. With the all-zero internal
// state, every parity output is zero and every equality output can only
// re-emit its held zero, so the cycle stays latched no matter what the
// observables emit. `graph_with_supernode` flags one cycle edge.
struct LatchingDemo {
    ConstraintGraph graph;
    ConstraintGraph graph_with_supernode;
    std::vector<int> internal_edges;  // edges touching internal variables
    int flagged_edge = -1;            // in graph_with_supernode
};

inline LatchingDemo build_latching_demo() {
    auto build = [](bool flag_edge, int& flagged) -> ConstraintGraph {
        ConstraintGraph g;
        Alphabet bit{2};
        std::array<int, 3> eq{};
        std::array<int, 2> par{};
        for (int j = 0; j < 3; ++j)
            eq[static_cast<std::size_t>(j)] =
                g.add_constraint(make_equality_table(bit));
        for (int i = 0; i < 2; ++i)
            par[static_cast<std::size_t>(i)] = g.add_constraint(make_parity_table());
        // Relay variable between each equality j and parity i.
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 2; ++i) {
                int relay = g.add_variable(bit, VarRole::kInternal);
                // Equality slot A joins parity 0, slot B parity 1.
                g.connect(relay, eq[static_cast<std::size_t>(j)],
                          i == 0 ? Role::A : Role::B);
                int e = g.connect(relay, par[static_cast<std::size_t>(i)],
                                  static_cast<Role>(j));
                if (flag_edge && i == 0 && j == 0) {
                    g.set_supernode_edge(e);
                    flagged = e;
                }
            }
        }
        for (int j = 0; j < 3; ++j) {
            int obs = g.add_variable(bit, VarRole::kInfo);
            g.connect(obs, eq[static_cast<std::size_t>(j)], Role::C);
        }
        g.validate();
        return g;
    };
    LatchingDemo demo;
    int unused = -1;
    demo.graph = build(false, unused);
    demo.graph_with_supernode = build(true, demo.flagged_edge);
    for (const Edge& e : demo.graph.edges())
        if (!demo.graph.variable(e.variable).observable)
            demo.internal_edges.push_back(e.id);
    return demo;
}

}  // namespace stodec

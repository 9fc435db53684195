#pragma once

// Property batteries over seeded random fixtures. Each returns how many cases
// ran and how many failed; the unit suites run them with modest counts and the
// acceptance suite reruns them in bulk.

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "segc/datagen.hpp"
#include "segc/eval.hpp"
#include "segc/graph.hpp"
#include "segc/inference.hpp"
#include "segc/matching.hpp"
#include "segc/metrics.hpp"
#include "segc/neighbor_model.hpp"
#include "segc/params.hpp"
#include "segc/paths.hpp"
#include "segc/rng.hpp"
#include "segc/trainer.hpp"

#include "oracles.hpp"

namespace segc::props {

struct PropertyResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;

    void fail(const std::string& why) {
        ++failures;
        if (first_failure.empty()) first_failure = why;
    }
    bool ok() const { return failures == 0; }
};

inline PropertyResult graph_roundtrip(std::uint64_t seed, int cases) {
    PropertyResult r{"graph-roundtrip"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        EventGraph g = oracles::random_graph(rng, 2 + static_cast<int>(rng.below(8)),
                                             static_cast<int>(rng.below(5)), 0.2, 0.2);
        EventGraph back = parse_graph(graph_to_json(g));
        if (!back.same_structure(g) || back.graph_id() != g.graph_id())
            r.fail("round-trip changed graph " + g.graph_id());
    }
    return r;
}

inline PropertyResult neighbors_symmetry(std::uint64_t seed, int cases) {
    PropertyResult r{"neighbors-symmetry"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        EventGraph g = oracles::random_graph(rng, 2 + static_cast<int>(rng.below(7)),
                                             static_cast<int>(rng.below(5)), 0.25, 0.25);
        bool ok = true;
        for (const Node& a : g.nodes())
            for (const NodeId& b : g.neighbors(a.id))
                if (!g.neighbors(b).count(a.id)) ok = false;
        if (!ok) r.fail("asymmetric adjacency in " + g.graph_id());
    }
    return r;
}

// Random kind-constraint corruptions must all be rejected.
inline PropertyResult validation_rejects(std::uint64_t seed, int cases) {
    PropertyResult r{"validation-rejects"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        EventGraph g = oracles::random_graph(rng, 3 + static_cast<int>(rng.below(5)), 2, 0.4, 0.4);
        std::vector<Node> nodes = g.nodes();
        std::vector<Link> links = g.links();
        const int kind = static_cast<int>(rng.below(7));
        if (links.empty()) continue;
        Link& l = links[rng.below(links.size())];
        switch (kind) {
            case 0: l.dst = "no-such-node"; break;                       // dangling
            case 1: l.src = l.dst; break;                                // self link
            case 2:
                if (l.kind != LinkKind::temporal) continue;
                l.type = "AFTER";                                        // bad temporal type
                break;
            case 3: links.push_back(l); break;                           // duplicate
            case 4: {                                                    // kind mismatch
                const Node& ent = *std::find_if(nodes.begin(), nodes.end(), [](const Node& n) {
                    return n.kind == NodeKind::entity;
                });
                l.kind = LinkKind::temporal;
                l.type = kTemporalType;
                l.dst = ent.id;
                if (l.src == l.dst) continue;
                break;
            }
            case 5: nodes[rng.below(nodes.size())].type = ""; break;     // empty node type
            case 6: nodes.push_back(nodes[rng.below(nodes.size())]); break;  // duplicate id
        }
        ++r.cases;
        try {
            EventGraph bad("corrupt", g.role(), nodes, links);
            r.fail("corruption kind " + std::to_string(kind) + " was accepted");
        } catch (const ValidationError&) {
        }
    }
    return r;
}

inline PropertyResult match_stage1_and_types(std::uint64_t seed, int cases) {
    PropertyResult r{"match-stage1-types"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        EventGraph schema = oracles::random_graph(rng, 3 + static_cast<int>(rng.below(5)), 2, 0.3,
                                                  0.3, GraphRole::schema, 3);
        EventGraph inst = oracles::random_graph(rng, 2 + static_cast<int>(rng.below(5)), 2, 0.3,
                                                0.3, GraphRole::instance, 3);
        bool ok = true;
        for (const NodeId& e : inst.event_ids()) {
            std::set<NodeId> expect;
            for (const Node& n : schema.nodes())
                if (n.kind == NodeKind::event && n.type == inst.node(e).type) expect.insert(n.id);
            if (candidate_set(inst, e, schema) != expect) ok = false;
        }
        MatchResult m = match(inst, schema, rng.next_u64());
        for (const auto& [ie, se] : m.assignment)
            if (inst.node(ie).type != schema.node(se).type) ok = false;
        for (const NodeId& u : m.unmatched)
            if (!candidate_set(inst, u, schema).empty()) ok = false;
        if (!ok) r.fail("stage-1 mismatch on case " + std::to_string(i));
    }
    return r;
}

// With zero link similarity the heuristic is optimal; its objective must equal
// the exhaustive oracle's.
inline PropertyResult match_oracle_equivalence(std::uint64_t seed, int cases) {
    PropertyResult r{"match-oracle-equivalence"};
    Rng rng(seed);
    const MatchObjective obj = MatchObjective::node_types_only();
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        EventGraph schema = oracles::random_graph(rng, 2 + static_cast<int>(rng.below(5)), 1, 0.3,
                                                  0.3, GraphRole::schema, 3);
        EventGraph inst = oracles::random_graph(rng, 2 + static_cast<int>(rng.below(5)), 1, 0.3,
                                                0.3, GraphRole::instance, 3);
        const MatchResult heur = match(inst, schema, rng.next_u64());
        const double heur_value = objective_value(inst, schema, heur.assignment, obj);
        const auto [oracle_res, oracle_value] = exact_match_oracle(inst, schema, obj);
        if (std::fabs(heur_value - oracle_value) > 1e-9)
            r.fail("heuristic " + std::to_string(heur_value) + " != oracle " +
                   std::to_string(oracle_value) + " on case " + std::to_string(i));
    }
    return r;
}

inline PropertyResult match_determinism(std::uint64_t seed, int cases) {
    PropertyResult r{"match-determinism"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        EventGraph schema = oracles::random_graph(rng, 4 + static_cast<int>(rng.below(4)), 2, 0.3,
                                                  0.3, GraphRole::schema, 2);
        EventGraph inst = oracles::random_graph(rng, 3 + static_cast<int>(rng.below(4)), 2, 0.3,
                                                0.3, GraphRole::instance, 2);
        const std::uint64_t s1 = rng.next_u64(), s2 = rng.next_u64();
        const MatchResult a = match(inst, schema, s1);
        const MatchResult b = match(inst, schema, s1);
        if (a.assignment != b.assignment) {
            r.fail("same seed produced different assignments");
            continue;
        }
        // Across seeds, only tied stage-2 scores may flip.
        const MatchResult c = match(inst, schema, s2);
        for (const auto& [ie, se] : a.assignment) {
            if (c.assignment.at(ie) == se) continue;
            const std::set<NodeId> cands = candidate_set(inst, ie, schema);
            const TypeNeighborhood mine = type_neighborhood(inst, ie);
            double best = -1, second = -1;
            for (const NodeId& cand : cands) {
                const TypeNeighborhood tn = type_neighborhood(schema, cand);
                const double sc = jaccard(tn.prev_types, mine.prev_types) +
                                  jaccard(tn.next_types, mine.next_types) +
                                  jaccard(tn.arg_roles, mine.arg_roles);
                if (sc > best) {
                    second = best;
                    best = sc;
                } else if (sc > second) {
                    second = sc;
                }
            }
            if (best - second > 1e-9) r.fail("non-tied node flipped across seeds");
        }
    }
    return r;
}

inline PropertyResult paths_oracle_equivalence(std::uint64_t seed, int cases) {
    PropertyResult r{"paths-oracle-equivalence"};
    Rng rng(seed);
    for (int i = 0; r.cases < cases && i < 20 * cases; ++i) {
        const int n_events = 2 + static_cast<int>(rng.below(6));
        const int n_entities = static_cast<int>(rng.below(7));
        EventGraph g = oracles::random_graph(rng, n_events, n_entities, 0.3, 0.3);
        PathConfig cfg;
        cfg.max_len = 1 + static_cast<int>(rng.below(4));
        cfg.link_kinds = rng.chance(0.3) ? PathLinkKinds::temporal_only : PathLinkKinds::all;
        const std::vector<NodeId> events = g.event_ids();
        const NodeId s = events[rng.below(events.size())];
        NodeId t = events[rng.below(events.size())];
        if (s == t) continue;
        ++r.cases;
        const std::set<PathType> got = enumerate_paths(g, s, t, cfg);
        const std::set<PathType> expect = oracles::dfs_paths_oracle(
            g, s, t, cfg.max_len, cfg.link_kinds == PathLinkKinds::temporal_only);
        if (got != expect) {
            r.fail("path sets differ for " + s + "->" + t + " in " + g.graph_id());
            continue;
        }
        for (const PathType& p : got) {
            if (p.empty() || static_cast<int>(p.size()) > cfg.max_len)
                r.fail("path length out of bounds");
            if (cfg.link_kinds == PathLinkKinds::temporal_only)
                for (const std::string& lbl : p)
                    if (lbl != kTemporalType && lbl != kTemporalRevType)
                        r.fail("temporal_only emitted label " + lbl);
        }
    }
    return r;
}

inline PropertyResult bag_monotone(std::uint64_t seed, int cases) {
    PropertyResult r{"bag-monotone-union"};
    Rng rng(seed);
    for (int i = 0; r.cases < cases && i < 20 * cases; ++i) {
        EventGraph g = oracles::random_graph(rng, 4 + static_cast<int>(rng.below(4)), 2, 0.3, 0.3);
        PathConfig cfg;
        cfg.max_len = 2 + static_cast<int>(rng.below(2));
        const PathVocabulary vocab = build_vocabulary(g, cfg);
        const std::vector<NodeId> events = g.event_ids();
        const NodeId e = events[0];
        std::set<NodeId> small, big;
        for (std::size_t k = 1; k < events.size(); ++k) {
            if (rng.chance(0.5)) big.insert(events[k]);
            if (big.count(events[k]) && rng.chance(0.5)) small.insert(events[k]);
        }
        if (big.empty()) continue;
        ++r.cases;
        const Tensor vs = bag_of_paths(g, e, small, vocab, cfg);
        const Tensor vb = bag_of_paths(g, e, big, vocab, cfg);
        for (std::size_t k = 0; k < vs.v.size(); ++k)
            if (vs.v[k] > vb.v[k]) r.fail("bag not monotone in the context");
        // union = elementwise OR
        std::set<NodeId> rest;
        for (const NodeId& m : big)
            if (!small.count(m)) rest.insert(m);
        const Tensor vr = bag_of_paths(g, e, rest, vocab, cfg);
        for (std::size_t k = 0; k < vb.v.size(); ++k)
            if (vb.v[k] != std::max(vs.v[k], vr.v[k])) r.fail("bag union is not elementwise OR");
    }
    return r;
}

inline PropertyResult vocab_relabel_invariance(std::uint64_t seed, int cases) {
    PropertyResult r{"vocab-relabel-invariance"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        EventGraph g = oracles::random_graph(rng, 3 + static_cast<int>(rng.below(4)), 2, 0.3, 0.3);
        std::vector<Node> nodes = g.nodes();
        for (Node& n : nodes) n.id = "zz_" + n.id;
        std::vector<Link> links = g.links();
        for (Link& l : links) {
            l.src = "zz_" + l.src;
            l.dst = "zz_" + l.dst;
        }
        EventGraph relabeled("relabel", GraphRole::schema, std::move(nodes), std::move(links));
        PathConfig cfg;
        cfg.max_len = 3;
        if (!(build_vocabulary(g, cfg) == build_vocabulary(relabeled, cfg)))
            r.fail("vocabulary changed under node relabeling");
    }
    return r;
}

inline PropertyResult neighbor_permutation_invariance(std::uint64_t seed, int cases) {
    PropertyResult r{"neighbor-permutation-invariance"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        EventGraph g = oracles::random_graph(rng, 4 + static_cast<int>(rng.below(3)), 2, 0.4, 0.4);
        std::vector<Node> nodes = g.nodes();
        std::vector<Link> links = g.links();
        for (Node& n : nodes) n.id = "m" + std::to_string(9 - (n.id.back() - '0')) + n.id;
        std::map<NodeId, NodeId> renamed;
        for (std::size_t k = 0; k < g.nodes().size(); ++k) renamed[g.nodes()[k].id] = nodes[k].id;
        for (Link& l : links) {
            l.src = renamed.at(l.src);
            l.dst = renamed.at(l.dst);
        }
        EventGraph perm("perm", GraphRole::schema, nodes, links);

        ModelConfig cfg;
        cfg.kind = ModelKind::neighbor_only;
        cfg.gnn.num_layers = 2;
        cfg.gnn.hidden_dim = 8;
        cfg.mlp_hidden = 8;
        const std::uint64_t init = rng.next_u64();
        Model m1(g, cfg, init);
        Model m2(perm, cfg, init);
        const std::vector<NodeId> ev = g.event_ids();
        std::set<NodeId> ctx(ev.begin(), ev.end() - 1);
        const NodeId cand = ev.back();
        std::set<NodeId> ctx2;
        for (const NodeId& c : ctx) ctx2.insert(renamed.at(c));
        const double p1 = m1.score(g, cand, ctx);
        const double p2 = m2.score(perm, renamed.at(cand), ctx2);
        if (std::fabs(p1 - p2) > 1e-9)
            r.fail("relabeling changed probability: " + std::to_string(p1) + " vs " +
                   std::to_string(p2));
    }
    return r;
}

inline PropertyResult attention_weights(std::uint64_t seed, int cases) {
    PropertyResult r{"attention-weights-sum"};
    Rng rng(seed);
    for (int i = 0; r.cases < cases && i < 20 * cases; ++i) {
        const int n = 2 + static_cast<int>(rng.below(4));
        const int d = 3;
        Tensor emb(n + 1, d);
        for (double& x : emb.v) x = rng.uniform(-1.0, 1.0);
        std::map<NodeId, int> index;
        std::set<NodeId> ctx;
        for (int k = 0; k < n; ++k) {
            index["n" + std::to_string(k)] = k;
            ctx.insert("n" + std::to_string(k));
        }
        index["cand"] = n;
        // Manual weights: dots normalized by their sum.
        std::vector<double> dots(n);
        double denom = 0.0;
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += emb.at(k, j) * emb.at(n, j);
            dots[k] = acc;
            denom += acc;
        }
        if (std::fabs(denom) < 1e-6) continue;  // fallback regime tested separately
        ++r.cases;
        GnnConfig cfg;
        cfg.readout = Readout::attention;
        const Tensor got =
            readout_value(ad::constant(emb), index, ctx, "cand", cfg)->val;
        double wsum = 0.0;
        Tensor expect(1, d);
        for (int k = 0; k < n; ++k) {
            const double beta = dots[k] / denom;
            wsum += beta;
            for (int j = 0; j < d; ++j) expect.at(0, j) += beta * emb.at(k, j);
        }
        if (std::fabs(wsum - 1.0) > 1e-9) r.fail("weights do not sum to 1");
        for (int j = 0; j < d; ++j)
            if (std::fabs(expect.at(0, j) - got.at(0, j)) > 1e-9)
                r.fail("attention readout differs from the literal ratio");
    }
    return r;
}

// Changing the type of a node farther than K hops from the candidate and the
// whole context leaves the prediction bitwise unchanged.
inline PropertyResult gcn_locality(std::uint64_t seed, int cases) {
    PropertyResult r{"gcn-locality"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        // chain: e0 - e1 - e2 - e3 - far1 - far2 - far3; candidate e0, context {e1}
        std::vector<Node> nodes{
            {"e0", NodeKind::event, "A", ""},   {"e1", NodeKind::event, "B", ""},
            {"e2", NodeKind::event, "C", ""},   {"e3", NodeKind::event, "D", ""},
            {"f1", NodeKind::event, "FarA", ""}, {"f2", NodeKind::event, "FarB", ""},
            {"f3", NodeKind::event, "FarA", ""},
        };
        std::vector<Link> links;
        const char* ids[] = {"e0", "e1", "e2", "e3", "f1", "f2", "f3"};
        for (int k = 0; k + 1 < 7; ++k)
            links.push_back({ids[k], ids[k + 1], LinkKind::temporal, kTemporalType});
        EventGraph g("loc", GraphRole::schema, nodes, links);
        nodes[6].type = "FarB";  // f3 sits 4+ hops from e0 and e1; K = 2
        EventGraph g2("loc", GraphRole::schema, nodes, links);

        ModelConfig cfg;
        cfg.kind = ModelKind::neighbor_only;
        cfg.gnn.num_layers = 2;
        cfg.gnn.hidden_dim = 6;
        cfg.mlp_hidden = 6;
        const std::uint64_t init = rng.next_u64();
        Model m1(g, cfg, init);
        Model m2(g2, cfg, init);
        const double p1 = m1.score(g, "e0", {"e1"});
        const double p2 = m2.score(g2, "e0", {"e1"});
        if (p1 != p2) r.fail("type change beyond K hops altered the prediction");
    }
    return r;
}

inline PropertyResult backward_linearity(std::uint64_t seed, int cases) {
    PropertyResult r{"backward-linearity"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        const int d = 2 + static_cast<int>(rng.below(4));
        ParamStore store;
        Tensor& w = store.create("w", 1, d);
        for (double& x : w.v) x = rng.uniform(-1, 1);
        Tensor x1(1, d), x2(1, d);
        for (double& x : x1.v) x = rng.uniform(-1, 1);
        for (double& x : x2.v) x = rng.uniform(-1, 1);
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);

        auto grad_of = [&](const std::function<ad::Value()>& f) {
            store.zero_grads();
            ad::backward(f());
            return store.grad("w");
        };
        const Tensor g1 = grad_of([&] { return ad::dot(store.use("w"), ad::constant(x1)); });
        const Tensor g2 = grad_of([&] { return ad::dot(store.use("w"), ad::constant(x2)); });
        const Tensor gc = grad_of([&] {
            return ad::add(ad::affine(ad::dot(store.use("w"), ad::constant(x1)), a, 0.0),
                           ad::affine(ad::dot(store.use("w"), ad::constant(x2)), b, 0.0));
        });
        for (int k = 0; k < d; ++k)
            if (std::fabs(gc.v[k] - (a * g1.v[k] + b * g2.v[k])) > 1e-9)
                r.fail("gradient is not linear in the loss");
        store.zero_grads();
    }
    return r;
}

inline PropertyResult adam_lr0_identity(std::uint64_t seed, int cases) {
    PropertyResult r{"adam-lr0-identity"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        ParamStore store;
        Tensor& w = store.create("w", 2, 3);
        for (double& x : w.v) x = rng.uniform(-1, 1);
        const std::vector<double> before = w.v;
        for (double& gv : store.grad("w").v) gv = rng.uniform(-1, 1);
        store.adam_step({0.0, 0.9, 0.999, 1e-8});
        if (store.value("w").v != before) r.fail("adam with lr=0 moved parameters");
    }
    return r;
}

inline PropertyResult samples_wellformed(std::uint64_t seed, int cases) {
    PropertyResult r{"samples-wellformed"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        GenConfig cfg;
        cfg.n_schema_events = 8 + static_cast<int>(rng.below(6));
        cfg.n_event_types = cfg.n_schema_events;
        cfg.n_schema_entities = 6;
        cfg.n_instances = 4;
        cfg.dropout = 0.15;
        cfg.plant = rng.chance(0.5) ? PlantMode::distance1 : PlantMode::second_hop;
        cfg.seed = rng.next_u64();
        const EventGraph schema = gen_schema(cfg);
        std::vector<EventGraph> graphs;
        for (auto& t : gen_instances(schema, cfg)) graphs.push_back(t.incomplete);
        const std::vector<Sample> samples = build_samples(graphs, schema, rng.next_u64());
        std::set<std::string> quads;
        for (const Sample& s : samples) {
            if (s.context.count(s.candidate)) r.fail("candidate inside its context");
            if (s.context.empty()) r.fail("empty context");
            std::ostringstream key;
            key << s.candidate << '|' << s.label << '|' << s.source_graph_id << '|';
            for (const NodeId& c : s.context) key << c << ',';
            if (!quads.insert(key.str()).second) r.fail("duplicate sample quadruple");
        }
        // downsampling only selects, never edits
        const std::vector<Sample> balanced = downsample_balance(samples, rng.next_u64());
        int pos = 0, neg = 0;
        for (const Sample& s : balanced) (s.label ? pos : neg) += 1;
        int opos = 0, oneg = 0;
        for (const Sample& s : samples) (s.label ? opos : oneg) += 1;
        if (pos != neg || pos != std::min(opos, oneg)) r.fail("downsample counts wrong");
        for (const Sample& s : balanced)
            if (std::find(samples.begin(), samples.end(), s) == samples.end())
                r.fail("downsample fabricated a sample");
    }
    return r;
}

inline PropertyResult loss_positive(std::uint64_t seed, int cases) {
    PropertyResult r{"loss-positive"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        EventGraph schema =
            oracles::random_graph(rng, 5, 2, 0.3, 0.3, GraphRole::schema, 5, "losspos");
        ModelConfig cfg;
        cfg.kind = ModelKind::combined;
        cfg.gnn.num_layers = 1;
        cfg.gnn.hidden_dim = 4;
        cfg.mlp_hidden = 4;
        cfg.path.max_len = 2;
        Model model(schema, cfg, rng.next_u64());
        const std::vector<NodeId> ev = schema.event_ids();
        Sample s{ev[0], {ev[1], ev[2]}, static_cast<int>(rng.below(2)), "p"};
        if (batch_loss(model, schema, {s}) <= 0.0) r.fail("loss not strictly positive");
    }
    return r;
}

inline PropertyResult inference_invariants(std::uint64_t seed, int cases) {
    PropertyResult r{"inference-invariants"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        GenConfig cfg;
        cfg.n_schema_events = 10;
        cfg.n_event_types = 10;
        cfg.n_schema_entities = 4;
        cfg.n_instances = 1;
        cfg.dropout = 0.2;
        cfg.plant = PlantMode::distance1;
        cfg.seed = rng.next_u64();
        const EventGraph schema = gen_schema(cfg);
        const auto triples = gen_instances(schema, cfg);
        const EventGraph& inst = triples[0].incomplete;

        const std::uint64_t score_seed = rng.next_u64();
        ScoreFn noisy = [score_seed](const NodeId& e, const std::set<NodeId>& ctx) {
            std::uint64_t h = stable_hash(e) ^ score_seed;
            for (const NodeId& c : ctx) h ^= stable_hash(c) * 31;
            return static_cast<double>(derive_seed(h, 17) % 1000) / 1000.0;
        };
        InferenceConfig icfg;
        const CompletionResult a = complete(inst, schema, noisy, icfg, 5);
        const CompletionResult b = complete(inst, schema, noisy, icfg, 5);
        if (a.added_events.size() != b.added_events.size()) r.fail("nondeterministic completion");
        if (a.added_events.size() > schema.event_count()) r.fail("too many additions");
        for (const AddedEvent& ev : a.added_events) {
            if (!(ev.score > icfg.threshold)) r.fail("added event at or below threshold");
            bool has_temporal = false;
            for (int li : a.completed.incident_links(ev.instance_id))
                if (a.completed.links()[li].kind == LinkKind::temporal) has_temporal = true;
            if (!has_temporal) r.fail("added event lacks a temporal link");
        }
    }
    return r;
}

inline PropertyResult auc_transform_invariance(std::uint64_t seed, int cases) {
    PropertyResult r{"auc-transform-invariance"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        const int n = 4 + static_cast<int>(rng.below(30));
        std::vector<double> scores;
        std::vector<int> labels;
        for (int k = 0; k < n; ++k) {
            scores.push_back(rng.chance(0.3) ? 0.5 : rng.uniform());  // force some ties
            labels.push_back(rng.chance(0.5) ? 1 : 0);
        }
        bool d1 = false, d2 = false;
        const double a1 = auc_with_ties(scores, labels, &d1);
        std::vector<double> transformed;
        for (double s : scores) transformed.push_back(std::exp(3.0 * s) + 1.0);
        const double a2 = auc_with_ties(transformed, labels, &d2);
        if (d1 != d2 || (d1 && std::fabs(a1 - a2) > 1e-12))
            r.fail("AUC changed under a strictly increasing transform");
    }
    return r;
}

inline PropertyResult datagen_validity(std::uint64_t seed, int cases) {
    PropertyResult r{"datagen-validity-purity"};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        GenConfig cfg;
        cfg.n_schema_events = 8 + static_cast<int>(rng.below(8));
        cfg.n_event_types = std::max(3, cfg.n_schema_events - 2);
        cfg.n_schema_entities = 4 + static_cast<int>(rng.below(4));
        cfg.n_instances = 3;
        cfg.dropout = rng.chance(0.3) ? 0.0 : 0.2;
        const int mode = static_cast<int>(rng.below(3));
        cfg.plant = mode == 0 ? PlantMode::none
                  : mode == 1 ? PlantMode::distance1
                              : PlantMode::second_hop;
        cfg.instance_coverage = 0.6;
        cfg.seed = rng.next_u64();

        const EventGraph s1 = gen_schema(cfg);  // construction validates
        const EventGraph s2 = gen_schema(cfg);
        if (!s1.same_structure(s2)) r.fail("gen_schema is not a pure function of the config");

        // temporal subgraph is a DAG: Kahn peeling terminates
        std::map<NodeId, int> indeg;
        for (const NodeId& e : s1.event_ids()) indeg[e] = 0;
        for (const Link& l : s1.links())
            if (l.kind == LinkKind::temporal) indeg[l.dst] += 1;
        std::set<NodeId> remaining;
        for (const auto& [id, _] : indeg) remaining.insert(id);
        bool progress = true;
        while (progress && !remaining.empty()) {
            progress = false;
            for (const NodeId& id : remaining) {
                if (indeg[id] == 0) {
                    for (int li : s1.incident_links(id)) {
                        const Link& l = s1.links()[li];
                        if (l.kind == LinkKind::temporal && l.src == id) indeg[l.dst] -= 1;
                    }
                    remaining.erase(id);
                    progress = true;
                    break;
                }
            }
        }
        if (!remaining.empty()) r.fail("temporal subgraph has a cycle");

        const auto t1 = gen_instances(s1, cfg);
        const auto t2 = gen_instances(s1, cfg);
        if (t1.size() != t2.size()) r.fail("gen_instances count not deterministic");
        for (std::size_t k = 0; k < t1.size(); ++k) {
            if (!t1[k].full.same_structure(t2[k].full)) r.fail("gen_instances not deterministic");
            if (cfg.dropout == 0.0) {
                if (!t1[k].incomplete.same_structure(t1[k].full) || !t1[k].hidden_schema.empty())
                    r.fail("dropout 0 must leave the instance intact");
            }
            const MatchResult m = match(t1[k].incomplete, s1, 1);
            if (!m.unmatched.empty()) r.fail("incomplete instance does not match back fully");
            const MatchResult mf = match(t1[k].full, s1, 1);
            for (const NodeId& h : t1[k].hidden_schema)
                if (!mf.matched_subgraph.count(h) && cfg.plant != PlantMode::none)
                    r.fail("hidden set escapes the schema image");
        }
    }
    return r;
}

inline std::vector<PropertyResult> run_full_battery(std::uint64_t seed) {
    return {
        graph_roundtrip(derive_seed(seed, 101), 100),
        neighbors_symmetry(derive_seed(seed, 102), 100),
        validation_rejects(derive_seed(seed, 103), 160),
        match_stage1_and_types(derive_seed(seed, 104), 100),
        match_oracle_equivalence(derive_seed(seed, 105), 200),
        match_determinism(derive_seed(seed, 106), 50),
        paths_oracle_equivalence(derive_seed(seed, 107), 210),
        bag_monotone(derive_seed(seed, 108), 60),
        vocab_relabel_invariance(derive_seed(seed, 109), 30),
        neighbor_permutation_invariance(derive_seed(seed, 110), 15),
        attention_weights(derive_seed(seed, 111), 40),
        gcn_locality(derive_seed(seed, 112), 15),
        backward_linearity(derive_seed(seed, 113), 40),
        adam_lr0_identity(derive_seed(seed, 114), 30),
        samples_wellformed(derive_seed(seed, 115), 30),
        loss_positive(derive_seed(seed, 116), 30),
        inference_invariants(derive_seed(seed, 117), 40),
        auc_transform_invariance(derive_seed(seed, 118), 60),
        datagen_validity(derive_seed(seed, 119), 30),
    };
}

}  // namespace segc::props

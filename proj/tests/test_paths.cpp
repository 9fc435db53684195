#include "doctest.h"

#include "segc/errors.hpp"
#include "segc/paths.hpp"
#include "segc/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace segc;

TEST_SUITE("paths") {
    TEST_CASE("transport->detonate at L=2: the temporal hop and the shared place") {
        const EventGraph schema = fixtures::bombing_schema();
        PathConfig cfg;
        cfg.max_len = 2;
        const std::set<PathType> got = enumerate_paths(schema, "transport", "detonate", cfg);
        const std::set<PathType> expect{{"TEMP"}, {"destination", "place"}};
        CHECK(got == expect);
    }

    TEST_CASE("disconnected endpoints yield the empty set") {
        std::vector<Node> nodes{{"a", NodeKind::event, "A", ""},
                                {"b", NodeKind::event, "B", ""},
                                {"c", NodeKind::event, "C", ""},
                                {"d", NodeKind::event, "D", ""}};
        std::vector<Link> links{{"a", "b", LinkKind::temporal, kTemporalType},
                                {"c", "d", LinkKind::temporal, kTemporalType}};
        const EventGraph g("disc", GraphRole::schema, nodes, links);
        PathConfig cfg;
        cfg.max_len = 4;
        CHECK(enumerate_paths(g, "a", "c", cfg).empty());
        CHECK_THROWS_AS(enumerate_paths(g, "a", "a", cfg), ValidationError);
    }

    TEST_CASE("reversed temporal hops are labeled TEMP_REV") {
        std::vector<Node> nodes{{"a", NodeKind::event, "A", ""}, {"b", NodeKind::event, "B", ""}};
        std::vector<Link> links{{"a", "b", LinkKind::temporal, kTemporalType}};
        const EventGraph g("ab", GraphRole::schema, nodes, links);
        PathConfig cfg;
        cfg.max_len = 1;
        CHECK(enumerate_paths(g, "b", "a", cfg) == std::set<PathType>{{"TEMP_REV"}});
        const PathVocabulary vocab = build_vocabulary(g, cfg);
        CHECK(vocab.paths == std::vector<PathType>{{"TEMP"}, {"TEMP_REV"}});
    }

    TEST_CASE("vocabulary of a linkless schema is empty") {
        std::vector<Node> nodes{{"a", NodeKind::event, "A", ""}, {"b", NodeKind::event, "B", ""}};
        const EventGraph g("nolinks", GraphRole::schema, nodes, {});
        PathConfig cfg;
        CHECK(build_vocabulary(g, cfg).size() == 0);
    }

    TEST_CASE("the enumeration guard rejects L > 6") {
        PathConfig cfg;
        cfg.max_len = 7;
        CHECK_THROWS_AS(cfg.validate(), ValidationError);
        cfg.max_len = 0;
        CHECK_THROWS_AS(cfg.validate(), ValidationError);
    }

    TEST_CASE("bag of paths: zero vector, anchor bits, union") {
        const EventGraph schema = fixtures::bombing_schema();
        PathConfig cfg;
        cfg.max_len = 2;
        const PathVocabulary vocab = build_vocabulary(schema, cfg);

        const Tensor anchored = bag_of_paths(schema, "transport", {"detonate"}, vocab, cfg);
        int set_bits = 0;
        for (double x : anchored.v) set_bits += x == 1.0 ? 1 : 0;
        CHECK(set_bits == 2);
        CHECK(anchored.v[vocab.index.at({"TEMP"})] == 1.0);
        CHECK(anchored.v[vocab.index.at({"destination", "place"})] == 1.0);

        // sentence is more than 2 hops from assemble
        const Tensor zero = bag_of_paths(schema, "assemble", {"sentence"}, vocab, cfg);
        for (double x : zero.v) CHECK(x == 0.0);

        CHECK_THROWS_AS(bag_of_paths(schema, "detonate", {"detonate"}, vocab, cfg),
                        ValidationError);
    }

    TEST_CASE("path index agrees with direct enumeration") {
        const EventGraph schema = fixtures::bombing_schema();
        PathConfig cfg;
        cfg.max_len = 3;
        const PathIndex index(schema, cfg);
        CHECK(index.vocabulary() == build_vocabulary(schema, cfg));
        for (const NodeId& s : schema.event_ids())
            for (const NodeId& t : schema.event_ids()) {
                if (s == t) continue;
                const std::set<PathType> direct = enumerate_paths(schema, s, t, cfg);
                std::set<int> expect;
                for (const PathType& p : direct) expect.insert(index.vocabulary().index.at(p));
                const std::vector<int>& got = index.pair_paths(s, t);
                CHECK(std::set<int>(got.begin(), got.end()) == expect);
            }
        const Tensor via_index = index.bag("transport", {"detonate", "die_1"});
        const Tensor direct =
            bag_of_paths(schema, "transport", {"detonate", "die_1"}, index.vocabulary(), cfg);
        CHECK(via_index.v == direct.v);
    }

    TEST_CASE("predict_path: zero weights and zero inputs give 0.5") {
        Rng rng(5);
        ParamStore store;
        init_path_mlp(store, 10, 8, rng);
        for (const std::string& name : store.names()) store.value(name).fill(0.0);
        Tensor any(1, 10);
        any.v[3] = 1.0;
        CHECK(predict_path(any, store) == 0.5);

        // random weights, zero input, zero biases: hidden relu(0) = 0
        ParamStore store2;
        Rng rng2(6);
        init_path_mlp(store2, 10, 8, rng2);
        store2.value("mlp_path.b1").fill(0.0);
        store2.value("mlp_path.b2").fill(0.0);
        CHECK(predict_path(Tensor(1, 10), store2) == 0.5);

        CHECK_THROWS_AS(predict_path(Tensor(1, 9), store2), ValidationError);
    }

    TEST_CASE("monotone head: adding a path bit never lowers a nonnegative MLP") {
        Rng rng(7);
        ParamStore store;
        init_path_mlp(store, 10, 6, rng);
        for (double& x : store.value("mlp_path.w1").v) x = std::fabs(x);
        for (double& x : store.value("mlp_path.w2").v) x = std::fabs(x) + 0.01;
        // exhaustive bit flips over every base vector with one extra bit set
        for (int base = 0; base < (1 << 10); base += 37) {
            Tensor v(1, 10);
            for (int b = 0; b < 10; ++b) v.v[b] = (base >> b) & 1 ? 1.0 : 0.0;
            const double p0 = predict_path(v, store);
            for (int b = 0; b < 10; ++b) {
                if (v.v[b] == 1.0) continue;
                Tensor w = v;
                w.v[b] = 1.0;
                CHECK(predict_path(w, store) >= p0);
            }
        }
    }

    TEST_CASE("properties: oracle equivalence, monotone bags, relabel-stable vocabulary") {
        auto eq = props::paths_oracle_equivalence(51, 80);
        CHECK_MESSAGE(eq.ok(), eq.first_failure);
        CHECK(eq.cases >= 80);
        auto mono = props::bag_monotone(52, 40);
        CHECK_MESSAGE(mono.ok(), mono.first_failure);
        auto rel = props::vocab_relabel_invariance(53, 20);
        CHECK_MESSAGE(rel.ok(), rel.first_failure);
    }
}

#include "doctest.h"

#include "segc/errors.hpp"
#include "segc/matching.hpp"
#include "support/fixtures.hpp"
#include "support/properties.hpp"

using namespace segc;

TEST_SUITE("matching") {
    TEST_CASE("stage 1: type-equality candidate sets") {
        const EventGraph schema = fixtures::bombing_schema();
        const EventGraph inst = fixtures::bombing_instance();
        CHECK(candidate_set(inst, "contact:0", schema).empty());
        CHECK(candidate_set(inst, "assemble:0", schema) == std::set<NodeId>{"assemble"});
        CHECK(candidate_set(inst, "die:0", schema) == std::set<NodeId>{"die_1", "die_2"});
        CHECK_THROWS_AS(candidate_set(inst, "bomb:0", schema), ValidationError);
    }

    TEST_CASE("type neighborhoods") {
        const EventGraph schema = fixtures::bombing_schema();
        const TypeNeighborhood tn = type_neighborhood(schema, "detonate");
        CHECK(tn.next_types.count("Die") == 1);
        CHECK(tn.next_types.count("Injure") == 1);
        CHECK(tn.prev_types == std::set<std::string>{"Transport"});
        CHECK(tn.arg_roles == std::set<std::string>{"place"});

        std::vector<Node> nodes{{"iso", NodeKind::event, "X", ""},
                                {"ev", NodeKind::event, "Y", ""},
                                {"p", NodeKind::entity, "P", ""},
                                {"q", NodeKind::entity, "Q", ""}};
        std::vector<Link> links{{"ev", "p", LinkKind::argument, "victim"},
                                {"ev", "q", LinkKind::argument, "place"}};
        const EventGraph g("tn", GraphRole::instance, nodes, links);
        const TypeNeighborhood empty = type_neighborhood(g, "iso");
        CHECK(empty.prev_types.empty());
        CHECK(empty.next_types.empty());
        CHECK(empty.arg_roles.empty());
        CHECK(type_neighborhood(g, "ev").arg_roles == std::set<std::string>{"victim", "place"});
    }

    TEST_CASE("jaccard with the empty-sets convention") {
        CHECK(jaccard<std::string>({}, {}) == 1.0);
        CHECK(jaccard<std::string>({"x"}, {"x"}) == 1.0);
        CHECK(jaccard<std::string>({"x", "y"}, {"y", "z"}) == doctest::Approx(1.0 / 3.0));
    }

    TEST_CASE("stage 2: Jaccard sums resolve the ambiguous Die") {
        // die:0 follows detonate:0; die_1 follows Detonate in the schema while
        // die_2 follows Sentence. Hand scores: die_1 gets J({Detonate},{Detonate})
        // + J({},{}) + J({victim},{victim}) = 3.0; die_2 gets 0 + 1 + 1 = 2.0.
        const EventGraph schema = fixtures::bombing_schema();
        const EventGraph inst = fixtures::bombing_instance();
        CHECK(resolve_ambiguous(inst, "die:0", {"die_1", "die_2"}, schema, 1) == "die_1");
        CHECK(resolve_ambiguous(inst, "die:0", {"die_1", "die_2"}, schema, 99) == "die_1");
    }

    TEST_CASE("stage 2: ties break by seed, deterministically") {
        // Two schema candidates with identical (empty) neighborhoods.
        std::vector<Node> snodes{{"s1", NodeKind::event, "D", ""},
                                 {"s2", NodeKind::event, "D", ""},
                                 {"s3", NodeKind::event, "Z", ""},
                                 {"s4", NodeKind::event, "Z", ""}};
        std::vector<Link> slinks{{"s3", "s4", LinkKind::temporal, kTemporalType}};
        const EventGraph schema("tie", GraphRole::schema, snodes, slinks);
        std::vector<Node> inodes{{"d:0", NodeKind::event, "D", ""}};
        const EventGraph inst("tie-i", GraphRole::instance, inodes, {});
        const NodeId first = resolve_ambiguous(inst, "d:0", {"s1", "s2"}, schema, 5);
        for (int rep = 0; rep < 5; ++rep)
            CHECK(resolve_ambiguous(inst, "d:0", {"s1", "s2"}, schema, 5) == first);
    }

    TEST_CASE("stage 2: empty neighborhoods score a full 3.0") {
        // Candidate with empty sets beats one with a non-empty prev set.
        std::vector<Node> snodes{{"c_empty", NodeKind::event, "D", ""},
                                 {"c_busy", NodeKind::event, "D", ""},
                                 {"before", NodeKind::event, "B", ""}};
        std::vector<Link> slinks{{"before", "c_busy", LinkKind::temporal, kTemporalType}};
        const EventGraph schema("e3", GraphRole::schema, snodes, slinks);
        std::vector<Node> inodes{{"d:0", NodeKind::event, "D", ""}};
        const EventGraph inst("e3-i", GraphRole::instance, inodes, {});
        CHECK(resolve_ambiguous(inst, "d:0", {"c_empty", "c_busy"}, schema, 0) == "c_empty");
    }

    TEST_CASE("match over the bombing fixture") {
        const EventGraph schema = fixtures::bombing_schema();
        const EventGraph inst = fixtures::bombing_instance();
        const MatchResult m = match(inst, schema, 7);
        CHECK(m.assignment.at("assemble:0") == "assemble");
        CHECK(m.assignment.at("die:0") == "die_1");
        CHECK(m.unmatched == std::set<NodeId>{"contact:0"});
        CHECK(m.matched_subgraph.count("detonate") == 1);
        // entity matching through shared roles
        CHECK(m.entity_assignment.at("bomb:0") == "bomb");
        CHECK(m.entity_assignment.at("alice") == "victim");
    }

    TEST_CASE("match: no type overlap leaves everything unmatched") {
        const EventGraph schema = fixtures::bombing_schema();
        std::vector<Node> nodes{{"x:0", NodeKind::event, "Nope", ""},
                                {"y:0", NodeKind::event, "Nada", ""}};
        const EventGraph inst("alien", GraphRole::instance, nodes, {});
        const MatchResult m = match(inst, schema, 0);
        CHECK(m.assignment.empty());
        CHECK(m.unmatched.size() == 2);
    }

    TEST_CASE("match: repeated event types map many-to-one") {
        const EventGraph schema = fixtures::bombing_schema();
        std::vector<Node> nodes{{"injure:0", NodeKind::event, "Injure", ""},
                                {"injure:1", NodeKind::event, "Injure", ""}};
        const EventGraph inst("two-injures", GraphRole::instance, nodes, {});
        const MatchResult m = match(inst, schema, 0);
        CHECK(m.assignment.at("injure:0") == "injure");
        CHECK(m.assignment.at("injure:1") == "injure");
        CHECK(m.matched_subgraph == std::set<NodeId>{"injure"});
    }

    TEST_CASE("exact oracle: trivial cases and the size guard") {
        const MatchObjective obj = MatchObjective::type_and_temporal();
        std::vector<Node> s1{{"s", NodeKind::event, "T", ""}};
        std::vector<Node> i1{{"i", NodeKind::event, "T", ""}};
        const EventGraph schema("s1", GraphRole::schema, s1, {});
        const EventGraph inst("i1", GraphRole::instance, i1, {});
        const auto [res, value] = exact_match_oracle(inst, schema, obj);
        CHECK(value == doctest::Approx(1.0));
        CHECK(res.assignment.at("i") == "s");

        MatchObjective zero;
        zero.node_sim = [](const Node&, const Node&) { return 0.0; };
        zero.link_sim = [](const Link&, const Link&) { return 0.0; };
        const auto [res0, value0] = exact_match_oracle(inst, schema, zero);
        CHECK(value0 == 0.0);
        CHECK(res0.assignment.empty());  // the empty assignment is acceptable

        std::vector<Node> big;
        for (int k = 0; k < 9; ++k)
            big.push_back({"e" + std::to_string(k), NodeKind::event, "T", ""});
        const EventGraph big_g("big", GraphRole::instance, big, {});
        CHECK_THROWS_AS(exact_match_oracle(big_g, schema, obj), ValidationError);
    }

    TEST_CASE("oracle agrees with the heuristic on a 4x4 fixture with link terms") {
        // Chain instances against a chain schema: type matches force the
        // unique optimum, and the temporal link term rewards the alignment.
        const EventGraph schema = fixtures::chain_schema(4);
        std::vector<Node> nodes{{"t0:0", NodeKind::event, "T0", ""},
                                {"t1:0", NodeKind::event, "T1", ""},
                                {"t2:0", NodeKind::event, "T2", ""},
                                {"t3:0", NodeKind::event, "T3", ""}};
        std::vector<Link> links{{"t0:0", "t1:0", LinkKind::temporal, kTemporalType},
                                {"t1:0", "t2:0", LinkKind::temporal, kTemporalType},
                                {"t2:0", "t3:0", LinkKind::temporal, kTemporalType}};
        const EventGraph inst("chain-i", GraphRole::instance, nodes, links);
        const MatchObjective obj = MatchObjective::type_and_temporal();
        const auto [oracle_res, oracle_value] = exact_match_oracle(inst, schema, obj);
        const MatchResult heur = match(inst, schema, 0);
        CHECK(objective_value(inst, schema, heur.assignment, obj) ==
              doctest::Approx(oracle_value));
        CHECK(oracle_value == doctest::Approx(4.0 + 3.0));  // 4 node terms + 3 aligned links
    }

    TEST_CASE("properties: stage-1 equality, type safety, oracle equivalence, determinism") {
        auto st = props::match_stage1_and_types(21, 60);
        CHECK_MESSAGE(st.ok(), st.first_failure);
        auto eq = props::match_oracle_equivalence(22, 60);
        CHECK_MESSAGE(eq.ok(), eq.first_failure);
        auto det = props::match_determinism(23, 30);
        CHECK_MESSAGE(det.ok(), det.first_failure);
    }
}

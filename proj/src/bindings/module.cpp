#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "segc/commands.hpp"
#include "segc/datagen.hpp"
#include "segc/errors.hpp"
#include "segc/eval.hpp"
#include "segc/graph.hpp"
#include "segc/inference.hpp"
#include "segc/matching.hpp"
#include "segc/metrics.hpp"
#include "segc/paths.hpp"
#include "segc/trainer.hpp"

namespace py = pybind11;
using namespace segc;

namespace {

GraphRole role_from_string(const std::string& s) {
    if (s == "schema") return GraphRole::schema;
    if (s == "instance") return GraphRole::instance;
    throw ValidationError("invalid role '" + s + "'");
}

NodeKind node_kind_from_string(const std::string& s) {
    if (s == "event") return NodeKind::event;
    if (s == "entity") return NodeKind::entity;
    throw ValidationError("invalid node kind '" + s + "'");
}

LinkKind link_kind_from_string(const std::string& s) {
    if (s == "temporal") return LinkKind::temporal;
    if (s == "argument") return LinkKind::argument;
    if (s == "relation") return LinkKind::relation;
    throw ValidationError("invalid link kind '" + s + "'");
}

PathConfig make_path_config(int max_len, const std::string& link_kinds) {
    PathConfig cfg;
    cfg.max_len = max_len;
    cfg.link_kinds = link_kinds == "temporal" || link_kinds == "temporal_only"
                         ? PathLinkKinds::temporal_only
                         : PathLinkKinds::all;
    return cfg;
}

GenConfig make_gen_config(int n_event_types, int n_entity_types, int n_schema_events,
                          int n_schema_entities, double temporal_density, double argument_density,
                          int n_instances, double instance_coverage, double dropout,
                          const std::string& plant, std::uint64_t seed) {
    GenConfig cfg;
    cfg.n_event_types = n_event_types;
    cfg.n_entity_types = n_entity_types;
    cfg.n_schema_events = n_schema_events;
    cfg.n_schema_entities = n_schema_entities;
    cfg.temporal_density = temporal_density;
    cfg.argument_density = argument_density;
    cfg.n_instances = n_instances;
    cfg.instance_coverage = instance_coverage;
    cfg.dropout = dropout;
    cfg.plant = plant_mode_from_string(plant);
    cfg.seed = seed;
    return cfg;
}

ModelConfig make_model_config(const std::string& kind, int layers, int hidden_dim,
                              const std::string& readout, int max_path_len,
                              const std::string& path_links, int mlp_hidden, int baseline_hidden) {
    ModelConfig cfg;
    cfg.kind = model_kind_from_string(kind);
    cfg.gnn.num_layers = layers;
    cfg.gnn.hidden_dim = hidden_dim;
    if (readout == "sum")
        cfg.gnn.readout = Readout::sum;
    else if (readout == "average")
        cfg.gnn.readout = Readout::average;
    else if (readout == "attention")
        cfg.gnn.readout = Readout::attention;
    else
        throw ValidationError("invalid readout '" + readout + "'");
    cfg.path = make_path_config(max_path_len, path_links);
    cfg.mlp_hidden = mlp_hidden;
    cfg.baseline_hidden = baseline_hidden;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "schema-guided event graph completion";

    py::register_exception<ValidationError>(m, "GraphValidationError", PyExc_ValueError);

    py::class_<Node>(m, "Node")
        .def(py::init([](const std::string& id, const std::string& kind, const std::string& type,
                         const std::string& label) {
                 return Node{id, node_kind_from_string(kind), type, label};
             }),
             py::arg("id"), py::arg("kind"), py::arg("type"), py::arg("label") = "")
        .def_readonly("id", &Node::id)
        .def_property_readonly("kind", [](const Node& n) { return to_string(n.kind); })
        .def_readonly("type", &Node::type)
        .def_readonly("label", &Node::label)
        .def("__repr__", [](const Node& n) {
            return "Node(" + n.id + ", " + to_string(n.kind) + ", " + n.type + ")";
        });

    py::class_<Link>(m, "Link")
        .def(py::init([](const std::string& src, const std::string& dst, const std::string& kind,
                         const std::string& type) {
                 return Link{src, dst, link_kind_from_string(kind), type};
             }),
             py::arg("src"), py::arg("dst"), py::arg("kind"), py::arg("type"))
        .def_readonly("src", &Link::src)
        .def_readonly("dst", &Link::dst)
        .def_property_readonly("kind", [](const Link& l) { return to_string(l.kind); })
        .def_readonly("type", &Link::type)
        .def("__repr__", [](const Link& l) {
            return "Link(" + l.src + " -> " + l.dst + ", " + to_string(l.kind) + ", " + l.type + ")";
        });

    py::class_<EventGraph>(m, "EventGraph")
        .def(py::init([](const std::string& graph_id, const std::string& role,
                         std::vector<Node> nodes, std::vector<Link> links) {
                 return EventGraph(graph_id, role_from_string(role), std::move(nodes),
                                   std::move(links));
             }),
             py::arg("graph_id"), py::arg("role"), py::arg("nodes"), py::arg("links"))
        .def_property_readonly("graph_id", &EventGraph::graph_id)
        .def_property_readonly("role", [](const EventGraph& g) { return to_string(g.role()); })
        .def_property_readonly("nodes", &EventGraph::nodes)
        .def_property_readonly("links", &EventGraph::links)
        .def("event_ids", &EventGraph::event_ids)
        .def("entity_ids", &EventGraph::entity_ids)
        .def(
            "neighbors",
            [](const EventGraph& g, const NodeId& id, const std::vector<std::string>& kinds) {
                if (kinds.empty()) return g.neighbors(id);
                std::set<LinkKind> f;
                for (const std::string& k : kinds) f.insert(link_kind_from_string(k));
                return g.neighbors(id, f);
            },
            py::arg("id"), py::arg("kinds") = std::vector<std::string>{})
        .def("to_json", &graph_to_json)
        .def("__repr__", [](const EventGraph& g) {
            std::ostringstream os;
            os << "EventGraph(" << g.graph_id() << ", " << to_string(g.role()) << ", "
               << g.nodes().size() << " nodes, " << g.links().size() << " links)";
            return os.str();
        });

    m.def("load_graph", &load_graph, py::arg("path"));
    m.def("save_graph", &save_graph, py::arg("graph"), py::arg("path"));
    m.def("parse_graph", &parse_graph, py::arg("text"), py::arg("origin") = "<string>");

    py::class_<MatchResult>(m, "MatchResult")
        .def_readonly("assignment", &MatchResult::assignment)
        .def_readonly("matched_subgraph", &MatchResult::matched_subgraph)
        .def_readonly("unmatched", &MatchResult::unmatched)
        .def_readonly("entity_assignment", &MatchResult::entity_assignment)
        .def("to_json", &match_result_to_json);

    m.def("match", &match, py::arg("instance"), py::arg("schema"), py::arg("seed") = 0);
    m.def(
        "jaccard",
        [](const std::set<std::string>& a, const std::set<std::string>& b) { return jaccard(a, b); },
        py::arg("a"), py::arg("b"));

    m.def(
        "enumerate_paths",
        [](const EventGraph& g, const NodeId& s, const NodeId& t, int max_len,
           const std::string& link_kinds) {
            std::set<std::vector<std::string>> out =
                enumerate_paths(g, s, t, make_path_config(max_len, link_kinds));
            std::vector<std::vector<std::string>> v(out.begin(), out.end());
            return v;
        },
        py::arg("graph"), py::arg("source"), py::arg("target"), py::arg("max_len") = 4,
        py::arg("link_kinds") = "all");
    m.def(
        "build_vocabulary",
        [](const EventGraph& schema, int max_len, const std::string& link_kinds) {
            return build_vocabulary(schema, make_path_config(max_len, link_kinds)).paths;
        },
        py::arg("schema"), py::arg("max_len") = 4, py::arg("link_kinds") = "all");
    m.def(
        "bag_of_paths",
        [](const EventGraph& schema, const NodeId& e, const std::set<NodeId>& context, int max_len,
           const std::string& link_kinds) {
            const PathConfig cfg = make_path_config(max_len, link_kinds);
            const PathVocabulary vocab = build_vocabulary(schema, cfg);
            return bag_of_paths(schema, e, context, vocab, cfg).v;
        },
        py::arg("schema"), py::arg("candidate"), py::arg("context"), py::arg("max_len") = 4,
        py::arg("link_kinds") = "all");

    m.def(
        "gen_schema",
        [](int n_event_types, int n_entity_types, int n_schema_events, int n_schema_entities,
           double temporal_density, double argument_density, int n_instances,
           double instance_coverage, double dropout, const std::string& plant,
           std::uint64_t seed) {
            return gen_schema(make_gen_config(n_event_types, n_entity_types, n_schema_events,
                                              n_schema_entities, temporal_density,
                                              argument_density, n_instances, instance_coverage,
                                              dropout, plant, seed));
        },
        py::arg("n_event_types") = 12, py::arg("n_entity_types") = 6,
        py::arg("n_schema_events") = 30, py::arg("n_schema_entities") = 40,
        py::arg("temporal_density") = 0.15, py::arg("argument_density") = 0.08,
        py::arg("n_instances") = 100, py::arg("instance_coverage") = 0.5,
        py::arg("dropout") = 0.1, py::arg("plant") = "none", py::arg("seed") = 0);

    m.def(
        "gen",
        [](const std::string& out, int n_event_types, int n_entity_types, int n_schema_events,
           int n_schema_entities, double temporal_density, double argument_density,
           int n_instances, double instance_coverage, double dropout, const std::string& plant,
           std::uint64_t seed) {
            cmd::GenOptions opt;
            opt.gen = make_gen_config(n_event_types, n_entity_types, n_schema_events,
                                      n_schema_entities, temporal_density, argument_density,
                                      n_instances, instance_coverage, dropout, plant, seed);
            opt.out_dir = out;
            std::ostringstream diag;
            cmd::run_gen(opt, diag);
            return diag.str();
        },
        py::arg("out"), py::arg("n_event_types") = 12, py::arg("n_entity_types") = 6,
        py::arg("n_schema_events") = 30, py::arg("n_schema_entities") = 40,
        py::arg("temporal_density") = 0.15, py::arg("argument_density") = 0.08,
        py::arg("n_instances") = 100, py::arg("instance_coverage") = 0.5,
        py::arg("dropout") = 0.1, py::arg("plant") = "none", py::arg("seed") = 0);

    m.def(
        "perturb_schema",
        [](const EventGraph& schema, double frac, std::uint64_t seed) {
            return perturb_schema(schema, PerturbConfig{frac, seed});
        },
        py::arg("schema"), py::arg("edge_change_frac"), py::arg("seed") = 0);

    m.def(
        "train",
        [](const std::string& data, const std::string& out, const std::string& model_kind,
           int layers, int hidden_dim, const std::string& readout, int max_path_len,
           const std::string& path_links, int mlp_hidden, int baseline_hidden, int epochs,
           int batch_size, double lr, const std::string& balance, int jobs, std::uint64_t seed,
           const std::string& log) {
            cmd::TrainOptions opt;
            opt.data_dir = data;
            opt.out_checkpoint = out;
            opt.out_log = log;
            opt.model = make_model_config(model_kind, layers, hidden_dim, readout, max_path_len,
                                          path_links, mlp_hidden, baseline_hidden);
            opt.train.epochs = epochs;
            opt.train.batch_size = batch_size;
            opt.train.lr = lr;
            opt.train.balance = balance == "none" ? Balance::none : Balance::downsample;
            opt.train.jobs = jobs;
            opt.seed = seed;
            std::ostringstream diag;
            const TrainResult r = cmd::run_train(opt, diag);
            py::dict out_d;
            out_d["log"] = training_log_to_tsv(r);
            out_d["best_epoch"] = r.best_epoch;
            out_d["best_val_auc"] = r.best_val_auc;
            out_d["warnings"] = r.warnings;
            return out_d;
        },
        py::arg("data"), py::arg("out"), py::arg("model_kind") = "combined", py::arg("layers") = 3,
        py::arg("hidden_dim") = 256, py::arg("readout") = "sum", py::arg("max_path_len") = 4,
        py::arg("path_links") = "all", py::arg("mlp_hidden") = 256,
        py::arg("baseline_hidden") = 100, py::arg("epochs") = 20, py::arg("batch_size") = 128,
        py::arg("lr") = 0.005, py::arg("balance") = "downsample", py::arg("jobs") = 1,
        py::arg("seed") = 0, py::arg("log") = "");

    m.def(
        "eval_binary",
        [](const std::string& data, const std::string& scorer, const std::string& model,
           const std::string& split, std::uint64_t seed) {
            cmd::EvalBinaryOptions opt;
            opt.data_dir = data;
            opt.scorer = scorer;
            opt.checkpoint = model;
            opt.split = split;
            opt.seed = seed;
            std::ostringstream diag;
            const BinaryEvalReport r = cmd::run_eval_binary(opt, diag);
            py::dict d;
            d["accuracy"] = r.accuracy;
            d["auc"] = r.auc_defined ? py::cast(r.auc) : py::none();
            d["n_pos"] = r.n_pos;
            d["n_neg"] = r.n_neg;
            return d;
        },
        py::arg("data"), py::arg("scorer") = "model", py::arg("model") = "",
        py::arg("split") = "test", py::arg("seed") = 0);

    m.def(
        "eval_complete",
        [](const std::string& data, const std::string& scorer, const std::string& model,
           const std::string& split, double hide_frac, double threshold, std::uint64_t seed,
           int jobs) {
            cmd::EvalCompleteOptions opt;
            opt.data_dir = data;
            opt.scorer = scorer;
            opt.checkpoint = model;
            opt.split = split;
            opt.hide_frac = hide_frac;
            opt.infer.threshold = threshold;
            opt.seed = seed;
            opt.jobs = jobs;
            std::ostringstream diag;
            const CompletionEvalReport r = cmd::run_eval_complete(opt, diag);
            py::dict d;
            d["mean_jaccard"] = r.mean_jaccard;
            d["mean_f1"] = r.mean_f1;
            d["n_graphs"] = r.per_graph.size();
            return d;
        },
        py::arg("data"), py::arg("scorer") = "model", py::arg("model") = "",
        py::arg("split") = "test", py::arg("hide_frac") = 0.10, py::arg("threshold") = 0.5,
        py::arg("seed") = 0, py::arg("jobs") = 1);

    m.def(
        "complete",
        [](const std::string& graph, const std::string& schema, const std::string& model,
           const std::string& out, double threshold, std::uint64_t seed) {
            cmd::CompleteOptions opt;
            opt.graph_path = graph;
            opt.schema_path = schema;
            opt.checkpoint = model;
            opt.out_path = out;
            opt.infer.threshold = threshold;
            opt.seed = seed;
            std::ostringstream diag;
            const CompletionResult r = cmd::run_complete(opt, diag);
            py::list added;
            for (const AddedEvent& a : r.added_events) {
                py::dict d;
                d["instance_id"] = a.instance_id;
                d["schema_id"] = a.schema_id;
                d["score"] = a.score;
                added.append(d);
            }
            py::dict d;
            d["added_events"] = added;
            d["unmatched_input"] = r.unmatched_input;
            d["completed"] = r.completed;
            return d;
        },
        py::arg("graph"), py::arg("schema"), py::arg("model"), py::arg("out") = "",
        py::arg("threshold") = 0.5, py::arg("seed") = 0);

    m.def(
        "grad_check",
        [](const std::string& schema, int layers, int hidden_dim, int mlp_hidden, int max_path_len,
           double tolerance, std::uint64_t seed) {
            cmd::GradCheckOptions opt;
            opt.schema_path = schema;
            opt.model = make_model_config("combined", layers, hidden_dim, "sum", max_path_len,
                                          "all", mlp_hidden, 100);
            opt.tolerance = tolerance;
            opt.seed = seed;
            std::ostringstream diag;
            const GradCheckReport r = cmd::run_grad_check(opt, diag);
            py::dict d;
            d["passed"] = r.passed();
            d["max_rel_err"] = r.max_rel_err;
            d["checked"] = r.checked;
            d["skipped"] = r.skipped;
            return d;
        },
        py::arg("schema") = "", py::arg("layers") = 2, py::arg("hidden_dim") = 16,
        py::arg("mlp_hidden") = 16, py::arg("max_path_len") = 3, py::arg("tolerance") = 1e-4,
        py::arg("seed") = 0);
}

#include "segc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "segc/errors.hpp"
#include "segc/matching.hpp"
#include "segc/metrics.hpp"
#include "segc/rng.hpp"

namespace segc {

BinaryEvalReport eval_binary(const std::vector<EventGraph>& test_instances,
                             const EventGraph& schema, const ScoreFn& scorer, std::uint64_t seed) {
    BinaryEvalReport report;
    const std::vector<Sample> samples =
        build_samples(test_instances, schema, derive_seed(seed, seed_salt::match), &report.warnings);
    for (const Sample& s : samples) {
        report.scores.push_back(scorer(s.candidate, s.context));
        report.labels.push_back(s.label);
        (s.label ? report.n_pos : report.n_neg) += 1;
    }
    if (report.scores.empty()) throw ValidationError("eval_binary: no test samples");
    report.accuracy = accuracy_at(report.scores, report.labels, 0.5);
    report.auc = auc_with_ties(report.scores, report.labels, &report.auc_defined);
    return report;
}

CompletionEvalReport eval_completion(const std::vector<EventGraph>& test_instances,
                                     const EventGraph& schema, const ScoreFn& scorer,
                                     const InferenceConfig& infer_cfg, double hide_frac,
                                     std::uint64_t seed, int jobs) {
    if (!(hide_frac > 0.0 && hide_frac < 1.0))
        throw ValidationError("eval_completion: hide_frac must lie in (0, 1)");
    if (test_instances.empty()) throw ValidationError("eval_completion: no test graphs");

    // Sort by graph id so aggregation order never depends on input order.
    std::vector<const EventGraph*> graphs;
    for (const EventGraph& g : test_instances) graphs.push_back(&g);
    std::sort(graphs.begin(), graphs.end(),
              [](const EventGraph* a, const EventGraph* b) { return a->graph_id() < b->graph_id(); });

    CompletionEvalReport report;
    report.per_graph.resize(graphs.size());
    std::vector<std::vector<std::string>> warnings(graphs.size());

    auto eval_one = [&](std::size_t gi) {
        const EventGraph& g = *graphs[gi];
        CompletionEvalReport::PerGraph& pg = report.per_graph[gi];
        pg.graph_id = g.graph_id();

        std::vector<NodeId> events = g.event_ids();
        const std::size_t n = events.size();
        if (n == 0) {
            pg.flagged = true;
            warnings[gi].push_back("graph '" + g.graph_id() + "' has no event nodes; scored 0");
            return;
        }
        const std::size_t k = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(hide_frac * static_cast<double>(n))));
        Rng rng(derive_seed(derive_seed(seed, seed_salt::hide), stable_hash(g.graph_id())));
        rng.shuffle(events);
        const std::set<NodeId> hidden(events.begin(), events.begin() + std::min(k, n));

        // Ground truth lives in schema-node space: the matched image of the
        // hidden events under the full graph's matching.
        const MatchResult full_match =
            match(g, schema, derive_seed(seed, stable_hash(g.graph_id())));
        for (const NodeId& h : hidden) {
            auto it = full_match.assignment.find(h);
            if (it != full_match.assignment.end())
                pg.hidden_truth.insert(it->second);
            else
                warnings[gi].push_back("hidden event '" + h + "' of graph '" + g.graph_id() +
                                       "' matches nothing; dropped from the truth set");
        }

        const EventGraph remainder = remove_events(g, hidden);
        const CompletionResult completed =
            complete(remainder, schema, scorer, infer_cfg, derive_seed(seed, stable_hash(g.graph_id())));
        if (completed.unmatched_input) {
            pg.flagged = true;
            warnings[gi].push_back("remainder of graph '" + g.graph_id() +
                                   "' matches nothing; scored 0");
            return;
        }
        for (const NodeId& s : completed.final_subgraph)
            if (!completed.initial_subgraph.count(s)) pg.predicted.insert(s);
        pg.jaccard = set_jaccard(pg.predicted, pg.hidden_truth);
        pg.f1 = set_f1(pg.predicted, pg.hidden_truth);
    };

    if (jobs <= 1 || graphs.size() < 2) {
        for (std::size_t gi = 0; gi < graphs.size(); ++gi) eval_one(gi);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(graphs.size());
        std::size_t next = 0;
        const std::size_t per = (graphs.size() + jobs - 1) / jobs;
        for (; next < graphs.size(); next += per) {
            const std::size_t lo = next, hi = std::min(next + per, graphs.size());
            threads.emplace_back([&, lo, hi]() {
                for (std::size_t gi = lo; gi < hi; ++gi) {
                    try {
                        eval_one(gi);
                    } catch (...) {
                        errors[gi] = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : threads) th.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    double jsum = 0.0, fsum = 0.0;
    for (const auto& pg : report.per_graph) {
        jsum += pg.jaccard;
        fsum += pg.f1;
    }
    report.mean_jaccard = jsum / static_cast<double>(report.per_graph.size());
    report.mean_f1 = fsum / static_cast<double>(report.per_graph.size());
    for (auto& w : warnings)
        for (std::string& msg : w) report.warnings.push_back(std::move(msg));
    return report;
}

ScoreFn add_all_scorer() {
    return [](const NodeId&, const std::set<NodeId>&) { return 1.0; };
}

ScoreFn add_neighbor_scorer(const EventGraph& schema) {
    return [&schema](const NodeId& e, const std::set<NodeId>& context) {
        const std::optional<std::set<LinkKind>> temporal{{LinkKind::temporal}};
        for (const NodeId& n : schema.neighbors(e, temporal))
            if (context.count(n)) return 1.0;
        return 0.0;
    };
}

ScoreFn model_scorer(Model& model, const EventGraph& schema) {
    auto scorer = std::make_shared<Model::Scorer>(model.make_scorer(schema));
    return [scorer](const NodeId& e, const std::set<NodeId>& ctx) { return (*scorer)(e, ctx); };
}

std::string binary_report_to_tsv(const BinaryEvalReport& r) {
    std::ostringstream os;
    os << "metric\tvalue\n";
    os << "accuracy\t" << r.accuracy << "\n";
    os << "auc\t" << (r.auc_defined ? std::to_string(r.auc) : "undefined") << "\n";
    os << "n_pos\t" << r.n_pos << "\n";
    os << "n_neg\t" << r.n_neg << "\n";
    return os.str();
}

std::string binary_report_to_json(const BinaryEvalReport& r) {
    nlohmann::json doc;
    doc["accuracy"] = r.accuracy;
    if (r.auc_defined)
        doc["auc"] = r.auc;
    else
        doc["auc"] = nullptr;
    doc["n_pos"] = r.n_pos;
    doc["n_neg"] = r.n_neg;
    doc["warnings"] = r.warnings;
    return doc.dump(2) + "\n";
}

std::string completion_report_to_tsv(const CompletionEvalReport& r) {
    std::ostringstream os;
    os << "graph_id\tjaccard\tf1\tn_hidden\tn_predicted\tflagged\n";
    for (const auto& pg : r.per_graph)
        os << pg.graph_id << '\t' << pg.jaccard << '\t' << pg.f1 << '\t' << pg.hidden_truth.size()
           << '\t' << pg.predicted.size() << '\t' << (pg.flagged ? 1 : 0) << '\n';
    os << "mean\t" << r.mean_jaccard << '\t' << r.mean_f1 << "\t\t\t\n";
    return os.str();
}

std::string completion_report_to_json(const CompletionEvalReport& r) {
    nlohmann::json doc;
    doc["mean_jaccard"] = r.mean_jaccard;
    doc["mean_f1"] = r.mean_f1;
    doc["per_graph"] = nlohmann::json::array();
    for (const auto& pg : r.per_graph) {
        nlohmann::json j;
        j["graph_id"] = pg.graph_id;
        j["jaccard"] = pg.jaccard;
        j["f1"] = pg.f1;
        j["hidden_truth"] = std::vector<NodeId>(pg.hidden_truth.begin(), pg.hidden_truth.end());
        j["predicted"] = std::vector<NodeId>(pg.predicted.begin(), pg.predicted.end());
        j["flagged"] = pg.flagged;
        doc["per_graph"].push_back(std::move(j));
    }
    doc["warnings"] = r.warnings;
    return doc.dump(2) + "\n";
}

std::string score_distribution_tsv(const BinaryEvalReport& r) {
    std::ostringstream os;
    os << "score\tlabel\n";
    for (std::size_t i = 0; i < r.scores.size(); ++i)
        os << r.scores[i] << '\t' << r.labels[i] << '\n';
    return os.str();
}

}  // namespace segc

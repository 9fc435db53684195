#include "segc/commands.hpp"

#include <filesystem>
#include <fstream>

#include "segc/errors.hpp"
#include "segc/matching.hpp"
#include "segc/metrics.hpp"
#include "segc/rng.hpp"

namespace segc::cmd {

namespace fs = std::filesystem;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

EventGraph load_schema_checked(const std::string& path) {
    EventGraph g = load_graph(path);
    if (g.role() != GraphRole::schema)
        throw ValidationError("'" + path + "' does not have role 'schema'");
    return g;
}

ScoreFn make_scorer(const std::string& kind, const std::string& checkpoint,
                    const EventGraph& schema, std::unique_ptr<Model>& model_holder) {
    if (kind == "add-all") return add_all_scorer();
    if (kind == "add-neighbor") return add_neighbor_scorer(schema);
    if (kind == "model") {
        if (checkpoint.empty())
            throw ValidationError("scorer 'model' needs a checkpoint (--model)");
        model_holder = std::make_unique<Model>(Model::load(checkpoint, schema));
        return model_scorer(*model_holder, schema);
    }
    throw ValidationError("unknown scorer '" + kind + "'");
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& diag) {
    for (const std::string& w : warnings) diag << "warning: " << w << "\n";
}

}  // namespace

void run_gen(const GenOptions& opt, std::ostream& diag) {
    if (!opt.perturb_input.empty()) {
        if (opt.perturb_out.empty())
            throw ValidationError("gen: --perturb-out is required with --perturb-input");
        const EventGraph schema = load_schema_checked(opt.perturb_input);
        PerturbConfig pc{opt.perturb_frac, opt.perturb_seed};
        save_graph(perturb_schema(schema, pc), opt.perturb_out);
        diag << "perturbed " << opt.perturb_input << " -> " << opt.perturb_out << "\n";
        return;
    }
    if (opt.out_dir.empty()) throw ValidationError("gen: --out is required");
    const EventGraph schema = gen_schema(opt.gen);
    const std::vector<InstanceTriple> instances = gen_instances(schema, opt.gen);
    write_dataset(opt.out_dir, schema, instances, opt.gen.seed);
    diag << "wrote schema (" << schema.event_count() << " events, "
         << schema.nodes().size() - schema.event_count() << " entities) and " << instances.size()
         << " instances to " << opt.out_dir << "\n";
}

void run_match(const MatchOptions& opt, std::ostream& diag) {
    const EventGraph instance = load_graph(opt.graph_path);
    const EventGraph schema = load_schema_checked(opt.schema_path);
    const MatchResult result = match(instance, schema, opt.seed);
    if (!opt.out_path.empty()) save_match_result(result, opt.out_path);
    diag << "matched " << result.assignment.size() << "/" << instance.event_ids().size()
         << " events onto " << result.matched_subgraph.size() << " schema nodes\n";
}

TrainResult run_train(const TrainOptions& opt, std::ostream& diag) {
    const Dataset ds = load_dataset(opt.data_dir);
    const std::vector<EventGraph> train_graphs = load_split(ds, "train");
    const std::vector<EventGraph> val_graphs =
        opt.use_validation ? load_split(ds, "val") : std::vector<EventGraph>{};
    if (train_graphs.empty()) throw ValidationError("train: dataset has no train split");

    Model model(ds.schema, opt.model, derive_seed(opt.seed, seed_salt::init));
    TrainConfig tc = opt.train;
    tc.seed = opt.seed;
    const TrainResult result = train(model, ds.schema, train_graphs, val_graphs, tc);

    print_warnings(result.warnings, diag);
    diag << training_log_to_tsv(result);
    if (result.best_epoch > 0)
        diag << "best epoch " << result.best_epoch << " (val AUC " << result.best_val_auc << ")\n";
    if (!opt.out_checkpoint.empty()) {
        model.save(opt.out_checkpoint);
        diag << "checkpoint written to " << opt.out_checkpoint << "\n";
    }
    if (!opt.out_log.empty()) write_text(opt.out_log, training_log_to_tsv(result));
    return result;
}

BinaryEvalReport run_eval_binary(const EvalBinaryOptions& opt, std::ostream& diag) {
    const Dataset ds = load_dataset(opt.data_dir);
    const std::vector<EventGraph> graphs = load_split(ds, opt.split);
    if (graphs.empty())
        throw ValidationError("eval-binary: split '" + opt.split + "' is empty");
    std::unique_ptr<Model> model;
    const ScoreFn scorer = make_scorer(opt.scorer, opt.checkpoint, ds.schema, model);
    const BinaryEvalReport report = eval_binary(graphs, ds.schema, scorer, opt.seed);
    print_warnings(report.warnings, diag);
    diag << binary_report_to_tsv(report);
    if (!opt.out_report.empty()) write_text(opt.out_report, binary_report_to_json(report));
    if (!opt.plot_path.empty()) write_text(opt.plot_path, score_distribution_tsv(report));
    return report;
}

CompletionEvalReport run_eval_complete(const EvalCompleteOptions& opt, std::ostream& diag) {
    const Dataset ds = load_dataset(opt.data_dir);
    const std::vector<EventGraph> graphs = load_split(ds, opt.split, /*full=*/true);
    if (graphs.empty())
        throw ValidationError("eval-complete: split '" + opt.split + "' is empty");
    std::unique_ptr<Model> model;
    const ScoreFn scorer = make_scorer(opt.scorer, opt.checkpoint, ds.schema, model);
    const CompletionEvalReport report =
        eval_completion(graphs, ds.schema, scorer, opt.infer, opt.hide_frac, opt.seed, opt.jobs);
    print_warnings(report.warnings, diag);
    diag << completion_report_to_tsv(report);
    if (!opt.out_report.empty()) write_text(opt.out_report, completion_report_to_json(report));
    if (!opt.plot_path.empty()) write_text(opt.plot_path, completion_report_to_tsv(report));
    return report;
}

CompletionResult run_complete(const CompleteOptions& opt, std::ostream& diag) {
    const EventGraph instance = load_graph(opt.graph_path);
    const EventGraph schema = load_schema_checked(opt.schema_path);
    Model model = Model::load(opt.checkpoint, schema);
    const CompletionResult result = complete(instance, schema, model, opt.infer, opt.seed);
    for (const std::string& line : result.log) diag << line << "\n";
    diag << "added " << result.added_events.size() << " events\n";
    if (!opt.out_path.empty()) save_completion(result, opt.out_path);
    return result;
}

EventGraph demo_schema() {
    std::vector<Node> nodes{
        {"assemble", NodeKind::event, "Assemble", ""},
        {"transport", NodeKind::event, "Transport", ""},
        {"detonate", NodeKind::event, "Detonate", ""},
        {"die", NodeKind::event, "Die", ""},
        {"investigate", NodeKind::event, "Investigate", ""},
        {"bomb", NodeKind::entity, "Weapon", ""},
        {"square", NodeKind::entity, "Place", ""},
        {"victim", NodeKind::entity, "Person", ""},
    };
    std::vector<Link> links{
        {"assemble", "transport", LinkKind::temporal, kTemporalType},
        {"transport", "detonate", LinkKind::temporal, kTemporalType},
        {"detonate", "die", LinkKind::temporal, kTemporalType},
        {"detonate", "investigate", LinkKind::temporal, kTemporalType},
        {"assemble", "bomb", LinkKind::argument, "artifact"},
        {"transport", "bomb", LinkKind::argument, "cargo"},
        {"transport", "square", LinkKind::argument, "destination"},
        {"detonate", "square", LinkKind::argument, "place"},
        {"die", "victim", LinkKind::argument, "victim"},
        {"victim", "square", LinkKind::relation, "located_at"},
    };
    return EventGraph("demo-schema", GraphRole::schema, std::move(nodes), std::move(links));
}

GradCheckReport run_grad_check(const GradCheckOptions& opt, std::ostream& diag) {
    const EventGraph schema =
        opt.schema_path.empty() ? demo_schema() : load_schema_checked(opt.schema_path);
    Model model(schema, opt.model, derive_seed(opt.seed, seed_salt::init));

    // One positive and one negative sample over a context of the first events.
    const std::vector<NodeId> events = schema.event_ids();
    if (events.size() < 4)
        throw ValidationError("grad-check: schema needs at least 4 event nodes");
    std::set<NodeId> context(events.begin(), events.begin() + (events.size() - 2));
    Sample pos{events[events.size() - 2], context, 1, "grad-check"};
    Sample neg{events[events.size() - 1], context, 0, "grad-check"};
    const std::vector<Sample> batch{pos, neg};

    const GradCheckReport report = grad_check(
        [&]() { return batch_loss_value(model, schema, batch); }, model.params(), opt.tolerance);
    diag << report.summary() << "\n";
    for (const GradCheckEntry& e : report.skipped_entries)
        diag << "skipped (kink): " << e.param << "[" << e.index << "]\n";
    return report;
}

}  // namespace segc::cmd

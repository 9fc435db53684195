#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "segc/commands.hpp"
#include "segc/errors.hpp"

namespace {

using namespace segc;

void add_config(CLI::App* app) {
    app->set_config("--config", "", "flat key=value configuration file; flags override");
    app->allow_config_extras(false);
}

void add_model_flags(CLI::App* app, cmd::TrainOptions* topt, std::string* kind) {
    app->add_option("--model-kind", *kind,
                    "combined | neighbor | path | id-mlp | type-mlp")
        ->default_val("combined");
    app->add_option("--layers", topt->model.gnn.num_layers, "GNN layers K")->default_val(3);
    app->add_option("--hidden-dim", topt->model.gnn.hidden_dim, "GNN hidden width")
        ->default_val(256);
    std::map<std::string, Readout> readouts{
        {"sum", Readout::sum}, {"average", Readout::average}, {"attention", Readout::attention}};
    app->add_option("--readout", topt->model.gnn.readout, "sum | average | attention")
        ->transform(CLI::CheckedTransformer(readouts, CLI::ignore_case))
        ->default_val("sum");
    app->add_option("--max-path-len", topt->model.path.max_len, "maximum path length L")
        ->default_val(4);
    std::map<std::string, PathLinkKinds> pk{{"all", PathLinkKinds::all},
                                            {"temporal", PathLinkKinds::temporal_only}};
    app->add_option("--path-links", topt->model.path.link_kinds, "all | temporal")
        ->transform(CLI::CheckedTransformer(pk, CLI::ignore_case))
        ->default_val("all");
    app->add_option("--mlp-hidden", topt->model.mlp_hidden, "head MLP hidden width")
        ->default_val(256);
    app->add_option("--baseline-hidden", topt->model.baseline_hidden,
                    "ID/Type-MLP hidden width")
        ->default_val(100);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"schema-guided event graph completion"};
    app.require_subcommand(1);

    // gen
    cmd::GenOptions gen_opt;
    std::string plant = "none";
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset or perturb a schema");
    add_config(gen);
    gen->add_option("--out", gen_opt.out_dir, "output dataset directory");
    gen->add_option("--n-event-types", gen_opt.gen.n_event_types)->default_val(12);
    gen->add_option("--n-entity-types", gen_opt.gen.n_entity_types)->default_val(6);
    gen->add_option("--n-schema-events", gen_opt.gen.n_schema_events)->default_val(30);
    gen->add_option("--n-schema-entities", gen_opt.gen.n_schema_entities)->default_val(40);
    gen->add_option("--temporal-density", gen_opt.gen.temporal_density)->default_val(0.15);
    gen->add_option("--argument-density", gen_opt.gen.argument_density)->default_val(0.08);
    gen->add_option("--n-instances", gen_opt.gen.n_instances)->default_val(100);
    gen->add_option("--instance-coverage", gen_opt.gen.instance_coverage)->default_val(0.5);
    gen->add_option("--dropout", gen_opt.gen.dropout)->default_val(0.1);
    gen->add_option("--plant", plant, "none | distance1 | second-hop")->default_val("none");
    gen->add_option("--seed", gen_opt.gen.seed)->default_val(0);
    gen->add_option("--perturb-input", gen_opt.perturb_input, "schema file to rewire instead");
    gen->add_option("--perturb-frac", gen_opt.perturb_frac)->default_val(0.0);
    gen->add_option("--perturb-seed", gen_opt.perturb_seed)->default_val(0);
    gen->add_option("--perturb-out", gen_opt.perturb_out, "output path for the rewired schema");

    // match
    cmd::MatchOptions match_opt;
    CLI::App* match = app.add_subcommand("match", "map an instance graph onto a schema");
    add_config(match);
    match->add_option("--graph", match_opt.graph_path)->required();
    match->add_option("--schema", match_opt.schema_path)->required();
    match->add_option("--out", match_opt.out_path, "match result file");
    match->add_option("--seed", match_opt.seed)->default_val(0);

    // train
    cmd::TrainOptions train_opt;
    std::string train_kind, balance = "downsample";
    CLI::App* train = app.add_subcommand("train", "train a model on a dataset directory");
    add_config(train);
    train->add_option("--data", train_opt.data_dir, "dataset directory (manifest.json)")->required();
    add_model_flags(train, &train_opt, &train_kind);
    train->add_option("--epochs", train_opt.train.epochs)->default_val(20);
    train->add_option("--batch-size", train_opt.train.batch_size)->default_val(128);
    train->add_option("--lr", train_opt.train.lr)->default_val(0.005);
    train->add_option("--balance", balance, "downsample | none")->default_val("downsample");
    train->add_flag("--no-validation{false}", train_opt.use_validation,
                    "skip best-epoch selection; keep final parameters");
    train->add_option("--jobs", train_opt.train.jobs)->default_val(1);
    train->add_option("--seed", train_opt.seed)->default_val(0);
    train->add_option("--out", train_opt.out_checkpoint, "checkpoint path")->required();
    train->add_option("--log", train_opt.out_log, "training log TSV path");

    // eval-binary
    cmd::EvalBinaryOptions eb_opt;
    CLI::App* eb = app.add_subcommand("eval-binary", "binary classification protocol");
    add_config(eb);
    eb->add_option("--data", eb_opt.data_dir)->required();
    eb->add_option("--split", eb_opt.split)->default_val("test");
    eb->add_option("--scorer", eb_opt.scorer, "model | add-all | add-neighbor")->default_val("model");
    eb->add_option("--model", eb_opt.checkpoint, "checkpoint (scorer = model)");
    eb->add_option("--out", eb_opt.out_report, "JSON report path");
    eb->add_option("--plot", eb_opt.plot_path, "score-distribution TSV path");
    eb->add_option("--seed", eb_opt.seed)->default_val(0);

    // eval-complete
    cmd::EvalCompleteOptions ec_opt;
    CLI::App* ec = app.add_subcommand("eval-complete", "hide-and-predict completion protocol");
    add_config(ec);
    ec->add_option("--data", ec_opt.data_dir)->required();
    ec->add_option("--split", ec_opt.split)->default_val("test");
    ec->add_option("--scorer", ec_opt.scorer, "model | add-all | add-neighbor")->default_val("model");
    ec->add_option("--model", ec_opt.checkpoint, "checkpoint (scorer = model)");
    ec->add_option("--hide-frac", ec_opt.hide_frac)->default_val(0.10);
    ec->add_option("--threshold", ec_opt.infer.threshold)->default_val(0.5);
    ec->add_option("--max-additions", ec_opt.infer.max_additions)->default_val(-1);
    ec->add_option("--jobs", ec_opt.jobs)->default_val(1);
    ec->add_option("--out", ec_opt.out_report, "JSON report path");
    ec->add_option("--plot", ec_opt.plot_path, "per-graph metric TSV path");
    ec->add_option("--seed", ec_opt.seed)->default_val(0);

    // complete
    cmd::CompleteOptions co_opt;
    CLI::App* co = app.add_subcommand("complete", "complete one instance graph");
    add_config(co);
    co->add_option("--graph", co_opt.graph_path)->required();
    co->add_option("--schema", co_opt.schema_path)->required();
    co->add_option("--model", co_opt.checkpoint)->required();
    co->add_option("--threshold", co_opt.infer.threshold)->default_val(0.5);
    co->add_option("--max-additions", co_opt.infer.max_additions)->default_val(-1);
    co->add_option("--out", co_opt.out_path, "completed graph path (sidecar written next to it)");
    co->add_option("--seed", co_opt.seed)->default_val(0);

    // grad-check
    cmd::GradCheckOptions gc_opt;
    cmd::TrainOptions gc_model_holder;  // reuse the model flag block
    std::string gc_kind;
    CLI::App* gc = app.add_subcommand("grad-check", "compare gradients to finite differences");
    add_config(gc);
    gc->add_option("--schema", gc_opt.schema_path, "schema file (default: built-in fixture)");
    add_model_flags(gc, &gc_model_holder, &gc_kind);
    gc->add_option("--tolerance", gc_opt.tolerance)->default_val(1e-4);
    gc->add_option("--seed", gc_opt.seed)->default_val(0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (gen->parsed()) {
            gen_opt.gen.plant = segc::plant_mode_from_string(plant);
            cmd::run_gen(gen_opt, std::cerr);
        } else if (match->parsed()) {
            cmd::run_match(match_opt, std::cerr);
        } else if (train->parsed()) {
            train_opt.model.kind = model_kind_from_string(train_kind);
            train_opt.train.balance =
                balance == "none" ? Balance::none
                : balance == "downsample"
                    ? Balance::downsample
                    : throw ValidationError("unknown balance mode '" + balance + "'");
            cmd::run_train(train_opt, std::cerr);
        } else if (eb->parsed()) {
            cmd::run_eval_binary(eb_opt, std::cout);
        } else if (ec->parsed()) {
            cmd::run_eval_complete(ec_opt, std::cout);
        } else if (co->parsed()) {
            cmd::run_complete(co_opt, std::cerr);
        } else if (gc->parsed()) {
            gc_opt.model = gc_model_holder.model;
            gc_opt.model.kind = model_kind_from_string(gc_kind);
            const GradCheckReport report = cmd::run_grad_check(gc_opt, std::cout);
            return report.passed() ? 0 : 1;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

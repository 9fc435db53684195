#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "segc/datagen.hpp"
#include "segc/eval.hpp"
#include "segc/inference.hpp"
#include "segc/params.hpp"
#include "segc/trainer.hpp"

namespace segc::cmd {

// Subcommand entry points shared by the command-line tool, the python
// bindings, and the acceptance suite. All of them throw on bad input; the CLI
// maps ValidationError to exit code 1 and anything else to 2.

struct GenOptions {
    GenConfig gen;
    std::string out_dir;
    // When perturb_input is set, rewire that schema instead of generating a
    // dataset.
    std::string perturb_input;
    double perturb_frac = 0.0;
    std::uint64_t perturb_seed = 0;
    std::string perturb_out;
};

void run_gen(const GenOptions& opt, std::ostream& diag);

struct MatchOptions {
    std::string graph_path;
    std::string schema_path;
    std::string out_path;
    std::uint64_t seed = 0;
};

void run_match(const MatchOptions& opt, std::ostream& diag);

struct TrainOptions {
    std::string data_dir;
    ModelConfig model;
    TrainConfig train;          // train.seed is ignored; the global seed rules
    std::uint64_t seed = 0;
    bool use_validation = true;  // false: keep final-epoch parameters
    std::string out_checkpoint;
    std::string out_log;        // optional TSV; empty = stdout only
};

TrainResult run_train(const TrainOptions& opt, std::ostream& diag);

struct EvalBinaryOptions {
    std::string data_dir;
    std::string split = "test";
    std::string scorer = "model";  // "model" | "add-all" | "add-neighbor"
    std::string checkpoint;        // required for scorer = "model"
    std::string out_report;        // optional JSON
    std::string plot_path;         // optional score-distribution TSV
    std::uint64_t seed = 0;
};

BinaryEvalReport run_eval_binary(const EvalBinaryOptions& opt, std::ostream& diag);

struct EvalCompleteOptions {
    std::string data_dir;
    std::string split = "test";
    std::string scorer = "model";
    std::string checkpoint;
    double hide_frac = 0.10;
    InferenceConfig infer;
    std::string out_report;
    std::string plot_path;  // optional per-graph metric TSV
    std::uint64_t seed = 0;
    int jobs = 1;
};

CompletionEvalReport run_eval_complete(const EvalCompleteOptions& opt, std::ostream& diag);

struct CompleteOptions {
    std::string graph_path;
    std::string schema_path;
    std::string checkpoint;
    InferenceConfig infer;
    std::string out_path;
    std::uint64_t seed = 0;
};

CompletionResult run_complete(const CompleteOptions& opt, std::ostream& diag);

struct GradCheckOptions {
    std::string schema_path;  // empty = built-in demo schema
    ModelConfig model;        // kind is forced to combined unless overridden
    double tolerance = 1e-4;
    std::uint64_t seed = 0;
};

GradCheckReport run_grad_check(const GradCheckOptions& opt, std::ostream& diag);

// Small fixed schema used by grad-check when no schema file is given.
EventGraph demo_schema();

}  // namespace segc::cmd

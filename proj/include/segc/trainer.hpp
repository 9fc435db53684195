#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "segc/graph.hpp"
#include "segc/matching.hpp"
#include "segc/neighbor_model.hpp"
#include "segc/params.hpp"
#include "segc/paths.hpp"

namespace segc {

// Self-supervised training: match each instance onto the schema, mask each
// matched event out of its subgraph as a positive sample, and treat every
// schema event outside the subgraph as a negative sample.

struct Sample {
    NodeId candidate;            // schema event
    std::set<NodeId> context;    // schema events given to the model
    int label = 0;               // 1 = masked-out member, 0 = outside event
    std::string source_graph_id;

    bool operator==(const Sample&) const = default;
};

enum class Balance { none, downsample };

struct TrainConfig {
    int epochs = 20;
    int batch_size = 128;
    double lr = 0.005;
    Balance balance = Balance::downsample;
    std::uint64_t seed = 0;
    int jobs = 1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    void validate() const;
};

std::vector<Sample> build_samples(const std::vector<EventGraph>& instances,
                                  const EventGraph& schema, std::uint64_t seed,
                                  std::vector<std::string>* warnings = nullptr);

// Keeps min(|pos|, |neg|) samples of each class (seeded choice from the larger
// class); sample contents and relative order are untouched.
std::vector<Sample> downsample_balance(std::vector<Sample> samples, std::uint64_t seed);

enum class ModelKind { combined, neighbor_only, path_only, id_mlp, type_mlp };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

struct ModelConfig {
    ModelKind kind = ModelKind::combined;
    GnnConfig gnn;
    PathConfig path;
    int mlp_hidden = 256;       // hidden width of the neighbor/path heads
    int baseline_hidden = 100;  // hidden width of the ID/Type-MLP baselines
};

// A scoring model bound to one schema's vocabularies. Combined models average
// the neighbor and path module probabilities; the *_only kinds are the
// single-module ablations; id_mlp/type_mlp are the shallow baselines trained
// through the same loop.
class Model {
public:
    Model(const EventGraph& schema, ModelConfig cfg, std::uint64_t init_seed);

    const ModelConfig& config() const { return cfg_; }
    ParamStore& params() { return store_; }
    const ParamStore& params() const { return store_; }
    const std::string& schema_id() const { return schema_id_; }
    const TypeVocabulary& type_vocab() const { return type_vocab_; }
    const PathVocabulary& path_vocab() const { return path_vocab_; }

    bool uses_gnn() const;
    bool uses_paths() const;

    // Probability that candidate is missing for the context subgraph.
    // Rebuilds the schema encoding per call; use Scorer for repeated queries.
    double score(const EventGraph& schema, const NodeId& candidate,
                 const std::set<NodeId>& context);

    void save(const std::string& path) const;
    static Model load(const std::string& path, const EventGraph& schema);

    // Frozen view over one parameter state: schema encoding and path index are
    // computed once, queries are then pure and cheap.
    class Scorer {
    public:
        Scorer(Model& model, const EventGraph& schema);
        double operator()(const NodeId& candidate, const std::set<NodeId>& context) const;

    private:
        Model* model_;
        const EventGraph* schema_;
        std::shared_ptr<SchemaEncoding> enc_;
        std::shared_ptr<PathIndex> paths_;
        friend class Model;
    };

    Scorer make_scorer(const EventGraph& schema);

    // Input vector of the ID/Type-MLP baselines for one (candidate, context).
    Tensor baseline_input(const NodeId& candidate, const std::set<NodeId>& context,
                          const EventGraph& schema) const;

private:
    ModelConfig cfg_;
    std::string schema_id_;
    ParamStore store_;
    TypeVocabulary type_vocab_;          // gnn kinds
    PathVocabulary path_vocab_;          // path kinds
    std::vector<NodeId> schema_events_;  // id_mlp input space
    std::vector<std::string> event_types_;  // type_mlp input space

    void init_params(std::uint64_t init_seed);

    friend struct ModelIo;
};

// Mean binary cross-entropy of the model over a batch. Errors with the
// offending sample if a per-sample loss is non-finite.
double batch_loss(Model& model, const EventGraph& schema, const std::vector<Sample>& batch);

// Differentiable variant; rebuilds the whole forward expression (used by the
// gradient checker).
ad::Value batch_loss_value(Model& model, const EventGraph& schema,
                           const std::vector<Sample>& batch);

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double val_auc = 0.0;
    bool val_defined = false;
};

struct TrainResult {
    std::vector<EpochLog> log;
    int best_epoch = -1;  // -1 when no validation set was given
    double best_val_auc = 0.0;
    std::vector<std::string> warnings;
};

// Runs the optimization loop. With a validation set, the returned model holds
// the parameters of the epoch with maximal validation AUC (earlier epoch wins
// ties); otherwise the final parameters.
TrainResult train(Model& model, const EventGraph& schema,
                  const std::vector<EventGraph>& train_instances,
                  const std::vector<EventGraph>& val_instances, const TrainConfig& cfg);

// Scores a list of samples under the model's current parameters.
std::vector<double> score_samples(Model& model, const EventGraph& schema,
                                  const std::vector<Sample>& samples, int jobs = 1);

std::string training_log_to_tsv(const TrainResult& r);

}  // namespace segc

#include "segc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "segc/errors.hpp"
#include "segc/metrics.hpp"
#include "segc/rng.hpp"

namespace segc {

void TrainConfig::validate() const {
    if (epochs < 1) throw ValidationError("train config: epochs must be >= 1");
    if (batch_size < 1) throw ValidationError("train config: batch_size must be >= 1");
    if (lr < 0.0) throw ValidationError("train config: lr must be >= 0");
    if (jobs < 1) throw ValidationError("train config: jobs must be >= 1");
}

std::vector<Sample> build_samples(const std::vector<EventGraph>& instances,
                                  const EventGraph& schema, std::uint64_t seed,
                                  std::vector<std::string>* warnings) {
    const std::vector<NodeId> schema_events = schema.event_ids();
    std::vector<Sample> out;
    for (const EventGraph& inst : instances) {
        const MatchResult m =
            match(inst, schema, derive_seed(seed, stable_hash(inst.graph_id())));
        const std::set<NodeId>& img = m.matched_subgraph;
        if (img.empty()) {
            if (warnings)
                warnings->push_back("instance '" + inst.graph_id() +
                                    "' matches nothing in the schema; skipped");
            continue;
        }
        if (img.size() >= 2) {
            for (const NodeId& e : img) {
                Sample s;
                s.candidate = e;
                s.context = img;
                s.context.erase(e);
                s.label = 1;
                s.source_graph_id = inst.graph_id();
                out.push_back(std::move(s));
            }
        } else if (warnings) {
            warnings->push_back("instance '" + inst.graph_id() +
                                "' maps to a single schema event; emitting negatives only");
        }
        for (const NodeId& e : schema_events) {
            if (img.count(e)) continue;
            Sample s;
            s.candidate = e;
            s.context = img;
            s.label = 0;
            s.source_graph_id = inst.graph_id();
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<Sample> downsample_balance(std::vector<Sample> samples, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < samples.size(); ++i)
        (samples[i].label ? pos : neg).push_back(i);
    const std::size_t keep = std::min(pos.size(), neg.size());
    std::vector<std::size_t>& larger = pos.size() > neg.size() ? pos : neg;
    Rng rng(seed);
    rng.shuffle(larger);
    larger.resize(keep);

    std::vector<char> kept(samples.size(), 0);
    for (std::size_t i : pos) kept[i] = 1;
    for (std::size_t i : neg) kept[i] = 1;
    std::vector<Sample> out;
    out.reserve(2 * keep);
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (kept[i]) out.push_back(std::move(samples[i]));
    return out;
}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::combined: return "combined";
        case ModelKind::neighbor_only: return "neighbor";
        case ModelKind::path_only: return "path";
        case ModelKind::id_mlp: return "id-mlp";
        case ModelKind::type_mlp: return "type-mlp";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "combined") return ModelKind::combined;
    if (s == "neighbor") return ModelKind::neighbor_only;
    if (s == "path") return ModelKind::path_only;
    if (s == "id-mlp") return ModelKind::id_mlp;
    if (s == "type-mlp") return ModelKind::type_mlp;
    throw ValidationError("unknown model kind '" + s + "'");
}

bool Model::uses_gnn() const {
    return cfg_.kind == ModelKind::combined || cfg_.kind == ModelKind::neighbor_only;
}

bool Model::uses_paths() const {
    return cfg_.kind == ModelKind::combined || cfg_.kind == ModelKind::path_only;
}

Model::Model(const EventGraph& schema, ModelConfig cfg, std::uint64_t init_seed)
    : cfg_(cfg), schema_id_(schema.graph_id()) {
    if (schema.role() != GraphRole::schema)
        throw ValidationError("model requires a schema graph");
    cfg_.gnn.validate();
    cfg_.path.validate();
    if (cfg_.mlp_hidden < 1 || cfg_.baseline_hidden < 1)
        throw ValidationError("model config: hidden widths must be >= 1");

    if (uses_gnn()) type_vocab_ = TypeVocabulary::from_graph(schema);
    if (uses_paths()) path_vocab_ = build_vocabulary(schema, cfg_.path);
    if (cfg_.kind == ModelKind::id_mlp) schema_events_ = schema.event_ids();
    if (cfg_.kind == ModelKind::type_mlp) {
        std::set<std::string> types;
        for (const Node& n : schema.nodes())
            if (n.kind == NodeKind::event) types.insert(n.type);
        event_types_.assign(types.begin(), types.end());
    }
    init_params(init_seed);
}

void Model::init_params(std::uint64_t init_seed) {
    Rng rng(init_seed);
    switch (cfg_.kind) {
        case ModelKind::combined:
            init_gnn(store_, type_vocab_.size(), cfg_.gnn, rng);
            init_neighbor_mlp(store_, cfg_.gnn.hidden_dim, cfg_.mlp_hidden, rng);
            init_path_mlp(store_, path_vocab_.size(), cfg_.mlp_hidden, rng);
            break;
        case ModelKind::neighbor_only:
            init_gnn(store_, type_vocab_.size(), cfg_.gnn, rng);
            init_neighbor_mlp(store_, cfg_.gnn.hidden_dim, cfg_.mlp_hidden, rng);
            break;
        case ModelKind::path_only:
            init_path_mlp(store_, path_vocab_.size(), cfg_.mlp_hidden, rng);
            break;
        case ModelKind::id_mlp:
            glorot_init(store_, "baseline.w1", 2 * static_cast<int>(schema_events_.size()),
                        cfg_.baseline_hidden, rng);
            store_.create("baseline.b1", 1, cfg_.baseline_hidden);
            glorot_init(store_, "baseline.w2", cfg_.baseline_hidden, 1, rng);
            store_.create("baseline.b2", 1, 1);
            break;
        case ModelKind::type_mlp:
            glorot_init(store_, "baseline.w1", 2 * static_cast<int>(event_types_.size()),
                        cfg_.baseline_hidden, rng);
            store_.create("baseline.b1", 1, cfg_.baseline_hidden);
            glorot_init(store_, "baseline.w2", cfg_.baseline_hidden, 1, rng);
            store_.create("baseline.b2", 1, 1);
            break;
    }
}

Tensor Model::baseline_input(const NodeId& candidate, const std::set<NodeId>& context,
                             const EventGraph& schema) const {
    if (cfg_.kind == ModelKind::id_mlp) {
        const int n = static_cast<int>(schema_events_.size());
        Tensor x(1, 2 * n);
        auto pos = [&](const NodeId& id) {
            auto it = std::lower_bound(schema_events_.begin(), schema_events_.end(), id);
            if (it == schema_events_.end() || *it != id)
                throw ValidationError("id-mlp: node '" + id + "' is not a schema event");
            return static_cast<int>(it - schema_events_.begin());
        };
        x.v[pos(candidate)] = 1.0;
        for (const NodeId& c : context) x.v[n + pos(c)] = 1.0;
        return x;
    }
    const int t = static_cast<int>(event_types_.size());
    Tensor x(1, 2 * t);
    auto pos = [&](const NodeId& id) {
        const std::string& ty = schema.node(id).type;
        auto it = std::lower_bound(event_types_.begin(), event_types_.end(), ty);
        if (it == event_types_.end() || *it != ty)
            throw ValidationError("type-mlp: unknown event type '" + ty + "'");
        return static_cast<int>(it - event_types_.begin());
    };
    x.v[pos(candidate)] = 1.0;
    for (const NodeId& c : context) x.v[t + pos(c)] = 1.0;
    return x;
}

namespace {

ad::Value baseline_forward(const ad::Value& x, ParamStore& store) {
    ad::Value h = ad::relu(
        ad::add_bias(ad::matmul(x, store.use("baseline.w1")), store.use("baseline.b1")));
    return ad::sigmoid(
        ad::add_bias(ad::matmul(h, store.use("baseline.w2")), store.use("baseline.b2")));
}

// Shared per-run precomputation: node order for the readout, the path index,
// and per-sample constant features (path bags / baseline inputs).
struct RunContext {
    Model* model;
    const EventGraph* schema;
    std::map<NodeId, int> node_index;
    std::unique_ptr<PathIndex> paths;

    RunContext(Model& m, const EventGraph& s) : model(&m), schema(&s) {
        if (m.schema_id() != s.graph_id())
            throw ValidationError("model was built for schema '" + m.schema_id() +
                                  "', not '" + s.graph_id() + "'");
        if (m.uses_gnn())
            for (const Node& n : s.nodes())
                node_index.emplace(n.id, static_cast<int>(node_index.size()));
        if (m.uses_paths()) {
            paths = std::make_unique<PathIndex>(s, m.config().path);
            if (!(paths->vocabulary() == m.path_vocab()))
                throw ValidationError(
                    "schema produces a different path vocabulary than the model was built with");
        }
    }

    Tensor feature(const Sample& s) const {
        switch (model->config().kind) {
            case ModelKind::combined:
            case ModelKind::path_only:
                return paths->bag(s.candidate, s.context);
            case ModelKind::id_mlp:
            case ModelKind::type_mlp:
                return model->baseline_input(s.candidate, s.context, *schema);
            case ModelKind::neighbor_only:
                return Tensor();
        }
        return Tensor();
    }

    std::vector<Tensor> features(const std::vector<Sample>& samples) const {
        std::vector<Tensor> out;
        out.reserve(samples.size());
        for (const Sample& s : samples) out.push_back(feature(s));
        return out;
    }

    // Probability expression for one sample against a given parameter store
    // (the store the shared encoding was built from).
    ad::Value forward(const Sample& s, const Tensor& feature, const ad::Value& enc,
                      ParamStore& store) const {
        const ModelConfig& cfg = model->config();
        switch (cfg.kind) {
            case ModelKind::combined: {
                ad::Value pn = predict_neighbor_value(enc, node_index, s.candidate, s.context,
                                                      store, cfg.gnn);
                ad::Value pp = predict_path_value(ad::constant(feature), store);
                return ad::affine(ad::add(pn, pp), 0.5, 0.0);
            }
            case ModelKind::neighbor_only:
                return predict_neighbor_value(enc, node_index, s.candidate, s.context, store,
                                              cfg.gnn);
            case ModelKind::path_only:
                return predict_path_value(ad::constant(feature), store);
            case ModelKind::id_mlp:
            case ModelKind::type_mlp:
                return baseline_forward(ad::constant(feature), store);
        }
        throw ValidationError("unknown model kind");
    }

    ad::Value encode(ParamStore& store) const {
        if (!model->uses_gnn()) return nullptr;
        return encode_schema_value(*schema, model->type_vocab(), store, model->config().gnn);
    }
};

ad::Value sample_loss(const ad::Value& f, const Sample& s) {
    // label 1: -ln f;  label 0: -ln(1 - f)
    ad::Value p = s.label ? f : ad::affine(f, -1.0, 1.0);
    return ad::affine(ad::log_e(p), -1.0, 0.0);
}

void check_losses_finite(const std::vector<ad::Value>& losses, const std::vector<Sample>& samples,
                         const std::vector<std::size_t>& ids) {
    for (std::size_t k = 0; k < losses.size(); ++k) {
        if (!std::isfinite(losses[k]->val.item())) {
            const Sample& s = samples[ids[k]];
            throw ValidationError("loss: non-finite loss for candidate '" + s.candidate +
                                  "' from graph '" + s.source_graph_id + "'");
        }
    }
}

// Forward/backward for a slice of the batch against one store; returns the
// slice's summed loss.
double run_slice(const RunContext& rc, const std::vector<Sample>& samples,
                 const std::vector<Tensor>& features, const std::vector<std::size_t>& ids,
                 ParamStore& store) {
    ad::Value enc = rc.encode(store);
    std::vector<ad::Value> losses;
    losses.reserve(ids.size());
    for (std::size_t id : ids)
        losses.push_back(sample_loss(rc.forward(samples[id], features[id], enc, store), samples[id]));
    check_losses_finite(losses, samples, ids);
    ad::Value mean = ad::mean_of(losses);
    ad::backward(mean);
    // backward of the mean accumulates grads/|slice|; rescale to a plain sum
    // so slices of different sizes combine exactly.
    const double scale = static_cast<double>(ids.size());
    for (const std::string& name : store.names())
        for (double& gv : store.grad(name).v) gv *= scale;
    return mean->val.item() * scale;
}

std::vector<std::vector<std::size_t>> split_slices(const std::vector<std::size_t>& ids, int jobs) {
    std::vector<std::vector<std::size_t>> slices;
    const std::size_t per = (ids.size() + jobs - 1) / jobs;
    for (std::size_t at = 0; at < ids.size(); at += per)
        slices.emplace_back(ids.begin() + at, ids.begin() + std::min(at + per, ids.size()));
    return slices;
}

// One optimizer step over a batch. Gradients are the exact batch mean; with
// jobs > 1 the per-sample work fans out over cloned stores and is reduced in
// slice order, so results are reproducible for a fixed configuration.
double run_batch(const RunContext& rc, const std::vector<Sample>& samples,
                 const std::vector<Tensor>& features, const std::vector<std::size_t>& batch_ids,
                 const TrainConfig& cfg, const AdamConfig& adam) {
    ParamStore& store = rc.model->params();
    store.zero_grads();
    double loss_sum = 0.0;
    const double inv_n = 1.0 / static_cast<double>(batch_ids.size());

    if (cfg.jobs <= 1 || batch_ids.size() < 2) {
        loss_sum = run_slice(rc, samples, features, batch_ids, store);
        for (const std::string& name : store.names())
            for (double& gv : store.grad(name).v) gv *= inv_n;
    } else {
        const auto slices = split_slices(batch_ids, cfg.jobs);
        std::vector<ParamStore> locals(slices.size(), store);
        std::vector<double> slice_loss(slices.size(), 0.0);
        std::vector<std::exception_ptr> errors(slices.size());
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < slices.size(); ++t) {
            threads.emplace_back([&, t]() {
                try {
                    slice_loss[t] = run_slice(rc, samples, features, slices[t], locals[t]);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : threads) th.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
        for (std::size_t t = 0; t < slices.size(); ++t) {
            loss_sum += slice_loss[t];
            for (const std::string& name : store.names())
                store.grad(name).add_in_place(locals[t].grad(name));
        }
        for (const std::string& name : store.names())
            for (double& gv : store.grad(name).v) gv *= inv_n;
    }

    store.adam_step(adam);
    return loss_sum;
}

std::vector<double> score_with_context(const RunContext& rc, const std::vector<Sample>& samples,
                                       const std::vector<Tensor>& features, int jobs) {
    std::vector<double> scores(samples.size(), 0.0);
    ParamStore& store = rc.model->params();
    ad::Value enc = rc.encode(store);
    auto score_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            scores[i] = rc.forward(samples[i], features[i], enc, store)->val.item();
    };
    if (jobs <= 1 || samples.size() < 2) {
        score_range(0, samples.size());
    } else {
        std::vector<std::thread> threads;
        const std::size_t per = (samples.size() + jobs - 1) / jobs;
        std::vector<std::exception_ptr> errors((samples.size() + per - 1) / per);
        for (std::size_t t = 0, at = 0; at < samples.size(); ++t, at += per) {
            threads.emplace_back([&, t, at]() {
                try {
                    score_range(at, std::min(at + per, samples.size()));
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : threads) th.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }
    return scores;
}

}  // namespace

double Model::score(const EventGraph& schema, const NodeId& candidate,
                    const std::set<NodeId>& context) {
    return make_scorer(schema)(candidate, context);
}

Model::Scorer::Scorer(Model& model, const EventGraph& schema) : model_(&model), schema_(&schema) {
    if (model.schema_id() != schema.graph_id())
        throw ValidationError("model was built for schema '" + model.schema_id() + "', not '" +
                              schema.graph_id() + "'");
    if (model.uses_gnn())
        enc_ = std::make_shared<SchemaEncoding>(
            encode_schema(schema, model.type_vocab(), model.params(), model.config().gnn));
    if (model.uses_paths()) {
        paths_ = std::make_shared<PathIndex>(schema, model.config().path);
        if (!(paths_->vocabulary() == model.path_vocab()))
            throw ValidationError(
                "schema produces a different path vocabulary than the model was built with");
    }
}

double Model::Scorer::operator()(const NodeId& candidate, const std::set<NodeId>& context) const {
    Model& m = *model_;
    switch (m.config().kind) {
        case ModelKind::combined: {
            const double pn =
                predict_neighbor(*enc_, candidate, context, m.params(), m.config().gnn);
            const double pp = predict_path(paths_->bag(candidate, context), m.params());
            return 0.5 * (pn + pp);
        }
        case ModelKind::neighbor_only:
            return predict_neighbor(*enc_, candidate, context, m.params(), m.config().gnn);
        case ModelKind::path_only:
            return predict_path(paths_->bag(candidate, context), m.params());
        case ModelKind::id_mlp:
        case ModelKind::type_mlp:
            return baseline_forward(ad::constant(m.baseline_input(candidate, context, *schema_)),
                                    m.params())
                ->val.item();
    }
    throw ValidationError("unknown model kind");
}

Model::Scorer Model::make_scorer(const EventGraph& schema) { return Scorer(*this, schema); }

ad::Value batch_loss_value(Model& model, const EventGraph& schema,
                           const std::vector<Sample>& batch) {
    if (batch.empty()) throw ValidationError("loss: empty batch");
    RunContext rc(model, schema);
    ParamStore& store = model.params();
    ad::Value enc = rc.encode(store);
    std::vector<ad::Value> losses;
    std::vector<std::size_t> ids(batch.size());
    std::iota(ids.begin(), ids.end(), 0);
    for (std::size_t i = 0; i < batch.size(); ++i)
        losses.push_back(sample_loss(rc.forward(batch[i], rc.feature(batch[i]), enc, store), batch[i]));
    check_losses_finite(losses, batch, ids);
    return ad::mean_of(losses);
}

double batch_loss(Model& model, const EventGraph& schema, const std::vector<Sample>& batch) {
    return batch_loss_value(model, schema, batch)->val.item();
}

std::vector<double> score_samples(Model& model, const EventGraph& schema,
                                  const std::vector<Sample>& samples, int jobs) {
    RunContext rc(model, schema);
    return score_with_context(rc, samples, rc.features(samples), jobs);
}

TrainResult train(Model& model, const EventGraph& schema,
                  const std::vector<EventGraph>& train_instances,
                  const std::vector<EventGraph>& val_instances, const TrainConfig& cfg) {
    cfg.validate();
    TrainResult result;

    std::vector<Sample> samples =
        build_samples(train_instances, schema, derive_seed(cfg.seed, seed_salt::match),
                      &result.warnings);
    if (cfg.balance == Balance::downsample)
        samples = downsample_balance(std::move(samples), derive_seed(cfg.seed, seed_salt::balance));
    if (samples.empty()) throw ValidationError("train: no usable training samples");

    std::vector<Sample> val_samples =
        build_samples(val_instances, schema, derive_seed(cfg.seed, seed_salt::match),
                      &result.warnings);
    std::vector<int> val_labels;
    for (const Sample& s : val_samples) val_labels.push_back(s.label);

    RunContext rc(model, schema);
    const std::vector<Tensor> features = rc.features(samples);
    const std::vector<Tensor> val_features = rc.features(val_samples);

    const AdamConfig adam{cfg.lr, cfg.beta1, cfg.beta2, cfg.eps};
    Rng shuffle_rng(derive_seed(cfg.seed, seed_salt::shuffle));
    ParamStore best_params;

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t at = 0; at < order.size(); at += cfg.batch_size) {
            const std::vector<std::size_t> batch_ids(
                order.begin() + at,
                order.begin() + std::min(at + cfg.batch_size, order.size()));
            loss_sum += run_batch(rc, samples, features, batch_ids, cfg, adam);
        }
        EpochLog el;
        el.epoch = epoch;
        el.train_loss = loss_sum / static_cast<double>(samples.size());
        if (!val_samples.empty()) {
            const std::vector<double> scores =
                score_with_context(rc, val_samples, val_features, cfg.jobs);
            bool defined = false;
            el.val_auc = auc_with_ties(scores, val_labels, &defined);
            el.val_defined = defined;
            if (defined && (result.best_epoch < 0 || el.val_auc > result.best_val_auc)) {
                result.best_epoch = epoch;
                result.best_val_auc = el.val_auc;
                best_params = model.params();
            }
        }
        result.log.push_back(el);
    }

    if (result.best_epoch > 0) model.params() = best_params;
    return result;
}

std::string training_log_to_tsv(const TrainResult& r) {
    std::ostringstream os;
    os << "epoch\ttrain_loss\tval_auc\n";
    for (const EpochLog& el : r.log) {
        os << el.epoch << '\t' << el.train_loss << '\t';
        if (el.val_defined)
            os << el.val_auc;
        else
            os << "nan";
        os << '\n';
    }
    return os.str();
}

}  // namespace segc

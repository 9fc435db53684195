#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "segc/errors.hpp"
#include "segc/trainer.hpp"

namespace segc {

using nlohmann::json;

namespace {

constexpr int kCheckpointVersion = 1;

// Doubles travel as hexfloat strings: exact round-trip, no dependence on the
// JSON library's float formatting.
std::string encode_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%a", x);
    return buf;
}

double decode_double(const std::string& s) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("checkpoint: bad numeric literal '" + s + "'");
    return x;
}

json tensor_data(const Tensor& t) {
    json arr = json::array();
    for (double x : t.v) arr.push_back(encode_double(x));
    return arr;
}

std::vector<double> data_from_json(const json& arr, std::size_t expect, const std::string& what) {
    if (!arr.is_array() || arr.size() != expect)
        throw ParseError("checkpoint: " + what + " has wrong length");
    std::vector<double> out;
    out.reserve(expect);
    for (const json& x : arr) out.push_back(decode_double(x.get<std::string>()));
    return out;
}

std::string readout_name(Readout r) {
    switch (r) {
        case Readout::sum: return "sum";
        case Readout::average: return "average";
        case Readout::attention: return "attention";
    }
    return "?";
}

Readout readout_from_name(const std::string& s) {
    if (s == "sum") return Readout::sum;
    if (s == "average") return Readout::average;
    if (s == "attention") return Readout::attention;
    throw ParseError("checkpoint: unknown readout '" + s + "'");
}

}  // namespace

struct ModelIo {
    static std::string serialize(const Model& m) {
        json doc;
        doc["format"] = "segc-checkpoint";
        doc["version"] = kCheckpointVersion;
        doc["model"] = to_string(m.cfg_.kind);
        doc["schema_id"] = m.schema_id_;
        doc["gnn"] = {{"num_layers", m.cfg_.gnn.num_layers},
                      {"hidden_dim", m.cfg_.gnn.hidden_dim},
                      {"readout", readout_name(m.cfg_.gnn.readout)}};
        doc["path"] = {{"max_len", m.cfg_.path.max_len},
                       {"link_kinds",
                        m.cfg_.path.link_kinds == PathLinkKinds::all ? "all" : "temporal_only"}};
        doc["mlp_hidden"] = m.cfg_.mlp_hidden;
        doc["baseline_hidden"] = m.cfg_.baseline_hidden;
        doc["type_vocab"] = m.type_vocab_.types;
        doc["path_vocab"] = json::array();
        for (const PathType& p : m.path_vocab_.paths) doc["path_vocab"].push_back(p);
        doc["schema_events"] = m.schema_events_;
        doc["event_types"] = m.event_types_;
        doc["step"] = m.store_.step();

        json params = json::object();
        json adam_m = json::object();
        json adam_v = json::object();
        for (const std::string& name : m.store_.names()) {
            const Tensor& t = m.store_.value(name);
            params[name] = {{"rows", t.rows}, {"cols", t.cols}, {"data", tensor_data(t)}};
            adam_m[name] = tensor_data(m.store_.moment1(name));
            adam_v[name] = tensor_data(m.store_.moment2(name));
        }
        doc["params"] = std::move(params);
        doc["adam_m"] = std::move(adam_m);
        doc["adam_v"] = std::move(adam_v);
        return doc.dump() + "\n";
    }

    static Model deserialize(const std::string& text, const EventGraph& schema,
                             const std::string& origin) {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw ParseError(origin + ": malformed checkpoint: " + e.what());
        }
        if (doc.value("format", "") != "segc-checkpoint")
            throw ParseError(origin + ": not a checkpoint file");
        if (doc.value("version", -1) != kCheckpointVersion)
            throw ParseError(origin + ": unsupported checkpoint version");

        ModelConfig cfg;
        cfg.kind = model_kind_from_string(doc.at("model").get<std::string>());
        cfg.gnn.num_layers = doc.at("gnn").at("num_layers").get<int>();
        cfg.gnn.hidden_dim = doc.at("gnn").at("hidden_dim").get<int>();
        cfg.gnn.readout = readout_from_name(doc.at("gnn").at("readout").get<std::string>());
        cfg.path.max_len = doc.at("path").at("max_len").get<int>();
        cfg.path.link_kinds = doc.at("path").at("link_kinds").get<std::string>() == "all"
                                  ? PathLinkKinds::all
                                  : PathLinkKinds::temporal_only;
        cfg.mlp_hidden = doc.at("mlp_hidden").get<int>();
        cfg.baseline_hidden = doc.at("baseline_hidden").get<int>();

        // Rebuilding from the schema recreates every vocabulary; the stored
        // ones must agree or the parameter spaces are incompatible.
        Model m(schema, cfg, 0);
        const auto type_vocab = doc.at("type_vocab").get<std::vector<std::string>>();
        if (type_vocab != m.type_vocab_.types)
            throw ValidationError(origin + ": schema produces a different node-type vocabulary");
        std::vector<PathType> path_vocab;
        for (const json& p : doc.at("path_vocab")) path_vocab.push_back(p.get<PathType>());
        if (path_vocab != m.path_vocab_.paths)
            throw ValidationError(origin + ": schema produces a different path vocabulary");
        if (doc.at("schema_events").get<std::vector<std::string>>() != m.schema_events_)
            throw ValidationError(origin + ": schema has a different event-node set");
        if (doc.at("event_types").get<std::vector<std::string>>() != m.event_types_)
            throw ValidationError(origin + ": schema has a different event-type set");

        const json& params = doc.at("params");
        for (const std::string& name : m.store_.names()) {
            if (!params.contains(name))
                throw ParseError(origin + ": missing parameter '" + name + "'");
            const json& jp = params.at(name);
            Tensor& t = m.store_.value(name);
            if (jp.at("rows").get<int>() != t.rows || jp.at("cols").get<int>() != t.cols)
                throw ParseError(origin + ": parameter '" + name + "' has shape " +
                                 std::to_string(jp.at("rows").get<int>()) + "x" +
                                 std::to_string(jp.at("cols").get<int>()) + ", expected " +
                                 t.shape_str());
            t.v = data_from_json(jp.at("data"), t.size(), "parameter '" + name + "'");
            Tensor mt(t.rows, t.cols,
                      data_from_json(doc.at("adam_m").at(name), t.size(), "adam_m '" + name + "'"));
            Tensor vt(t.rows, t.cols,
                      data_from_json(doc.at("adam_v").at(name), t.size(), "adam_v '" + name + "'"));
            m.store_.set_optimizer_state(name, std::move(mt), std::move(vt));
        }
        if (params.size() != m.store_.names().size())
            throw ParseError(origin + ": checkpoint carries unexpected parameters");
        m.store_.set_step(doc.at("step").get<long>());
        m.schema_id_ = doc.at("schema_id").get<std::string>();
        return m;
    }
};

void Model::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint '" + path + "'");
    out << ModelIo::serialize(*this);
    if (!out) throw IoError("write failed for '" + path + "'");
}

Model Model::load(const std::string& path, const EventGraph& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return ModelIo::deserialize(buf.str(), schema, path);
}

}  // namespace segc

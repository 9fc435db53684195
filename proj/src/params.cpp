#include "segc/params.hpp"

#include <cmath>
#include <sstream>

#include "segc/errors.hpp"

namespace segc {

Tensor& ParamStore::create(const std::string& name, int rows, int cols) {
    if (map_.count(name)) throw ValidationError("parameter '" + name + "' already exists");
    Entry e;
    e.value = Tensor::zeros(rows, cols);
    e.grad = Tensor::zeros(rows, cols);
    e.m = Tensor::zeros(rows, cols);
    e.v = Tensor::zeros(rows, cols);
    return map_.emplace(name, std::move(e)).first->second.value;
}

ParamStore::Entry& ParamStore::at(const std::string& name) {
    auto it = map_.find(name);
    if (it == map_.end()) throw ValidationError("unknown parameter '" + name + "'");
    return it->second;
}

const ParamStore::Entry& ParamStore::at(const std::string& name) const {
    auto it = map_.find(name);
    if (it == map_.end()) throw ValidationError("unknown parameter '" + name + "'");
    return it->second;
}

Tensor& ParamStore::value(const std::string& name) { return at(name).value; }
const Tensor& ParamStore::value(const std::string& name) const { return at(name).value; }
Tensor& ParamStore::grad(const std::string& name) { return at(name).grad; }
const Tensor& ParamStore::moment1(const std::string& name) const { return at(name).m; }
const Tensor& ParamStore::moment2(const std::string& name) const { return at(name).v; }

void ParamStore::set_optimizer_state(const std::string& name, Tensor m, Tensor v) {
    Entry& e = at(name);
    require_same_shape(e.value, m, "optimizer state m for '" + name + "'");
    require_same_shape(e.value, v, "optimizer state v for '" + name + "'");
    e.m = std::move(m);
    e.v = std::move(v);
}

std::vector<std::string> ParamStore::names() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : map_) out.push_back(k);
    return out;
}

std::size_t ParamStore::entry_count() const {
    std::size_t n = 0;
    for (const auto& [_, e] : map_) n += e.value.size();
    return n;
}

void ParamStore::zero_grads() {
    for (auto& [_, e] : map_) e.grad.fill(0.0);
}

void ParamStore::adam_step(const AdamConfig& cfg) {
    for (const auto& [name, e] : map_) {
        if (!e.grad.all_finite())
            throw ValidationError("adam_step: non-finite gradient in parameter '" + name + "'");
    }
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step_));
    for (auto& [_, e] : map_) {
        for (std::size_t i = 0; i < e.value.v.size(); ++i) {
            const double gi = e.grad.v[i];
            e.m.v[i] = cfg.beta1 * e.m.v[i] + (1.0 - cfg.beta1) * gi;
            e.v.v[i] = cfg.beta2 * e.v.v[i] + (1.0 - cfg.beta2) * gi * gi;
            const double mhat = e.m.v[i] / bc1;
            const double vhat = e.v.v[i] / bc2;
            e.value.v[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        }
        e.grad.fill(0.0);
    }
}

ad::Value ParamStore::use(const std::string& name) {
    Entry& e = at(name);
    return ad::leaf(e.value, &e.grad);
}

Tensor& glorot_init(ParamStore& store, const std::string& name, int fan_in, int fan_out, Rng& rng) {
    Tensor& t = store.create(name, fan_in, fan_out);
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& x : t.v) x = rng.uniform(-a, a);
    return t;
}

std::string GradCheckReport::summary() const {
    std::ostringstream os;
    os << (passed() ? "PASS" : "FAIL") << ": " << checked << " entries checked, " << skipped
       << " skipped, max relative error " << max_rel_err << " (tolerance " << tolerance << ")";
    if (!failures.empty()) {
        const GradCheckEntry& w = failures.front();
        os << "; worst " << w.param << "[" << w.index << "] analytic " << w.analytic << " numeric "
           << w.numeric;
    }
    return os.str();
}

GradCheckReport grad_check(const std::function<ad::Value()>& build_loss, ParamStore& store,
                           double tolerance, double h) {
    GradCheckReport report;
    report.tolerance = tolerance;

    store.zero_grads();
    ad::Value root = build_loss();
    const double f0 = root->val.item();
    ad::backward(root);
    std::map<std::string, Tensor> analytic;
    for (const std::string& name : store.names()) analytic[name] = store.grad(name);
    store.zero_grads();

    auto eval = [&]() { return build_loss()->val.item(); };

    for (const std::string& name : store.names()) {
        Tensor& value = store.value(name);
        for (std::size_t i = 0; i < value.v.size(); ++i) {
            const double x0 = value.v[i];
            const double step = h * std::max(1.0, std::fabs(x0));
            value.v[i] = x0 + step;
            const double fp = eval();
            value.v[i] = x0 - step;
            const double fm = eval();
            value.v[i] = x0;  // bitwise restore

            const double numeric = (fp - fm) / (2.0 * step);
            const double dplus = (fp - f0) / step;
            const double dminus = (f0 - fm) / step;
            GradCheckEntry entry{name, static_cast<int>(i), analytic[name].v[i], numeric, 0.0};

            // One-sided derivatives disagreeing means the entry sits on a
            // kink; the central difference is meaningless there.
            if (std::fabs(dplus - dminus) >
                1e-3 * std::max({1.0, std::fabs(dplus), std::fabs(dminus)})) {
                ++report.skipped;
                if (report.skipped_entries.size() < 16) report.skipped_entries.push_back(entry);
                continue;
            }

            entry.rel_err = std::fabs(entry.analytic - numeric) /
                            std::max({1.0, std::fabs(entry.analytic), std::fabs(numeric)});
            ++report.checked;
            if (entry.rel_err > report.max_rel_err) report.max_rel_err = entry.rel_err;
            if (entry.rel_err > tolerance) {
                if (report.failures.empty() || entry.rel_err > report.failures.front().rel_err)
                    report.failures.insert(report.failures.begin(), entry);
                else if (report.failures.size() < 16)
                    report.failures.push_back(entry);
            }
        }
    }
    return report;
}

}  // namespace segc

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "segc/autodiff.hpp"
#include "segc/rng.hpp"
#include "segc/tensor.hpp"

namespace segc {

struct AdamConfig {
    double lr = 0.005;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Named learnable tensors with paired gradient accumulators and Adam moment
// buffers. Copyable; a copy is a full snapshot (used for best-epoch restore).
class ParamStore {
public:
    Tensor& create(const std::string& name, int rows, int cols);
    bool has(const std::string& name) const { return map_.count(name) > 0; }
    Tensor& value(const std::string& name);
    const Tensor& value(const std::string& name) const;
    Tensor& grad(const std::string& name);
    const Tensor& moment1(const std::string& name) const;
    const Tensor& moment2(const std::string& name) const;
    void set_optimizer_state(const std::string& name, Tensor m, Tensor v);

    std::vector<std::string> names() const;  // sorted
    std::size_t entry_count() const;

    void zero_grads();
    // Bias-corrected Adam update; zeroes gradients afterwards. A non-finite
    // gradient aborts with the parameter's name.
    void adam_step(const AdamConfig& cfg);

    long step() const { return step_; }
    void set_step(long s) { step_ = s; }

    // Builds a leaf expression bound to this store's gradient buffer.
    ad::Value use(const std::string& name);

private:
    struct Entry {
        Tensor value, grad, m, v;
    };
    std::map<std::string, Entry> map_;
    long step_ = 0;

    Entry& at(const std::string& name);
    const Entry& at(const std::string& name) const;
};

// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)); biases stay zero.
Tensor& glorot_init(ParamStore& store, const std::string& name, int fan_in, int fan_out, Rng& rng);

struct GradCheckEntry {
    std::string param;
    int index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_err = 0.0;
};

struct GradCheckReport {
    double max_rel_err = 0.0;
    int checked = 0;
    int skipped = 0;
    double tolerance = 0.0;
    std::vector<GradCheckEntry> failures;          // entries above tolerance
    std::vector<GradCheckEntry> skipped_entries;   // nondifferentiable points

    bool passed() const { return failures.empty(); }
    std::string summary() const;
};

// Compares reverse-mode gradients against central finite differences for every
// parameter entry. build_loss must rebuild the forward expression from the
// store's current values. Entries sitting on a kink (one-sided differences
// disagree, e.g. relu at exactly 0) are skipped and reported.
GradCheckReport grad_check(const std::function<ad::Value()>& build_loss, ParamStore& store,
                           double tolerance, double h = 1e-5);

}  // namespace segc

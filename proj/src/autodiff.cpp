#include "segc/autodiff.hpp"

#include <cmath>
#include <unordered_set>

#include "segc/errors.hpp"

namespace segc::ad {

namespace {

Value make(Tensor val, std::vector<Value> inputs, std::function<void(Expr&)> backprop) {
    auto node = std::make_shared<Expr>();
    node->val = std::move(val);
    node->inputs = std::move(inputs);
    node->backprop = std::move(backprop);
    for (const Value& in : node->inputs)
        if (in->needs_grad) node->needs_grad = true;
    return node;
}

// Gradient buffer of an input, allocated on first touch.
Tensor& g(const Value& x) {
    if (x->grad.size() == 0) x->grad = Tensor::zeros(x->val.rows, x->val.cols);
    return x->grad;
}

}  // namespace

Value constant(Tensor t) {
    auto node = std::make_shared<Expr>();
    node->val = std::move(t);
    return node;
}

Value leaf(const Tensor& value, Tensor* sink) {
    auto node = std::make_shared<Expr>();
    node->val = value;
    node->grad_sink = sink;
    node->needs_grad = sink != nullptr;
    return node;
}

Value matmul(const Value& a, const Value& b) {
    if (a->val.cols != b->val.rows)
        throw ValidationError("matmul: shape mismatch " + a->val.shape_str() + " x " +
                              b->val.shape_str());
    const int m = a->val.rows, k = a->val.cols, n = b->val.cols;
    Tensor out(m, n);
    for (int i = 0; i < m; ++i)
        for (int p = 0; p < k; ++p) {
            const double av = a->val.at(i, p);
            if (av == 0.0) continue;
            for (int j = 0; j < n; ++j) out.at(i, j) += av * b->val.at(p, j);
        }
    return make(std::move(out), {a, b}, [m, k, n](Expr& e) {
        const Value& a = e.inputs[0];
        const Value& b = e.inputs[1];
        if (a->needs_grad) {
            Tensor& ga = g(a);  // dz * b^T
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    const double dz = e.grad.at(i, j);
                    if (dz == 0.0) continue;
                    for (int p = 0; p < k; ++p) ga.at(i, p) += dz * b->val.at(p, j);
                }
        }
        if (b->needs_grad) {
            Tensor& gb = g(b);  // a^T * dz
            for (int i = 0; i < m; ++i)
                for (int p = 0; p < k; ++p) {
                    const double av = a->val.at(i, p);
                    if (av == 0.0) continue;
                    for (int j = 0; j < n; ++j) gb.at(p, j) += av * e.grad.at(i, j);
                }
        }
    });
}

Value add(const Value& a, const Value& b) {
    require_same_shape(a->val, b->val, "add");
    Tensor out = a->val;
    out.add_in_place(b->val);
    return make(std::move(out), {a, b}, [](Expr& e) {
        for (int s = 0; s < 2; ++s)
            if (e.inputs[s]->needs_grad) g(e.inputs[s]).add_in_place(e.grad);
    });
}

Value add_bias(const Value& m, const Value& bias) {
    if (bias->val.rows != 1 || bias->val.cols != m->val.cols)
        throw ValidationError("add_bias: bias " + bias->val.shape_str() + " does not broadcast over " +
                              m->val.shape_str());
    Tensor out = m->val;
    for (int i = 0; i < out.rows; ++i)
        for (int j = 0; j < out.cols; ++j) out.at(i, j) += bias->val.at(0, j);
    return make(std::move(out), {m, bias}, [](Expr& e) {
        if (e.inputs[0]->needs_grad) g(e.inputs[0]).add_in_place(e.grad);
        if (e.inputs[1]->needs_grad) {
            Tensor& gb = g(e.inputs[1]);
            for (int i = 0; i < e.grad.rows; ++i)
                for (int j = 0; j < e.grad.cols; ++j) gb.at(0, j) += e.grad.at(i, j);
        }
    });
}

Value relu(const Value& x) {
    Tensor out = x->val;
    for (double& v : out.v) v = v > 0.0 ? v : 0.0;
    return make(std::move(out), {x}, [](Expr& e) {
        if (!e.inputs[0]->needs_grad) return;
        Tensor& gx = g(e.inputs[0]);
        for (std::size_t i = 0; i < gx.v.size(); ++i)
            if (e.inputs[0]->val.v[i] > 0.0) gx.v[i] += e.grad.v[i];
    });
}

Value sigmoid(const Value& x) {
    Tensor out = x->val;
    for (double& v : out.v) v = 1.0 / (1.0 + std::exp(-v));
    return make(std::move(out), {x}, [](Expr& e) {
        if (!e.inputs[0]->needs_grad) return;
        Tensor& gx = g(e.inputs[0]);
        for (std::size_t i = 0; i < gx.v.size(); ++i) {
            const double y = e.val.v[i];
            gx.v[i] += e.grad.v[i] * y * (1.0 - y);
        }
    });
}

Value concat(const Value& a, const Value& b) {
    if (a->val.rows != b->val.rows)
        throw ValidationError("concat: row mismatch " + a->val.shape_str() + " vs " +
                              b->val.shape_str());
    const int r = a->val.rows, ca = a->val.cols, cb = b->val.cols;
    Tensor out(r, ca + cb);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < ca; ++j) out.at(i, j) = a->val.at(i, j);
        for (int j = 0; j < cb; ++j) out.at(i, ca + j) = b->val.at(i, j);
    }
    return make(std::move(out), {a, b}, [r, ca, cb](Expr& e) {
        if (e.inputs[0]->needs_grad) {
            Tensor& ga = g(e.inputs[0]);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < ca; ++j) ga.at(i, j) += e.grad.at(i, j);
        }
        if (e.inputs[1]->needs_grad) {
            Tensor& gb = g(e.inputs[1]);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < cb; ++j) gb.at(i, j) += e.grad.at(i, ca + j);
        }
    });
}

Value select_rows(const Value& m, std::vector<int> idx) {
    Tensor out(static_cast<int>(idx.size()), m->val.cols);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= m->val.rows)
            throw ValidationError("select_rows: index " + std::to_string(idx[i]) + " out of range for " +
                                  m->val.shape_str());
        for (int j = 0; j < m->val.cols; ++j) out.at(static_cast<int>(i), j) = m->val.at(idx[i], j);
    }
    return make(std::move(out), {m}, [idx = std::move(idx)](Expr& e) {
        if (!e.inputs[0]->needs_grad) return;
        Tensor& gm = g(e.inputs[0]);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (int j = 0; j < gm.cols; ++j) gm.at(idx[i], j) += e.grad.at(static_cast<int>(i), j);
    });
}

Value weighted_sum(const Value& m, const std::vector<double>& weights) {
    if (static_cast<int>(weights.size()) != m->val.rows)
        throw ValidationError("weighted_sum: " + std::to_string(weights.size()) + " weights for " +
                              m->val.shape_str());
    Tensor out(1, m->val.cols);
    for (int i = 0; i < m->val.rows; ++i)
        for (int j = 0; j < m->val.cols; ++j) out.at(0, j) += weights[i] * m->val.at(i, j);
    return make(std::move(out), {m}, [weights](Expr& e) {
        if (!e.inputs[0]->needs_grad) return;
        Tensor& gm = g(e.inputs[0]);
        for (int i = 0; i < gm.rows; ++i)
            for (int j = 0; j < gm.cols; ++j) gm.at(i, j) += weights[i] * e.grad.at(0, j);
    });
}

Value weighted_sum(const Value& m, const Value& weights) {
    if (weights->val.cols != 1 || weights->val.rows != m->val.rows)
        throw ValidationError("weighted_sum: weights " + weights->val.shape_str() +
                              " do not match rows of " + m->val.shape_str());
    Tensor out(1, m->val.cols);
    for (int i = 0; i < m->val.rows; ++i)
        for (int j = 0; j < m->val.cols; ++j) out.at(0, j) += weights->val.at(i, 0) * m->val.at(i, j);
    return make(std::move(out), {m, weights}, [](Expr& e) {
        const Value& m = e.inputs[0];
        const Value& w = e.inputs[1];
        if (m->needs_grad) {
            Tensor& gm = g(m);
            for (int i = 0; i < gm.rows; ++i)
                for (int j = 0; j < gm.cols; ++j) gm.at(i, j) += w->val.at(i, 0) * e.grad.at(0, j);
        }
        if (w->needs_grad) {
            Tensor& gw = g(w);
            for (int i = 0; i < m->val.rows; ++i) {
                double acc = 0.0;
                for (int j = 0; j < m->val.cols; ++j) acc += e.grad.at(0, j) * m->val.at(i, j);
                gw.at(i, 0) += acc;
            }
        }
    });
}

Value dot(const Value& a, const Value& b) {
    require_same_shape(a->val, b->val, "dot");
    if (a->val.rows != 1) throw ValidationError("dot: expects row vectors, got " + a->val.shape_str());
    double acc = 0.0;
    for (std::size_t i = 0; i < a->val.v.size(); ++i) acc += a->val.v[i] * b->val.v[i];
    return make(Tensor::scalar(acc), {a, b}, [](Expr& e) {
        const double dz = e.grad.v[0];
        if (e.inputs[0]->needs_grad) {
            Tensor& ga = g(e.inputs[0]);
            for (std::size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += dz * e.inputs[1]->val.v[i];
        }
        if (e.inputs[1]->needs_grad) {
            Tensor& gb = g(e.inputs[1]);
            for (std::size_t i = 0; i < gb.v.size(); ++i) gb.v[i] += dz * e.inputs[0]->val.v[i];
        }
    });
}

Value transpose(const Value& a) {
    Tensor out(a->val.cols, a->val.rows);
    for (int i = 0; i < a->val.rows; ++i)
        for (int j = 0; j < a->val.cols; ++j) out.at(j, i) = a->val.at(i, j);
    return make(std::move(out), {a}, [](Expr& e) {
        if (!e.inputs[0]->needs_grad) return;
        Tensor& ga = g(e.inputs[0]);
        for (int i = 0; i < ga.rows; ++i)
            for (int j = 0; j < ga.cols; ++j) ga.at(i, j) += e.grad.at(j, i);
    });
}

Value sum_all(const Value& a) {
    double acc = 0.0;
    for (double x : a->val.v) acc += x;
    return make(Tensor::scalar(acc), {a}, [](Expr& e) {
        if (!e.inputs[0]->needs_grad) return;
        Tensor& ga = g(e.inputs[0]);
        for (double& x : ga.v) x += e.grad.v[0];
    });
}

Value div_scalar(const Value& a, const Value& s) {
    const double sv = s->val.item();
    Tensor out = a->val;
    for (double& x : out.v) x /= sv;
    return make(std::move(out), {a, s}, [sv](Expr& e) {
        if (e.inputs[0]->needs_grad) {
            Tensor& ga = g(e.inputs[0]);
            for (std::size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += e.grad.v[i] / sv;
        }
        if (e.inputs[1]->needs_grad) {
            double acc = 0.0;
            for (std::size_t i = 0; i < e.grad.v.size(); ++i)
                acc -= e.grad.v[i] * e.inputs[0]->val.v[i] / (sv * sv);
            g(e.inputs[1]).v[0] += acc;
        }
    });
}

Value affine(const Value& a, double k, double c) {
    Tensor out = a->val;
    for (double& x : out.v) x = k * x + c;
    return make(std::move(out), {a}, [k](Expr& e) {
        if (!e.inputs[0]->needs_grad) return;
        Tensor& ga = g(e.inputs[0]);
        for (std::size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += k * e.grad.v[i];
    });
}

Value log_e(const Value& a) {
    Tensor out = a->val;
    for (double& x : out.v) x = std::log(x);
    return make(std::move(out), {a}, [](Expr& e) {
        if (!e.inputs[0]->needs_grad) return;
        Tensor& ga = g(e.inputs[0]);
        for (std::size_t i = 0; i < ga.v.size(); ++i) ga.v[i] += e.grad.v[i] / e.inputs[0]->val.v[i];
    });
}

Value mean_of(const std::vector<Value>& xs) {
    if (xs.empty()) throw ValidationError("mean_of: empty input");
    double acc = 0.0;
    for (const Value& x : xs) acc += x->val.item();
    const double inv = 1.0 / static_cast<double>(xs.size());
    return make(Tensor::scalar(acc * inv), xs, [inv](Expr& e) {
        for (const Value& in : e.inputs)
            if (in->needs_grad) g(in).v[0] += inv * e.grad.v[0];
    });
}

void backward(const Value& root) {
    if (!root->val.is_scalar())
        throw ValidationError("backward: root must be scalar, got " + root->val.shape_str());

    // Iterative post-order topological sort over the needs-grad subgraph.
    std::vector<Expr*> order;
    std::unordered_set<Expr*> seen;
    std::vector<std::pair<Expr*, std::size_t>> stack{{root.get(), 0}};
    seen.insert(root.get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->inputs.size()) {
            Expr* child = node->inputs[next++].get();
            if (child->needs_grad && !seen.count(child)) {
                seen.insert(child);
                stack.emplace_back(child, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    root->grad = Tensor::scalar(1.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Expr* node = *it;
        if (node->grad.size() == 0) continue;  // no gradient reached this node
        if (node->backprop) node->backprop(*node);
        if (node->grad_sink) node->grad_sink->add_in_place(node->grad);
    }
    // Release buffers so a reused subgraph starts clean on the next backward.
    for (Expr* node : order)
        if (node != root.get()) node->grad = Tensor();
    root->grad = Tensor();
}

}  // namespace segc::ad

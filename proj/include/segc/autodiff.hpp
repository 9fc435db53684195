#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "segc/tensor.hpp"

namespace segc::ad {

// Tape-free reverse-mode autodiff over Tensor-valued expressions. Each op
// builds an Expr node holding its value, its inputs, and a closure that
// pushes the node's gradient into the inputs. backward() topologically sorts
// the DAG from a scalar root and runs the closures in reverse.
//
// relu uses the subgradient 0 at exactly 0.

class Expr;
using Value = std::shared_ptr<Expr>;

class Expr {
public:
    Tensor val;
    Tensor grad;
    std::vector<Value> inputs;
    std::function<void(Expr&)> backprop;
    Tensor* grad_sink = nullptr;  // leaves accumulate here after backward
    bool needs_grad = false;
};

// Constant: no gradient flows into it.
Value constant(Tensor t);
// Leaf bound to external storage (a parameter); gradient accumulates into
// *sink when backward() finishes. The value is copied at creation time, so a
// later in-place parameter update does not invalidate a live expression.
Value leaf(const Tensor& value, Tensor* sink);

Value matmul(const Value& a, const Value& b);
Value add(const Value& a, const Value& b);
// m (r x c) plus a (1 x c) bias broadcast over rows.
Value add_bias(const Value& m, const Value& bias);
Value relu(const Value& x);
Value sigmoid(const Value& x);
// Horizontal concatenation; both operands must have the same row count.
Value concat(const Value& a, const Value& b);
// Gather rows of m by index.
Value select_rows(const Value& m, std::vector<int> idx);
// Sum of the rows of m (n x d) weighted per row: constant weights or a
// differentiable (n x 1) weight vector. Result is 1 x d.
Value weighted_sum(const Value& m, const std::vector<double>& weights);
Value weighted_sum(const Value& m, const Value& weights);
// Inner product of two 1 x d rows; result is scalar.
Value dot(const Value& a, const Value& b);
Value transpose(const Value& a);
Value sum_all(const Value& a);
// Elementwise a / s for scalar s.
Value div_scalar(const Value& a, const Value& s);
// Elementwise k*a + c.
Value affine(const Value& a, double k, double c);
// Elementwise natural log.
Value log_e(const Value& a);
// Mean of scalar expressions.
Value mean_of(const std::vector<Value>& xs);

// Accumulates d root / d leaf into every leaf's sink. root must be scalar.
void backward(const Value& root);

}  // namespace segc::ad

#include "segc/tensor.hpp"

#include <cmath>

#include "segc/errors.hpp"

namespace segc {

Tensor::Tensor(int r, int c, std::vector<double> data) : rows(r), cols(c), v(std::move(data)) {
    if (v.size() != static_cast<std::size_t>(r) * c)
        throw ValidationError("tensor data length " + std::to_string(v.size()) +
                              " does not match shape " + shape_str());
}

Tensor Tensor::scalar(double x) {
    Tensor t(1, 1);
    t.v[0] = x;
    return t;
}

Tensor Tensor::row(std::vector<double> data) {
    const int n = static_cast<int>(data.size());
    return Tensor(1, n, std::move(data));
}

Tensor Tensor::identity(int n) {
    Tensor t(n, n);
    for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
    return t;
}

std::string Tensor::shape_str() const {
    return "(" + std::to_string(rows) + "x" + std::to_string(cols) + ")";
}

double Tensor::item() const {
    if (!is_scalar()) throw ValidationError("expected scalar tensor, got " + shape_str());
    return v[0];
}

bool Tensor::all_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void Tensor::add_in_place(const Tensor& o) {
    require_same_shape(*this, o, "add_in_place");
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
}

void require_same_shape(const Tensor& a, const Tensor& b, const std::string& op) {
    if (!a.same_shape(b))
        throw ValidationError(op + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
}

}  // namespace segc

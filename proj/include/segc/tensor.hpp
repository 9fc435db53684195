#pragma once

#include <string>
#include <vector>

namespace segc {

// Dense row-major matrix of 64-bit reals. Vectors are 1xN or Nx1 tensors;
// scalars are 1x1.
struct Tensor {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int r, int c) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, 0.0) {}
    Tensor(int r, int c, std::vector<double> data);

    static Tensor zeros(int r, int c) { return Tensor(r, c); }
    static Tensor scalar(double x);
    static Tensor row(std::vector<double> data);
    static Tensor identity(int n);

    double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }

    std::size_t size() const { return v.size(); }
    bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
    std::string shape_str() const;
    bool is_scalar() const { return rows == 1 && cols == 1; }
    double item() const;  // throws unless 1x1

    bool all_finite() const;
    void add_in_place(const Tensor& o);  // shape-checked accumulate
    void fill(double x) { v.assign(v.size(), x); }
};

void require_same_shape(const Tensor& a, const Tensor& b, const std::string& op);

}  // namespace segc

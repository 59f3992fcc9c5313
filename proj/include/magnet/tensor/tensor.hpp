#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "magnet/errors.hpp"
#include "magnet/rng.hpp"

namespace magnet::tensor {

using Shape = std::vector<long>;

inline long numel_of(const Shape& shape) {
    long n = 1;
    for (long d : shape) n *= d;
    return n;
}

inline std::string shape_str(const Shape& shape) {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + ")";
}

/// A named trainable tensor. Lives across tapes; backward() accumulates
/// into `grad`, the optimizer consumes and re-zeroes it.
template <class T>
struct Parameter {
    std::string name;
    Shape shape;
    std::vector<T> value;
    std::vector<T> grad;

    Parameter() = default;
    Parameter(std::string name, Shape shape)
        : name(std::move(name)),
          shape(std::move(shape)),
          value(static_cast<std::size_t>(numel_of(this->shape)), T(0)),
          grad(value.size(), T(0)) {}

    long numel() const { return static_cast<long>(value.size()); }
    void zero_grad() { std::fill(grad.begin(), grad.end(), T(0)); }
};

template <class T>
class Tape;

/// Lightweight handle to a tape node (value + gradient slot).
template <class T>
class Tensor {
public:
    Tensor() = default;

    const Shape& shape() const { return node_->shape; }
    long numel() const { return static_cast<long>(node_->val.size()); }
    const std::vector<T>& value() const { return node_->val; }
    const std::vector<T>& grad() const { return node_->grad; }
    T item() const { return node_->val.at(0); }

    bool valid() const { return node_ != nullptr; }

private:
    friend class Tape<T>;
    typename Tape<T>::Node* node_ = nullptr;
    Tape<T>* tape_ = nullptr;
    Tensor(Tape<T>* tape, typename Tape<T>::Node* node)
        : node_(node), tape_(tape) {}
};

/// Reverse-mode tape. Nodes are recorded in construction order (which is a
/// topological order), and backward() replays them once in reverse.
/// Single-threaded by contract; run independent tapes for parallelism.
template <class T>
class Tape {
public:
    struct Node {
        Shape shape;
        std::vector<T> val;
        std::vector<T> grad;
        std::function<void()> back;  // empty for constants
        Parameter<T>* param = nullptr;
    };

    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Tensor<T> leaf(Parameter<T>& p) {
        Node* n = alloc(p.shape);
        n->val = p.value;
        n->param = &p;
        return Tensor<T>(this, n);
    }

    Tensor<T> constant(Shape shape, std::vector<T> data) {
        if (static_cast<long>(data.size()) != numel_of(shape))
            throw ShapeError("constant: data size " +
                             std::to_string(data.size()) +
                             " does not match shape " + shape_str(shape));
        Node* n = alloc(std::move(shape));
        n->val = std::move(data);
        return Tensor<T>(this, n);
    }

    Tensor<T> zeros(Shape shape) {
        Node* n = alloc(std::move(shape));
        return Tensor<T>(this, n);
    }

    Tensor<T> scalar(T v) { return constant({1}, {v}); }

    /// Populates gradients of every node and parameter reachable from
    /// `loss`. Gradients accumulate into Parameter::grad (callers zero or
    /// let the optimizer zero between steps). Throws NotScalarError unless
    /// loss has exactly one element.
    void backward(const Tensor<T>& loss) {
        if (loss.numel() != 1)
            throw NotScalarError("backward: loss has shape " +
                                 shape_str(loss.shape()));
        for (auto& n : nodes_) std::fill(n.grad.begin(), n.grad.end(), T(0));
        loss.node_->grad[0] = T(1);
        for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
            if (it->back) it->back();
            if (it->param) {
                auto& pg = it->param->grad;
                for (std::size_t i = 0; i < pg.size(); ++i)
                    pg[i] += it->grad[i];
            }
        }
    }

    std::size_t size() const { return nodes_.size(); }

    Node* alloc(Shape shape) {
        nodes_.emplace_back();
        Node* n = &nodes_.back();
        n->shape = std::move(shape);
        n->val.assign(static_cast<std::size_t>(numel_of(n->shape)), T(0));
        n->grad.assign(n->val.size(), T(0));
        return n;
    }

    Tensor<T> wrap(Node* n) { return Tensor<T>(this, n); }
    static Node* node_of(const Tensor<T>& t) { return t.node_; }
    static Tape<T>* tape_of(const Tensor<T>& t) { return t.tape_; }

private:
    std::deque<Node> nodes_;  // deque: stable addresses for closures
};

// ---------------------------------------------------------------------------
// Primitive operations. Each checks shapes, computes the forward value, and
// records a closure implementing the chain rule.
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
void require(bool ok, const std::string& msg) {
    if (!ok) throw ShapeError(msg);
}

}  // namespace detail

/// Matrix product. Supports {n,k}x{k,m}->{n,m}, {n,k}x{k}->{n} and
/// {k}x{k,m}->{m}.
template <class T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    auto* bn = Tape<T>::node_of(b);
    const Shape& sa = an->shape;
    const Shape& sb = bn->shape;

    long n, k, m;
    Shape out_shape;
    if (sa.size() == 2 && sb.size() == 2) {
        n = sa[0]; k = sa[1]; m = sb[1];
        detail::require<T>(sb[0] == k, "matmul: incompatible shapes " +
                                           shape_str(sa) + " x " + shape_str(sb));
        out_shape = {n, m};
    } else if (sa.size() == 2 && sb.size() == 1) {
        n = sa[0]; k = sa[1]; m = 1;
        detail::require<T>(sb[0] == k, "matmul: incompatible shapes " +
                                           shape_str(sa) + " x " + shape_str(sb));
        out_shape = {n};
    } else if (sa.size() == 1 && sb.size() == 2) {
        n = 1; k = sa[0]; m = sb[1];
        detail::require<T>(sb[0] == k, "matmul: incompatible shapes " +
                                           shape_str(sa) + " x " + shape_str(sb));
        out_shape = {m};
    } else {
        throw ShapeError("matmul: unsupported ranks " + shape_str(sa) + " x " +
                         shape_str(sb));
    }

    auto* on = tape->alloc(out_shape);
    const T* A = an->val.data();
    const T* B = bn->val.data();
    T* O = on->val.data();
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < k; ++j) {
            const T aij = A[i * k + j];
            if (aij == T(0)) continue;
            const T* brow = B + j * m;
            T* orow = O + i * m;
            for (long c = 0; c < m; ++c) orow[c] += aij * brow[c];
        }

    on->back = [an, bn, on, n, k, m]() {
        const T* G = on->grad.data();
        const T* A = an->val.data();
        const T* B = bn->val.data();
        T* dA = an->grad.data();
        T* dB = bn->grad.data();
        // dA += G * B^T
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < k; ++j) {
                T acc = T(0);
                const T* grow = G + i * m;
                const T* brow = B + j * m;
                for (long c = 0; c < m; ++c) acc += grow[c] * brow[c];
                dA[i * k + j] += acc;
            }
        // dB += A^T * G
        for (long j = 0; j < k; ++j)
            for (long i = 0; i < n; ++i) {
                const T aij = A[i * k + j];
                if (aij == T(0)) continue;
                const T* grow = G + i * m;
                T* brow = dB + j * m;
                for (long c = 0; c < m; ++c) brow[c] += aij * grow[c];
            }
    };
    return tape->wrap(on);
}

namespace detail {

template <class T, class Fwd, class Bwd>
Tensor<T> binary_elementwise(const Tensor<T>& a, const Tensor<T>& b,
                             const char* name, Fwd fwd, Bwd bwd) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    auto* bn = Tape<T>::node_of(b);
    require<T>(an->shape == bn->shape,
               std::string(name) + ": shape mismatch " + shape_str(an->shape) +
                   " vs " + shape_str(bn->shape));
    auto* on = tape->alloc(an->shape);
    for (std::size_t i = 0; i < on->val.size(); ++i)
        on->val[i] = fwd(an->val[i], bn->val[i]);
    on->back = [an, bn, on, bwd]() {
        for (std::size_t i = 0; i < on->grad.size(); ++i)
            bwd(an->val[i], bn->val[i], on->grad[i], an->grad[i], bn->grad[i]);
    };
    return tape->wrap(on);
}

template <class T, class Fwd, class Bwd>
Tensor<T> unary_elementwise(const Tensor<T>& a, Fwd fwd, Bwd bwd) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    auto* on = tape->alloc(an->shape);
    for (std::size_t i = 0; i < on->val.size(); ++i)
        on->val[i] = fwd(an->val[i]);
    on->back = [an, on, bwd]() {
        for (std::size_t i = 0; i < on->grad.size(); ++i)
            an->grad[i] += bwd(an->val[i], on->val[i]) * on->grad[i];
    };
    return tape->wrap(on);
}

}  // namespace detail

template <class T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
    return detail::binary_elementwise<T>(
        a, b, "add", [](T x, T y) { return x + y; },
        [](T, T, T g, T& dx, T& dy) {
            dx += g;
            dy += g;
        });
}

template <class T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
    return detail::binary_elementwise<T>(
        a, b, "sub", [](T x, T y) { return x - y; },
        [](T, T, T g, T& dx, T& dy) {
            dx += g;
            dy -= g;
        });
}

template <class T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
    return detail::binary_elementwise<T>(
        a, b, "mul", [](T x, T y) { return x * y; },
        [](T x, T y, T g, T& dx, T& dy) {
            dx += g * y;
            dy += g * x;
        });
}

/// Multiply by a scalar tensor (numel 1), broadcast over `a`.
template <class T>
Tensor<T> scale(const Tensor<T>& a, const Tensor<T>& s) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    auto* sn = Tape<T>::node_of(s);
    detail::require<T>(sn->val.size() == 1,
                       "scale: scalar operand has shape " +
                           shape_str(sn->shape));
    auto* on = tape->alloc(an->shape);
    const T sv = sn->val[0];
    for (std::size_t i = 0; i < on->val.size(); ++i)
        on->val[i] = an->val[i] * sv;
    on->back = [an, sn, on]() {
        const T sv = sn->val[0];
        T acc = T(0);
        for (std::size_t i = 0; i < on->grad.size(); ++i) {
            an->grad[i] += on->grad[i] * sv;
            acc += on->grad[i] * an->val[i];
        }
        sn->grad[0] += acc;
    };
    return tape->wrap(on);
}

/// Multiply by a compile-time constant (not differentiated through).
template <class T>
Tensor<T> smul(const Tensor<T>& a, T c) {
    return detail::unary_elementwise<T>(
        a, [c](T x) { return x * c; }, [c](T, T) { return c; });
}

template <class T>
Tensor<T> sigmoid(const Tensor<T>& a) {
    return detail::unary_elementwise<T>(
        a,
        [](T x) {
            if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
            const T e = std::exp(x);
            return e / (T(1) + e);
        },
        [](T, T y) { return y * (T(1) - y); });
}

template <class T>
Tensor<T> tanh_act(const Tensor<T>& a) {
    return detail::unary_elementwise<T>(
        a, [](T x) { return std::tanh(x); },
        [](T, T y) { return T(1) - y * y; });
}

template <class T>
Tensor<T> relu(const Tensor<T>& a) {
    return detail::unary_elementwise<T>(
        a, [](T x) { return x > T(0) ? x : T(0); },
        [](T x, T) { return x > T(0) ? T(1) : T(0); });
}

/// Concatenation along axis 0 (rows / vector append) or axis 1 (columns).
template <class T>
Tensor<T> concat(const std::vector<Tensor<T>>& parts, int axis) {
    detail::require<T>(!parts.empty(), "concat: no operands");
    Tape<T>* tape = Tape<T>::tape_of(parts[0]);
    std::vector<typename Tape<T>::Node*> ins;
    for (const auto& p : parts) ins.push_back(Tape<T>::node_of(p));

    const Shape& s0 = ins[0]->shape;
    Shape out_shape = s0;
    detail::require<T>(axis == 0 || axis == 1, "concat: axis must be 0 or 1");
    detail::require<T>(axis < static_cast<int>(s0.size()),
                       "concat: axis out of range for " + shape_str(s0));
    long axis_total = 0;
    for (auto* in : ins) {
        detail::require<T>(in->shape.size() == s0.size(),
                           "concat: rank mismatch");
        for (std::size_t d = 0; d < s0.size(); ++d)
            if (static_cast<int>(d) != axis)
                detail::require<T>(in->shape[d] == s0[d],
                                   "concat: shape mismatch " +
                                       shape_str(in->shape) + " vs " +
                                       shape_str(s0));
        axis_total += in->shape[axis];
    }
    out_shape[axis] = axis_total;
    auto* on = tape->alloc(out_shape);

    if (axis == 0) {
        std::size_t offset = 0;
        for (auto* in : ins) {
            std::copy(in->val.begin(), in->val.end(), on->val.begin() + offset);
            offset += in->val.size();
        }
        on->back = [ins, on]() {
            std::size_t offset = 0;
            for (auto* in : ins) {
                for (std::size_t i = 0; i < in->grad.size(); ++i)
                    in->grad[i] += on->grad[offset + i];
                offset += in->grad.size();
            }
        };
    } else {
        const long rows = s0[0];
        const long out_cols = out_shape[1];
        long col0 = 0;
        for (auto* in : ins) {
            const long cols = in->shape[1];
            for (long r = 0; r < rows; ++r)
                std::copy(in->val.begin() + r * cols,
                          in->val.begin() + (r + 1) * cols,
                          on->val.begin() + r * out_cols + col0);
            col0 += cols;
        }
        on->back = [ins, on, rows, out_cols]() {
            long col0 = 0;
            for (auto* in : ins) {
                const long cols = in->shape[1];
                for (long r = 0; r < rows; ++r)
                    for (long c = 0; c < cols; ++c)
                        in->grad[r * cols + c] +=
                            on->grad[r * out_cols + col0 + c];
                col0 += cols;
            }
        };
    }
    return tape->wrap(on);
}

/// Column slice [c0, c1) of a matrix, or element slice of a vector.
template <class T>
Tensor<T> slice_cols(const Tensor<T>& a, long c0, long c1) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    const Shape& s = an->shape;
    detail::require<T>(s.size() == 1 || s.size() == 2,
                       "slice_cols: rank must be 1 or 2");
    const long cols = s.back();
    detail::require<T>(0 <= c0 && c0 < c1 && c1 <= cols,
                       "slice_cols: range [" + std::to_string(c0) + "," +
                           std::to_string(c1) + ") out of bounds for " +
                           shape_str(s));
    const long rows = s.size() == 2 ? s[0] : 1;
    const long w = c1 - c0;
    Shape out_shape = s.size() == 2 ? Shape{rows, w} : Shape{w};
    auto* on = tape->alloc(out_shape);
    for (long r = 0; r < rows; ++r)
        std::copy(an->val.begin() + r * cols + c0,
                  an->val.begin() + r * cols + c1, on->val.begin() + r * w);
    on->back = [an, on, rows, cols, c0, w]() {
        for (long r = 0; r < rows; ++r)
            for (long c = 0; c < w; ++c)
                an->grad[r * cols + c0 + c] += on->grad[r * w + c];
    };
    return tape->wrap(on);
}

/// Row gather: out[r] = a[idx[r]]. Duplicate indices accumulate gradient.
template <class T>
Tensor<T> gather_rows(const Tensor<T>& a, std::vector<long> idx) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    detail::require<T>(an->shape.size() == 2, "gather_rows: input must be 2-D");
    const long rows = an->shape[0];
    const long cols = an->shape[1];
    for (long i : idx)
        detail::require<T>(0 <= i && i < rows,
                           "gather_rows: index " + std::to_string(i) +
                               " out of range [0," + std::to_string(rows) + ")");
    auto* on = tape->alloc({static_cast<long>(idx.size()), cols});
    for (std::size_t r = 0; r < idx.size(); ++r)
        std::copy(an->val.begin() + idx[r] * cols,
                  an->val.begin() + (idx[r] + 1) * cols,
                  on->val.begin() + static_cast<long>(r) * cols);
    on->back = [an, on, idx = std::move(idx), cols]() {
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (long c = 0; c < cols; ++c)
                an->grad[idx[r] * cols + c] +=
                    on->grad[static_cast<long>(r) * cols + c];
    };
    return tape->wrap(on);
}

/// Single row of a matrix as a vector.
template <class T>
Tensor<T> row(const Tensor<T>& a, long r) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    detail::require<T>(an->shape.size() == 2, "row: input must be 2-D");
    detail::require<T>(0 <= r && r < an->shape[0],
                       "row: index " + std::to_string(r) + " out of range");
    const long cols = an->shape[1];
    auto* on = tape->alloc({cols});
    std::copy(an->val.begin() + r * cols, an->val.begin() + (r + 1) * cols,
              on->val.begin());
    on->back = [an, on, r, cols]() {
        for (long c = 0; c < cols; ++c)
            an->grad[r * cols + c] += on->grad[c];
    };
    return tape->wrap(on);
}

/// Stacks equal-length vectors into a matrix (one per row).
template <class T>
Tensor<T> stack_rows(const std::vector<Tensor<T>>& rows_in) {
    detail::require<T>(!rows_in.empty(), "stack_rows: no operands");
    Tape<T>* tape = Tape<T>::tape_of(rows_in[0]);
    std::vector<typename Tape<T>::Node*> ins;
    for (const auto& r : rows_in) ins.push_back(Tape<T>::node_of(r));
    const long cols = ins[0]->shape.back();
    for (auto* in : ins)
        detail::require<T>(in->shape.size() == 1 && in->shape[0] == cols,
                           "stack_rows: operands must be vectors of equal "
                           "length");
    auto* on = tape->alloc({static_cast<long>(ins.size()), cols});
    for (std::size_t r = 0; r < ins.size(); ++r)
        std::copy(ins[r]->val.begin(), ins[r]->val.end(),
                  on->val.begin() + static_cast<long>(r) * cols);
    on->back = [ins, on, cols]() {
        for (std::size_t r = 0; r < ins.size(); ++r)
            for (long c = 0; c < cols; ++c)
                ins[r]->grad[c] += on->grad[static_cast<long>(r) * cols + c];
    };
    return tape->wrap(on);
}

/// Broadcast row-vector add: {n,d} + {d}.
template <class T>
Tensor<T> add_rowvec(const Tensor<T>& a, const Tensor<T>& b) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    auto* bn = Tape<T>::node_of(b);
    detail::require<T>(an->shape.size() == 2 && bn->shape.size() == 1 &&
                           an->shape[1] == bn->shape[0],
                       "add_rowvec: shapes " + shape_str(an->shape) + " + " +
                           shape_str(bn->shape));
    const long rows = an->shape[0], cols = an->shape[1];
    auto* on = tape->alloc(an->shape);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c)
            on->val[r * cols + c] = an->val[r * cols + c] + bn->val[c];
    on->back = [an, bn, on, rows, cols]() {
        for (long r = 0; r < rows; ++r)
            for (long c = 0; c < cols; ++c) {
                an->grad[r * cols + c] += on->grad[r * cols + c];
                bn->grad[c] += on->grad[r * cols + c];
            }
    };
    return tape->wrap(on);
}

/// Scales each row of {n,d} by the matching entry of {n}.
template <class T>
Tensor<T> scale_rows(const Tensor<T>& a, const Tensor<T>& w) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    auto* wn = Tape<T>::node_of(w);
    detail::require<T>(an->shape.size() == 2 && wn->shape.size() == 1 &&
                           an->shape[0] == wn->shape[0],
                       "scale_rows: shapes " + shape_str(an->shape) + " * " +
                           shape_str(wn->shape));
    const long rows = an->shape[0], cols = an->shape[1];
    auto* on = tape->alloc(an->shape);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c)
            on->val[r * cols + c] = an->val[r * cols + c] * wn->val[r];
    on->back = [an, wn, on, rows, cols]() {
        for (long r = 0; r < rows; ++r) {
            T acc = T(0);
            for (long c = 0; c < cols; ++c) {
                an->grad[r * cols + c] += on->grad[r * cols + c] * wn->val[r];
                acc += on->grad[r * cols + c] * an->val[r * cols + c];
            }
            wn->grad[r] += acc;
        }
    };
    return tape->wrap(on);
}

/// Per-row dot product of two equal-shape matrices -> vector {n}.
template <class T>
Tensor<T> rowwise_dot(const Tensor<T>& a, const Tensor<T>& b) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    auto* bn = Tape<T>::node_of(b);
    detail::require<T>(an->shape.size() == 2 && an->shape == bn->shape,
                       "rowwise_dot: shapes " + shape_str(an->shape) + " . " +
                           shape_str(bn->shape));
    const long rows = an->shape[0], cols = an->shape[1];
    auto* on = tape->alloc({rows});
    for (long r = 0; r < rows; ++r) {
        T acc = T(0);
        for (long c = 0; c < cols; ++c)
            acc += an->val[r * cols + c] * bn->val[r * cols + c];
        on->val[r] = acc;
    }
    on->back = [an, bn, on, rows, cols]() {
        for (long r = 0; r < rows; ++r) {
            const T g = on->grad[r];
            for (long c = 0; c < cols; ++c) {
                an->grad[r * cols + c] += g * bn->val[r * cols + c];
                bn->grad[r * cols + c] += g * an->val[r * cols + c];
            }
        }
    };
    return tape->wrap(on);
}

/// Sum over rows (axis 0): {n,d} -> {d}; for vectors, the total as {1}.
template <class T>
Tensor<T> sum_rows(const Tensor<T>& a) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    if (an->shape.size() == 1) {
        auto* on = tape->alloc({1});
        on->val[0] = std::accumulate(an->val.begin(), an->val.end(), T(0));
        on->back = [an, on]() {
            for (auto& g : an->grad) g += on->grad[0];
        };
        return tape->wrap(on);
    }
    detail::require<T>(an->shape.size() == 2, "sum_rows: rank must be 1 or 2");
    const long rows = an->shape[0], cols = an->shape[1];
    auto* on = tape->alloc({cols});
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) on->val[c] += an->val[r * cols + c];
    on->back = [an, on, rows, cols]() {
        for (long r = 0; r < rows; ++r)
            for (long c = 0; c < cols; ++c)
                an->grad[r * cols + c] += on->grad[c];
    };
    return tape->wrap(on);
}

/// Column-wise mean over rows: {n,d} -> {d}.
template <class T>
Tensor<T> mean_rows(const Tensor<T>& a) {
    auto* an = Tape<T>::node_of(a);
    detail::require<T>(an->shape.size() == 2 && an->shape[0] > 0,
                       "mean_rows: need a non-empty 2-D input");
    return smul(sum_rows(a), T(1) / static_cast<T>(an->shape[0]));
}

/// Column-wise max over rows: {n,d} -> {d}. Gradient flows to the first
/// maximal row per column.
template <class T>
Tensor<T> max_rows(const Tensor<T>& a) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    detail::require<T>(an->shape.size() == 2 && an->shape[0] > 0,
                       "max_rows: need a non-empty 2-D input");
    const long rows = an->shape[0], cols = an->shape[1];
    auto* on = tape->alloc({cols});
    auto argmax = std::make_shared<std::vector<long>>(cols, 0);
    for (long c = 0; c < cols; ++c) {
        T best = an->val[c];
        long best_r = 0;
        for (long r = 1; r < rows; ++r)
            if (an->val[r * cols + c] > best) {
                best = an->val[r * cols + c];
                best_r = r;
            }
        on->val[c] = best;
        (*argmax)[c] = best_r;
    }
    on->back = [an, on, argmax, cols]() {
        for (long c = 0; c < cols; ++c)
            an->grad[(*argmax)[c] * cols + c] += on->grad[c];
    };
    return tape->wrap(on);
}

/// Numerically stable softmax of a vector.
template <class T>
Tensor<T> softmax(const Tensor<T>& a) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    detail::require<T>(an->shape.size() == 1, "softmax: input must be 1-D");
    auto* on = tape->alloc(an->shape);
    const T mx = *std::max_element(an->val.begin(), an->val.end());
    T denom = T(0);
    for (std::size_t i = 0; i < an->val.size(); ++i) {
        on->val[i] = std::exp(an->val[i] - mx);
        denom += on->val[i];
    }
    for (auto& v : on->val) v /= denom;
    on->back = [an, on]() {
        T dot = T(0);
        for (std::size_t i = 0; i < on->val.size(); ++i)
            dot += on->grad[i] * on->val[i];
        for (std::size_t i = 0; i < on->val.size(); ++i)
            an->grad[i] += on->val[i] * (on->grad[i] - dot);
    };
    return tape->wrap(on);
}

/// Softmax within segments: entries sharing seg[i] are normalized together.
/// Used for attention over each target node's incoming edges.
template <class T>
Tensor<T> segment_softmax(const Tensor<T>& a, std::vector<long> seg) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    detail::require<T>(an->shape.size() == 1 &&
                           an->val.size() == seg.size(),
                       "segment_softmax: logits " + shape_str(an->shape) +
                           " vs " + std::to_string(seg.size()) + " segments");
    auto* on = tape->alloc(an->shape);
    const long n = static_cast<long>(seg.size());
    long max_seg = -1;
    for (long s : seg) max_seg = std::max(max_seg, s);
    std::vector<T> seg_max(static_cast<std::size_t>(max_seg + 1),
                           -std::numeric_limits<T>::infinity());
    for (long i = 0; i < n; ++i)
        seg_max[seg[i]] = std::max(seg_max[seg[i]], an->val[i]);
    std::vector<T> seg_sum(static_cast<std::size_t>(max_seg + 1), T(0));
    for (long i = 0; i < n; ++i) {
        on->val[i] = std::exp(an->val[i] - seg_max[seg[i]]);
        seg_sum[seg[i]] += on->val[i];
    }
    for (long i = 0; i < n; ++i) on->val[i] /= seg_sum[seg[i]];
    on->back = [an, on, seg = std::move(seg), max_seg]() {
        std::vector<T> seg_dot(static_cast<std::size_t>(max_seg + 1), T(0));
        for (std::size_t i = 0; i < on->val.size(); ++i)
            seg_dot[seg[i]] += on->grad[i] * on->val[i];
        for (std::size_t i = 0; i < on->val.size(); ++i)
            an->grad[i] += on->val[i] * (on->grad[i] - seg_dot[seg[i]]);
    };
    return tape->wrap(on);
}

/// Sums rows of {e,d} into {n,d} buckets: out[seg[r]] += a[r].
template <class T>
Tensor<T> segment_sum_rows(const Tensor<T>& a, std::vector<long> seg, long n) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    detail::require<T>(an->shape.size() == 2 &&
                           an->shape[0] == static_cast<long>(seg.size()),
                       "segment_sum_rows: rows " + shape_str(an->shape) +
                           " vs " + std::to_string(seg.size()) + " segments");
    const long cols = an->shape[1];
    for (long s : seg)
        detail::require<T>(0 <= s && s < n, "segment_sum_rows: segment " +
                                                std::to_string(s) +
                                                " out of range");
    auto* on = tape->alloc({n, cols});
    for (std::size_t r = 0; r < seg.size(); ++r)
        for (long c = 0; c < cols; ++c)
            on->val[seg[r] * cols + c] +=
                an->val[static_cast<long>(r) * cols + c];
    on->back = [an, on, seg = std::move(seg), cols]() {
        for (std::size_t r = 0; r < seg.size(); ++r)
            for (long c = 0; c < cols; ++c)
                an->grad[static_cast<long>(r) * cols + c] +=
                    on->grad[seg[r] * cols + c];
    };
    return tape->wrap(on);
}

/// Scatters vector entries into a length-n vector: out[pos[i]] += a[i].
template <class T>
Tensor<T> scatter_vec(const Tensor<T>& a, std::vector<long> pos, long n) {
    Tape<T>* tape = Tape<T>::tape_of(a);
    auto* an = Tape<T>::node_of(a);
    detail::require<T>(an->shape.size() == 1 &&
                           an->val.size() == pos.size(),
                       "scatter_vec: input " + shape_str(an->shape) + " vs " +
                           std::to_string(pos.size()) + " positions");
    for (long p : pos)
        detail::require<T>(0 <= p && p < n, "scatter_vec: position " +
                                                std::to_string(p) +
                                                " out of range");
    auto* on = tape->alloc({n});
    for (std::size_t i = 0; i < pos.size(); ++i) on->val[pos[i]] += an->val[i];
    on->back = [an, on, pos = std::move(pos)]() {
        for (std::size_t i = 0; i < pos.size(); ++i)
            an->grad[i] += on->grad[pos[i]];
    };
    return tape->wrap(on);
}

/// Cross-entropy of a logit vector against an integer label, log-sum-exp
/// stabilized. Optional per-class weights; empty means uniform.
template <class T>
Tensor<T> cross_entropy(const Tensor<T>& logits, long label,
                        std::vector<T> class_weights = {}) {
    Tape<T>* tape = Tape<T>::tape_of(logits);
    auto* ln = Tape<T>::node_of(logits);
    detail::require<T>(ln->shape.size() == 1, "cross_entropy: logits must be 1-D");
    const long c = static_cast<long>(ln->val.size());
    detail::require<T>(0 <= label && label < c,
                       "cross_entropy: label " + std::to_string(label) +
                           " out of range for " + std::to_string(c) +
                           " classes");
    detail::require<T>(class_weights.empty() ||
                           static_cast<long>(class_weights.size()) == c,
                       "cross_entropy: weight count mismatch");
    const T w = class_weights.empty() ? T(1) : class_weights[label];

    const T mx = *std::max_element(ln->val.begin(), ln->val.end());
    T sum = T(0);
    for (long i = 0; i < c; ++i) sum += std::exp(ln->val[i] - mx);
    const T lse = mx + std::log(sum);

    auto* on = tape->alloc({1});
    on->val[0] = w * (lse - ln->val[label]);
    on->back = [ln, on, label, w, mx, sum]() {
        const T g = on->grad[0] * w;
        for (std::size_t i = 0; i < ln->val.size(); ++i) {
            const T p = std::exp(ln->val[i] - mx) / sum;
            ln->grad[i] += g * (p - (static_cast<long>(i) == label ? T(1) : T(0)));
        }
    };
    return tape->wrap(on);
}

/// Xavier/Glorot uniform fill: +-sqrt(6 / (fan_in + fan_out)). Vectors get
/// fan_out 1; scalars are left for explicit initialization.
template <class T>
void xavier_init(Parameter<T>& p, Rng& rng) {
    long fan_in = 1, fan_out = 1;
    if (p.shape.size() == 2) {
        fan_out = p.shape[0];
        fan_in = p.shape[1];
    } else if (p.shape.size() == 1) {
        fan_in = p.shape[0];
        fan_out = 1;
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (auto& v : p.value)
        v = static_cast<T>(rng.uniform(-bound, bound));
}

}  // namespace magnet::tensor

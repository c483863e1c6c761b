// Dense row-major tensors. Explicit shapes only, no broadcasting: every
// consumer states the shape it expects and mismatches throw DimensionError.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bumplab {

using Shape = std::vector<int>;

struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline std::int64_t shape_numel(const Shape& s) {
    std::int64_t n = 1;
    for (int d : s) {
        if (d < 0) throw DimensionError("negative dimension in shape");
        n *= d;
    }
    return n;
}

inline std::string shape_str(const Shape& s) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << 'x';
        os << s[i];
    }
    os << ']';
    return os.str();
}

inline void require_same_shape(const Shape& a, const Shape& b, const char* where) {
    if (a != b)
        throw DimensionError(std::string(where) + ": shape mismatch " + shape_str(a) +
                             " vs " + shape_str(b));
}

template <class T>
struct TensorT {
    Shape shape;
    std::vector<T> data;

    TensorT() = default;
    explicit TensorT(Shape s) : shape(std::move(s)), data(static_cast<std::size_t>(shape_numel(shape)), T(0)) {}
    TensorT(Shape s, std::vector<T> values) : shape(std::move(s)), data(std::move(values)) {
        if (static_cast<std::int64_t>(data.size()) != shape_numel(shape))
            throw DimensionError("tensor data length " + std::to_string(data.size()) +
                                 " does not match shape " + shape_str(shape));
    }

    static TensorT zeros(Shape s) { return TensorT(std::move(s)); }
    static TensorT full(Shape s, T v) {
        TensorT t(std::move(s));
        std::fill(t.data.begin(), t.data.end(), v);
        return t;
    }
    static TensorT scalar(T v) { return TensorT({1}, {v}); }

    std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
    int rank() const { return static_cast<int>(shape.size()); }
    int dim(int i) const { return shape.at(static_cast<std::size_t>(i)); }

    T* ptr() { return data.data(); }
    const T* ptr() const { return data.data(); }

    T& operator[](std::int64_t i) { return data[static_cast<std::size_t>(i)]; }
    const T& operator[](std::int64_t i) const { return data[static_cast<std::size_t>(i)]; }

    // 2-d and 3-d accessors for cold paths; hot kernels index raw pointers.
    T& at(int i, int j) { return data[static_cast<std::size_t>(i) * shape[1] + j]; }
    const T& at(int i, int j) const { return data[static_cast<std::size_t>(i) * shape[1] + j]; }
    T& at(int c, int i, int j) {
        return data[(static_cast<std::size_t>(c) * shape[1] + i) * shape[2] + j];
    }
    const T& at(int c, int i, int j) const {
        return data[(static_cast<std::size_t>(c) * shape[1] + i) * shape[2] + j];
    }

    bool all_finite() const {
        for (T v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

    void fill(T v) { std::fill(data.begin(), data.end(), v); }

    TensorT& operator+=(const TensorT& other) {
        require_same_shape(shape, other.shape, "tensor +=");
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += other.data[i];
        return *this;
    }

    bool operator==(const TensorT& other) const {
        return shape == other.shape && data == other.data;
    }
};

using Tensor = TensorT<double>;

template <class To, class From>
TensorT<To> tensor_cast(const TensorT<From>& t) {
    TensorT<To> out(t.shape);
    for (std::size_t i = 0; i < t.data.size(); ++i)
        out.data[i] = static_cast<To>(t.data[i]);
    return out;
}

}  // namespace bumplab

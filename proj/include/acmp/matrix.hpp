#ifndef ACMP_MATRIX_HPP
#define ACMP_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "acmp/errors.hpp"

namespace acmp {

// Dense row-major matrix of doubles. Node features are stored as one row
// per node, one column per channel.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m(static_cast<int>(rows.size()),
                 rows.size() ? static_cast<int>(rows.begin()->size()) : 0);
        int i = 0;
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != m.cols_)
                throw DimensionMismatch("ragged initializer");
            int j = 0;
            for (double v : r) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    static Matrix column(std::initializer_list<double> values) {
        Matrix m(static_cast<int>(values.size()), 1);
        int i = 0;
        for (double v : values) m(i++, 0) = v;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::span<double> row(int i) { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }
    std::span<const double> row(int i) const { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    // this += s * o
    void add_scaled(const Matrix& o, double s) {
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    }

    void fill(double v) { for (double& x : data_) x = v; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_sq() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return s;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline Matrix operator+(Matrix a, const Matrix& b) {
    a.add_scaled(b, 1.0);
    return a;
}

inline Matrix operator-(Matrix a, const Matrix& b) {
    a.add_scaled(b, -1.0);
    return a;
}

inline Matrix operator*(double s, Matrix a) {
    for (double& v : a.data()) v *= s;
    return a;
}

}  // namespace acmp

#endif

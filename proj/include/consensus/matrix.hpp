#pragma once

#include <cstddef>
#include <vector>

namespace consensus {

// Minimal dense row-major matrix; just what the spectral and engine code needs.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n);
    // The averaging projector (all entries 1/n).
    static Matrix averaging(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// y = a * x
std::vector<double> multiply(const Matrix& a, const std::vector<double>& x);

double max_abs_diff(const Matrix& a, const Matrix& b);

double norm2(const std::vector<double>& v);
double mean(const std::vector<double>& v);
double max_abs(const std::vector<double>& v);

}  // namespace consensus

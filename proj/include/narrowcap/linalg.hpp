#pragma once

#include <cstddef>
#include <vector>

namespace narrowcap {

using Vec = std::vector<double>;

/// Small dense row-major matrix. All matrices in this project are tiny
/// (network layers, cone frames), so everything below is plain O(n^3) code.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Mat identity(std::size_t n);
    static Mat from_rows(const std::vector<Vec>& rows);
    static Mat from_cols(const std::vector<Vec>& cols);

    Vec col(std::size_t j) const;
    Vec row(std::size_t i) const;

    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

Vec matvec(const Mat& a, const Vec& x);
Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
Vec vadd(const Vec& a, const Vec& b);
Vec vsub(const Vec& a, const Vec& b);
Vec vscale(double s, const Vec& a);
Vec unit_axis(std::size_t dim, std::size_t j);

/// Solve a x = b by LU with partial pivoting. Throws std::runtime_error if
/// the matrix is singular to working precision.
Vec lu_solve(Mat a, Vec b);

/// Plain LU inverse.
Mat inverse(const Mat& a);

double determinant(Mat a);

/// Upper bound on the spectral norm: min(Frobenius, sqrt(norm1 * normInf)).
/// Both factors dominate sigma_max, so the result is a guaranteed bound.
double spectral_norm_upper(const Mat& a);

double max_abs_diff(const Mat& a, const Mat& b);

}  // namespace narrowcap

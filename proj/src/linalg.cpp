#include "narrowcap/linalg.hpp"
#include "narrowcap/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace narrowcap {

namespace {
std::atomic<double> g_tolerance{1e-9};
}

double global_tolerance() { return g_tolerance.load(); }

void set_global_tolerance(double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    g_tolerance.store(tol);
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows) {
    if (rows.empty()) return Mat();
    Mat m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols) throw std::invalid_argument("ragged rows");
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Mat Mat::from_cols(const std::vector<Vec>& cols) {
    if (cols.empty()) return Mat();
    Mat m(cols[0].size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != m.rows) throw std::invalid_argument("ragged columns");
        for (std::size_t i = 0; i < m.rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

Vec Mat::col(std::size_t j) const {
    Vec v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = (*this)(i, j);
    return v;
}

Vec Mat::row(std::size_t i) const {
    return Vec(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
               data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
}

Vec matvec(const Mat& a, const Vec& x) {
    if (x.size() != a.cols) throw std::invalid_argument("matvec shape mismatch");
    Vec y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        const double* r = a.data.data() + i * a.cols;
        for (std::size_t j = 0; j < a.cols; ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul shape mismatch");
    Mat c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Mat transpose(const Mat& a) {
    Mat t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

Vec vadd(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vadd size mismatch");
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

Vec vsub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vsub size mismatch");
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

Vec vscale(double s, const Vec& a) {
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
    return c;
}

Vec unit_axis(std::size_t dim, std::size_t j) {
    Vec e(dim, 0.0);
    e[j] = 1.0;
    return e;
}

namespace {

// In-place LU with partial pivoting; returns permutation sign, throws on
// singularity. a becomes the packed L\U factors, perm the row swaps.
double lu_factor(Mat& a, std::vector<std::size_t>& perm) {
    const std::size_t n = a.rows;
    if (a.cols != n) throw std::invalid_argument("lu_factor: square matrix required");
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best == 0.0) throw std::runtime_error("singular matrix in LU factorization");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(perm[k], perm[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            const double f = a(i, k);
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return sign;
}

Vec lu_apply(const Mat& lu, const std::vector<std::size_t>& perm, const Vec& b) {
    const std::size_t n = lu.rows;
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = b[perm[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) y[i] -= lu(i, j) * y[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) y[i] -= lu(i, j) * y[j];
        y[i] /= lu(i, i);
    }
    return y;
}

}  // namespace

Vec lu_solve(Mat a, Vec b) {
    if (b.size() != a.rows) throw std::invalid_argument("lu_solve shape mismatch");
    std::vector<std::size_t> perm;
    lu_factor(a, perm);
    return lu_apply(a, perm, b);
}

Mat inverse(const Mat& a) {
    const std::size_t n = a.rows;
    Mat lu = a;
    std::vector<std::size_t> perm;
    lu_factor(lu, perm);
    Mat inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vec e(n, 0.0);
        e[j] = 1.0;
        Vec x = lu_apply(lu, perm, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i];
    }
    return inv;
}

double determinant(Mat a) {
    std::vector<std::size_t> perm;
    double sign;
    try {
        sign = lu_factor(a, perm);
    } catch (const std::runtime_error&) {
        return 0.0;
    }
    double d = sign;
    for (std::size_t i = 0; i < a.rows; ++i) d *= a(i, i);
    return d;
}

double spectral_norm_upper(const Mat& a) {
    double frob = 0.0;
    for (double v : a.data) frob += v * v;
    frob = std::sqrt(frob);
    double n1 = 0.0;  // max column sum
    for (std::size_t j = 0; j < a.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows; ++i) s += std::abs(a(i, j));
        n1 = std::max(n1, s);
    }
    double ninf = 0.0;  // max row sum
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += std::abs(a(i, j));
        ninf = std::max(ninf, s);
    }
    return std::min(frob, std::sqrt(n1 * ninf));
}

double max_abs_diff(const Mat& a, const Mat& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

}  // namespace narrowcap

#include "narrowcap/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace narrowcap {

// Tableau simplex on the standard-form expansion: free x is split into
// x+ - x-, one slack per row. Column layout: [x+ (n), x- (n), slacks (m)].
LpSolution lp_maximize(const Vec& c, const std::vector<Vec>& rows, const Vec& rhs) {
    const std::size_t n = c.size();
    const std::size_t m = rows.size();
    if (rhs.size() != m) throw std::invalid_argument("lp: rhs size mismatch");
    for (const auto& r : rows)
        if (r.size() != n) throw std::invalid_argument("lp: row size mismatch");
    for (double b : rhs)
        if (b < 0.0) throw std::invalid_argument("lp: rhs must be nonnegative");

    const std::size_t ncols = 2 * n + m;
    // tab has m constraint rows plus the objective row; last column is rhs.
    std::vector<Vec> tab(m + 1, Vec(ncols + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            tab[i][j] = rows[i][j];
            tab[i][n + j] = -rows[i][j];
        }
        tab[i][2 * n + i] = 1.0;
        tab[i][ncols] = rhs[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
        tab[m][j] = -c[j];
        tab[m][n + j] = c[j];
    }

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = 2 * n + i;

    const double eps = 1e-11;
    for (;;) {
        // Bland: entering = lowest-index column with negative reduced cost.
        std::size_t enter = ncols;
        for (std::size_t j = 0; j < ncols; ++j) {
            if (tab[m][j] < -eps) { enter = j; break; }
        }
        if (enter == ncols) break;  // optimal

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (tab[i][enter] > eps) {
                const double ratio = tab[i][ncols] / tab[i][enter];
                if (ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps && (leave == m || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave == m) {
            LpSolution s;
            s.status = LpSolution::Status::unbounded;
            return s;
        }

        const double piv = tab[leave][enter];
        for (auto& v : tab[leave]) v /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = tab[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= ncols; ++j) tab[i][j] -= f * tab[leave][j];
        }
        basis[leave] = enter;
    }

    LpSolution s;
    s.status = LpSolution::Status::optimal;
    s.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n)
            s.x[basis[i]] += tab[i][ncols];
        else if (basis[i] < 2 * n)
            s.x[basis[i] - n] -= tab[i][ncols];
    }
    s.value = dot(c, s.x);
    return s;
}

}  // namespace narrowcap

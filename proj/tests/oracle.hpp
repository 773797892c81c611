// Test-only reference computations. Nothing here calls the library's
// event enumeration or solvers.
#ifndef SSEP_TESTS_ORACLE_HPP
#define SSEP_TESTS_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "ssep/model.hpp"

namespace oracle {

using Real = long double;
using Dense = std::vector<std::vector<Real>>;

inline std::size_t count_states(int n, int k)
{
    std::size_t m = 1;
    for (int i = 0; i < n; ++i)
        m *= static_cast<std::size_t>(k + 1);
    return m;
}

/// Site contents of state `s`, first site most significant.
inline std::vector<int> digits(std::size_t s, int n, int k)
{
    std::vector<int> x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        x[static_cast<std::size_t>(i)] = static_cast<int>(s % static_cast<std::size_t>(k + 1));
        s /= static_cast<std::size_t>(k + 1);
    }
    return x;
}

/// Rate x -> y read off the pair of states directly from the dynamics.
inline Real pair_rate(const std::vector<int>& x, const std::vector<int>& y, const ssep::ModelParams& p)
{
    const int n = p.n_sites;
    std::vector<int> diff;
    for (int i = 0; i < n; ++i)
        if (x[i] != y[i])
            diff.push_back(i);
    if (diff.size() == 1) {
        const int i = diff[0];
        if (i != 0 && i != n - 1)
            return 0;
        if (x[i] == 0)
            return p.alpha(y[i] - 1);
        if (y[i] == 0)
            return p.beta(x[i] - 1);
        return 0;
    }
    if (diff.size() == 2 && diff[1] == diff[0] + 1) {
        const int a = diff[0], b = diff[1];
        auto mobile = [&](int site) { return p.boundary_hops || (site != 0 && site != n - 1); };
        if (x[a] != 0 && x[b] == 0 && y[a] == 0 && y[b] == x[a] && mobile(a))
            return p.delta(x[a] - 1);
        if (x[a] == 0 && x[b] != 0 && y[b] == 0 && y[a] == x[b] && mobile(b))
            return p.delta(x[b] - 1);
    }
    return 0;
}

/// Off-diagonal rates by exhaustive pair comparison.
inline Dense brute_force_rates(const ssep::ModelParams& p)
{
    const std::size_t m = count_states(p.n_sites, p.n_types);
    Dense q(m, std::vector<Real>(m, 0));
    for (std::size_t s = 0; s < m; ++s) {
        const auto x = digits(s, p.n_sites, p.n_types);
        for (std::size_t t = 0; t < m; ++t)
            if (s != t)
                q[s][t] = pair_rate(x, digits(t, p.n_sites, p.n_types), p);
    }
    return q;
}

/// Balance equations with the first row replaced by normalization, solved
/// by Gaussian elimination with partial pivoting in long double.
inline std::vector<Real> stationary_by_elimination(const Dense& rates)
{
    const std::size_t m = rates.size();
    Dense a(m, std::vector<Real>(m + 1, 0));
    for (std::size_t i = 0; i < m; ++i) {
        Real out = 0;
        for (std::size_t j = 0; j < m; ++j)
            out += rates[i][j];
        for (std::size_t j = 0; j < m; ++j)
            a[j][i] = (i == j) ? -out : rates[i][j];  // row j: inflow to j
    }
    for (std::size_t j = 0; j < m; ++j)
        a[0][j] = 1;
    a[0][m] = 1;
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c]))
                piv = r;
        if (std::fabs(a[piv][c]) < 1e-300L)
            throw std::runtime_error("singular");
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == c || a[r][c] == 0)
                continue;
            const Real f = a[r][c] / a[c][c];
            for (std::size_t j = c; j <= m; ++j)
                a[r][j] -= f * a[c][j];
        }
    }
    std::vector<Real> p(m);
    for (std::size_t i = 0; i < m; ++i)
        p[i] = a[i][m] / a[i][i];
    return p;
}

/// Hand-rolled generator of random positive rates.
struct RateDraw {
    std::mt19937_64 rng;
    explicit RateDraw(std::uint64_t seed) : rng(seed) {}

    double positive() { return std::uniform_real_distribution<double>(0.2, 3.0)(rng); }

    ssep::ModelParams params(int n, int k, bool boundary_hops)
    {
        std::vector<double> a, b, d;
        for (int t = 0; t < k; ++t) {
            a.push_back(positive());
            b.push_back(positive());
            d.push_back(positive());
        }
        return ssep::make_params(n, a, b, d, boundary_hops);
    }
};

}  // namespace oracle

#endif

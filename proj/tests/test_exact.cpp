#include <cmath>

#include <doctest.h>

#include "oracle.hpp"
#include "ssep/exact.hpp"

using namespace ssep;

namespace {

double max_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    return (a - b).lpNorm<Eigen::Infinity>();
}

Eigen::Index idx(const LatticeState& x, const ModelParams& p)
{
    return static_cast<Eigen::Index>(encode(x, p).value);
}

}  // namespace

TEST_CASE("generator entries for N = 2")
{
    const double a = 1.3, b = 0.7, d = 2.1;
    const auto without = make_params(2, {a}, {b}, {d}, false);
    const Generator g = build_generator(without);
    CHECK(g.rate(idx(LatticeState({0, 0}), without), idx(LatticeState({1, 0}), without)) == a);
    CHECK(g.rate(idx(LatticeState({1, 0}), without), idx(LatticeState({0, 0}), without)) == b);
    CHECK(g.rate(idx(LatticeState({1, 0}), without), idx(LatticeState({0, 1}), without)) == 0.0);
    CHECK(g.rates.nonZeros() == 8);

    const auto with = make_params(2, {a}, {b}, {d}, true);
    const Generator h = build_generator(with);
    CHECK(h.rate(idx(LatticeState({1, 0}), with), idx(LatticeState({0, 1}), with)) == d);
    CHECK(h.rate(idx(LatticeState({0, 1}), with), idx(LatticeState({1, 0}), with)) == d);
    CHECK(h.rates.nonZeros() == 10);

    // pair counts from the brute-force comparison of all state pairs
    for (const auto& p : {without, with}) {
        const auto q = oracle::brute_force_rates(p);
        long positive = 0;
        for (const auto& row : q)
            for (auto r : row)
                positive += r > 0;
        CHECK(positive == build_generator(p).rates.nonZeros());
    }
}

TEST_CASE("generator matches the brute-force pair rates")
{
    oracle::RateDraw draw(11);
    for (int n = 2; n <= 4; ++n)
        for (int k = 1; k <= 2; ++k)
            for (bool hops : {true, false}) {
                const auto p = draw.params(n, k, hops);
                const Generator g = build_generator(p);
                const auto q = oracle::brute_force_rates(p);
                const Eigen::MatrixXd dense = g.dense();
                for (std::size_t s = 0; s < q.size(); ++s)
                    for (std::size_t t = 0; t < q.size(); ++t)
                        if (s != t)
                            REQUIRE(dense(Eigen::Index(s), Eigen::Index(t)) == static_cast<double>(q[s][t]));
                CHECK(g.row_sums().lpNorm<Eigen::Infinity>() <= 1e-12);
                if (hops) {
                    // structural symmetry of the transition graph
                    const Eigen::MatrixXd pattern = (dense.array() > 0).cast<double>().matrix();
                    CHECK(pattern == pattern.transpose());
                }
            }
}

TEST_CASE("closed forms")
{
    const auto p = make_params(2, {1}, {2}, {1});
    CHECK(normalization_constant(p) == doctest::Approx(4.0 / 9).epsilon(1e-15));
    const auto q = make_params(3, {1, 2}, {1, 1}, {1, 1});
    CHECK(normalization_constant(q) == doctest::Approx(1.0 / 64).epsilon(1e-15));
    const auto uniform = make_params(3, {0.4, 2.5}, {0.4, 2.5}, {1, 1});
    CHECK(normalization_constant(uniform) == doctest::Approx(1.0 / 27).epsilon(1e-15));

    const Eigen::VectorXd pf = product_form(p);
    CHECK(pf(idx(LatticeState({1, 1}), p)) == doctest::Approx(1.0 / 9).epsilon(1e-15));
    CHECK(pf(0) == normalization_constant(p));
    CHECK(product_form(q)(idx(LatticeState({2, 0, 1}), q)) == doctest::Approx(1.0 / 32).epsilon(1e-15));

    const SiteMarginal<> m = site_marginal(p, 1);
    CHECK(m(0) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(m(1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    const SiteMarginal<> mq = site_marginal(q, 2);
    CHECK(mq(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(mq(1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(mq(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK((site_marginal(uniform, 3).array() - 1.0 / 3).abs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(site_marginal(p, 0), InvalidStateError);
    CHECK_THROWS_AS(site_marginal(p, 3), InvalidStateError);

    const Eigen::VectorXd joint = joint_from_marginals(p);
    CHECK(joint(idx(LatticeState({1, 0}), p)) == doctest::Approx(2.0 / 9).epsilon(1e-15));
    CHECK(joint(0) == doctest::Approx(normalization_constant(p)).epsilon(1e-15));
}

TEST_CASE("closed forms agree across scalar types")
{
    oracle::RateDraw draw(3);
    const auto p = draw.params(4, 2, true);
    const auto ld = product_form<long double>(p);
    const auto d = product_form(p);
    for (Eigen::Index s = 0; s < d.size(); ++s)
        CHECK(std::abs(static_cast<double>(ld(s)) - d(s)) < 1e-16);
    CHECK(std::abs(static_cast<double>(ld.sum()) - 1.0) < 1e-15);
}

TEST_CASE("joint from marginals and marginal consistency")
{
    oracle::RateDraw draw(5);
    for (int n = 2; n <= 4; ++n)
        for (int k = 1; k <= 2; ++k) {
            const auto p = draw.params(n, k, true);
            const Eigen::VectorXd pf = product_form(p);
            CHECK(std::abs(pf.sum() - 1.0) <= 1e-12);
            CHECK(max_diff(joint_from_marginals(p), pf) <= 1e-12);
            const Eigen::MatrixXd summed = marginals_of(pf, p);
            for (int i = 1; i <= n; ++i)
                CHECK((summed.row(i - 1).transpose() - site_marginal(p, i)).lpNorm<Eigen::Infinity>() <= 1e-12);
        }
}

TEST_CASE("stationary solve: N = 2 worked example")
{
    const auto p = make_params(2, {1}, {2}, {1});
    const Distribution s = solve_stationary(build_generator(p));
    // independent elimination of the 4-state balance system
    const auto ref = oracle::stationary_by_elimination(oracle::brute_force_rates(p));
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(std::abs(s(i) - static_cast<double>(ref[std::size_t(i)])) <= 1e-14);
    CHECK(s(idx(LatticeState({0, 0}), p)) == doctest::Approx(4.0 / 9).epsilon(1e-14));
    CHECK(s(idx(LatticeState({1, 0}), p)) == doctest::Approx(2.0 / 9).epsilon(1e-14));
    CHECK(s(idx(LatticeState({0, 1}), p)) == doctest::Approx(2.0 / 9).epsilon(1e-14));
    CHECK(s(idx(LatticeState({1, 1}), p)) == doctest::Approx(1.0 / 9).epsilon(1e-14));
    CHECK(balance_residual(build_generator(p), s).lpNorm<Eigen::Infinity>() <= 1e-10);

    const auto eq = make_params(2, {1}, {1}, {1});
    CHECK((solve_stationary(build_generator(eq)).array() - 0.25).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("oracle equivalence over the model grid")
{
    oracle::RateDraw draw(2024);
    for (int n = 2; n <= 4; ++n)
        for (int k = 1; k <= 2; ++k)
            for (bool hops : {true, false})
                for (int rep = 0; rep < 3; ++rep) {
                    const auto p = draw.params(n, k, hops);
                    const Generator g = build_generator(p);
                    CAPTURE(n);
                    CAPTURE(k);
                    CAPTURE(hops);
                    if (!hops && n >= 3) {
                        // interior sites are unreachable from outside
                        CHECK_FALSE(is_irreducible(g));
                        CHECK_THROWS_AS(solve_stationary(g), ReducibleChainError);
                        continue;
                    }
                    REQUIRE(is_irreducible(g));
                    const Distribution s = solve_stationary(g);
                    CHECK((s.array() > 0).all());
                    CHECK(std::abs(s.sum() - 1.0) <= 1e-12);
                    CHECK(max_diff(s, product_form(p)) <= 1e-10);
                    CHECK(balance_residual(g, s).lpNorm<Eigen::Infinity>() <= 1e-10);

                    const auto ref = oracle::stationary_by_elimination(oracle::brute_force_rates(p));
                    for (Eigen::Index i = 0; i < s.size(); ++i)
                        REQUIRE(std::abs(s(i) - static_cast<double>(ref[std::size_t(i)])) <= 1e-10);
                }
}

TEST_CASE("stationary solve does not depend on hop rates")
{
    oracle::RateDraw draw(99);
    for (int n = 2; n <= 4; ++n) {
        const auto p = draw.params(n, 2, true);
        const Distribution base = solve_stationary(build_generator(p));
        for (double scale : {0.1, 3.0, 17.0}) {
            ModelParams q = p;
            q.delta *= scale;
            CHECK(max_diff(solve_stationary(build_generator(q)), base) <= 1e-10);
        }
        ModelParams zero = p;
        zero.delta(0) = 0.0;
        if (n == 2) {
            CHECK(max_diff(solve_stationary(build_generator(zero)), base) <= 1e-10);
        } else {
            // an immobile type placed inside the lattice never leaves
            CHECK_FALSE(is_irreducible(build_generator(zero)));
        }
    }
    // N = 2: boundary hops on or off give the same distribution
    const auto on = draw.params(2, 2, true);
    ModelParams off = on;
    off.boundary_hops = false;
    CHECK(max_diff(solve_stationary(build_generator(on)), solve_stationary(build_generator(off))) <= 1e-10);
}

TEST_CASE("iterative path")
{
    oracle::RateDraw draw(8);
    const auto p = draw.params(4, 2, true);
    const Generator g = build_generator(p);
    SolveOptions forced;
    forced.dense_limit = 0;
    CHECK(solve_method(g, forced) == SolveMethod::UniformizedPower);
    CHECK(max_diff(solve_stationary(g, forced), product_form(p)) <= 1e-10);

    SolveOptions starved = forced;
    starved.max_iterations = 3;
    CHECK_THROWS_AS(solve_stationary(g, starved), NonConvergenceError);

    // above the dense limit by default
    const auto big = make_params(13, {0.8}, {1.1}, {1.0});
    const Generator gb = build_generator(big);
    CHECK(solve_method(gb) == SolveMethod::UniformizedPower);
    CHECK(max_diff(solve_stationary(gb), product_form(big)) <= 1e-10);
}

TEST_CASE("state cap")
{
    const auto p = make_params(5, {1, 1}, {1, 1}, {1, 1});
    CHECK_THROWS_AS(build_generator(p, 242), StateSpaceOverflowError);
    CHECK_NOTHROW(build_generator(p, 243));
    CHECK(exact_state_cap() == kDefaultStateCap);
    CHECK_THROWS_AS(build_generator(make_params(30, {1}, {1}, {1})), StateSpaceOverflowError);
}

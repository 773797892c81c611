#include <doctest.h>

#include "oracle.hpp"
#include "ssep/reversibility.hpp"

using namespace ssep;

namespace {

Eigen::Index idx(const LatticeState& x, const ModelParams& p)
{
    return static_cast<Eigen::Index>(encode(x, p).value);
}

/// Scales every rightward hop; left and right hop rates then differ.
Generator skew_right_hops(Generator g, double factor)
{
    using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    for (Eigen::Index i = 0; i < g.rates.outerSize(); ++i)
        for (RowMajor::InnerIterator it(g.rates, i); it; ++it) {
            if (classify_transition(g.params, i, it.col()) != TransitionClass::Hop)
                continue;
            const LatticeState from = decode({std::uint64_t(i)}, g.params);
            const LatticeState to = decode({std::uint64_t(it.col())}, g.params);
            for (int s = 1; s < from.size(); ++s)
                if (from.at(s) != 0 && to.at(s) == 0 && to.at(s + 1) == from.at(s))
                    it.valueRef() *= factor;
        }
    return g;
}

}  // namespace

TEST_CASE("transition classes")
{
    const auto p = make_params(3, {1}, {1}, {1});
    CHECK(classify_transition(p, idx(LatticeState({0, 0, 0}), p), idx(LatticeState({1, 0, 0}), p)) ==
          TransitionClass::Arrival);
    CHECK(classify_transition(p, idx(LatticeState({1, 0, 0}), p), idx(LatticeState({0, 0, 0}), p)) ==
          TransitionClass::Departure);
    CHECK(classify_transition(p, idx(LatticeState({1, 0, 0}), p), idx(LatticeState({0, 1, 0}), p)) ==
          TransitionClass::Hop);
}

TEST_CASE("pairwise balance of the product form")
{
    oracle::RateDraw draw(31);
    for (int n = 2; n <= 4; ++n)
        for (int k = 1; k <= 2; ++k) {
            const auto p = draw.params(n, k, true);
            const BalanceReport r = detailed_balance_residual(build_generator(p), product_form(p));
            CHECK(r.max_abs_residual <= 1e-12);
            for (double c : r.class_max)
                CHECK(c <= 1e-12);
        }

    const auto p = make_params(2, {1}, {2}, {1});
    const Generator g = build_generator(p);
    const Eigen::VectorXd pf = product_form(p);
    const auto a = idx(LatticeState({0, 0}), p), b = idx(LatticeState({1, 0}), p);
    CHECK(pf(a) * g.rate(a, b) == doctest::Approx(4.0 / 9));
    CHECK(pf(b) * g.rate(b, a) == doctest::Approx(4.0 / 9));
    CHECK(detailed_balance_residual(g, pf).max_abs_residual <= 1e-15);

    SUBCASE("uniform distribution with alpha != beta")
    {
        const BalanceReport r = detailed_balance_residual(g, Eigen::VectorXd::Constant(4, 0.25));
        CHECK(r.max_abs_residual == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(r.class_max[static_cast<int>(TransitionClass::Hop)] == 0.0);
    }
    CHECK_THROWS_AS(detailed_balance_residual(g, Eigen::VectorXd::Constant(3, 1.0 / 3)), InvalidStateError);
}

TEST_CASE("reversed generator")
{
    SUBCASE("alpha == beta")
    {
        const auto p = make_params(3, {0.7, 1.9}, {0.7, 1.9}, {1.2, 0.4});
        const Generator g = build_generator(p);
        CHECK(max_rate_difference(reversed_generator(g, product_form(p)), g) <= 1e-12);
        CHECK(max_rate_difference(reversed_generator(g, solve_stationary(g)), g) <= 1e-12);
    }
    SUBCASE("worked N = 2 entry")
    {
        const auto p = make_params(2, {1}, {2}, {1});
        const Generator g = build_generator(p);
        const Generator rev = reversed_generator(g, product_form(p));
        const auto a = idx(LatticeState({0, 0}), p), b = idx(LatticeState({1, 0}), p);
        CHECK(rev.rate(a, b) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(g.rate(a, b) == 1.0);
    }
    SUBCASE("general rates")
    {
        oracle::RateDraw draw(41);
        for (int n = 2; n <= 4; ++n) {
            const auto p = draw.params(n, 2, true);
            const Generator g = build_generator(p);
            const Generator rev = reversed_generator(g, product_form(p));
            CHECK(max_rate_difference(rev, g) <= 1e-12);
            CHECK(rev.row_sums().lpNorm<Eigen::Infinity>() <= 1e-12);
            CHECK((solve_stationary(rev) - product_form(p)).lpNorm<Eigen::Infinity>() <= 1e-10);
        }
    }
    SUBCASE("errors")
    {
        const auto p = make_params(2, {1}, {2}, {1});
        const Generator g = build_generator(p);
        Eigen::VectorXd zero = product_form(p);
        zero(3) = 0.0;
        CHECK_THROWS_AS(reversed_generator(g, zero), ZeroProbabilityError);
        CHECK_THROWS_AS(reversed_generator(g, Eigen::VectorXd::Constant(4, 0.25)), NonStationaryError);
    }
}

TEST_CASE("Kolmogorov cycles")
{
    const double a = 1.4, b = 0.6, d = 2.2;
    const auto p = make_params(2, {a}, {b}, {d});
    const Generator g = build_generator(p);
    const auto s00 = idx(LatticeState({0, 0}), p), s10 = idx(LatticeState({1, 0}), p),
               s01 = idx(LatticeState({0, 1}), p);
    // (0,0) -> (1,0) -> (0,1) -> (0,0) against its reverse
    const double forward = g.rate(s00, s10) * g.rate(s10, s01) * g.rate(s01, s00);
    const double reverse = g.rate(s00, s01) * g.rate(s01, s10) * g.rate(s10, s00);
    CHECK(forward == doctest::Approx(a * d * b));
    CHECK(reverse == doctest::Approx(a * d * b));

    const CycleReport r = kolmogorov_cycle_residual(g, 3);
    CHECK(r.exhaustive);
    CHECK(r.cycles > 0);
    CHECK(r.max_residual <= 1e-12);

    SUBCASE("grid up to length 6")
    {
        oracle::RateDraw draw(53);
        for (int n = 2; n <= 3; ++n)
            for (int k = 1; k <= 2; ++k) {
                const CycleReport c = kolmogorov_cycle_residual(build_generator(draw.params(n, k, true)), 6);
                CHECK(c.max_residual <= 1e-10);
            }
    }
    SUBCASE("negative controls")
    {
        Generator perturbed = g;
        perturbed.rates.coeffRef(s10, s01) *= 2.0;
        const CycleReport c = kolmogorov_cycle_residual(perturbed, 3);
        // the reverse orientation of that cycle sees a doubled reverse product
        CHECK(c.max_residual == doctest::Approx(1.0));

        oracle::RateDraw draw(59);
        const auto q = draw.params(3, 2, true);
        const CycleReport skew = kolmogorov_cycle_residual(skew_right_hops(build_generator(q), 1.5), 6);
        CHECK(skew.max_residual > 0.1);
    }
    SUBCASE("sampled starts")
    {
        oracle::RateDraw draw(61);
        const Generator big = build_generator(draw.params(4, 2, true));
        CycleOptions opts;
        opts.exhaustive_limit = 10;
        opts.sampled_starts = 8;
        const CycleReport c = kolmogorov_cycle_residual(big, 5, opts);
        CHECK_FALSE(c.exhaustive);
        CHECK(c.cycles > 0);
        CHECK(c.max_residual <= 1e-10);
        CHECK(kolmogorov_cycle_residual(skew_right_hops(big, 3.0), 5, opts).max_residual > 0.1);
    }
    CHECK_THROWS_AS(kolmogorov_cycle_residual(g, 2), Error);
}

TEST_CASE("uniformity when alpha == beta")
{
    CHECK(uniformity_check(make_params(2, {1}, {1}, {1})) <= 1e-10);
    CHECK(uniformity_check(make_params(3, {1, 1}, {1, 1}, {1, 1})) <= 1e-10);
    CHECK(uniformity_check(make_params(4, {0.3, 5.0}, {0.3, 5.0}, {2, 0.1})) <= 1e-10);
    CHECK_THROWS_AS(uniformity_check(make_params(2, {1}, {2}, {1})), ConditionViolatedError);
}

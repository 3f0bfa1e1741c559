#include "catch_amalgamated.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "cfgf/gaussian_tools.hpp"

using namespace cfgf;

TEST_CASE("orthant probability closed form") {
    CHECK(orthant_probability(0.0) == 0.25);
    CHECK(orthant_probability(1.0) == Catch::Approx(0.5).margin(1e-12));
    CHECK(orthant_probability(-1.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(orthant_probability(0.5) == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(orthant_probability(1.5), ParamError);
}

TEST_CASE("fkg monte carlo matches the bivariate orthant law") {
    const std::vector<double> cov{1.0, 0.5, 0.5, 1.0};
    const FkgEvent a{{0}, {0.0}};
    const FkgEvent b{{1}, {0.0}};
    const auto v = fkg_check(cov, 2, a, b, 200000, 99);
    CHECK(v.samples == 200000);
    // measured: p_ab = 0.33320 against the closed form 1/3
    CHECK(std::abs(v.p_ab - 1.0 / 3.0) < 0.005);
    CHECK(std::abs(v.p_a - 0.5) < 0.005);
    CHECK(std::abs(v.p_b - 0.5) < 0.005);
    CHECK(v.margin_std_error > 0.0);
    CHECK(v.margin_std_error < 0.002);
    CHECK(v.pass);
    CHECK(v.p_ab > v.p_a * v.p_b);  // strict correlation gain at rho = 0.5
}

TEST_CASE("fkg independence gives a vanishing margin") {
    const std::vector<double> cov{1.0, 0.0, 0.0, 1.0};
    const auto v = fkg_check(cov, 2, FkgEvent{{0}, {0.3}}, FkgEvent{{1}, {-0.2}},
                             100000, 7);
    CHECK(std::abs(v.p_ab - v.p_a * v.p_b) <= 3.0 * v.margin_std_error);
    CHECK(v.pass);
}

TEST_CASE("fkg equicorrelated and degenerate covariances") {
    // 5-dim equicorrelated at rho = 0.3
    const int dim = 5;
    std::vector<double> cov(dim * dim, 0.3);
    for (int i = 0; i < dim; ++i) cov[i * dim + i] = 1.0;
    const FkgEvent a{{0, 1}, {0.2, -0.1}};
    const FkgEvent b{{3, 4}, {0.1, 0.0}};
    const auto v = fkg_check(cov, dim, a, b, 100000, 11);
    CHECK(v.pass);
    CHECK(v.p_ab > v.p_a * v.p_b);

    // rank-1 (semidefinite) covariance: X0 == X1 almost surely
    const std::vector<double> rank1{1.0, 1.0, 1.0, 1.0};
    const auto w =
        fkg_check(rank1, 2, FkgEvent{{0}, {0.0}}, FkgEvent{{1}, {0.0}}, 50000, 5);
    CHECK(w.p_ab == w.p_a);
    CHECK(w.p_ab == w.p_b);
    CHECK(w.pass);
}

TEST_CASE("fkg random nonnegative instances all pass") {
    for (int i = 0; i < 10; ++i) {
        const auto inst = random_fkg_instance(2 + (i % 7), 1000 + i);
        REQUIRE(inst.dim == 2 + (i % 7));
        for (double c : inst.covariance) CHECK(c >= 0.0);
        const auto v = fkg_check(inst.covariance, inst.dim, inst.a, inst.b, 50000,
                                 derive_seed(7, i));
        CHECK(v.pass);
    }
    CHECK_THROWS_AS(random_fkg_instance(1, 1), ParamError);
    CHECK_THROWS_AS(random_fkg_instance(9, 1), ParamError);
}

TEST_CASE("fkg input validation") {
    const FkgEvent a{{0}, {0.0}};
    const FkgEvent b{{1}, {0.0}};
    const std::vector<double> neg{1.0, -0.1, -0.1, 1.0};
    CHECK_THROWS_AS(fkg_check(neg, 2, a, b, 1000, 1), PreconditionError);
    const std::vector<double> indef{1.0, 2.0, 2.0, 1.0};
    CHECK_THROWS_AS(fkg_check(indef, 2, a, b, 1000, 1), ParamError);
    const std::vector<double> asym{1.0, 0.2, 0.3, 1.0};
    CHECK_THROWS_AS(fkg_check(asym, 2, a, b, 1000, 1), ParamError);
    const std::vector<double> good{1.0, 0.2, 0.2, 1.0};
    CHECK_THROWS_AS(fkg_check(good, 2, a, b, 99, 1), ParamError);
    CHECK_THROWS_AS(fkg_check(good, 3, a, b, 1000, 1), ParamError);  // size
    CHECK_THROWS_AS(fkg_check(good, 2, FkgEvent{{}, {}}, b, 1000, 1), ParamError);
    CHECK_THROWS_AS(fkg_check(good, 2, FkgEvent{{0, 0}, {0.0, 0.0}}, b, 1000, 1),
                    ParamError);
    CHECK_THROWS_AS(fkg_check(good, 2, FkgEvent{{2}, {0.0}}, b, 1000, 1),
                    ParamError);
    CHECK_THROWS_AS(fkg_check(good, 2, FkgEvent{{0}, {0.0, 1.0}}, b, 1000, 1),
                    ParamError);
}

TEST_CASE("sup tail: rayleigh amplitude law") {
    SupTailParams sp;
    sp.sigma2 = 1.0;
    sp.D = 1.0;
    sp.alpha = 2.0;
    const std::vector<double> u{0.5, 1.0, 2.0, 3.0};
    const auto curve = sup_tail_check(sp, rayleigh_wave_sup, u, 200000, 1234);
    REQUIRE(curve.u_values.size() == 4);
    REQUIRE(curve.empirical.size() == 4);
    REQUIRE(curve.bound.size() == 4);
    CHECK(curve.samples == 200000);
    // E[sup] = E[Rayleigh amplitude] = sqrt(pi/2); measured C = 1.25159
    CHECK(curve.params.C ==
          Catch::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(0.01));
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double level = curve.params.C + u[i];
        const double exact = std::exp(-0.5 * level * level);
        CHECK(std::abs(curve.empirical[i] - exact) < 0.005);
        CHECK(curve.empirical[i] <= curve.bound[i]);
        CHECK(curve.bound[i] ==
              Catch::Approx(2.0 * std::exp(-0.5 * u[i] * u[i])).epsilon(1e-12));
    }
    // the bound degenerates to 2 as u -> 0+
    const auto near0 = sup_tail_check(sp, rayleigh_wave_sup, {1e-4}, 1000, 1);
    CHECK(near0.bound[0] > 1.999);
}

TEST_CASE("sup tail: degenerate sampler and guards") {
    SupTailParams sp;
    const auto flat =
        sup_tail_check(sp, [](std::uint64_t) { return 0.0; }, {1.0, 2.0}, 1000, 3);
    CHECK(flat.params.C == 0.0);
    CHECK(flat.empirical[0] == 0.0);
    CHECK(flat.empirical[1] == 0.0);
    CHECK(flat.bound[0] > 0.0);

    auto id = [](std::uint64_t) { return 1.0; };
    CHECK_THROWS_AS(sup_tail_check(sp, id, {}, 1000, 1), ParamError);
    CHECK_THROWS_AS(sup_tail_check(sp, id, {0.0}, 1000, 1), ParamError);
    CHECK_THROWS_AS(sup_tail_check(sp, id, {-1.0}, 1000, 1), ParamError);
    CHECK_THROWS_AS(sup_tail_check(sp, id, {1.0}, 99, 1), ParamError);
    SupTailParams bad = sp;
    bad.sigma2 = 0.0;
    CHECK_THROWS_AS(sup_tail_check(bad, id, {1.0}, 1000, 1), ParamError);
    bad = sp;
    bad.D = -1.0;
    CHECK_THROWS_AS(sup_tail_check(bad, id, {1.0}, 1000, 1), ParamError);
    bad = sp;
    bad.alpha = 2.5;
    CHECK_THROWS_AS(sup_tail_check(bad, id, {1.0}, 1000, 1), ParamError);
    CHECK_THROWS_AS(BarrierParams{-1.0}.validate(), ParamError);
}

TEST_CASE("critical ball sup is deterministic") {
    const FieldParams p{2, 1.0, 400.0};
    const auto grid = make_grid(p, 8.0);
    const double s1 = critical_ball_sup(p, grid, 77);
    const double s2 = critical_ball_sup(p, grid, 77);
    CHECK(s1 == s2);
    CHECK(std::isfinite(s1));
    CHECK(critical_ball_sup(p, grid, 78) != s1);
    const FieldParams p3{3, 1.5, 50.0};
    CHECK_THROWS_AS(critical_ball_sup(p3, make_grid(p3, 4.0), 1), ParamError);
}

TEST_CASE("barrier probability on light rows") {
    const FieldParams p{2, 1.0, 100.0};
    const auto rows =
        barrier_probability(p, {100.0, 400.0}, 12.0, 50, 4242, 8.0, 1, 20);
    REQUIRE(rows.size() == 2);
    // measured q: 0.62 at L=100, 0.64 at L=400
    for (const auto& r : rows) {
        CHECK(r.rho == 12.0);
        CHECK(r.seeds == 50);
        CHECK(r.lambda == Catch::Approx(std::sqrt(r.L)).epsilon(1e-15));
        CHECK(r.q > 0.45);
        CHECK(r.q < 0.80);
        CHECK(r.std_error ==
              Catch::Approx(std::sqrt(r.q * (1.0 - r.q) / 50.0)).epsilon(1e-12));
        CHECK(r.q_normalized ==
              Catch::Approx(r.q * std::sqrt(std::log(r.lambda))).epsilon(1e-12));
        // sub-event -1 <= f(x0) < 0 against the exact Gaussian probability
        const double sigma =
            std::sqrt(variance_at_origin(FieldParams{2, 1.0, r.L}));
        const double pred =
            0.5 - 0.5 * std::erfc(1.0 / (sigma * std::numbers::sqrt2));
        CHECK(r.sub_pred == Catch::Approx(pred).epsilon(1e-12));
        CHECK(std::abs(r.sub_freq - r.sub_pred) < 0.15);  // measured 0.016, 0.047
        CHECK(r.sub_density > 0.0);
        // flood-fill audit agrees with the tracer on every audited seed
        CHECK(r.audit_checked == 20);
        CHECK(r.audit_agreed == 20);
    }
    // measured sub_pred: 0.4358 at L=100, 0.4128 at L=400
    CHECK(rows[0].sub_pred > rows[1].sub_pred);
    // normalized probabilities stay in a tight band (measured 0.94 and 1.11)
    const double ratio = rows[1].q_normalized / rows[0].q_normalized;
    CHECK(ratio > 1.0 / 1.5);
    CHECK(ratio < 1.5);
    // q at the two scales differs by at most sampling noise at 50 seeds
    CHECK(std::abs(rows[0].q - rows[1].q) <
          3.0 * (rows[0].std_error + rows[1].std_error));
}

TEST_CASE("barrier rows are independent of the thread count") {
    const FieldParams p{2, 1.0, 400.0};
    const auto r1 = barrier_probability(p, {400.0}, 12.0, 30, 99, 8.0, 1, 5);
    const auto r3 = barrier_probability(p, {400.0}, 12.0, 30, 99, 8.0, 3, 5);
    REQUIRE(r1.size() == r3.size());
    CHECK(std::memcmp(r1.data(), r3.data(), sizeof(BarrierRow) * r1.size()) == 0);
}

TEST_CASE("barrier validation") {
    const FieldParams crit{2, 1.0, 400.0};
    CHECK_THROWS_AS(
        barrier_probability(FieldParams{3, 1.5, 400.0}, {400.0}, 12.0, 10),
        ParamError);
    CHECK_THROWS_AS(
        barrier_probability(FieldParams{2, 0.4, 400.0}, {400.0}, 12.0, 10),
        RegimeError);
    CHECK_THROWS_AS(barrier_probability(crit, {400.0}, 0.0, 10), ParamError);
    CHECK_THROWS_AS(barrier_probability(crit, {400.0}, 12.0, 1), ParamError);
    CHECK_THROWS_AS(barrier_probability(crit, {400.0}, 12.0, 10, 1, 8.0, 1, 11),
                    ParamError);
    CHECK_THROWS_AS(barrier_probability(crit, {}, 12.0, 10), ParamError);
    CHECK_THROWS_AS(barrier_probability(crit, {1.0}, 12.0, 10), ParamError);
    CHECK_THROWS_AS(barrier_probability(crit, {400.0, 400.0}, 12.0, 10),
                    ParamError);
    // ball too small for the lattice spacing
    CHECK_THROWS_AS(barrier_probability(crit, {400.0}, 0.05, 10),
                    ResolutionError);
    // ball patch wider than the full period
    CHECK_THROWS_AS(
        barrier_probability(FieldParams{2, 1.0, 2.0}, {2.0}, 12.0, 10),
        ResolutionError);
}

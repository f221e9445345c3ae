#include <cmath>
#include <doctest.h>
#include <vector>

#include "poislrt/bartlett.hpp"
#include "poislrt/errors.hpp"
#include "poislrt/numeric.hpp"

using namespace poislrt;

namespace {

std::vector<double> random_mu(RngState& rng, int m, double lo = 0.5, double hi = 20.0) {
    std::vector<double> mu(m);
    for (int j = 0; j < m; ++j) mu[j] = lo + (hi - lo) * rng.uniform01();
    return mu;
}

// Second, naive evaluation of the notation engine for cross-checks.
double naive_prod(const std::vector<int>& c, const std::vector<double>& mu) {
    double acc = 1.0;
    for (double v : mu) {
        double p = 0.0, vp = 1.0;
        for (int coeff : c) {
            p += coeff * vp;
            vp *= v;
        }
        acc *= p;
    }
    return acc;
}

double naive_sum(int a, const std::vector<int>& den, const std::vector<int>& num,
                 const std::vector<double>& mu) {
    double acc = 0.0;
    for (double v : mu) {
        auto eval = [&](const std::vector<int>& c) {
            double p = 0.0, vp = 1.0;
            for (int coeff : c) {
                p += coeff * vp;
                vp *= v;
            }
            return p;
        };
        acc += std::pow(v, -a) * eval(num) / eval(den);
    }
    return acc;
}

}  // namespace

TEST_CASE("prod_poly hand examples") {
    auto ctx = NotationContext::make({1.0, 1.0});
    CHECK(prod_poly({1, 1}, ctx) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(prod_poly({1, 3, 1}, ctx) == doctest::Approx(25.0).epsilon(1e-15));
    CHECK(prod_poly({1, 0}, ctx) == 1.0);
    CHECK_THROWS_AS(prod_poly({0, 0}, ctx), DomainError);
}

TEST_CASE("sum_rational hand examples") {
    auto ctx = NotationContext::make({1.0, 1.0});
    CHECK(sum_rational(0, {1, 1}, ctx) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sum_rational(1, {1, 1}, {1, 2}, ctx) == doctest::Approx(3.0).epsilon(1e-15));
    auto ctx2 = NotationContext::make({0.7, 2.3, 5.0});
    CHECK(sum_rational(1, {1, 0}, {1, 0}, ctx2) == doctest::Approx(ctx2.s1).epsilon(1e-14));
}

TEST_CASE("notation engine agrees with a naive second implementation") {
    RngState rng(77, 0);
    for (int rep = 0; rep < 50; ++rep) {
        int m = 2 + static_cast<int>(rng.uniform01() * 3);
        auto mu = random_mu(rng, m);
        auto ctx = NotationContext::make(mu);
        CHECK(prod_poly({2, 4, 1}, ctx) ==
              doctest::Approx(naive_prod({2, 4, 1}, mu)).epsilon(1e-13));
        CHECK(prod_poly({1, 7, 6, 1}, ctx) ==
              doctest::Approx(naive_prod({1, 7, 6, 1}, mu)).epsilon(1e-13));
        CHECK(sum_rational(2, {1, 2, 1}, {1, 4, 4}, ctx) ==
              doctest::Approx(naive_sum(2, {1, 2, 1}, {1, 4, 4}, mu)).epsilon(1e-13));
        CHECK(sum_rational(1, {2, 1}, {4, 3}, ctx) ==
              doctest::Approx(naive_sum(1, {2, 1}, {4, 3}, mu)).epsilon(1e-13));
    }
}

TEST_CASE("closed form for two dimensions") {
    auto rep = R_m2(1.0, 1.0);
    CHECK(rep.R == doctest::Approx(17.0 / 6.0).epsilon(1e-15));
    CHECK(rep.R_corr == doctest::Approx(34.0 / 6.0).epsilon(1e-15));
    CHECK(rep.method == BartlettMethod::ClosedFormM2);

    CHECK(R_m2(1e8, 1e8).R == doctest::Approx(1.25).epsilon(1e-6));

    RngState rng(5, 0);
    for (int i = 0; i < 20; ++i) {
        double a = 0.5 + 19.5 * rng.uniform01();
        double b = 0.5 + 19.5 * rng.uniform01();
        CHECK(R_m2(a, b).R == doctest::Approx(R_m2(b, a).R).epsilon(1e-15));
    }
    CHECK_THROWS_AS(R_m2(0.0, 1.0), DomainError);
}

TEST_CASE("K blocks at the unit rates") {
    auto ctx = NotationContext::make({1.0, 1.0});
    CHECK(ctx.d10 == doctest::Approx(1.0).epsilon(1e-15));
    auto k = k_blocks(ctx);
    CHECK(k.a == doctest::Approx(-312.0).epsilon(1e-12));
    CHECK(k.b1 == doctest::Approx(2500.0).epsilon(1e-12));
    CHECK(k.b2 == doctest::Approx(-5800.0).epsilon(1e-12));
    CHECK(k.b3 == doctest::Approx(5961.0).epsilon(1e-12));
    CHECK(k.b4 == doctest::Approx(785.0).epsilon(1e-12));
    CHECK(k.b5 == doctest::Approx(-3346.0).epsilon(1e-12));
    CHECK(k.c1 == doctest::Approx(-1550.0).epsilon(1e-12));
    CHECK(k.c2 == doctest::Approx(1785.0).epsilon(1e-12));
    CHECK(k.c3 == doctest::Approx(-576.0).epsilon(1e-12));
    CHECK(k.c4 == doctest::Approx(285.0).epsilon(1e-12));
    CHECK(k.total == doctest::Approx(-68.0).epsilon(1e-12));
    CHECK(R_general({1.0, 1.0}).R == doctest::Approx(17.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("general form reproduces the two-dimensional closed form") {
    RngState rng(31337, 0);
    for (int i = 0; i < 100; ++i) {
        auto mu = random_mu(rng, 2);
        double a = R_general(mu).R;
        double b = R_m2(mu[0], mu[1]).R;
        CHECK(std::fabs(a - b) <= 1e-9 * std::fabs(b));
    }
}

TEST_CASE("rho-chain spot values at the unit rates") {
    auto ctx = NotationContext::make({1.0, 1.0});
    auto r = rho_intermediates(ctx);
    CHECK(r.musum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.eta == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.e_s2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.e_x2dot == doctest::Approx(65.0).epsilon(1e-13));
    CHECK(r.e_sx == doctest::Approx(-5.0).epsilon(1e-13));
    CHECK(r.e_s2x == doctest::Approx(-24.0).epsilon(1e-13));
    CHECK(r.e_s2xdot == doctest::Approx(-21.0).epsilon(1e-13));
    CHECK(r.e_vx == doctest::Approx(-8.0).epsilon(1e-13));
    CHECK(r.e_zx == doctest::Approx(-8.0).epsilon(1e-13));
    CHECK(r.e_sz == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(r.e_s2z == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.e_zv == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.e_seps3 == doctest::Approx(31.0).epsilon(1e-13));
    CHECK(r.d20 == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(r.d330 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.d340 == doctest::Approx(-10.0).epsilon(1e-13));
    CHECK(r.q1 == doctest::Approx(-7.0).epsilon(1e-13));
    CHECK(r.q2 == doctest::Approx(12.0).epsilon(1e-13));
    CHECK(r.q3 == doctest::Approx(-11.0).epsilon(1e-13));
    CHECK(r.rho0 + r.rho1 + r.rho2 == doctest::Approx(17.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("decomposition identities hold for any dimension") {
    RngState rng(808, 0);
    for (int m : {2, 3, 4}) {
        auto mu = random_mu(rng, m);
        auto ctx = NotationContext::make(mu);
        auto r = rho_intermediates(ctx);
        // d10 in the double-precision context carries its own cancellation
        // error; the chain builds e_s2 as this product in working precision.
        CHECK(r.e_s2 == doctest::Approx(ctx.p1 * ctx.d10).epsilon(1e-12));
        CHECK(r.musum == doctest::Approx(0.5 * ctx.p1 * (ctx.s1 * ctx.s1 - ctx.s2)).epsilon(1e-14));
        CHECK(r.d20 == doctest::Approx(r.q1 + r.q2).epsilon(1e-12));
        CHECK(r.d330 == doctest::Approx(r.q3 + ctx.p1 * ctx.p1 * r.q2).epsilon(1e-12));
    }
    auto ctx2 = NotationContext::make({3.7, 11.2});
    CHECK(rho_intermediates(ctx2).musum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rho-chain oracle matches the K formula") {
    RngState rng(424242, 0);
    for (int m : {2, 3, 4}) {
        for (int i = 0; i < 30; ++i) {
            auto mu = random_mu(rng, m);
            double a = R_general(mu).R;
            double b = R_via_rho_chain(mu).R;
            CHECK(std::fabs(a - b) <= 1e-8 * std::max(1.0, std::fabs(a)));
        }
    }
}

TEST_CASE("both paths are symmetric under permutation") {
    std::vector<double> mu{0.8, 3.1, 12.4};
    std::vector<double> perm{12.4, 0.8, 3.1};
    CHECK(R_general(mu).R == doctest::Approx(R_general(perm).R).epsilon(1e-13));
    CHECK(R_via_rho_chain(mu).R == doctest::Approx(R_via_rho_chain(perm).R).epsilon(1e-13));
}

TEST_CASE("d10 stays positive across the tested range") {
    RngState rng(1001, 0);
    for (int rep = 0; rep < 200; ++rep) {
        int m = 2 + static_cast<int>(rng.uniform01() * 3);
        CHECK_NOTHROW(NotationContext::make(random_mu(rng, m, 0.05, 50.0)));
    }
}

TEST_CASE("plug-in factor at the column means") {
    SufficientStats st;
    st.col_means = {1.0, 1.0};
    CHECK(R_hat(st).R_corr == doctest::Approx(34.0 / 6.0).epsilon(1e-12));
    st.col_means = {5.0, 5.0};
    CHECK(R_hat(st).R_corr == doctest::Approx(466.0 / 150.0).epsilon(1e-12));
    st.col_means = {5.0, 0.0};
    CHECK_THROWS_AS(R_hat(st), DomainError);
    st.col_means = {1.0, 2.0, 3.0};
    CHECK(R_hat(st).R == doctest::Approx(R_general({1.0, 2.0, 3.0}).R).epsilon(1e-13));
}

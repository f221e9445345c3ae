#include "poislrt/bartlett.hpp"

#include <cmath>

#include "poislrt/errors.hpp"

// Notation map: every compact token used by the correction factor, with the
// engine call that evaluates it. den/num lists are polynomial coefficients in
// ascending degree.
//
//   p1            prod_poly({0,1})          product of the rates
//   p11           prod_poly({1,1})          prod (1 + mu)
//   p21           prod_poly({2,1})          prod (2 + mu)
//   p12           prod_poly({1,2})          prod (1 + 2 mu)
//   p31           prod_poly({3,1})          prod (3 + mu)
//   p131          prod_poly({1,3,1})        prod (1 + 3 mu + mu^2)
//   p241          prod_poly({2,4,1})        prod (2 + 4 mu + mu^2)
//   p451          prod_poly({4,5,1})        prod (4 + 5 mu + mu^2)
//                 (= prod of E{X^3(X-1)}/mu^2; the factorial-moment identity
//                  E{X^3(X-1)} = mu^2 (4 + 5 mu + mu^2) fixes the quadratic
//                  coefficient at 1)
//   p1761         prod_poly({1,7,6,1})      prod (1 + 7 mu + 6 mu^2 + mu^3)
//   s1,s2,s3      sum mu^-k                 sum_rational(k, {1})
//   s2_11,s3_11   sum mu^-k (1+mu)          sum_rational(k, {1}, {1,1})
//   s011          sum (1+mu)^-1             sum_rational(0, {1,1})
//   s111          sum mu^-1 (1+mu)^-1       sum_rational(1, {1,1})
//   s111_12       sum mu^-1 (1+2mu)/(1+mu)  sum_rational(1, {1,1}, {1,2})
//   s021          sum (2+mu)^-1             sum_rational(0, {2,1})
//                 (written bare as "s21" where it first appears; the product
//                  sum_j prod_{k != j}(2+mu_k) = p21 * s021 fixes the reading)
//   s121_43       sum mu^-1 (4+3mu)/(2+mu)  sum_rational(1, {2,1}, {4,3})
//   s012          sum (1+2mu)^-1            sum_rational(0, {1,2})
//   s112          sum mu^-1 (1+2mu)^-1      sum_rational(1, {1,2})
//   s0131_11      sum (1+mu)/(1+3mu+mu^2)   sum_rational(0, {1,3,1}, {1,1})
//   s1131_163     sum mu^-1 (1+6mu+3mu^2)/(1+3mu+mu^2)
//                                           sum_rational(1, {1,3,1}, {1,6,3})
//   s211_151      sum mu^-2 (1+5mu+mu^2)/(1+mu)
//                                           sum_rational(2, {1,1}, {1,5,1})
//   s2121_144     sum mu^-2 (1+2mu)^2/(1+mu)^2
//                                           sum_rational(2, {1,2,1}, {1,4,4})

namespace poislrt {

NotationContext NotationContext::make(std::vector<double> mu_in) {
    if (mu_in.size() < 2) throw DomainError("NotationContext: need m >= 2 rates");
    for (double v : mu_in)
        if (!(v > 0.0)) throw DomainError("NotationContext: rates must be strictly positive");
    NotationContext ctx;
    ctx.mu = std::move(mu_in);
    ctx.p1 = 1.0;
    for (double v : ctx.mu) {
        ctx.p1 *= v;
        double inv = 1.0 / v;
        ctx.s1 += inv;
        ctx.s2 += inv * inv;
        ctx.s3 += inv * inv * inv;
        ctx.s2_11 += inv * inv * (1.0 + v);
        ctx.s3_11 += inv * inv * inv * (1.0 + v);
    }
    double p11 = 1.0;
    for (double v : ctx.mu) p11 *= 1.0 + v;
    ctx.d10 = p11 - ctx.p1 * (1.0 + ctx.s1);
    if (!(ctx.d10 > 0.0))
        throw DomainError("NotationContext: d10 must be positive for positive rates");
    return ctx;
}

double prod_poly(const PolyCoeffs& coeffs, const NotationContext& ctx) {
    bool nonzero = false;
    for (int v : coeffs.c) nonzero |= (v != 0);
    if (!nonzero) throw DomainError("prod_poly: all coefficients zero");
    double acc = 1.0;
    for (double v : ctx.mu) acc *= coeffs.eval(v);
    return acc;
}

double sum_rational(int a, const PolyCoeffs& den, const PolyCoeffs& num,
                    const NotationContext& ctx) {
    double acc = 0.0;
    for (double v : ctx.mu) {
        double d = den.eval(v);
        if (d == 0.0) throw DomainError("sum_rational: zero denominator");
        acc += std::pow(v, -a) * num.eval(v) / d;
    }
    return acc;
}

double sum_rational(int a, const PolyCoeffs& den, const NotationContext& ctx) {
    return sum_rational(a, den, PolyCoeffs{1}, ctx);
}

namespace {

using real = long double;  // headroom against the heavy cancellation in K and the chain

// Bundle of every token needed by both the K polynomial and the rho chain.
struct Tokens {
    real p1, s1, s2, s3, s2_11, s3_11, d10;
    real p11, p21, p12, p31, p131, p241, p451, p1761;
    real s011, s111, s111_12, s021, s121_43, s012, s112;
    real s0131_11, s1131_163, s211_151, s2121_144;
    int m;
};

real tprod(const NotationContext& ctx, std::initializer_list<int> coeffs) {
    real acc = 1.0L;
    for (double v : ctx.mu) {
        real p = 0.0L, vp = 1.0L;
        for (int c : coeffs) {
            p += c * vp;
            vp *= v;
        }
        acc *= p;
    }
    return acc;
}

real tsum(const NotationContext& ctx, int a, std::initializer_list<int> den,
          std::initializer_list<int> num = {1}) {
    real acc = 0.0L;
    for (double v : ctx.mu) {
        auto eval = [&](std::initializer_list<int> c) {
            real p = 0.0L, vp = 1.0L;
            for (int coeff : c) {
                p += coeff * vp;
                vp *= v;
            }
            return p;
        };
        real inv = 1.0L;
        for (int k = 0; k < a; ++k) inv /= v;
        acc += inv * eval(num) / eval(den);
    }
    return acc;
}

Tokens make_tokens(const NotationContext& ctx) {
    Tokens t{};
    t.m = ctx.dim();
    t.p1 = tprod(ctx, {0, 1});
    t.s1 = tsum(ctx, 1, {1});
    t.s2 = tsum(ctx, 2, {1});
    t.s3 = tsum(ctx, 3, {1});
    t.s2_11 = tsum(ctx, 2, {1}, {1, 1});
    t.s3_11 = tsum(ctx, 3, {1}, {1, 1});
    t.p11 = tprod(ctx, {1, 1});
    t.d10 = t.p11 - t.p1 * (1.0L + t.s1);
    t.p21 = tprod(ctx, {2, 1});
    t.p12 = tprod(ctx, {1, 2});
    t.p31 = tprod(ctx, {3, 1});
    t.p131 = tprod(ctx, {1, 3, 1});
    t.p241 = tprod(ctx, {2, 4, 1});
    t.p451 = tprod(ctx, {4, 5, 1});
    t.p1761 = tprod(ctx, {1, 7, 6, 1});
    t.s011 = tsum(ctx, 0, {1, 1});
    t.s111 = tsum(ctx, 1, {1, 1});
    t.s111_12 = tsum(ctx, 1, {1, 1}, {1, 2});
    t.s021 = tsum(ctx, 0, {2, 1});
    t.s121_43 = tsum(ctx, 1, {2, 1}, {4, 3});
    t.s012 = tsum(ctx, 0, {1, 2});
    t.s112 = tsum(ctx, 1, {1, 2});
    t.s0131_11 = tsum(ctx, 0, {1, 3, 1}, {1, 1});
    t.s1131_163 = tsum(ctx, 1, {1, 3, 1}, {1, 6, 3});
    t.s211_151 = tsum(ctx, 2, {1, 1}, {1, 5, 1});
    t.s2121_144 = tsum(ctx, 2, {1, 2, 1}, {1, 4, 4});
    return t;
}

}  // namespace

namespace {

struct KWork {
    real a, b1, b2, b3, b4, b5, c1, c2, c3, c4, total;
};

KWork k_work(const NotationContext& ctx) {
    const Tokens t = make_tokens(ctx);
    const real p1 = t.p1, s1 = t.s1, s2 = t.s2, s3 = t.s3, d10 = t.d10;
    KWork k{};
    k.a = 6.0 * d10 * d10 * p1 *
          (-2.0 * (t.p11 + 6.0 * t.p11 * t.s011 + 2.0 * s1) +
           p1 * (2.0 + 12.0 * s1 + 5.0 * s1 * s1 - 17.0 * s2));
    k.b1 = 4.0 * t.p131 * t.p131;
    k.b2 = -8.0 * p1 * t.p131 * (t.p21 + t.p11 * (1.0 + t.s011 + t.s111_12));
    k.b3 = p1 * p1 *
           (8.0 * t.p131 + t.p21 * t.p21 + 24.0 * t.p131 * s1 + 8.0 * t.p131 * s1 * s1 +
            4.0 * t.p11 * t.p21 * (5.0 + 5.0 * t.s011 - 9.0 * s1 + 5.0 * t.s111_12) -
            4.0 * t.p11 * t.p11 *
                (15.0 * s1 * s1 - 18.0 * s1 * (1.0 + t.s111_12) +
                 2.0 * (1.0 + t.s111_12) * (1.0 + t.s111_12) +
                 t.s011 * (4.0 - 6.0 * s1 + 4.0 * t.s111_12)) -
            8.0 * t.p131 * s2);
    k.b4 = p1 * p1 * p1 * p1 *
           (1.0 + 40.0 * s1 * s1 * s1 + 9.0 * s1 * s1 * s1 * s1 + 10.0 * s2 -
            15.0 * s2 * s2 + 8.0 * s1 * (3.0 + s2) + s1 * s1 * (58.0 + 6.0 * s2));
    k.b5 = 2.0 * p1 * p1 * p1 *
           (-t.p21 * (7.0 + 12.0 * s1 + s1 * s1 - 13.0 * s2) +
            2.0 * t.p11 *
                (-3.0 * s1 * s1 * s1 - s1 * s1 * (17.0 + 5.0 * t.s111_12) -
                 3.0 * s1 * (5.0 + 2.0 * t.s111_12 - 5.0 * s2) +
                 t.s011 * (1.0 + 2.0 * s1 + 3.0 * s1 * s1 - 3.0 * s2) -
                 (1.0 + t.s111_12) * (-1.0 + 7.0 * s2)));
    k.c1 = -8.0 * t.p131 - 6.0 * t.p1761;
    k.c2 = 3.0 * p1 *
           (4.0 * t.p11 * t.p11 + 4.0 * t.p21 - t.p241 + 4.0 * t.p451 +
            4.0 * t.p131 * t.s0131_11 + 8.0 * t.p11 * s1);
    k.c3 = 4.0 * p1 * p1 *
           (-1.0 - 3.0 * t.p21 - 6.0 * s1 + 27.0 * t.p21 * s1 - 3.0 * s1 * s1 +
            6.0 * t.p12 * s1 * t.s012 - 6.0 * t.p12 * t.s112 - 3.0 * t.p21 * t.s121_43 -
            s2 - 6.0 * t.p21 * t.s021 +
            3.0 * t.p11 *
                (-1.0 + 2.0 * t.s011 + 18.0 * s1 * s1 + 2.0 * t.s111 + 2.0 * t.s111_12 +
                 t.s111_12 * t.s111_12 - s1 * (19.0 + t.s111 + 16.0 * t.s111_12) +
                 3.0 * s2 + t.s211_151 - t.s2121_144));
    k.c4 = 3.0 * p1 * p1 * p1 *
           (3.0 - 4.0 * (-9.0 + t.m) * s1 * s1 + 4.0 * s1 * s1 * s1 +
            4.0 * (-4.0 + t.m) * s2 - 4.0 * s1 * (-7.0 + 4.0 * s2 + t.s2_11) -
            6.0 * s3 + 4.0 * t.s3_11);
    k.total = k.a + 3.0L * (k.b1 + k.b2 + k.b3 + k.b4 + k.b5) +
              d10 * (k.c1 + k.c2 + k.c3 + k.c4);
    return k;
}

}  // namespace

KBlocks k_blocks(const NotationContext& ctx) {
    KWork k = k_work(ctx);
    KBlocks out{};
    out.a = static_cast<double>(k.a);
    out.b1 = static_cast<double>(k.b1);
    out.b2 = static_cast<double>(k.b2);
    out.b3 = static_cast<double>(k.b3);
    out.b4 = static_cast<double>(k.b4);
    out.b5 = static_cast<double>(k.b5);
    out.c1 = static_cast<double>(k.c1);
    out.c2 = static_cast<double>(k.c2);
    out.c3 = static_cast<double>(k.c3);
    out.c4 = static_cast<double>(k.c4);
    out.total = static_cast<double>(k.total);
    return out;
}

namespace {

struct RhoWork {
    real eta, e_s2, e_sx, e_s2x, e_s2xdot, e_x2dot, e_vx, e_zx;
    real e_sz, e_s2z, e_zv, e_seps3;
    real musum, d20, d330, d340;
    real q1, q2, q3;
    real rho0, rho1, rho2;
};

RhoWork rho_work(const NotationContext& ctx) {
    const Tokens t = make_tokens(ctx);
    const real p1 = t.p1, s1 = t.s1, s2 = t.s2, s3 = t.s3, d10 = t.d10;
    const real p1sq = p1 * p1;
    const real p1cu = p1sq * p1;
    RhoWork r{};

    r.eta = p1sq * (t.p11 * t.s111 - p1 * s2);
    r.e_s2 = p1 * d10;
    r.e_x2dot =
        p1 * (p1 * t.p241 + t.p1761 - 2.0 * p1 * t.p451 - p1 * (p1 - t.p11) * (p1 - t.p11));
    r.e_sx = p1 * (p1 * t.p21 - t.p131 - p1sq - 2.0 * p1sq * s1 + p1 * t.p11 +
                   p1 * t.p11 * t.s111_12);
    r.e_s2x = p1 * (p1 * t.p451 - t.p1761) - 2.0 * p1sq * (p1 * t.p21 - t.p131) -
              2.0 * p1sq * (p1 * t.p21 * t.s121_43 - t.p131 * t.s1131_163) +
              p1cu * (p1 - t.p11) + 2.0 * p1cu * (2.0 * p1 * s1 - t.p11 * t.s111_12) +
              p1cu * (p1 * s1 * (4.0 * s1 + 1.0) - t.p11 * t.s211_151 -
                      t.p11 * t.s111_12 * t.s111_12 + t.p11 * t.s2121_144);
    r.e_s2xdot = r.e_s2x - p1sq * d10 * (p1 - t.p11);
    r.e_vx = p1sq * (2.0 * p1 * s1 - t.p11 * t.s111_12);
    r.e_zx = p1sq * t.p21 * t.s021 - p1 * t.p131 * t.s0131_11 - p1sq * s1 * (p1 - t.p11);
    r.e_sz = p1 * t.p11 * t.s011 - p1sq * (s1 + s1 * s1 - s2);
    r.e_s2z = p1 * t.p131 * t.s0131_11 -
              p1sq * (t.p11 * (s1 + 2.0 * t.s011 + 2.0 * t.s111) +
                      2.0 * t.p12 * (s1 * t.s012 - t.s112)) +
              p1cu * (2.0 * s1 + 2.0 * s1 * s1 + (t.m - 1) * (s1 * s1 - s2) +
                      s1 * t.s2_11 - t.s3_11);
    r.e_zv = p1sq * (s1 * s1 - s2);
    r.e_seps3 = 0.5 * p1cu * t.p31 - 1.5 * p1sq * t.p451 + p1 * t.p1761 - 0.5 * p1sq * p1sq +
                1.5 * p1cu * t.p21 - p1sq * t.p131 - 1.5 * p1cu * p1 * s1 +
                1.5 * p1cu * t.p21 * t.s121_43 - p1sq * t.p131 * t.s1131_163;
    r.musum = 0.5 * p1 * (s1 * s1 - s2);

    const real inv_d10 = 1.0L / d10;
    const real inner = 0.5L / p1 * r.e_x2dot + r.e_zx + 6.0 * s1 * r.e_sx + s1 * r.e_vx +
                         2.0 * p1cu * s1 * (s1 * s1 - s2) + 0.5 * p1cu * s3;
    r.rho0 = -0.5 * inv_d10 * r.musum +
             (1.0 / (p1sq * d10 * d10)) *
                 (0.5 * r.e_s2xdot + 0.5 * p1 * r.e_s2z + p1sq * s1 * d10 +
                  0.5 * p1 * s1 * r.eta + (1.0 / (p1 * d10)) * r.e_sx * r.e_sx +
                  3.0 * p1 * d10 * r.e_sz + 0.5 * p1cu * d10 * (s1 * s1 - s2) +
                  2.0 * inv_d10 * r.e_sz * r.e_sx + p1 * inner);

    r.d20 = p1 * s1 - t.p11 * s1 + 0.5 * p1 - 1.5 * t.p21 + t.p131 / p1 -
            0.5 * p1 * (s1 * s1 - s2);
    r.d330 = p1cu * (1.5 * s1 * s1 + 0.5 * s2) + 3.0 * p1sq * s1 * (p1 - t.p11) +
             0.5 * p1cu - 1.5 * p1sq * t.p21 + p1 * t.p131;
    r.rho1 = 3.0 * r.d20 * inv_d10 * inv_d10 * inv_d10 * (r.e_sz + 2.0 * p1 * d10 * s1) +
             (1.0 / 3.0) / (p1sq * d10 * d10) * r.d330 +
             3.0 / (p1cu * d10 * d10 * d10) * r.e_sx * r.d330 +
             1.5 * p1 * inv_d10 * (s1 * s1 + s2) +
             3.0 / (p1 * d10 * d10) * s1 * r.e_sx + (1.0 / (p1sq * d10 * d10)) * r.e_seps3;

    r.q1 = p1 * s1 - t.p11 * s1 - 0.5 * p1 * (s1 * s1 - s2);
    r.q2 = 0.5 * p1 - 1.5 * t.p21 + t.p131 / p1;
    r.q3 = p1cu * (1.5 * s1 * s1 + 0.5 * s2) + 3.0 * p1sq * s1 * (p1 - t.p11);
    r.d340 = p1sq * p1sq * ((2.0 / 3.0) * s1 * s1 * s1 + 2.0 * s1 * s2 + s3 / 3.0) +
             2.0 * p1cu * (2.0 * s1 * s1 + s2) * (p1 - t.p11) + 2.0 * p1sq * p1sq * s1 -
             6.0 * p1cu * t.p21 * s1 + 4.0 * p1sq * t.p131 * s1 + p1sq * p1sq / 6.0 -
             (2.0 / 3.0) * p1cu * t.p31 - 0.5 * p1sq * t.p241 + 2.0 * p1sq * t.p451 -
             p1 * t.p1761;
    r.rho2 = 3.0L / (4.0L * p1sq * d10 * d10 * d10) *
             (2.0L * p1cu * (r.q2 * r.q2 - r.q1 * r.q1) + 4.0L * p1 * r.q3 * (r.q1 + r.q2) +
              r.d340 * d10);
    return r;
}

}  // namespace

RhoIntermediates rho_intermediates(const NotationContext& ctx) {
    RhoWork r = rho_work(ctx);
    RhoIntermediates out{};
    out.eta = static_cast<double>(r.eta);
    out.e_s2 = static_cast<double>(r.e_s2);
    out.e_sx = static_cast<double>(r.e_sx);
    out.e_s2x = static_cast<double>(r.e_s2x);
    out.e_s2xdot = static_cast<double>(r.e_s2xdot);
    out.e_x2dot = static_cast<double>(r.e_x2dot);
    out.e_vx = static_cast<double>(r.e_vx);
    out.e_zx = static_cast<double>(r.e_zx);
    out.e_sz = static_cast<double>(r.e_sz);
    out.e_s2z = static_cast<double>(r.e_s2z);
    out.e_zv = static_cast<double>(r.e_zv);
    out.e_seps3 = static_cast<double>(r.e_seps3);
    out.musum = static_cast<double>(r.musum);
    out.d20 = static_cast<double>(r.d20);
    out.d330 = static_cast<double>(r.d330);
    out.d340 = static_cast<double>(r.d340);
    out.q1 = static_cast<double>(r.q1);
    out.q2 = static_cast<double>(r.q2);
    out.q3 = static_cast<double>(r.q3);
    out.rho0 = static_cast<double>(r.rho0);
    out.rho1 = static_cast<double>(r.rho1);
    out.rho2 = static_cast<double>(r.rho2);
    return out;
}


BartlettReport R_m2(double mu1, double mu2) {
    if (!(mu1 > 0.0 && mu2 > 0.0)) throw DomainError("R_m2: rates must be strictly positive");
    BartlettReport rep;
    rep.R = (1.0 + 9.0 * mu1 + 9.0 * mu2 + 15.0 * mu1 * mu2) / (12.0 * mu1 * mu2);
    rep.R_corr = 2.0 * rep.R;
    rep.method = BartlettMethod::ClosedFormM2;
    return rep;
}

BartlettReport R_general(const std::vector<double>& mu) {
    NotationContext ctx = NotationContext::make(mu);
    const Tokens t = make_tokens(ctx);
    KWork k = k_work(ctx);
    BartlettReport rep;
    rep.R = static_cast<double>(-k.total / (24.0L * t.d10 * t.d10 * t.d10 * t.p1));
    rep.R_corr = 2.0 * rep.R;
    rep.method = BartlettMethod::KFormula;
    return rep;
}

BartlettReport R_via_rho_chain(const std::vector<double>& mu) {
    NotationContext ctx = NotationContext::make(mu);
    RhoWork r = rho_work(ctx);
    BartlettReport rep;
    rep.R = static_cast<double>(r.rho0 + r.rho1 + r.rho2);
    rep.R_corr = 2.0 * rep.R;
    rep.method = BartlettMethod::RhoChain;
    return rep;
}

BartlettReport R_hat(const SufficientStats& stats) {
    for (double v : stats.col_means)
        if (!(v > 0.0)) throw DomainError("R_hat: zero column mean");
    if (stats.col_means.size() == 2) return R_m2(stats.col_means[0], stats.col_means[1]);
    return R_general(stats.col_means);
}

}  // namespace poislrt

#ifndef POISLRT_BARTLETT_HPP
#define POISLRT_BARTLETT_HPP

#include <vector>

#include "poislrt/model.hpp"

namespace poislrt {

// Integer coefficients (a, b, c, d, ...) of a polynomial a + b*mu + c*mu^2 + ...
// in one rate. One to four coefficients cover every symbol the correction
// factor needs.
struct PolyCoeffs {
    std::vector<int> c;

    PolyCoeffs(std::initializer_list<int> coeffs) : c(coeffs) {}
    double eval(double mu) const {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * mu + c[i];
        return acc;
    }
};

// Cached symmetric functions of the rates shared by every correction-factor
// path: the product p1 of the rates, inverse power sums s_k, the weighted
// sums s_k^(11) = sum mu^-k (1+mu), and d10 = p11 - p1(1+s1) (checked
// positive at construction).
struct NotationContext {
    std::vector<double> mu;
    double p1 = 0.0;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double s2_11 = 0.0, s3_11 = 0.0;
    double d10 = 0.0;

    static NotationContext make(std::vector<double> mu);
    int dim() const { return static_cast<int>(mu.size()); }
};

// prod_j poly(mu_j).
double prod_poly(const PolyCoeffs& coeffs, const NotationContext& ctx);

// sum_j mu_j^-a * num(mu_j) / den(mu_j); num defaults to the constant 1.
double sum_rational(int a, const PolyCoeffs& den, const PolyCoeffs& num,
                    const NotationContext& ctx);
double sum_rational(int a, const PolyCoeffs& den, const NotationContext& ctx);

enum class BartlettMethod { ClosedFormM2, KFormula, RhoChain };

struct BartlettReport {
    double R = 0.0;       // coefficient of the n^-1 term in E(Q_n)/2
    double R_corr = 0.0;  // = 2R, the coefficient used in critical values
    BartlettMethod method = BartlettMethod::KFormula;
};

// Intermediates of the rho-chain assembly R = rho0 + rho1 + rho2, exposed
// for spot-value tests.
struct RhoIntermediates {
    double eta, e_s2, e_sx, e_s2x, e_s2xdot, e_x2dot, e_vx, e_zx;
    double e_sz, e_s2z, e_zv, e_seps3;
    double musum, d20, d330, d340;
    double q1, q2, q3;
    double rho0, rho1, rho2;
};

// Summands of the K polynomial, one per displayed group, for bisectable
// failure localization in tests. total = a + 3*(b1+..+b5) + d10*(c1+..+c4).
struct KBlocks {
    double a;
    double b1, b2, b3, b4, b5;
    double c1, c2, c3, c4;
    double total;
};

KBlocks k_blocks(const NotationContext& ctx);
RhoIntermediates rho_intermediates(const NotationContext& ctx);

// Dimension-two closed form R = (1 + 9 mu1 + 9 mu2 + 15 mu1 mu2) / (12 mu1 mu2).
BartlettReport R_m2(double mu1, double mu2);

// General-dimension form R = -K / (24 d10^3 p1).
BartlettReport R_general(const std::vector<double>& mu);

// Independent assembly through the intermediate-expectation chain; the
// cross-check oracle for R_general.
BartlettReport R_via_rho_chain(const std::vector<double>& mu);

// Plug-in estimate: the correction evaluated at the column means. Throws
// DomainError when any column mean is zero.
BartlettReport R_hat(const SufficientStats& stats);

}  // namespace poislrt

#endif

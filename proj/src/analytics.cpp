#include "pagen/analytics.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

#include "pagen/quadrature.hpp"
#include "pagen/urn.hpp"

namespace pagen {

double Pmf::total_with_tail() const {
    long double sum = tail_bound;
    for (double v : probs) sum += v;
    return static_cast<double>(sum);
}

void Pmf::check_invariants() const {
    for (double v : probs) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::logic_error("Pmf: negative or non-finite mass");
    }
    if (!(tail_bound >= 0.0) || !std::isfinite(tail_bound))
        throw std::logic_error("Pmf: negative or non-finite tail");
    const double total = total_with_tail();
    if (std::abs(total - 1.0) > 1e-9)
        throw std::logic_error("Pmf: total mass " + std::to_string(total) +
                               " deviates from 1 by more than 1e-9");
}

double Pmf::at(long long value) const {
    const long long idx = value - offset;
    if (idx < 0 || idx >= static_cast<long long>(probs.size())) return 0.0;
    return probs[static_cast<size_t>(idx)];
}

// ---------------------------------------------------------------------------
// Marginal degree laws.
//
// Both pmfs are ratios of gamma functions in k.  Such series telescope:
// with T_k = Γ(k+A)/Γ(k+B-1),
//   T_k - T_{k+1} = (B - A - 1) · Γ(k+A)/Γ(k+B),
// so Σ_{k≥K} Γ(k+A)/Γ(k+B) = Γ(K+A) / ((B-A-1) Γ(K+B-1)) whenever B > A+1.
// The stored tail_bound is this exact remainder, hence the pmfs sum to 1
// up to rounding error.
// ---------------------------------------------------------------------------

Pmf degree_dist_pmf(const ModelParams& p, int k_max) {
    if (k_max < 0) throw std::invalid_argument("degree_dist_pmf: k_max < 0");
    const double inv_psi = 1.0 / p.psi_exp;
    const double c = p.a + inv_psi;  // Γ(k + c + 2) in the denominator
    const double log_pref = std::log(p.psi_exp + 1.0) - std::log(p.psi_exp) +
                            std::lgamma(c + 1.0) - std::lgamma(p.a);

    Pmf pmf;
    pmf.offset = p.m;
    pmf.probs.resize(static_cast<size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
        pmf.probs[static_cast<size_t>(k)] =
            std::exp(log_pref + std::lgamma(k + p.a) - std::lgamma(k + c + 2.0));
    }
    // Exact remainder from K = k_max + 1 on: A = a, B = c + 2, B - A - 1 = 1/ψ + 1.
    const double K = static_cast<double>(k_max) + 1.0;
    pmf.tail_bound =
        std::exp(log_pref + std::lgamma(K + p.a) - std::lgamma(K + c + 1.0)) /
        (inv_psi + 1.0);
    return pmf;
}

Pmf neighbor_degree_dist_pmf(const ModelParams& p, int k_max) {
    if (k_max < 0)
        throw std::invalid_argument("neighbor_degree_dist_pmf: k_max < 0");
    const double inv_psi = 1.0 / p.psi_exp;
    const double c = p.a + inv_psi;  // Γ(k + c + 3) in the denominator
    const double log_pref = std::log(p.psi_exp + 1.0) -
                            2.0 * std::log(p.psi_exp) + std::lgamma(c + 1.0) -
                            std::lgamma(p.a + 1.0);

    Pmf pmf;
    pmf.offset = p.m + 1;
    pmf.probs.resize(static_cast<size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
        pmf.probs[static_cast<size_t>(k)] =
            std::exp(log_pref + std::log(k + 1.0) + std::lgamma(k + p.a + 1.0) -
                     std::lgamma(k + c + 3.0));
    }
    // Split (k+1)Γ(k+a+1) = Γ(k+a+2) - a·Γ(k+a+1) and telescope each series:
    //   Σ_{k≥K} Γ(k+a+2)/Γ(k+c+3) = Γ(K+a+2) / ((1/ψ)   Γ(K+c+2))
    //   Σ_{k≥K} Γ(k+a+1)/Γ(k+c+3) = Γ(K+a+1) / ((1/ψ+1) Γ(K+c+2))
    const double K = static_cast<double>(k_max) + 1.0;
    const double common =
        std::exp(log_pref + std::lgamma(K + p.a + 1.0) - std::lgamma(K + c + 2.0));
    pmf.tail_bound = common * ((K + p.a + 1.0) * p.psi_exp -
                               p.a * p.psi_exp / (1.0 + p.psi_exp));
    return pmf;
}

// ---------------------------------------------------------------------------
// Joint law.  The inner u-integral is an (unnormalized) incomplete beta
// function, so only the outer v-integral needs quadrature.
// ---------------------------------------------------------------------------

namespace {

// log of the k- and j-dependent prefactor of the joint pmf, including the
// complete beta factor of the inner integral.
double joint_log_prefactor(const ModelParams& p, int j, int k) {
    return std::log(p.psi_exp + 1.0) - 2.0 * std::log(p.psi_exp) +
           std::lgamma(k + p.a + 1.0) - std::lgamma(k + 1.0) -
           std::lgamma(p.a + 1.0) + std::lgamma(j + p.a) -
           std::lgamma(j + 1.0) - std::lgamma(p.a) +
           // complete beta B(a+1, j+1) of the inner integral
           std::lgamma(p.a + 1.0) + std::lgamma(j + 1.0) -
           std::lgamma(p.a + j + 2.0);
}

}  // namespace

double joint_degree_pmf(const ModelParams& p, int j, int k) {
    if (j < 0 || k < 0)
        throw std::invalid_argument("joint_degree_pmf: j and k must be >= 0");
    const double expo_v = p.a + 1.0 / p.psi_exp;
    const double logc = joint_log_prefactor(p, j, k);

    auto f = [&](double v) -> double {
        if (v <= 0.0 || v >= 1.0) return 0.0;
        // ∫_v¹ (1-u)^j u^a du = B(a+1, j+1) · ibetac(a+1, j+1, v); the complete
        // beta factor already sits inside logc.
        const double resid = boost::math::ibetac(p.a + 1.0, j + 1.0, v);
        if (resid <= 0.0) return 0.0;
        const double log_v_part =
            (k == 0 ? 0.0 : k * std::log1p(-v)) + expo_v * std::log(v);
        return std::exp(logc + log_v_part + std::log(resid));
    };

    return integrate_adaptive(f, 0.0, 1.0, 1e-10).value;
}

double joint_degree_tail_k(const ModelParams& p, int j, int k_min) {
    if (j < 0) throw std::invalid_argument("joint_degree_tail_k: j < 0");
    if (k_min < 1)
        throw std::invalid_argument("joint_degree_tail_k: k_min must be >= 1");

    // Summing the negative-binomial factor Γ(k+a+1)/(k!Γ(a+1)) v^{a+1} (1-v)^k
    // over k >= k_min gives the NB upper tail I_{1-v}(k_min, a+1); the v^{a+1}
    // cancels most of the v^{a+1/ψ} weight, leaving v^{1/ψ-1}.
    const double log_pref = std::log(p.psi_exp + 1.0) -
                            2.0 * std::log(p.psi_exp) + std::lgamma(j + p.a) -
                            std::lgamma(j + 1.0) - std::lgamma(p.a) +
                            std::lgamma(p.a + 1.0) + std::lgamma(j + 1.0) -
                            std::lgamma(p.a + j + 2.0);
    const double expo_v = 1.0 / p.psi_exp - 1.0;

    auto f = [&](double v) -> double {
        if (v <= 0.0 || v >= 1.0) return 0.0;
        const double nb_tail =
            boost::math::ibeta(static_cast<double>(k_min), p.a + 1.0, 1.0 - v);
        const double resid = boost::math::ibetac(p.a + 1.0, j + 1.0, v);
        if (nb_tail <= 0.0 || resid <= 0.0) return 0.0;
        const double log_v_part = (expo_v == 0.0 ? 0.0 : expo_v * std::log(v));
        return std::exp(log_pref + log_v_part + std::log(nb_tail) +
                        std::log(resid));
    };

    return integrate_adaptive(f, 0.0, 1.0, 1e-10).value;
}

// ---------------------------------------------------------------------------
// Early-vertex expected degree.
// ---------------------------------------------------------------------------

double expected_degree(const ModelParams& p, std::uint64_t n, std::uint64_t k) {
    if (k < 1 || k > n)
        throw std::invalid_argument("expected_degree: need 1 <= k <= n");
    const double ratio = static_cast<double>(n) / static_cast<double>(k);
    const double growth = std::pow(ratio, 1.0 - p.chi) - 1.0;
    return p.m * (1.0 + p.chi / (1.0 - p.chi) * growth);
}

double expected_degree_error_bound(const ModelParams& p, std::uint64_t n,
                                   std::uint64_t k) {
    if (k < 1 || k > n)
        throw std::invalid_argument(
            "expected_degree_error_bound: need 1 <= k <= n");
    const double C = 4.0 * p.chi / (1.0 - p.chi);
    return p.m * C * std::pow(static_cast<double>(n), 1.0 - p.chi) /
           std::pow(static_cast<double>(k), 2.0 - p.chi);
}

// ---------------------------------------------------------------------------
// F_k product statistic.
// ---------------------------------------------------------------------------

double estimate_Fk(const ModelParams& p, std::uint64_t k, std::uint64_t ell,
                   RandomStream& rng) {
    if (k < 1 || ell <= k)
        throw std::invalid_argument("estimate_Fk: need ell > k >= 1");

    double log_acc =
        p.chi * (std::log(static_cast<double>(ell)) -
                 std::log(static_cast<double>(k)));

    const long long a_int = std::llround(p.a);
    const bool integer_shape =
        std::abs(p.a - static_cast<double>(a_int)) < 1e-12 && a_int >= 1 &&
        a_int <= 8;

    if (integer_shape) {
        // 1 - ψ_j ~ Beta(b_j, a) with integer a factorizes into independent
        // uniform powers: 1 - ψ_j = Π_{i=0}^{a-1} U_i^{1/(b_j+i)}, so each
        // factor costs a exponential draws and no rejection loop.
        for (std::uint64_t j = k + 1; j <= ell; ++j) {
            const double bj = psi_shape2(p, j);
            for (long long i = 0; i < a_int; ++i) {
                log_acc -= rng.exponential() / (bj + static_cast<double>(i));
            }
        }
    } else {
        for (std::uint64_t j = k + 1; j <= ell; ++j) {
            log_acc += std::log1p(-rng.beta(p.a, psi_shape2(p, j)));
        }
    }
    return std::exp(log_acc);
}

// ---------------------------------------------------------------------------
// Quantile coupling map.
// ---------------------------------------------------------------------------

double coupling_map_fk(const ModelParams& p, std::uint64_t k, double x) {
    if (k < 2) throw std::invalid_argument("coupling_map_fk: k must be >= 2");
    if (!(x >= 0.0))
        throw std::invalid_argument("coupling_map_fk: x must be >= 0");
    if (x == 0.0) return 0.0;

    const double b = psi_shape2(p, k);
    try {
        const double pr = boost::math::gamma_p(p.a, x);
        if (pr < 0.5) return boost::math::ibeta_inv(p.a, b, pr);
        // For x of order log²k the lower gamma CDF rounds to 1; route the
        // composition through the upper tails, which stay well resolved.
        const double q = boost::math::gamma_q(p.a, x);
        return boost::math::ibetac_inv(p.a, b, q);
    } catch (const std::exception& e) {
        throw std::runtime_error(
            std::string("coupling_map_fk: inverse CDF evaluation failed: ") +
            e.what());
    }
}

}  // namespace pagen

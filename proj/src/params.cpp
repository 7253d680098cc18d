#include "pagen/params.hpp"

#include <cmath>
#include <string>

namespace pagen {

ModelParams derive_params(int m, double alpha) {
    if (m <= 0)
        throw std::invalid_argument("derive_params: m must be positive, got " + std::to_string(m));
    if (!(alpha >= 0.0 && alpha < 1.0) || std::isnan(alpha))
        throw std::invalid_argument("derive_params: alpha must lie in [0, 1), got " +
                                    std::to_string(alpha));

    ModelParams p;
    p.m = m;
    p.alpha = alpha;
    p.u = alpha / (1.0 - alpha);
    p.chi = (1.0 + 2.0 * p.u) / (2.0 + 2.0 * p.u);
    p.psi_exp = (1.0 - p.chi) / p.chi; // == 1 / (1 + 2u)
    p.a = m + 2.0 * m * p.u;
    return p;
}

double tilde_alpha(const ModelParams& p, std::uint64_t n, int i) {
    if (n < 3)
        throw std::invalid_argument("tilde_alpha: defined for vertices n >= 3");
    if (i < 1 || i > p.m)
        throw std::invalid_argument("tilde_alpha: slot index out of range");
    const double m = p.m;
    const double denom = 2.0 * m * (double(n) - 2.0) + 2.0 * m * p.alpha +
                         (1.0 - p.alpha) * (i - 1);
    return p.alpha * 2.0 * m * (double(n) - 1.0) / denom;
}

} // namespace pagen

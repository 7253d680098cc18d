#include "pagen/urn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pagen {

double psi_shape2(const ModelParams& p, std::uint64_t j) {
    if (j < 2) throw std::invalid_argument("psi_shape2: j must be >= 2");
    const double jd = static_cast<double>(j);
    return (2.0 * jd - 3.0) * p.m + 2.0 * p.m * p.u * (jd - 1.0);
}

double sample_psi(const ModelParams& p, std::uint64_t j, RandomStream& rng) {
    return rng.beta(p.a, psi_shape2(p, j));
}

UrnState build_urn_state_on(const ModelParams& p, std::uint32_t n, SeedSpec seed,
                            RandomStream& rng) {
    if (n < 2) throw std::invalid_argument("build_urn_state: need n >= 2");
    UrnState urn;
    urn.n = n;
    urn.params = p;
    urn.seed = seed;
    urn.psi.assign(n + 1, 0.0);
    urn.phi.assign(n + 1, 0.0);
    urn.S.assign(n + 1, 0.0);

    urn.psi[1] = 1.0;
    for (std::uint32_t j = 2; j <= n; ++j) urn.psi[j] = sample_psi(p, j, rng);

    // Backward recurrence keeps S exact at the top (S[n] = 1) and
    // monotone throughout; the forward product would accumulate the same
    // factors in the opposite order but lose the S[n] == 1 anchor.
    urn.S[n] = 1.0;
    for (std::uint32_t k = n; k >= 2; --k) urn.S[k - 1] = urn.S[k] * (1.0 - urn.psi[k]);
    for (std::uint32_t k = 1; k <= n; ++k) urn.phi[k] = urn.psi[k] * urn.S[k];
    return urn;
}

UrnState build_urn_state(const ModelParams& p, std::uint32_t n, SeedSpec seed) {
    RandomStream rng(seed, /*work_index=*/0);
    return build_urn_state_on(p, n, seed, rng);
}

std::uint32_t locate_interval(const UrnState& urn, double point, std::uint32_t S_prefix) {
    if (S_prefix < 1 || S_prefix > urn.n)
        throw std::invalid_argument("locate_interval: prefix length out of range");
    if (!(point >= 0.0) || !(point < urn.S[S_prefix]))
        throw std::invalid_argument("locate_interval: point outside [0, S[prefix])");
    // Intervals are half-open [S[j-1], S[j]), so the owner of `point` is
    // the first j with S[j] > point.
    const double* first = urn.S.data() + 1;
    const double* last = first + S_prefix;
    const double* it = std::upper_bound(first, last, point);
    return static_cast<std::uint32_t>(it - urn.S.data());
}

PAGraph generate_polya_given(const UrnState& urn, RandomStream& rng) {
    const ModelParams& p = urn.params;
    const std::uint32_t n = urn.n;
    if (p.m < 2) throw std::invalid_argument("generate_polya: graph models need m >= 2");
    const auto m = static_cast<std::uint32_t>(p.m);

    PAGraph g;
    g.n = n;
    g.params = p;
    g.model = ModelTag::polya;
    g.seed = urn.seed;
    g.send_off.assign(n + 2, 0);
    g.targets.reserve(static_cast<std::size_t>(m) * (n - 1));
    for (std::uint32_t v = 2; v <= n; ++v) g.send_off[v + 1] = g.send_off[v] + m;

    for (std::uint32_t slot = 0; slot < m; ++slot) g.targets.push_back(1);
    for (std::uint32_t v = 3; v <= n; ++v) {
        for (std::uint32_t slot = 0; slot < m; ++slot) {
            const double point = rng.uniform01() * urn.S[v - 1];
            g.targets.push_back(locate_interval(urn, point, v - 1));
        }
    }
    g.recompute_degrees();
    return g;
}

PAGraph generate_polya(const ModelParams& p, std::uint32_t n, SeedSpec seed,
                       UrnState* keep_urn) {
    // One stream carries the whole graph: strengths for j = 2..n first,
    // then the uniform throws in (vertex, slot) order.
    RandomStream rng(seed, /*work_index=*/0);
    UrnState urn = build_urn_state_on(p, n, seed, rng);
    PAGraph g = generate_polya_given(urn, rng);
    if (keep_urn) *keep_urn = std::move(urn);
    return g;
}

void write_urn_tsv(const UrnState& urn, std::ostream& out) {
    out << "k\tpsi\tphi\tS\n";
    char buf[128];
    for (std::uint32_t k = 1; k <= urn.n; ++k) {
        std::snprintf(buf, sizeof(buf), "%u\t%.17g\t%.17g\t%.17g\n", k, urn.psi[k],
                      urn.phi[k], urn.S[k]);
        out << buf;
    }
}

} // namespace pagen

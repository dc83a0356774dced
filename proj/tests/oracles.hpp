#pragma once

// Independent reference implementations the tests check the library
// against. Everything here goes through the event-level definitions
// (necessity duality, sorted cumulative sums) rather than the per-element
// formulas the library uses, so agreement is meaningful.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

/// Necessity of the event given by `mask` (bit i = element i), straight
/// from the definition: sum over members of the clamped excess above the
/// best non-member.
inline double necessity(const std::vector<double>& p, std::uint32_t mask) {
    double outside_max = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!(mask & (std::uint32_t{1} << i))) outside_max = std::max(outside_max, p[i]);
    double n = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (mask & (std::uint32_t{1} << i)) n += std::max(0.0, p[i] - outside_max);
    return n;
}

inline double event_probability(const std::vector<double>& p, std::uint32_t mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (mask & (std::uint32_t{1} << i)) sum += p[i];
    return sum;
}

inline double event_max(const std::vector<double>& pi, std::uint32_t mask) {
    double best = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i)
        if (mask & (std::uint32_t{1} << i)) best = std::max(best, pi[i]);
    return best;
}

/// Min-sum possibility per element via its dual route: 1 - N(everything
/// except the element).
inline std::vector<double> pi83_via_necessity(const std::vector<double>& p) {
    const std::uint32_t full = (std::uint32_t{1} << p.size()) - 1;
    std::vector<double> pi;
    pi.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        pi.push_back(1.0 - necessity(p, full & ~(std::uint32_t{1} << i)));
    return pi;
}

/// Cumulative possibility per element via ascending sort and prefix sums,
/// a different accumulation order than the library's pairwise scan.
inline std::vector<double> pi93_via_sorted_cumsum(const std::vector<double>& p) {
    const std::size_t n = p.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });

    std::vector<double> prefix(n);
    double running = 0.0;
    for (std::size_t r = 0; r < n; ++r) prefix[r] = running += p[order[r]];

    std::vector<double> pi(n, 0.0);
    for (std::size_t r = 0; r < n;) {
        std::size_t last = r;
        while (last + 1 < n && p[order[last + 1]] == p[order[r]]) ++last;
        for (std::size_t b = r; b <= last; ++b) pi[order[b]] = prefix[last];
        r = last + 1;
    }
    return pi;
}

/// Deterministic cross-platform unit draw (same construction the library
/// documents for its sampler).
inline double unit_draw(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

struct VectorOptions {
    double min_component = 1e-3;  // keep every probability clearly positive
    double min_gap = 1e-6;        // pairwise separation; 0 allows ties
};

/// Normalized random probability vector with rejection on tiny components
/// and near-ties, so exact-comparison checks cannot trip on float dust.
inline std::vector<double> random_prob_vector(std::mt19937_64& rng, std::size_t n,
                                              const VectorOptions& opts = {}) {
    for (;;) {
        std::vector<double> p(n);
        double sum = 0.0;
        for (double& v : p) sum += (v = 0.01 + unit_draw(rng));
        for (double& v : p) v /= sum;

        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            if (p[i] < opts.min_component) ok = false;
            for (std::size_t j = i + 1; j < n && ok; ++j)
                if (std::abs(p[i] - p[j]) < opts.min_gap) ok = false;
        }
        if (ok) return p;
    }
}

} // namespace oracle

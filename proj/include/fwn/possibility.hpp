#pragma once

// Probability estimation and the two probability-to-possibility transforms.
//
// Given per-sense counts within one synset, `smoothed_probabilities` yields
// a categorical distribution (optionally add-one smoothed). The transforms
// map it to a possibility assignment:
//
//   v83 (min-sum):          pi_i = sum_m min(p_i, p_m)
//   v93 (cumulative):       pi_i = sum over {m : p_m <= p_i} of p_m
//
// v83 is the consonant-belief form: pi_i equals 1 - N(X \ {i}) for the
// necessity measure below. v93 is the tightest assignment that stays
// probability-consistent and order-preserving. Ties in v93 follow the
// literal `<=` rule, so tied elements include each other's mass.
//
// All functions are pure; sums run sequentially in stored member order so
// results are reproducible bit for bit.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fwn/error.hpp"

namespace fwn {

enum class Variant { v83, v93 };

inline const char* to_string(Variant v) { return v == Variant::v83 ? "v83" : "v93"; }

constexpr double kProbSumTolerance = 1e-12;

/// Per-synset probability masses, aligned with the synset's member list.
struct ProbVector {
    std::vector<double> values;
    bool smoothed = false;

    std::size_t size() const { return values.size(); }

    /// Invariants: values in [0,1] summing to 1 (1e-12); positive when smoothed.
    void validate() const {
        if (values.empty()) throw ValidationError("probability vector is empty");
        double sum = 0.0;
        for (double v : values) {
            if (v < 0.0 || v > 1.0)
                throw ValidationError("probability outside [0,1]: " + std::to_string(v));
            if (smoothed && v <= 0.0)
                throw ValidationError("smoothed probability must be positive");
            sum += v;
        }
        if (sum < 1.0 - kProbSumTolerance || sum > 1.0 + kProbSumTolerance)
            throw ValidationError("probabilities sum to " + std::to_string(sum) + ", not 1");
    }
};

/// Per-synset possibility masses; max is 1 up to accumulation error.
struct PossVector {
    std::vector<double> values;
    Variant variant = Variant::v93;

    std::size_t size() const { return values.size(); }
};

/// Relative-frequency estimate of the per-sense distribution. With
/// smoothing on, every count is incremented by one, i.e. the denominator
/// starts at the synset size; unseen senses then keep nonzero mass.
inline ProbVector smoothed_probabilities(const std::vector<std::uint64_t>& counts, bool smoothing) {
    if (counts.empty()) throw ValidationError("cannot estimate probabilities for zero senses");
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;

    ProbVector p;
    p.smoothed = smoothing;
    p.values.reserve(counts.size());
    if (smoothing) {
        const double denom = static_cast<double>(total + counts.size());
        for (std::uint64_t c : counts) p.values.push_back(static_cast<double>(c + 1) / denom);
    } else {
        if (total == 0)
            throw ValidationError("all counts are zero; probabilities undefined without smoothing");
        const double denom = static_cast<double>(total);
        for (std::uint64_t c : counts) p.values.push_back(static_cast<double>(c) / denom);
    }
    return p;
}

/// Min-sum transform: pi_i = sum_m min(p_i, p_m).
inline PossVector transform_pi83(const ProbVector& p) {
    p.validate();
    PossVector pi;
    pi.variant = Variant::v83;
    pi.values.reserve(p.size());
    for (double pi_val : p.values) {
        double sum = 0.0;
        for (double pm : p.values) sum += std::min(pi_val, pm);
        pi.values.push_back(sum);
    }
    return pi;
}

/// Cumulative transform: pi_i = sum of p_m over members with p_m <= p_i.
inline PossVector transform_pi93(const ProbVector& p) {
    p.validate();
    PossVector pi;
    pi.variant = Variant::v93;
    pi.values.reserve(p.size());
    for (double pi_val : p.values) {
        double sum = 0.0;
        for (double pm : p.values)
            if (pm <= pi_val) sum += pm;
        pi.values.push_back(sum);
    }
    return pi;
}

namespace detail {

inline void check_subset(const std::vector<std::size_t>& subset, std::size_t n) {
    for (std::size_t i : subset)
        if (i >= n)
            throw ValidationError("member index " + std::to_string(i) + " out of range for size " +
                                  std::to_string(n));
}

} // namespace detail

/// Necessity of the event `subset` (0-based member indices): the summed
/// excess of each member's probability over the largest probability
/// outside the subset, clamped at zero. N(empty) = 0 and N(X) = sum p = 1.
inline double necessity_measure(const ProbVector& p, const std::vector<std::size_t>& subset) {
    detail::check_subset(subset, p.size());
    std::vector<bool> inside(p.size(), false);
    for (std::size_t i : subset) inside[i] = true;

    double outside_max = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!inside[i]) outside_max = std::max(outside_max, p.values[i]);

    double necessity = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (inside[i]) necessity += std::max(0.0, p.values[i] - outside_max);
    return necessity;
}

/// Possibility of the event `subset`: max of member possibilities, 0 for empty.
inline double possibility_of_event(const PossVector& pi, const std::vector<std::size_t>& subset) {
    detail::check_subset(subset, pi.size());
    double best = 0.0;
    for (std::size_t i : subset) best = std::max(best, pi.values[i]);
    return best;
}

struct ConsistencyViolation {
    enum class Kind { dp, preference };
    Kind kind;
    std::uint32_t subset_mask = 0; // dp: bit i set when member i is in the event
    std::size_t first = 0, second = 0; // preference: the offending index pair
    std::string detail;
};

struct ConsistencyReport {
    bool dp_consistent = true;
    bool preference_preserving = true;
    double specificity_sum = 0.0;
    std::vector<ConsistencyViolation> violations;
};

/// Subset enumeration is 2^n; refuse beyond this many members outright.
constexpr std::size_t kAuditHardLimit = 24;

struct AuditOptions {
    std::size_t max_n = 12;
    /// Slack for P(A) <= Pi(A). The default suits freshly computed doubles;
    /// callers auditing 9-digit serialized values need quantization slack.
    double dp_tolerance = 1e-12;
    /// 0 checks the preference biconditional exactly; a positive value only
    /// flags order reversals wider than the tolerance.
    double preference_tolerance = 0.0;
};

/// Exhaustively checks probability/possibility consistency (P(A) <= Pi(A)
/// for every event A), the preference-preservation biconditional on all
/// index pairs, and reports sum(pi) as the specificity score.
inline ConsistencyReport audit_consistency(const ProbVector& p, const PossVector& pi,
                                           const AuditOptions& opts = {}) {
    if (p.size() != pi.size())
        throw ValidationError("probability and possibility vectors are not aligned");
    const std::size_t n = p.size();
    const std::size_t limit = std::min(opts.max_n, kAuditHardLimit);
    if (n > limit)
        throw ValidationError("refusing subset enumeration for " + std::to_string(n) +
                              " members (limit " + std::to_string(limit) + ")");

    ConsistencyReport report;
    for (double v : pi.values) report.specificity_sum += v;

    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
        double prob = 0.0, poss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint32_t{1} << i)) {
                prob += p.values[i];
                poss = std::max(poss, pi.values[i]);
            }
        }
        if (prob > poss + opts.dp_tolerance) {
            report.dp_consistent = false;
            report.violations.push_back({ConsistencyViolation::Kind::dp, mask, 0, 0,
                                         "P(A)=" + std::to_string(prob) + " exceeds Pi(A)=" +
                                             std::to_string(poss)});
        }
    }

    const double tol = opts.preference_tolerance;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double pid = p.values[i] - p.values[j];
            const double pod = pi.values[i] - pi.values[j];
            bool bad;
            if (tol == 0.0)
                bad = ((pid > 0) != (pod > 0)) || ((pid < 0) != (pod < 0));
            else
                bad = (pid > tol && -pod > tol) || (-pid > tol && pod > tol);
            if (bad) {
                report.preference_preserving = false;
                report.violations.push_back({ConsistencyViolation::Kind::preference, 0, i, j,
                                             "probability order p[" + std::to_string(i) + "] vs p[" +
                                                 std::to_string(j) + "] not mirrored by possibility"});
            }
        }
    }
    return report;
}

inline ConsistencyReport audit_consistency(const ProbVector& p, const PossVector& pi,
                                           std::size_t max_n) {
    AuditOptions opts;
    opts.max_n = max_n;
    return audit_consistency(p, pi, opts);
}

} // namespace fwn

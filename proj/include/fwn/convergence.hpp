#pragma once

// Synthetic-corpus harness: draws sense-annotated tokens from a known
// ground-truth distribution, runs them through the regular pipeline and
// measures how fast the estimated memberships approach the analytic ones.
//
// Randomness contract: all sampling uses std::mt19937_64 seeded with the
// caller's 64-bit seed, consuming exactly two raw draws per annotation
// (synset pick, then sense pick) mapped to [0,1) as (x >> 11) * 2^-53.
// No std::*_distribution is involved, so identical (model, n, seed)
// produce identical annotation streams on every platform, and a longer
// run is always a byte-level extension of a shorter one.

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fwn/decimal.hpp"
#include "fwn/error.hpp"
#include "fwn/fuzzifier.hpp"
#include "fwn/lexicon.hpp"
#include "fwn/possibility.hpp"
#include "fwn/sense_counts.hpp"
#include "fwn/sense_key.hpp"

namespace fwn {

struct GroundTruthEntry {
    Synset synset;
    std::vector<double> distribution; // aligned with synset.members
    double weight = 1.0;              // relative chance of picking this synset
};

/// A known-answer model: every member sense has a strictly positive true
/// probability, so no sense is impossible and no distribution collapses
/// to a point mass. Build through create(), which enforces that.
class GroundTruthModel {
  public:
    static GroundTruthModel create(std::vector<GroundTruthEntry> entries) {
        if (entries.empty()) throw ValidationError("model needs at least one synset");
        for (const GroundTruthEntry& entry : entries) {
            const std::string where = "synset " + entry.synset.id.text();
            if (entry.synset.members.empty())
                throw ValidationError(where + " has no members");
            if (entry.distribution.size() != entry.synset.members.size())
                throw ValidationError(where + ": distribution covers " +
                                      std::to_string(entry.distribution.size()) + " of " +
                                      std::to_string(entry.synset.members.size()) + " members");
            if (!(entry.weight > 0.0))
                throw ValidationError(where + ": selection weight must be positive");
            double sum = 0.0;
            for (double pr : entry.distribution) {
                if (!(pr > 0.0 && pr < 1.0))
                    throw ValidationError(where +
                                          ": sense probabilities must lie strictly in (0, 1)");
                sum += pr;
            }
            if (std::abs(sum - 1.0) > kProbSumTolerance)
                throw ValidationError(where + ": distribution sums to " + std::to_string(sum) +
                                      ", expected 1");
            for (std::size_t i = 0; i < entry.synset.members.size(); ++i)
                for (std::size_t j = i + 1; j < entry.synset.members.size(); ++j)
                    if (entry.synset.members[i] == entry.synset.members[j])
                        throw ValidationError(where + ": duplicate sense " +
                                              entry.synset.members[i].raw());
        }
        GroundTruthModel model;
        model.entries_ = std::move(entries);
        return model;
    }

    const std::vector<GroundTruthEntry>& entries() const { return entries_; }

  private:
    GroundTruthModel() = default;
    std::vector<GroundTruthEntry> entries_;
};

/// Model spec TSV:
///   synset<TAB>id<TAB>weight
///   sense<TAB>id<TAB>sense_key<TAB>probability
/// Sense lines must follow their synset line; `#` comments allowed.
inline GroundTruthModel parse_model(std::istream& in) {
    std::vector<GroundTruthEntry> entries;
    std::map<SynsetId, std::size_t> slot;
    std::string line;
    std::size_t line_no = 0;

    while (detail::read_line(in, line, line_no)) {
        if (detail::is_comment_or_blank(line)) continue;
        const auto fields = detail::split(line, '\t');
        if (fields[0] == "synset") {
            if (fields.size() != 3)
                throw ParseError("synset line needs 3 fields, got " +
                                 std::to_string(fields.size()), line_no);
            const SynsetId id = SynsetId::parse(fields[1], line_no);
            if (slot.count(id))
                throw ValidationError("synset " + id.text() + " declared twice");
            slot.emplace(id, entries.size());
            GroundTruthEntry entry;
            entry.synset.id = id;
            entry.weight = parse_number(fields[2], line_no, "weight");
            entries.push_back(std::move(entry));
        } else if (fields[0] == "sense") {
            if (fields.size() != 4)
                throw ParseError("sense line needs 4 fields, got " +
                                 std::to_string(fields.size()), line_no);
            const SynsetId id = SynsetId::parse(fields[1], line_no);
            auto it = slot.find(id);
            if (it == slot.end())
                throw ValidationError("sense line for undeclared synset " + id.text());
            GroundTruthEntry& entry = entries[it->second];
            entry.synset.members.push_back(SenseKey::parse(fields[2], line_no));
            entry.distribution.push_back(parse_number(fields[3], line_no, "probability"));
        } else {
            throw ParseError("unknown record tag '" + std::string(fields[0]) + "'", line_no);
        }
    }
    return GroundTruthModel::create(std::move(entries));
}

namespace detail {

inline double unit_draw(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

// Inclusive prefix sums of strictly positive weights.
inline std::vector<double> cumulative(const std::vector<double>& weights) {
    std::vector<double> cum;
    cum.reserve(weights.size());
    double sum = 0.0;
    for (double w : weights) cum.push_back(sum += w);
    return cum;
}

inline std::size_t pick(const std::vector<double>& cum, double unit) {
    const double target = unit * cum.back();
    for (std::size_t i = 0; i < cum.size(); ++i)
        if (target < cum[i]) return i;
    return cum.size() - 1; // rounding pushed the target onto the top edge
}

// Precomputed tables shared by the sampler and the experiment loop so both
// consume the rng identically.
struct SamplingPlan {
    std::vector<double> synset_cum;
    std::vector<std::vector<double>> sense_cum;

    explicit SamplingPlan(const GroundTruthModel& model) {
        std::vector<double> weights;
        weights.reserve(model.entries().size());
        for (const GroundTruthEntry& entry : model.entries()) {
            weights.push_back(entry.weight);
            sense_cum.push_back(cumulative(entry.distribution));
        }
        synset_cum = cumulative(weights);
    }

    const SenseKey& draw(const GroundTruthModel& model, std::mt19937_64& rng) const {
        const std::size_t k = pick(synset_cum, unit_draw(rng));
        const std::size_t i = pick(sense_cum[k], unit_draw(rng));
        return model.entries()[k].synset.members[i];
    }
};

} // namespace detail

/// Writes `n_draws` annotation lines in the sense_counts token format
/// (`doc<TAB>position<TAB>lemma<TAB>sense_key`), one per sampled token.
inline void sample_annotations(const GroundTruthModel& model, std::uint64_t n_draws,
                               std::uint64_t seed, std::ostream& out) {
    const detail::SamplingPlan plan(model);
    std::mt19937_64 rng(seed);
    for (std::uint64_t a = 1; a <= n_draws; ++a) {
        const SenseKey& key = plan.draw(model, rng);
        out << "sim\t" << a << "\t" << key.lemma() << "\t" << key.raw() << "\n";
    }
    if (!out) throw IoError("failed to write annotation stream");
}

/// Memberships computed straight from the true distributions, with no
/// sampling and no smoothing: the values the estimates converge to.
inline std::vector<FuzzySynset> analytic_fuzzy(const GroundTruthModel& model) {
    std::vector<FuzzySynset> result;
    result.reserve(model.entries().size());
    for (const GroundTruthEntry& entry : model.entries()) {
        ProbVector p{entry.distribution, false};
        const PossVector pi83 = transform_pi83(p);
        const PossVector pi93 = transform_pi93(p);
        FuzzySynset fuzzy;
        fuzzy.id = entry.synset.id;
        for (std::size_t i = 0; i < entry.synset.members.size(); ++i)
            fuzzy.senses.push_back({entry.synset.members[i], 0, p.values[i], pi83.values[i],
                                    pi93.values[i]});
        result.push_back(std::move(fuzzy));
    }
    return result;
}

struct ConvergenceRow {
    std::uint64_t corpus_size = 0;
    SynsetId synset;
    SenseKey sense;
    double estimated_mu83 = 0.0;
    double estimated_mu93 = 0.0;
    double analytic_mu83 = 0.0;
    double analytic_mu93 = 0.0;
    double error83 = 0.0;
    double error93 = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::uint64_t seed = 0;

    double max_error(std::uint64_t corpus_size, Variant variant) const {
        double worst = 0.0;
        for (const ConvergenceRow& row : rows)
            if (row.corpus_size == corpus_size)
                worst = std::max(worst, variant == Variant::v83 ? row.error83 : row.error93);
        return worst;
    }
};

/// For each corpus size: extend the sampled stream to that many draws,
/// fuzzify with smoothing on (the shipped pipeline), and record per-sense
/// errors against the analytic memberships. Sizes share one stream, so a
/// larger corpus is exactly the smaller one continued.
inline ConvergenceReport convergence_experiment(const GroundTruthModel& model,
                                                const std::vector<std::uint64_t>& sizes,
                                                std::uint64_t seed) {
    if (sizes.empty()) throw ValidationError("need at least one corpus size");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw ValidationError("corpus sizes must be positive");
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw ValidationError("corpus sizes must be strictly increasing");
    }

    const std::vector<FuzzySynset> analytic = analytic_fuzzy(model);
    const detail::SamplingPlan plan(model);
    std::mt19937_64 rng(seed);

    FrequencyTable table;
    table.corpus_id = "synthetic";
    table.wsd_id = "ground-truth";

    ConvergenceReport report;
    report.seed = seed;
    std::uint64_t drawn = 0;
    for (std::uint64_t size : sizes) {
        for (; drawn < size; ++drawn) {
            const SenseKey& key = plan.draw(model, rng);
            ++table.counts[key];
            ++table.total_annotations;
        }
        for (std::size_t k = 0; k < model.entries().size(); ++k) {
            const FuzzySynset estimated =
                fuzzify_synset(model.entries()[k].synset, table, true);
            for (std::size_t i = 0; i < estimated.senses.size(); ++i) {
                const FuzzySense& est = estimated.senses[i];
                const FuzzySense& ana = analytic[k].senses[i];
                ConvergenceRow row;
                row.corpus_size = size;
                row.synset = estimated.id;
                row.sense = est.sense;
                row.estimated_mu83 = est.mu83;
                row.estimated_mu93 = est.mu93;
                row.analytic_mu83 = ana.mu83;
                row.analytic_mu93 = ana.mu93;
                row.error83 = std::abs(est.mu83 - ana.mu83);
                row.error93 = std::abs(est.mu93 - ana.mu93);
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

inline void serialize_report(const ConvergenceReport& report, std::ostream& out) {
    out << "# convergence-report v1\n";
    out << "# seed: " << report.seed << "\n";
    out << "size\tsynset\tsense\test_mu83\test_mu93\tana_mu83\tana_mu93\terr83\terr93\n";
    for (const ConvergenceRow& row : report.rows) {
        out << row.corpus_size << "\t" << row.synset.text() << "\t" << row.sense.raw() << "\t"
            << format_fixed9(row.estimated_mu83) << "\t" << format_fixed9(row.estimated_mu93)
            << "\t" << format_fixed9(row.analytic_mu83) << "\t"
            << format_fixed9(row.analytic_mu93) << "\t" << format_fixed9(row.error83) << "\t"
            << format_fixed9(row.error93) << "\n";
    }
    if (!out) throw IoError("failed to write convergence report");
}

} // namespace fwn

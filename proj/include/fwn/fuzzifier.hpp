#pragma once

// Applies the count -> probability -> possibility -> membership pipeline
// to every synset of a lexicon and serializes the result as fwn-tsv v1.
//
// fwn-tsv v1 (UTF-8, LF, TAB-separated):
//   # fwn-tsv v1
//   # lexicon: <source_id>
//   # corpus: <corpus_id>
//   # wsd: <wsd_id>
//   # smoothing: <on|off>
//   synset_id<TAB>sense_key<TAB>raw_count<TAB>pr<TAB>mu83<TAB>mu93
//
// Rows are sorted by synset id, then by descending pr with ties broken by
// sense-key text; numbers carry exactly 9 fractional digits. Serialization
// is byte-deterministic: the same FuzzyWordNet always yields the same file.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fwn/decimal.hpp"
#include "fwn/error.hpp"
#include "fwn/lexicon.hpp"
#include "fwn/possibility.hpp"
#include "fwn/sense_counts.hpp"
#include "fwn/sense_key.hpp"

namespace fwn {

struct FuzzySense {
    SenseKey sense;
    std::uint64_t raw_count = 0;
    double pr = 0.0;
    double mu83 = 0.0;
    double mu93 = 0.0;
};

struct FuzzySynset {
    SynsetId id;
    std::vector<FuzzySense> senses;
    std::uint64_t evidence_total = 0; // pre-smoothing count sum
};

struct FuzzyWordNet {
    std::map<SynsetId, FuzzySynset> synsets;
    std::string lexicon_id;
    std::string corpus_id;
    std::string wsd_id;
    bool smoothing = true;
    std::string format_version = "v1";
};

/// Runs the four pipeline steps for one synset. Counts for members absent
/// from the table are zero; with smoothing off, a synset without any
/// evidence has no defined distribution and is an error.
inline FuzzySynset fuzzify_synset(const Synset& synset, const FrequencyTable& table,
                                  bool smoothing) {
    if (synset.members.empty())
        throw ValidationError("synset " + synset.id.text() + " has no members");

    std::vector<std::uint64_t> counts;
    counts.reserve(synset.members.size());
    for (const SenseKey& key : synset.members) counts.push_back(table.count_for(key));

    const ProbVector p = smoothed_probabilities(counts, smoothing);
    const PossVector pi83 = transform_pi83(p);
    const PossVector pi93 = transform_pi93(p);

    FuzzySynset fuzzy;
    fuzzy.id = synset.id;
    fuzzy.senses.reserve(synset.members.size());
    for (std::size_t i = 0; i < synset.members.size(); ++i) {
        fuzzy.senses.push_back(
            {synset.members[i], counts[i], p.values[i], pi83.values[i], pi93.values[i]});
        fuzzy.evidence_total += counts[i];
    }
    return fuzzy;
}

/// Fuzzifies every synset. `jobs` > 1 fans synsets out to worker threads;
/// the result (and its serialization) is identical for any worker count.
inline FuzzyWordNet fuzzify_lexicon(const Lexicon& lex, const FrequencyTable& table,
                                    bool smoothing, unsigned jobs = 1) {
    FuzzyWordNet fwn;
    fwn.lexicon_id = lex.source_id;
    fwn.corpus_id = table.corpus_id;
    fwn.wsd_id = table.wsd_id;
    fwn.smoothing = smoothing;

    std::vector<const Synset*> work;
    work.reserve(lex.synsets.size());
    for (const auto& [id, synset] : lex.synsets) work.push_back(&synset);

    std::vector<std::optional<FuzzySynset>> results(work.size());
    std::vector<std::string> errors(work.size());

    auto run = [&](std::size_t i) {
        try {
            results[i] = fuzzify_synset(*work[i], table, smoothing);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    };

    if (jobs <= 1 || work.size() <= 1) {
        for (std::size_t i = 0; i < work.size(); ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < work.size(); i = next.fetch_add(1)) run(i);
        };
        std::vector<std::thread> pool;
        const unsigned spawned = std::min<std::size_t>(jobs, work.size());
        pool.reserve(spawned);
        for (unsigned t = 0; t < spawned; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t i = 0; i < work.size(); ++i) {
        if (!errors[i].empty())
            throw ValidationError("synset " + work[i]->id.text() + ": " + errors[i]);
        fwn.synsets.emplace(work[i]->id, std::move(*results[i]));
    }
    return fwn;
}

inline void serialize_fwn(const FuzzyWordNet& fwn, std::ostream& out) {
    out << "# fwn-tsv " << fwn.format_version << "\n";
    out << "# lexicon: " << fwn.lexicon_id << "\n";
    out << "# corpus: " << fwn.corpus_id << "\n";
    out << "# wsd: " << fwn.wsd_id << "\n";
    out << "# smoothing: " << (fwn.smoothing ? "on" : "off") << "\n";

    for (const auto& [id, synset] : fwn.synsets) {
        std::vector<const FuzzySense*> rows;
        rows.reserve(synset.senses.size());
        for (const FuzzySense& sense : synset.senses) rows.push_back(&sense);
        std::sort(rows.begin(), rows.end(), [](const FuzzySense* a, const FuzzySense* b) {
            if (a->pr != b->pr) return a->pr > b->pr;
            return a->sense.raw() < b->sense.raw();
        });
        for (const FuzzySense* row : rows) {
            out << id.text() << "\t" << row->sense.raw() << "\t" << row->raw_count << "\t"
                << format_fixed9(row->pr) << "\t" << format_fixed9(row->mu83) << "\t"
                << format_fixed9(row->mu93) << "\n";
        }
    }
    if (!out) throw IoError("failed to write fwn-tsv output");
}

/// One membership-invariant breach found while reading an fwn-tsv file.
struct IntegrityViolation {
    std::size_t line = 0; // 0 for synset-level findings
    std::string synset;
    std::string detail;
};

constexpr double kMembershipUnityTolerance = 1e-6;

/// Reads fwn-tsv v1. Invariant breaches (mu93 above mu83, pr above mu93,
/// values outside [0,1], synset max membership away from 1) throw
/// IntegrityError, or are appended to `violations` when given so callers
/// can list every offending row.
inline FuzzyWordNet parse_fwn(std::istream& in, std::vector<IntegrityViolation>* violations = nullptr) {
    auto flag = [&](std::size_t line, std::string synset, std::string detail) {
        if (violations)
            violations->push_back({line, std::move(synset), std::move(detail)});
        else
            throw IntegrityError((line ? "line " + std::to_string(line) + ": " : "") + "synset " +
                                 synset + ": " + detail);
    };

    FuzzyWordNet fwn;
    std::string line;
    std::size_t line_no = 0;

    if (!detail::read_line(in, line, line_no))
        throw ParseError("empty input, expected '# fwn-tsv v1' header");
    if (line != "# fwn-tsv v1")
        throw ParseError("unsupported format version (expected '# fwn-tsv v1', got '" + line + "')",
                         line_no);

    while (detail::read_line(in, line, line_no)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string_view view(line);
            if (view.starts_with("# lexicon: "))
                fwn.lexicon_id = view.substr(11);
            else if (view.starts_with("# corpus: "))
                fwn.corpus_id = view.substr(10);
            else if (view.starts_with("# wsd: "))
                fwn.wsd_id = view.substr(7);
            else if (view.starts_with("# smoothing: ")) {
                const std::string_view value = view.substr(13);
                if (value == "on")
                    fwn.smoothing = true;
                else if (value == "off")
                    fwn.smoothing = false;
                else
                    throw ParseError("smoothing must be 'on' or 'off', got '" + std::string(value) +
                                     "'", line_no);
            }
            continue;
        }

        const auto fields = detail::split(line, '\t');
        if (fields.size() != 6)
            throw ParseError("fwn-tsv row needs 6 fields, got " + std::to_string(fields.size()),
                             line_no);
        FuzzySense sense;
        const SynsetId id = SynsetId::parse(fields[0], line_no);
        sense.sense = SenseKey::parse(fields[1], line_no);
        sense.raw_count = detail::parse_uint(fields[2], line_no, "raw_count");
        sense.pr = parse_number(fields[3], line_no, "pr");
        sense.mu83 = parse_number(fields[4], line_no, "mu83");
        sense.mu93 = parse_number(fields[5], line_no, "mu93");

        for (const auto& [what, value] :
             {std::pair<const char*, double>{"pr", sense.pr}, {"mu83", sense.mu83},
              {"mu93", sense.mu93}})
            if (value < 0.0 || value > 1.0 + kMembershipUnityTolerance)
                flag(line_no, id.text(), std::string(what) + " outside [0,1]: " + format_fixed9(value));
        if (sense.mu93 > sense.mu83)
            flag(line_no, id.text(), "mu93 " + format_fixed9(sense.mu93) + " exceeds mu83 " +
                                         format_fixed9(sense.mu83));
        if (sense.pr > sense.mu93)
            flag(line_no, id.text(), "pr " + format_fixed9(sense.pr) + " exceeds mu93 " +
                                         format_fixed9(sense.mu93));

        FuzzySynset& synset = fwn.synsets[id];
        synset.id = id;
        for (const FuzzySense& existing : synset.senses)
            if (existing.sense == sense.sense)
                throw ParseError("duplicate row for sense " + sense.sense.raw() + " in " + id.text(),
                                 line_no);
        synset.evidence_total += sense.raw_count;
        synset.senses.push_back(std::move(sense));
    }

    for (const auto& [id, synset] : fwn.synsets) {
        double max83 = 0.0, max93 = 0.0;
        for (const FuzzySense& sense : synset.senses) {
            max83 = std::max(max83, sense.mu83);
            max93 = std::max(max93, sense.mu93);
        }
        if (std::abs(max83 - 1.0) > kMembershipUnityTolerance)
            flag(0, id.text(), "max mu83 is " + format_fixed9(max83) + ", expected 1");
        if (std::abs(max93 - 1.0) > kMembershipUnityTolerance)
            flag(0, id.text(), "max mu93 is " + format_fixed9(max93) + ", expected 1");
    }
    return fwn;
}

struct Membership {
    double mu83 = 0.0;
    double mu93 = 0.0;
};

/// Membership pair for `lemma` inside synset `id`; empty when the lemma
/// has no sense there. An unknown synset id is an error, not an absence.
inline std::optional<Membership> query_membership(const FuzzyWordNet& fwn, std::string_view lemma,
                                                  const SynsetId& id) {
    auto it = fwn.synsets.find(id);
    if (it == fwn.synsets.end())
        throw ValidationError("unknown synset " + id.text());

    std::string needle = detail::ascii_lower(lemma);
    for (char& c : needle)
        if (c == ' ') c = '_';
    for (const FuzzySense& sense : it->second.senses)
        if (sense.sense.lemma() == needle) return Membership{sense.mu83, sense.mu93};
    return std::nullopt;
}

/// First `k` senses of the synset by descending membership of the chosen
/// variant; ties resolve by sense-key text.
inline std::vector<std::pair<SenseKey, double>> top_senses(const FuzzyWordNet& fwn,
                                                           const SynsetId& id, std::size_t k,
                                                           Variant variant) {
    if (k == 0) throw ValidationError("k must be at least 1");
    auto it = fwn.synsets.find(id);
    if (it == fwn.synsets.end())
        throw ValidationError("unknown synset " + id.text());

    std::vector<std::pair<SenseKey, double>> ranked;
    ranked.reserve(it->second.senses.size());
    for (const FuzzySense& sense : it->second.senses)
        ranked.emplace_back(sense.sense, variant == Variant::v83 ? sense.mu83 : sense.mu93);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first.raw() < b.first.raw();
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

} // namespace fwn

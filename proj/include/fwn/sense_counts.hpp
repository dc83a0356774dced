#pragma once

// Per-sense occurrence counts gathered from sense-annotated corpus output.
//
// Two input layouts are accepted:
//   token:      doc_id<TAB>position<TAB>lemma<TAB>sense_key   (one annotation per line)
//   aggregated: sense_key<TAB>count
// `#` lines are comments. Annotations whose sense key fails sense-key
// syntax are hard parse errors; corrupted annotations would silently
// corrupt every downstream value.

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "fwn/error.hpp"
#include "fwn/lexicon.hpp"
#include "fwn/sense_key.hpp"
#include "fwn/text.hpp"

namespace fwn {

struct FrequencyTable {
    std::map<SenseKey, std::uint64_t> counts;
    std::string corpus_id;
    std::string wsd_id;
    std::uint64_t total_annotations = 0;

    std::uint64_t count_for(const SenseKey& key) const {
        auto it = counts.find(key);
        return it == counts.end() ? 0 : it->second;
    }
};

/// Annotations whose sense key does not occur in the target lexicon.
struct UnknownReport {
    std::map<SenseKey, std::uint64_t> unknown_keys;

    bool empty() const { return unknown_keys.empty(); }
    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (const auto& [key, n] : unknown_keys) sum += n;
        return sum;
    }
};

enum class AnnotationFormat { token, aggregated };

inline FrequencyTable ingest_annotations(std::istream& in, AnnotationFormat format,
                                         std::string corpus_id, std::string wsd_id) {
    FrequencyTable table;
    table.corpus_id = std::move(corpus_id);
    table.wsd_id = std::move(wsd_id);

    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(in, line, line_no)) {
        if (detail::is_comment_or_blank(line)) {
            // Aggregated files written by serialize_aggregated carry their
            // provenance in comments; recover it unless the caller named it.
            const std::string_view view(line);
            if (table.corpus_id.empty() && view.starts_with("# corpus: "))
                table.corpus_id = view.substr(10);
            else if (table.wsd_id.empty() && view.starts_with("# wsd: "))
                table.wsd_id = view.substr(7);
            continue;
        }
        const auto fields = detail::split(line, '\t');
        if (format == AnnotationFormat::token) {
            if (fields.size() != 4)
                throw ParseError("token annotation needs 4 fields, got " +
                                 std::to_string(fields.size()), line_no);
            table.counts[SenseKey::parse(fields[3], line_no)] += 1;
            table.total_annotations += 1;
        } else {
            if (fields.size() != 2)
                throw ParseError("aggregated record needs 2 fields, got " +
                                 std::to_string(fields.size()), line_no);
            const std::uint64_t n = detail::parse_uint(fields[1], line_no, "count");
            table.counts[SenseKey::parse(fields[0], line_no)] += n;
            table.total_annotations += n;
        }
    }
    return table;
}

/// Pointwise sum of two tables from the same WSD system. Corpus ids are
/// joined with '+' when they differ; counts merge is order-insensitive.
inline FrequencyTable merge_tables(const FrequencyTable& a, const FrequencyTable& b) {
    if (a.wsd_id != b.wsd_id)
        throw ValidationError("refusing to merge counts from different WSD systems ('" + a.wsd_id +
                              "' vs '" + b.wsd_id + "')");
    FrequencyTable merged;
    merged.wsd_id = a.wsd_id;
    if (a.corpus_id == b.corpus_id || b.corpus_id.empty())
        merged.corpus_id = a.corpus_id;
    else if (a.corpus_id.empty())
        merged.corpus_id = b.corpus_id;
    else
        merged.corpus_id = a.corpus_id + "+" + b.corpus_id;

    merged.counts = a.counts;
    for (const auto& [key, n] : b.counts) merged.counts[key] += n;
    merged.total_annotations = a.total_annotations + b.total_annotations;
    return merged;
}

/// Splits a table into the part whose keys exist in `lex` and an
/// UnknownReport holding everything else. Counts are conserved.
inline std::pair<FrequencyTable, UnknownReport> align_to_lexicon(const FrequencyTable& table,
                                                                const Lexicon& lex) {
    FrequencyTable aligned;
    aligned.corpus_id = table.corpus_id;
    aligned.wsd_id = table.wsd_id;
    UnknownReport unknown;
    for (const auto& [key, n] : table.counts) {
        if (lex.sense_index.contains(key)) {
            aligned.counts.emplace(key, n);
            aligned.total_annotations += n;
        } else {
            unknown.unknown_keys.emplace(key, n);
        }
    }
    return {std::move(aligned), std::move(unknown)};
}

/// Writes the aggregated counts layout, keys in sorted order.
inline void serialize_aggregated(const FrequencyTable& table, std::ostream& out) {
    out << "# aggregated sense counts\n";
    out << "# corpus: " << table.corpus_id << "\n";
    out << "# wsd: " << table.wsd_id << "\n";
    for (const auto& [key, n] : table.counts)
        out << key.raw() << "\t" << n << "\n";
    if (!out) throw IoError("failed to write counts");
}

} // namespace fwn

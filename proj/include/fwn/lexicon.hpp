#pragma once

// In-memory model of a WordNet-like lexical database and its loaders.
//
// Two input formats are supported: the WNDB `index.sense` file (optionally
// enriched with `data.pos` files for glosses) and a line-oriented TSV
// fixture format. A loaded Lexicon is immutable in practice and safe to
// share across threads.

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fwn/error.hpp"
#include "fwn/sense_key.hpp"
#include "fwn/text.hpp"

namespace fwn {

struct Synset {
    SynsetId id;
    std::vector<SenseKey> members;
    std::optional<std::string> gloss;
};

struct Lexicon {
    std::map<SynsetId, Synset> synsets;
    std::map<SenseKey, SynsetId> sense_index;
    std::string source_id;

    std::size_t synset_count() const { return synsets.size(); }
    std::size_t sense_count() const { return sense_index.size(); }
};

enum class ViolationKind {
    empty_synset,
    duplicate_member,
    duplicate_lemma,
    missing_index,
    dangling_index,
    id_mismatch,
};

inline const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::empty_synset: return "empty-synset";
        case ViolationKind::duplicate_member: return "duplicate-member";
        case ViolationKind::duplicate_lemma: return "duplicate-lemma";
        case ViolationKind::missing_index: return "missing-index";
        case ViolationKind::dangling_index: return "dangling-index";
        case ViolationKind::id_mismatch: return "id-mismatch";
    }
    return "unknown";
}

struct Violation {
    ViolationKind kind;
    std::string subject; // synset id or sense key text
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool empty() const { return violations.empty(); }
};

/// Reports every breach of the Synset/Lexicon structural invariants.
/// Loaders enforce these up front, so a freshly loaded Lexicon yields an
/// empty report; the check exists for hand-built or mutated values.
inline ValidationReport validate_lexicon(const Lexicon& lex) {
    ValidationReport report;
    auto add = [&](ViolationKind kind, std::string subject, std::string detail) {
        report.violations.push_back({kind, std::move(subject), std::move(detail)});
    };

    for (const auto& [id, synset] : lex.synsets) {
        if (!(id == synset.id))
            add(ViolationKind::id_mismatch, id.text(),
                "synset stored under key " + id.text() + " carries id " + synset.id.text());
        if (synset.members.empty())
            add(ViolationKind::empty_synset, id.text(), "synset has no members");

        std::set<SenseKey> seen;
        std::set<std::string, std::less<>> lemmas;
        for (const SenseKey& key : synset.members) {
            if (!seen.insert(key).second)
                add(ViolationKind::duplicate_member, id.text(), "duplicate sense key " + key.raw());
            else if (!lemmas.insert(std::string(key.lemma())).second)
                add(ViolationKind::duplicate_lemma, id.text(),
                    "lemma '" + std::string(key.lemma()) + "' appears twice");

            auto it = lex.sense_index.find(key);
            if (it == lex.sense_index.end())
                add(ViolationKind::missing_index, key.raw(), "member missing from sense index");
            else if (!(it->second == id))
                add(ViolationKind::missing_index, key.raw(),
                    "member of " + id.text() + " indexed under " + it->second.text());
        }
    }

    for (const auto& [key, id] : lex.sense_index) {
        auto it = lex.synsets.find(id);
        bool backed = false;
        if (it != lex.synsets.end())
            for (const SenseKey& member : it->second.members)
                if (member == key) { backed = true; break; }
        if (!backed)
            add(ViolationKind::dangling_index, key.raw(),
                "index entry points to " + id.text() + " which does not list it");
    }
    return report;
}

namespace detail {

inline void index_member(Lexicon& lex, const SynsetId& id, const SenseKey& key, std::size_t line) {
    auto [it, fresh] = lex.sense_index.emplace(key, id);
    if (!fresh)
        throw ValidationError("duplicate sense key " + key.raw() + " (line " + std::to_string(line) +
                              "; already in " + it->second.text() + ")");
    Synset& synset = lex.synsets[id];
    synset.id = id;
    for (const SenseKey& existing : synset.members)
        if (existing.lemma() == key.lemma())
            throw ValidationError("synset " + id.text() + " already has a sense of lemma '" +
                                  std::string(key.lemma()) + "' (line " + std::to_string(line) + ")");
    synset.members.push_back(key);
}

} // namespace detail

/// Builds a Lexicon from a WNDB `index.sense` stream. Each record is
/// `sense_key synset_offset sense_number tag_cnt`; synsets are grouped by
/// (pos derived from ss_type, offset) and members are kept in sense-key
/// order so the result is independent of input line order.
///
/// `data_streams` optionally maps a pos tag to the matching `data.pos`
/// stream; glosses are attached from it and member lemmas are
/// cross-checked. A stream under 'a' also covers satellite ('s') synsets,
/// as in the WNDB file layout.
inline Lexicon load_wndb(std::istream& index_sense,
                         const std::map<char, std::istream*>& data_streams = {},
                         std::string source_id = "wndb") {
    Lexicon lex;
    lex.source_id = std::move(source_id);

    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(index_sense, line, line_no)) {
        if (line.empty()) continue;
        const auto fields = detail::split_spaces(line);
        if (fields.size() != 4)
            throw ParseError("index.sense record needs 4 fields, got " +
                             std::to_string(fields.size()), line_no);
        SenseKey key = SenseKey::parse(fields[0], line_no);
        if (fields[1].size() > 8 || !detail::all_digits(fields[1]))
            throw ParseError("synset offset is not a decimal number: '" + std::string(fields[1]) + "'",
                             line_no);
        detail::parse_uint(fields[2], line_no, "sense_number");
        detail::parse_uint(fields[3], line_no, "tag_cnt");

        SynsetId id = SynsetId::from_offset(key.pos(), detail::parse_uint(fields[1], line_no, "offset"));
        detail::index_member(lex, id, key, line_no);
    }

    // Canonical member order; index.sense carries no intra-synset order.
    for (auto& [id, synset] : lex.synsets)
        std::sort(synset.members.begin(), synset.members.end());

    for (const auto& [pos, stream] : data_streams) {
        if (!valid_pos(pos))
            throw ValidationError(std::string("unknown data stream pos '") + pos + "'");
        if (stream == nullptr) continue;

        std::set<SynsetId> seen;
        std::string data_line;
        std::size_t data_line_no = 0;
        while (detail::read_line(*stream, data_line, data_line_no)) {
            if (data_line.empty() || data_line[0] == ' ') continue; // license header
            const auto fields = detail::split_spaces(data_line);
            if (fields.size() < 4)
                throw ParseError(std::string("data.") + pos + " record too short", data_line_no);
            const std::string_view offset = fields[0];
            const std::string_view ss_type = fields[2];
            if (offset.size() != 8 || !detail::all_digits(offset) || ss_type.size() != 1 ||
                !valid_pos(ss_type[0]))
                throw ParseError(std::string("malformed data.") + pos + " record", data_line_no);

            std::uint64_t w_cnt = 0;
            {
                auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(),
                                                 w_cnt, 16);
                if (ec != std::errc{} || ptr != fields[3].data() + fields[3].size() || w_cnt == 0)
                    throw ParseError("bad word count in data record", data_line_no);
            }
            if (fields.size() < 4 + 2 * w_cnt)
                throw ParseError("data record shorter than its word count", data_line_no);

            SynsetId id(ss_type[0], std::string(offset));
            auto it = lex.synsets.find(id);
            if (it == lex.synsets.end()) continue; // synset outside this lexicon
            seen.insert(id);

            std::set<std::string> data_lemmas;
            for (std::uint64_t w = 0; w < w_cnt; ++w)
                data_lemmas.insert(detail::ascii_lower(fields[4 + 2 * w]));
            std::set<std::string> member_lemmas;
            for (const SenseKey& key : it->second.members)
                member_lemmas.insert(std::string(key.lemma()));
            if (data_lemmas != member_lemmas)
                throw ValidationError("synset " + id.text() + " members disagree with data." +
                                      std::string(1, pos) + " line " + std::to_string(data_line_no));

            const std::size_t bar = data_line.find(" | ");
            if (bar != std::string::npos)
                it->second.gloss = data_line.substr(bar + 3);
        }

        // A provided data stream must cover every synset of the pos it serves.
        for (const auto& [id, synset] : lex.synsets) {
            const bool covered = id.pos() == pos || (pos == 'a' && id.pos() == 's');
            if (covered && !seen.contains(id))
                throw ValidationError("synset " + id.text() + " missing from data." +
                                      std::string(1, pos));
        }
    }
    return lex;
}

/// Loads the TSV fixture format:
///   synset<TAB>id[<TAB>gloss]
///   member<TAB>id<TAB>sense_key
/// `#` lines are comments. Members keep declaration order.
inline Lexicon load_simple_lexicon(std::istream& in, std::string source_id = "simple") {
    Lexicon lex;
    lex.source_id = std::move(source_id);

    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(in, line, line_no)) {
        if (detail::is_comment_or_blank(line)) continue;
        const auto fields = detail::split(line, '\t');
        const std::string_view tag = fields[0];

        if (tag == "synset") {
            if (fields.size() != 2 && fields.size() != 3)
                throw ParseError("synset record needs an id and optional gloss", line_no);
            SynsetId id = SynsetId::parse(fields[1], line_no);
            auto [it, fresh] = lex.synsets.emplace(id, Synset{id, {}, std::nullopt});
            if (!fresh)
                throw ValidationError("synset " + id.text() + " declared twice (line " +
                                      std::to_string(line_no) + ")");
            if (fields.size() == 3) it->second.gloss = std::string(fields[2]);
        } else if (tag == "member") {
            if (fields.size() != 3)
                throw ParseError("member record needs an id and a sense key", line_no);
            SynsetId id = SynsetId::parse(fields[1], line_no);
            if (!lex.synsets.contains(id))
                throw ValidationError("member references undeclared synset " + id.text() +
                                      " (line " + std::to_string(line_no) + ")");
            detail::index_member(lex, id, SenseKey::parse(fields[2], line_no), line_no);
        } else {
            throw ParseError("unknown record tag '" + std::string(tag) + "'", line_no);
        }
    }

    for (const auto& [id, synset] : lex.synsets)
        if (synset.members.empty())
            throw ValidationError("synset " + id.text() + " declared without members");
    return lex;
}

/// Writes the simple-lexicon TSV form; reloading it restores the same
/// synsets and sense index. The source tag is emitted as a comment only.
inline void serialize_simple_lexicon(const Lexicon& lex, std::ostream& out) {
    out << "# simple-lexicon\n";
    if (!lex.source_id.empty()) out << "# source: " << lex.source_id << "\n";
    for (const auto& [id, synset] : lex.synsets) {
        out << "synset\t" << id.text();
        if (synset.gloss) out << "\t" << *synset.gloss;
        out << "\n";
        for (const SenseKey& key : synset.members)
            out << "member\t" << id.text() << "\t" << key.raw() << "\n";
    }
    if (!out) throw IoError("failed to write lexicon");
}

} // namespace fwn

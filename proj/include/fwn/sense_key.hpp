#pragma once

// Identifiers for word-senses and synsets.
//
// A sense key has the WordNet textual form
//   lemma%ss_type:lex_filenum:lex_id:head_word:head_id
// and a synset id canonically prints as `<pos>#<offset>` with an 8-digit
// zero-padded offset. Keys are lowercased once at parse time and compared
// byte-wise afterwards.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "fwn/error.hpp"
#include "fwn/text.hpp"

namespace fwn {

inline bool valid_pos(char c) {
    return c == 'n' || c == 'v' || c == 'a' || c == 'r' || c == 's';
}

/// Synset part of speech for a WNDB ss_type number (satellites get 's').
inline char pos_for_ss_type(int ss_type) {
    switch (ss_type) {
        case 1: return 'n';
        case 2: return 'v';
        case 3: return 'a';
        case 4: return 'r';
        case 5: return 's';
    }
    throw ValidationError("ss_type out of range: " + std::to_string(ss_type));
}

class SenseKey {
public:
    /// Empty placeholder so value types holding keys stay aggregate-friendly;
    /// real keys come from parse().
    SenseKey() = default;

    static SenseKey parse(std::string_view raw, std::size_t line = 0) {
        const std::size_t pct = raw.find('%');
        if (pct == std::string_view::npos || raw.find('%', pct + 1) != std::string_view::npos)
            throw ParseError("sense key must contain exactly one '%': '" + std::string(raw) + "'", line);
        if (pct == 0)
            throw ParseError("sense key has an empty lemma: '" + std::string(raw) + "'", line);
        const std::string_view lemma = raw.substr(0, pct);
        if (lemma.find(' ') != std::string_view::npos)
            throw ParseError("lemma spaces must be encoded as '_': '" + std::string(raw) + "'", line);

        const auto fields = detail::split(raw.substr(pct + 1), ':');
        if (fields.size() != 5)
            throw ParseError("sense key needs four ':' after '%': '" + std::string(raw) + "'", line);
        if (fields[0].size() != 1 || fields[0][0] < '1' || fields[0][0] > '5')
            throw ParseError("ss_type must be a digit 1-5: '" + std::string(raw) + "'", line);

        SenseKey key;
        key.raw_ = detail::ascii_lower(raw);
        key.lemma_len_ = pct;
        key.ss_type_ = fields[0][0] - '0';
        return key;
    }

    /// Normalized (lowercase) textual form.
    const std::string& raw() const { return raw_; }
    std::string_view lemma() const { return std::string_view(raw_).substr(0, lemma_len_); }
    int ss_type() const { return ss_type_; }
    char pos() const { return pos_for_ss_type(ss_type_); }

    friend std::strong_ordering operator<=>(const SenseKey& a, const SenseKey& b) {
        return a.raw_ <=> b.raw_;
    }
    friend bool operator==(const SenseKey& a, const SenseKey& b) { return a.raw_ == b.raw_; }

private:
    std::string raw_;
    std::size_t lemma_len_ = 0;
    int ss_type_ = 0;
};

class SynsetId {
public:
    SynsetId() : pos_('n'), offset_("00000000") {}

    SynsetId(char pos, std::string offset) : pos_(pos), offset_(std::move(offset)) {
        if (!valid_pos(pos_))
            throw ValidationError(std::string("invalid part of speech '") + pos_ + "'");
        if (offset_.size() != 8 || !detail::all_digits(offset_))
            throw ValidationError("synset offset must be 8 decimal digits: '" + offset_ + "'");
    }

    /// Parses the canonical `<pos>#<offset>` form.
    static SynsetId parse(std::string_view text, std::size_t line = 0) {
        if (text.size() != 10 || text[1] != '#' || !valid_pos(text[0]) ||
            !detail::all_digits(text.substr(2)))
            throw ParseError("malformed synset id: '" + std::string(text) + "'", line);
        return SynsetId(text[0], std::string(text.substr(2)));
    }

    static SynsetId from_offset(char pos, std::uint64_t offset) {
        if (offset > 99999999)
            throw ValidationError("synset offset exceeds 8 digits: " + std::to_string(offset));
        std::string digits = std::to_string(offset);
        return SynsetId(pos, std::string(8 - digits.size(), '0') + digits);
    }

    char pos() const { return pos_; }
    const std::string& offset() const { return offset_; }
    std::string text() const { return std::string(1, pos_) + "#" + offset_; }

    // (pos, offset) order coincides with canonical-text order.
    friend std::strong_ordering operator<=>(const SynsetId& a, const SynsetId& b) {
        if (auto c = a.pos_ <=> b.pos_; c != 0) return c;
        return a.offset_ <=> b.offset_;
    }
    friend bool operator==(const SynsetId& a, const SynsetId& b) {
        return a.pos_ == b.pos_ && a.offset_ == b.offset_;
    }

private:
    char pos_;
    std::string offset_;
};

} // namespace fwn

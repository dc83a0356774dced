#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fwn/lexicon.hpp"
#include "test_util.hpp"

using namespace fwn;

namespace {

Lexicon load_simple_fixture() {
    std::ifstream in(testutil::data_dir() / "mini.lex.tsv");
    REQUIRE(in.good());
    return load_simple_lexicon(in, "mini");
}

Lexicon load_simple_text(const std::string& text) {
    std::istringstream in(text);
    return load_simple_lexicon(in);
}

} // namespace

TEST_CASE("simple lexicon fixture loads with glosses and declaration order") {
    const Lexicon lex = load_simple_fixture();
    CHECK(lex.synset_count() == 10);
    CHECK(lex.sense_count() == 24);
    CHECK(lex.source_id == "mini");

    const Synset& dog = lex.synsets.at(SynsetId::parse("n#02084442"));
    REQUIRE(dog.members.size() == 3);
    CHECK(dog.members[0].raw() == "dog%1:05:00::");
    CHECK(dog.members[1].raw() == "domestic_dog%1:05:00::");
    CHECK(dog.members[2].raw() == "canis_familiaris%1:05:00::");
    REQUIRE(dog.gloss.has_value());
    CHECK(*dog.gloss == "a member of the genus Canis domesticated by man");

    CHECK(lex.sense_index.at(SenseKey::parse("apple%1:13:00::")) == SynsetId::parse("n#07739125"));
    CHECK(validate_lexicon(lex).empty());
}

TEST_CASE("simple lexicon serialization round-trips") {
    const Lexicon lex = load_simple_fixture();
    std::ostringstream out;
    serialize_simple_lexicon(lex, out);
    std::istringstream in(out.str());
    const Lexicon again = load_simple_lexicon(in, lex.source_id);

    REQUIRE(again.synset_count() == lex.synset_count());
    CHECK(again.sense_index == lex.sense_index);
    for (const auto& [id, synset] : lex.synsets) {
        const Synset& other = again.synsets.at(id);
        CHECK(other.members == synset.members);
        CHECK(other.gloss == synset.gloss);
    }
}

TEST_CASE("simple lexicon loader rejects malformed input") {
    CHECK_THROWS_AS(load_simple_text("synset\tn#00000001\nmember\tn#00000001\tdog%1:05:00::\n"
                                     "member\tn#00000002\tcat%1:05:00::\n"),
                    ValidationError); // undeclared synset
    CHECK_THROWS_AS(load_simple_text("synset\tn#00000001\nsynset\tn#00000001\n"), ValidationError);
    CHECK_THROWS_AS(load_simple_text("synset\tn#00000001\n"), ValidationError); // no members
    CHECK_THROWS_AS(load_simple_text("record\tn#00000001\n"), ParseError);
    CHECK_THROWS_AS(load_simple_text("member\tn#00000001\n"), ParseError); // missing key field
    CHECK_THROWS_AS(load_simple_text("synset\tn#1\n"), ParseError);        // short offset
    CHECK_THROWS_AS(load_simple_text("synset\tx#00000001\n"), ParseError); // bad pos

    // same sense key in two synsets
    CHECK_THROWS_AS(
        load_simple_text("synset\tn#00000001\nsynset\tn#00000002\n"
                         "member\tn#00000001\tdog%1:05:00::\nmember\tn#00000002\tdog%1:05:00::\n"),
        ValidationError);
    // two senses of one lemma inside one synset
    CHECK_THROWS_AS(load_simple_text("synset\tn#00000001\n"
                                     "member\tn#00000001\tdog%1:05:00::\n"
                                     "member\tn#00000001\tdog%1:05:01::\n"),
                    ValidationError);
}

TEST_CASE("sense keys normalize case and validate shape") {
    const SenseKey key = SenseKey::parse("Dog%1:05:00::");
    CHECK(key.raw() == "dog%1:05:00::");
    CHECK(key.lemma() == "dog");
    CHECK(key.pos() == 'n');

    CHECK(SenseKey::parse("fast%5:00:00:quick:01").pos() == 's');
    CHECK_THROWS_AS(SenseKey::parse("noperc"), ParseError);
    CHECK_THROWS_AS(SenseKey::parse("two%per%cent:1:2:3:4"), ParseError);
    CHECK_THROWS_AS(SenseKey::parse("%1:05:00::"), ParseError);
    CHECK_THROWS_AS(SenseKey::parse("white dog%1:05:00::"), ParseError);
    CHECK_THROWS_AS(SenseKey::parse("dog%1:05:00:"), ParseError);  // four fields
    CHECK_THROWS_AS(SenseKey::parse("dog%0:05:00::"), ParseError); // ss_type 0
    CHECK_THROWS_AS(SenseKey::parse("dog%6:05:00::"), ParseError); // ss_type 6
}

TEST_CASE("synset ids parse and order canonically") {
    const SynsetId id = SynsetId::parse("n#02084442");
    CHECK(id.pos() == 'n');
    CHECK(id.offset() == "02084442");
    CHECK(id.text() == "n#02084442");
    CHECK(SynsetId::from_offset('v', 42).text() == "v#00000042");
    CHECK(SynsetId::parse("a#00000001") < SynsetId::parse("n#00000001"));
    CHECK(SynsetId::parse("n#00000001") < SynsetId::parse("n#00000002"));

    CHECK_THROWS_AS(SynsetId::parse("n#123"), ParseError);
    CHECK_THROWS_AS(SynsetId::parse("n-02084442"), ParseError);
    CHECK_THROWS_AS(SynsetId::parse("z#02084442"), ParseError);
    CHECK_THROWS_AS(SynsetId::from_offset('n', 100000000), ValidationError);
}

TEST_CASE("wndb fixture loads with glosses from data files") {
    const std::string dir = (testutil::data_dir() / "wndb").string();
    std::ifstream index(dir + "/index.sense");
    std::ifstream noun(dir + "/data.noun");
    std::ifstream verb(dir + "/data.verb");
    REQUIRE((index.good() && noun.good() && verb.good()));

    const Lexicon lex = load_wndb(index, {{'n', &noun}, {'v', &verb}});
    CHECK(lex.synset_count() == 4);
    CHECK(lex.sense_count() == 8);
    CHECK(validate_lexicon(lex).empty());

    const Synset& dog = lex.synsets.at(SynsetId::parse("n#02084442"));
    REQUIRE(dog.members.size() == 3);
    // canonical order: members sorted by sense key
    CHECK(dog.members[0].raw() == "canis_familiaris%1:05:00::");
    CHECK(dog.members[1].raw() == "dog%1:05:00::");
    CHECK(dog.members[2].raw() == "domestic_dog%1:05:00::");
    REQUIRE(dog.gloss.has_value());
    CHECK(dog.gloss->starts_with("a member of the genus Canis"));

    CHECK(lex.synsets.at(SynsetId::parse("v#01926311")).gloss.has_value());
    // no data.adj stream was passed, so the adjective synset has no gloss
    CHECK_FALSE(lex.synsets.at(SynsetId::parse("a#01123148")).gloss.has_value());
}

TEST_CASE("wndb loading does not depend on index.sense line order") {
    const std::string path = (testutil::data_dir() / "wndb" / "index.sense").string();
    const std::string text = testutil::read_file(path);

    std::vector<std::string> lines;
    std::istringstream split(text);
    for (std::string line; std::getline(split, line);) lines.push_back(line);
    std::shuffle(lines.begin(), lines.end(), std::mt19937_64(99));
    std::string shuffled;
    for (const std::string& line : lines) shuffled += line + "\n";

    std::istringstream a(text), b(shuffled);
    const Lexicon first = load_wndb(a);
    const Lexicon second = load_wndb(b);
    REQUIRE(first.synset_count() == second.synset_count());
    CHECK(first.sense_index == second.sense_index);
    for (const auto& [id, synset] : first.synsets)
        CHECK(second.synsets.at(id).members == synset.members);
}

TEST_CASE("wndb satellite synsets live under the adjective data stream") {
    std::istringstream index("fast%5:00:00:quick:01 00001111 1 0\n"
                             "speedy%5:00:00:quick:00 00001111 2 0\n");
    std::istringstream adj("00001111 00 s 02 fast 0 speedy 0 000 | high speed\n");
    const Lexicon lex = load_wndb(index, {{'a', &adj}});
    const Synset& sat = lex.synsets.at(SynsetId::parse("s#00001111"));
    CHECK(sat.members.size() == 2);
    REQUIRE(sat.gloss.has_value());
    CHECK(*sat.gloss == "high speed");
}

TEST_CASE("wndb loader rejects malformed and inconsistent input") {
    {
        std::istringstream index("dog%1:05:00:: 02084442 1\n"); // 3 fields
        CHECK_THROWS_AS(load_wndb(index), ParseError);
    }
    {
        std::istringstream index("dog%1:05:00:: 02o84442 1 0\n"); // bad offset
        CHECK_THROWS_AS(load_wndb(index), ParseError);
    }
    {
        std::istringstream index("dog%1:05:00:: 02084442 1 0\n"
                                 "dog%1:05:00:: 02084442 2 0\n"); // duplicate key
        CHECK_THROWS_AS(load_wndb(index), ValidationError);
    }
    {
        // data file lemma set disagrees with index.sense members
        std::istringstream index("dog%1:05:00:: 02084442 1 0\n");
        std::istringstream noun("02084442 05 n 02 dog 0 wolf 0 000 | canine\n");
        CHECK_THROWS_AS(load_wndb(index, {{'n', &noun}}), ValidationError);
    }
    {
        // a provided data stream must cover every synset of its pos
        std::istringstream index("dog%1:05:00:: 02084442 1 0\ncat%1:05:00:: 02121620 1 0\n");
        std::istringstream noun("02084442 05 n 01 dog 0 000 | canine\n");
        CHECK_THROWS_AS(load_wndb(index, {{'n', &noun}}), ValidationError);
    }
    {
        std::istringstream index("dog%1:05:00:: 02084442 1 0\n");
        std::istringstream noun("02084442 05 n 00 000\n"); // zero word count
        CHECK_THROWS_AS(load_wndb(index, {{'n', &noun}}), ParseError);
    }
}

TEST_CASE("validate_lexicon reports structural breaches on hand-built input") {
    Lexicon lex;
    const SynsetId dog_id = SynsetId::parse("n#00000001");
    const SynsetId empty_id = SynsetId::parse("n#00000002");
    const SenseKey dog = SenseKey::parse("dog%1:05:00::");
    const SenseKey stray = SenseKey::parse("stray%1:05:00::");

    lex.synsets[dog_id] = Synset{dog_id, {dog, dog}, std::nullopt}; // duplicate member
    lex.synsets[empty_id] = Synset{empty_id, {}, std::nullopt};     // no members
    lex.sense_index[dog] = dog_id;
    lex.sense_index[stray] = empty_id; // dangling: synset does not list it

    const ValidationReport report = validate_lexicon(lex);
    REQUIRE_FALSE(report.empty());
    std::map<std::string, int> kinds;
    for (const Violation& v : report.violations) kinds[to_string(v.kind)]++;
    CHECK(kinds["duplicate-member"] == 1);
    CHECK(kinds["empty-synset"] == 1);
    CHECK(kinds["dangling-index"] == 1);

    // a synset stored under the wrong key
    Lexicon misfiled;
    misfiled.synsets[empty_id] = Synset{dog_id, {dog}, std::nullopt};
    misfiled.sense_index[dog] = dog_id;
    bool saw_mismatch = false;
    for (const Violation& v : validate_lexicon(misfiled).violations)
        saw_mismatch |= v.kind == ViolationKind::id_mismatch;
    CHECK(saw_mismatch);
}

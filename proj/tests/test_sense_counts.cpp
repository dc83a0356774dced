#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "fwn/sense_counts.hpp"
#include "test_util.hpp"

using namespace fwn;

namespace {

FrequencyTable ingest_text(const std::string& text, AnnotationFormat format,
                           std::string corpus = "", std::string wsd = "") {
    std::istringstream in(text);
    return ingest_annotations(in, format, std::move(corpus), std::move(wsd));
}

} // namespace

TEST_CASE("token ingestion counts one annotation per line") {
    const FrequencyTable table = ingest_text("d1\t1\tbloom\tbloom%1:20:00::\n"
                                             "d1\t9\tbloom\tbloom%1:20:00::\n"
                                             "# a comment\n"
                                             "\n"
                                             "d2\t4\tbloom\tbloom%1:20:00::\n",
                                             AnnotationFormat::token, "c", "w");
    CHECK(table.counts.size() == 1);
    CHECK(table.count_for(SenseKey::parse("bloom%1:20:00::")) == 3);
    CHECK(table.total_annotations == 3);
    CHECK(table.corpus_id == "c");
    CHECK(table.wsd_id == "w");
}

TEST_CASE("aggregated ingestion sums duplicate keys and accepts zeros") {
    const FrequencyTable table = ingest_text("dog%1:05:00::\t4\n"
                                             "cat%1:05:00::\t0\n"
                                             "dog%1:05:00::\t2\n",
                                             AnnotationFormat::aggregated);
    CHECK(table.count_for(SenseKey::parse("dog%1:05:00::")) == 6);
    CHECK(table.count_for(SenseKey::parse("cat%1:05:00::")) == 0);
    CHECK(table.counts.size() == 2);
    CHECK(table.total_annotations == 6);
}

TEST_CASE("aggregated files carry provenance in comments") {
    const std::string text = "# corpus: newswire\n# wsd: tagger-a\nrun%2:38:00::\t7\n";
    const FrequencyTable recovered = ingest_text(text, AnnotationFormat::aggregated);
    CHECK(recovered.corpus_id == "newswire");
    CHECK(recovered.wsd_id == "tagger-a");

    // explicit identifiers win over embedded comments
    const FrequencyTable named = ingest_text(text, AnnotationFormat::aggregated, "mine", "theirs");
    CHECK(named.corpus_id == "mine");
    CHECK(named.wsd_id == "theirs");
}

TEST_CASE("ingestion rejects malformed records") {
    CHECK_THROWS_AS(ingest_text("d1\t1\tdog\n", AnnotationFormat::token), ParseError);
    CHECK_THROWS_AS(ingest_text("d1\t1\tdog\tdog%1:05:00::\textra\n", AnnotationFormat::token),
                    ParseError);
    CHECK_THROWS_AS(ingest_text("d1\t1\tdog\tnot-a-key\n", AnnotationFormat::token), ParseError);
    CHECK_THROWS_AS(ingest_text("dog%1:05:00::\n", AnnotationFormat::aggregated), ParseError);
    CHECK_THROWS_AS(ingest_text("dog%1:05:00::\t-2\n", AnnotationFormat::aggregated), ParseError);
    CHECK_THROWS_AS(ingest_text("dog%1:05:00::\tmany\n", AnnotationFormat::aggregated), ParseError);
}

TEST_CASE("a token stream and its aggregation produce the same counts") {
    std::ifstream tokens(testutil::data_dir() / "mini.counts.tsv");
    REQUIRE(tokens.good());
    const FrequencyTable from_tokens = ingest_annotations(tokens, AnnotationFormat::token, "m", "w");

    std::ostringstream serialized;
    serialize_aggregated(from_tokens, serialized);
    const FrequencyTable from_aggregate =
        ingest_text(serialized.str(), AnnotationFormat::aggregated);

    CHECK(from_tokens.counts == from_aggregate.counts);
    CHECK(from_tokens.total_annotations == from_aggregate.total_annotations);
    CHECK(from_aggregate.corpus_id == "m");
    CHECK(from_aggregate.wsd_id == "w");
    CHECK(from_tokens.total_annotations == 200);
}

TEST_CASE("merging tables sums pointwise and joins corpus ids") {
    const FrequencyTable a =
        ingest_text("dog%1:05:00::\t4\ncat%1:05:00::\t1\n", AnnotationFormat::aggregated, "a", "w");
    const FrequencyTable b =
        ingest_text("dog%1:05:00::\t6\nrun%2:38:00::\t2\n", AnnotationFormat::aggregated, "b", "w");

    const FrequencyTable ab = merge_tables(a, b);
    CHECK(ab.count_for(SenseKey::parse("dog%1:05:00::")) == 10);
    CHECK(ab.count_for(SenseKey::parse("cat%1:05:00::")) == 1);
    CHECK(ab.count_for(SenseKey::parse("run%2:38:00::")) == 2);
    CHECK(ab.total_annotations == 13);
    CHECK(ab.corpus_id == "a+b");
    CHECK(ab.wsd_id == "w");

    const FrequencyTable ba = merge_tables(b, a);
    CHECK(ba.counts == ab.counts);

    // merging with an empty table changes nothing but keeps provenance
    const FrequencyTable empty = ingest_text("", AnnotationFormat::aggregated, "", "w");
    const FrequencyTable same = merge_tables(a, empty);
    CHECK(same.counts == a.counts);
    CHECK(same.corpus_id == "a");

    FrequencyTable other = b;
    other.wsd_id = "different";
    CHECK_THROWS_AS(merge_tables(a, other), ValidationError);
}

TEST_CASE("alignment splits counts into known and unknown without losses") {
    std::ifstream lex_in(testutil::data_dir() / "mini.lex.tsv");
    REQUIRE(lex_in.good());
    const Lexicon lex = load_simple_lexicon(lex_in);

    const FrequencyTable table = ingest_text("dog%1:05:00::\t5\n"
                                             "ghost%1:05:00::\t3\n"
                                             "cat%1:05:00::\t2\n"
                                             "phantom%1:05:00::\t1\n",
                                             AnnotationFormat::aggregated, "c", "w");
    const auto [aligned, unknown] = align_to_lexicon(table, lex);
    CHECK(aligned.counts.size() == 2);
    CHECK(aligned.count_for(SenseKey::parse("dog%1:05:00::")) == 5);
    CHECK(aligned.total_annotations == 7);
    CHECK(aligned.corpus_id == "c");
    CHECK(unknown.unknown_keys.size() == 2);
    CHECK(unknown.total() == 4);
    CHECK(aligned.total_annotations + unknown.total() == table.total_annotations);
}

TEST_CASE("aggregated serialization is sorted and round-trips") {
    const FrequencyTable table = ingest_text("zebra%1:05:00::\t1\napple%1:13:00::\t2\n",
                                             AnnotationFormat::aggregated, "c", "w");
    std::ostringstream out;
    serialize_aggregated(table, out);
    const std::string text = out.str();
    CHECK(text.find("apple%1:13:00::\t2") < text.find("zebra%1:05:00::\t1"));
    CHECK(text.find("# corpus: c") != std::string::npos);
    CHECK(text.find("# wsd: w") != std::string::npos);

    const FrequencyTable back = ingest_text(text, AnnotationFormat::aggregated);
    CHECK(back.counts == table.counts);
    CHECK(back.corpus_id == "c");
    CHECK(back.wsd_id == "w");
}

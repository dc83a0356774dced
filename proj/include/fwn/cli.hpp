#pragma once

// Command-line front end. One subcommand per pipeline stage:
//
//   lexicon validate   structural checks on a lexicon
//   counts build       ingest and merge annotation streams
//   fuzzify            lexicon + counts -> fwn-tsv memberships
//   query              membership of one lemma in one synset
//   top                highest-membership senses of a synset
//   audit              re-check invariants of an fwn-tsv file
//   simulate           convergence experiment on a ground-truth model
//
// Exit codes: 0 success, 1 validation or audit failure, 2 I/O or parse
// error, 3 usage error. Diagnostics go to stderr; requested data goes to
// stdout or the -o file. File output lands via temp-file + rename, so a
// failing run never leaves a half-written output behind.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fwn/convergence.hpp"
#include "fwn/decimal.hpp"
#include "fwn/error.hpp"
#include "fwn/fuzzifier.hpp"
#include "fwn/lexicon.hpp"
#include "fwn/possibility.hpp"
#include "fwn/sense_counts.hpp"

namespace fwn::cli {

/// Bad flag values discovered after CLI11 parsing (malformed ids, size lists).
class UsageError : public Error {
  public:
    using Error::Error;
};

// fwn-tsv values are quantized to 9 fractional digits, so audits of parsed
// files need slack: a P(A) sum over at most 12 members accumulates 12 half
// quanta against one on the Pi side, and an order flip narrower than two
// quanta can be pure rounding.
constexpr double kQuantizedDpTolerance = 2e-8;
constexpr double kQuantizedPreferenceTolerance = 2e-9;

namespace detail {

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return in;
}

/// Reruns file-scoped errors with the path prepended.
template <typename Fn>
auto with_path(const std::string& path, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    } catch (const IntegrityError& e) {
        throw IntegrityError(path + ": " + e.what());
    }
}

/// Writes through `writer` to stdout (empty path) or atomically to `path`.
template <typename Writer>
void write_output(const std::string& path, Writer&& writer) {
    if (path.empty()) {
        writer(std::cout);
        std::cout.flush();
        if (!std::cout) throw IoError("failed to write to standard output");
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp(target);
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        try {
            writer(out);
            out.flush();
        } catch (...) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw;
        }
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("failed while writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

inline std::string base_name(const std::string& path) {
    std::filesystem::path p(path);
    if (!p.has_filename()) p = p.parent_path(); // trailing slash
    return p.filename().string();
}

inline Lexicon load_lexicon(const std::string& wndb_dir, const std::string& simple_path) {
    namespace fs = std::filesystem;
    if (!simple_path.empty()) {
        auto in = open_input(simple_path);
        return with_path(simple_path,
                         [&] { return load_simple_lexicon(in, "simple:" + base_name(simple_path)); });
    }
    const fs::path root(wndb_dir);
    const fs::path index_path = root / "index.sense";
    auto index = open_input(index_path.string());

    static constexpr std::pair<char, const char*> kDataFiles[] = {
        {'n', "data.noun"}, {'v', "data.verb"}, {'a', "data.adj"}, {'r', "data.adv"}};
    std::vector<std::unique_ptr<std::ifstream>> opened;
    std::map<char, std::istream*> streams;
    for (const auto& [pos, name] : kDataFiles) {
        const fs::path p = root / name;
        if (!fs::exists(p)) continue;
        opened.push_back(std::make_unique<std::ifstream>(p, std::ios::binary));
        if (!*opened.back()) throw IoError("cannot open " + p.string() + " for reading");
        streams.emplace(pos, opened.back().get());
    }
    return with_path(wndb_dir, [&] { return load_wndb(index, streams, "wndb:" + base_name(wndb_dir)); });
}

inline FrequencyTable load_counts(const std::vector<std::string>& files, bool aggregated,
                                  const std::string& corpus_id, const std::string& wsd_id) {
    FrequencyTable merged;
    bool first = true;
    for (const std::string& path : files) {
        auto in = open_input(path);
        const auto format = aggregated ? AnnotationFormat::aggregated : AnnotationFormat::token;
        FrequencyTable table =
            with_path(path, [&] { return ingest_annotations(in, format, corpus_id, wsd_id); });
        merged = first ? std::move(table) : merge_tables(merged, table);
        first = false;
    }
    return merged;
}

inline SynsetId parse_synset_flag(const std::string& text) {
    try {
        return SynsetId::parse(text);
    } catch (const Error& e) {
        throw UsageError(std::string("--synset: ") + e.what());
    }
}

inline std::vector<std::uint64_t> parse_sizes_flag(const std::string& csv) {
    std::vector<std::uint64_t> sizes;
    try {
        for (const auto piece : fwn::detail::split(csv, ','))
            sizes.push_back(fwn::detail::parse_uint(piece, 0, "corpus size"));
    } catch (const Error& e) {
        throw UsageError(std::string("--sizes: ") + e.what());
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw UsageError("--sizes: corpus sizes must be positive");
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw UsageError("--sizes: corpus sizes must be strictly increasing");
    }
    return sizes;
}

} // namespace detail

inline int run_lexicon_validate(const std::string& wndb, const std::string& simple) {
    const Lexicon lex = detail::load_lexicon(wndb, simple);
    const ValidationReport report = validate_lexicon(lex);
    for (const Violation& v : report.violations)
        std::cout << to_string(v.kind) << "\t" << v.subject << "\t" << v.detail << "\n";
    if (!report.empty()) {
        std::cerr << report.violations.size() << " violation(s) in " << lex.source_id << "\n";
        return 1;
    }
    std::cerr << "ok: " << lex.synset_count() << " synsets, " << lex.sense_count() << " senses\n";
    return 0;
}

inline int run_counts_build(const std::vector<std::string>& files, bool aggregated,
                            const std::string& corpus_id, const std::string& wsd_id,
                            const std::string& out_path) {
    const FrequencyTable merged = detail::load_counts(files, aggregated, corpus_id, wsd_id);
    detail::write_output(out_path, [&](std::ostream& out) { serialize_aggregated(merged, out); });
    std::cerr << merged.total_annotations << " annotations over " << merged.counts.size()
              << " senses\n";
    return 0;
}

inline int run_fuzzify(const std::string& wndb, const std::string& simple,
                       const std::vector<std::string>& counts_files, bool aggregated,
                       const std::string& corpus_id, const std::string& wsd_id, bool no_smoothing,
                       unsigned jobs, const std::string& out_path) {
    const Lexicon lex = detail::load_lexicon(wndb, simple);
    const FrequencyTable merged = detail::load_counts(counts_files, aggregated, corpus_id, wsd_id);
    const auto [aligned, unknown] = align_to_lexicon(merged, lex);
    if (!unknown.empty())
        std::cerr << "warning: ignored " << unknown.total() << " annotation(s) across "
                  << unknown.unknown_keys.size() << " sense key(s) absent from the lexicon\n";

    const FuzzyWordNet fwn = fuzzify_lexicon(lex, aligned, !no_smoothing, jobs);
    detail::write_output(out_path, [&](std::ostream& out) { serialize_fwn(fwn, out); });
    std::cerr << "fuzzified " << fwn.synsets.size() << " synsets\n";
    return 0;
}

inline int run_query(const std::string& fwn_path, const std::string& synset_text,
                     const std::string& lemma) {
    const SynsetId id = detail::parse_synset_flag(synset_text);
    auto in = detail::open_input(fwn_path);
    const FuzzyWordNet fwn = detail::with_path(fwn_path, [&] { return parse_fwn(in); });
    const auto membership = query_membership(fwn, lemma, id);
    if (!membership) {
        std::cerr << "no sense of '" << lemma << "' in " << id.text() << "\n";
        return 0;
    }
    std::cout << id.text() << "\t" << lemma << "\t" << format_fixed9(membership->mu83) << "\t"
              << format_fixed9(membership->mu93) << "\n";
    return 0;
}

inline int run_top(const std::string& fwn_path, const std::string& synset_text, std::size_t k,
                   const std::string& variant_text) {
    const SynsetId id = detail::parse_synset_flag(synset_text);
    const Variant variant = variant_text == "83" ? Variant::v83 : Variant::v93;
    auto in = detail::open_input(fwn_path);
    const FuzzyWordNet fwn = detail::with_path(fwn_path, [&] { return parse_fwn(in); });
    for (const auto& [key, mu] : top_senses(fwn, id, k, variant))
        std::cout << key.raw() << "\t" << format_fixed9(mu) << "\n";
    return 0;
}

inline int run_audit(const std::string& fwn_path, std::size_t max_subset_size) {
    std::vector<IntegrityViolation> findings;
    auto in = detail::open_input(fwn_path);
    const FuzzyWordNet fwn = detail::with_path(fwn_path, [&] { return parse_fwn(in, &findings); });

    AuditOptions opts;
    opts.max_n = max_subset_size;
    opts.dp_tolerance = kQuantizedDpTolerance;
    opts.preference_tolerance = kQuantizedPreferenceTolerance;

    std::size_t rows = 0, enumeration_skipped = 0;
    for (const auto& [id, synset] : fwn.synsets) {
        rows += synset.senses.size();
        std::vector<double> pr, mu83, mu93;
        for (const FuzzySense& sense : synset.senses) {
            pr.push_back(sense.pr);
            mu83.push_back(sense.mu83);
            mu93.push_back(sense.mu93);
        }
        double pr_sum = 0.0;
        for (double v : pr) pr_sum += v;
        if (std::abs(pr_sum - 1.0) > 1e-6)
            findings.push_back(
                {0, id.text(), "pr column sums to " + format_fixed9(pr_sum) + ", expected 1"});

        if (synset.senses.size() > std::min(opts.max_n, kAuditHardLimit)) {
            ++enumeration_skipped;
            continue;
        }
        const ProbVector p{pr, fwn.smoothing};
        for (const Variant variant : {Variant::v83, Variant::v93}) {
            const PossVector pi{variant == Variant::v83 ? mu83 : mu93, variant};
            const ConsistencyReport report = audit_consistency(p, pi, opts);
            for (const ConsistencyViolation& v : report.violations)
                findings.push_back({0, id.text(), std::string(to_string(variant)) + ": " + v.detail});
        }
    }

    for (const IntegrityViolation& f : findings) {
        std::cout << f.synset << "\t";
        if (f.line)
            std::cout << "line " << f.line;
        else
            std::cout << "-";
        std::cout << "\t" << f.detail << "\n";
    }
    std::cerr << "audit: " << fwn.synsets.size() << " synsets, " << rows << " rows, "
              << findings.size() << " finding(s)";
    if (enumeration_skipped)
        std::cerr << "; subset enumeration skipped for " << enumeration_skipped
                  << " synset(s) above " << max_subset_size << " senses";
    std::cerr << "\n";
    return findings.empty() ? 0 : 1;
}

inline int run_simulate(const std::string& model_path, const std::string& sizes_csv,
                        std::uint64_t seed, const std::string& out_path) {
    const std::vector<std::uint64_t> sizes = detail::parse_sizes_flag(sizes_csv);
    auto in = detail::open_input(model_path);
    const GroundTruthModel model = detail::with_path(model_path, [&] { return parse_model(in); });
    const ConvergenceReport report = convergence_experiment(model, sizes, seed);
    detail::write_output(out_path, [&](std::ostream& out) { serialize_report(report, out); });
    for (std::uint64_t size : sizes)
        std::cerr << "size " << size << ": max|err83| = "
                  << format_fixed9(report.max_error(size, Variant::v83)) << ", max|err93| = "
                  << format_fixed9(report.max_error(size, Variant::v93)) << "\n";
    return 0;
}

/// Parses `args` (program name excluded) and runs the chosen subcommand.
inline int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"fuzzifies WordNet-like lexicons from sense-annotated corpus counts"};
    app.require_subcommand(1);
    std::function<int()> runner;

    // lexicon validate
    std::string lv_wndb, lv_simple;
    auto* lexicon_cmd = app.add_subcommand("lexicon", "inspect a lexicon");
    lexicon_cmd->require_subcommand(1);
    auto* lv = lexicon_cmd->add_subcommand("validate", "check structural invariants");
    auto* lv_src = lv->add_option_group("source");
    lv_src->add_option("--wndb", lv_wndb, "WordNet database directory (index.sense plus data.*)");
    lv_src->add_option("--simple", lv_simple, "simple-lexicon TSV file");
    lv_src->require_option(1);
    lv->callback([&] { runner = [&] { return run_lexicon_validate(lv_wndb, lv_simple); }; });

    // counts build
    std::vector<std::string> cb_files;
    bool cb_aggregated = false;
    std::string cb_corpus, cb_wsd, cb_out;
    auto* cb = app.add_subcommand("counts", "work with sense counts");
    cb->require_subcommand(1);
    auto* cbb = cb->add_subcommand("build", "ingest and merge annotation streams");
    cbb->add_option("--counts", cb_files, "annotation files (token format unless --aggregated)")
        ->required()
        ->expected(-1);
    cbb->add_flag("--aggregated", cb_aggregated, "inputs are sense_key<TAB>count records");
    cbb->add_option("--corpus", cb_corpus, "corpus identifier for provenance headers");
    cbb->add_option("--wsd", cb_wsd, "WSD system identifier for provenance headers");
    cbb->add_option("-o,--output", cb_out, "output file (stdout when omitted)");
    cbb->callback([&] {
        runner = [&] { return run_counts_build(cb_files, cb_aggregated, cb_corpus, cb_wsd, cb_out); };
    });

    // fuzzify
    std::string fz_wndb, fz_simple, fz_corpus, fz_wsd, fz_out;
    std::vector<std::string> fz_files;
    bool fz_aggregated = false, fz_no_smoothing = false;
    unsigned fz_jobs = 1;
    auto* fz = app.add_subcommand("fuzzify", "compute membership degrees for every synset");
    auto* fz_src = fz->add_option_group("source");
    fz_src->add_option("--wndb", fz_wndb, "WordNet database directory (index.sense plus data.*)");
    fz_src->add_option("--simple", fz_simple, "simple-lexicon TSV file");
    fz_src->require_option(1);
    fz->add_option("--counts", fz_files, "annotation files (token format unless --aggregated)")
        ->required()
        ->expected(-1);
    fz->add_flag("--aggregated", fz_aggregated, "count inputs are sense_key<TAB>count records");
    fz->add_option("--corpus", fz_corpus, "corpus identifier for provenance headers");
    fz->add_option("--wsd", fz_wsd, "WSD system identifier for provenance headers");
    fz->add_flag("--no-smoothing", fz_no_smoothing, "skip add-one smoothing (zero-evidence synsets fail)");
    fz->add_option("--jobs", fz_jobs, "worker threads; output bytes do not depend on this")
        ->check(CLI::Range(1u, 256u));
    fz->add_option("-o,--output", fz_out, "output file (stdout when omitted)");
    fz->callback([&] {
        runner = [&] {
            return run_fuzzify(fz_wndb, fz_simple, fz_files, fz_aggregated, fz_corpus, fz_wsd,
                               fz_no_smoothing, fz_jobs, fz_out);
        };
    });

    // query
    std::string q_fwn, q_synset, q_lemma;
    auto* qu = app.add_subcommand("query", "membership of one lemma in one synset");
    qu->add_option("--fwn", q_fwn, "fwn-tsv file")->required();
    qu->add_option("--synset", q_synset, "synset id, e.g. n#00017222")->required();
    qu->add_option("--lemma", q_lemma, "lemma to look up")->required();
    qu->callback([&] { runner = [&] { return run_query(q_fwn, q_synset, q_lemma); }; });

    // top
    std::string t_fwn, t_synset, t_variant = "93";
    std::size_t t_k = 5;
    auto* tp = app.add_subcommand("top", "highest-membership senses of a synset");
    tp->add_option("--fwn", t_fwn, "fwn-tsv file")->required();
    tp->add_option("--synset", t_synset, "synset id, e.g. n#00017222")->required();
    tp->add_option("-k", t_k, "how many senses to list")->check(CLI::PositiveNumber);
    tp->add_option("--variant", t_variant, "membership variant to rank by")
        ->check(CLI::IsMember({"83", "93"}));
    tp->callback([&] { runner = [&] { return run_top(t_fwn, t_synset, t_k, t_variant); }; });

    // audit
    std::string a_fwn;
    std::size_t a_max_n = 12;
    auto* au = app.add_subcommand("audit", "re-check the invariants of an fwn-tsv file");
    au->add_option("--fwn", a_fwn, "fwn-tsv file")->required();
    au->add_option("--max-subset-size", a_max_n,
                   "largest synset to run subset enumeration on (2^n events)")
        ->check(CLI::Range(std::size_t{1}, kAuditHardLimit));
    au->callback([&] { runner = [&] { return run_audit(a_fwn, a_max_n); }; });

    // simulate
    std::string s_model, s_sizes, s_out;
    std::uint64_t s_seed = 0;
    auto* si = app.add_subcommand("simulate", "convergence experiment on a ground-truth model");
    si->add_option("--model", s_model, "model spec TSV")->required();
    si->add_option("--sizes", s_sizes, "comma-separated corpus sizes, strictly increasing")
        ->required();
    si->add_option("--seed", s_seed, "64-bit generator seed");
    si->add_option("-o,--output", s_out, "report file (stdout when omitted)");
    si->callback([&] { runner = [&] { return run_simulate(s_model, s_sizes, s_seed, s_out); }; });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("fwn");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 3;
    }

    try {
        return runner ? runner() : 3;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace fwn::cli

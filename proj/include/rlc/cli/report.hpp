#pragma once

// Analysis pipeline behind the command-line tool and its JSON serialization.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlc/cli/spec_file.hpp"
#include "rlc/conformal/conformal.hpp"
#include "rlc/degeneracy/classify.hpp"

namespace rlc {

inline constexpr const char* engine_version = "0.3.0";

enum class EvidenceMode { Exact, Numeric, Both };
EvidenceMode evidence_mode(const std::string& s);  // throws SpecFileError

struct RunOptions {
    std::optional<std::uint64_t> seed;
    EvidenceMode evidence = EvidenceMode::Both;
};

struct VerdictPair {
    Verdict criteria, laurent;
    bool agree() const { return criteria.value == laurent.value; }
};

// A Σ-restricted diagnostic. Unavailable diagnostics carry the reason.
struct Diagnostic {
    bool available = false;
    std::string reason;
    std::string representative;  // metric the diagnostic was evaluated on
    bool exact_zero = false;
    Verdict zero;                // vanishes on Σ, exact or numeric
    double max_abs = 0;          // over Σ samples
    std::vector<double> samples;
};

struct AnalysisReport {
    std::string name;
    std::string input_hash;  // sha256 of the spec file text
    std::uint64_t seed = 1;
    std::size_t dim = 0;
    std::string tau;

    bool precondition_failed = false;
    std::string precondition;  // failing invariant, when precondition_failed

    Classification classification;
    bool asserted = false;
    VerdictPair K, Ric, W;
    bool laurent_frame = false;
    std::vector<LaurentWitness> witnesses;
    Diagnostic witness;  // leading Laurent coefficient of the W witness

    Verdict weyl_zero;
    Diagnostic schouten_gap, b_ijk, cotton;  // cotton: Cotton tensor of g_Σ (m = 4), W^Σ otherwise

    bool agreement() const { return K.agree() && Ric.agree() && W.agree(); }
};

std::string sha256_hex(const std::string& text);

AnalysisReport analyze(const MetricSpecFile& spec, const std::string& input_hash, const RunOptions& opts = {});

struct ConformalReport {
    std::string name, input_hash, factor;
    std::uint64_t seed = 1;
    std::optional<LawCheck> II_law, III_law;
    std::string II_law_reason, III_law_reason;
    std::optional<WeylCheck> weyl;
    std::string weyl_reason;
    Classification before, after;
};

// f is parsed in the coordinates and function symbols of the spec
ConformalReport conformal(const MetricSpecFile& spec, const std::string& input_hash, const std::string& f,
                          const RunOptions& opts = {});

nlohmann::ordered_json to_json(const AnalysisReport& r, EvidenceMode mode = EvidenceMode::Both);
nlohmann::ordered_json to_json(const ConformalReport& r);

// 0 on success, 2 when a classification precondition fails
int exit_code(const AnalysisReport& r);

struct CorpusRow {
    std::string file;
    std::optional<AnalysisReport> report;
    std::string error;  // set when the file could not be analyzed
};

// Files ending in .metric, sorted by name, analyzed one after another.
std::vector<CorpusRow> run_corpus(const std::string& dir, const RunOptions& opts = {});
std::string corpus_table(const std::vector<CorpusRow>& rows);
int corpus_exit_code(const std::vector<CorpusRow>& rows);  // 1 on any error or disagreement

}  // namespace rlc

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "rlc/cli/report.hpp"

using namespace rlc;
namespace fs = std::filesystem;

namespace {

const std::string corpus_dir = RLC_CORPUS_DIR;

std::string read(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

AnalysisReport analyze_file(const std::string& name, RunOptions opts = {}) {
    const std::string text = read(fs::path(corpus_dir) / name);
    return analyze(parse_spec_file(text), sha256_hex(text), opts);
}

const char* minimal = R"(
name = m
coords = x1 x2 x3 x4
[metric]
g(1,1) = 1
g(2,2) = 1
g(3,3) = 1
g(4,4) = x4
)";

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rlcurv_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST(SpecFile, ParsesMinimal) {
    const auto s = parse_spec_file(minimal);
    EXPECT_EQ(s.dim(), 4u);
    EXPECT_EQ(s.metric[3][3], coordinate("x4"));
    EXPECT_TRUE(s.metric[0][1].is_zero());
    const MetricChart M = to_chart(s);
    EXPECT_EQ(M.tau_index(), 3u);
}

TEST(SpecFile, RoundTripsEveryCorpusFile) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(corpus_dir)) {
        const auto s = parse_spec_file(read(e.path()));
        const std::string text = format_spec_file(s);
        EXPECT_EQ(parse_spec_file(text), s) << e.path();
        EXPECT_EQ(format_spec_file(parse_spec_file(text)), text);
        ++n;
    }
    EXPECT_GE(n, 8u);
}

TEST(SpecFile, RoundTripsOptionalFields) {
    const auto s = parse_spec_file(R"(
name = opaque
kind = warped
coords = x1 x2 x3 t
seed = 42
[warped]
f = f(t)
[base]
g(1,1) = 1
g(2,2) = 1
g(3,3) = 1 + x1^2
[functions]
f = 1, 1/3, -2
[box]
t = -0.25 0.75
)");
    EXPECT_EQ(s.seed, std::optional<std::uint64_t>(42));
    EXPECT_EQ(s.functions.at("f")[1], mpq_class(1, 3));
    EXPECT_EQ(parse_spec_file(format_spec_file(s)), s);
    const auto w = to_warped(s);
    EXPECT_EQ(w.t, "t");
    EXPECT_EQ(w.options.box.back(), std::make_pair(-0.25, 0.75));
    EXPECT_EQ(w.options.seed, 42u);
    EXPECT_EQ(chart_options(s, 7).seed, 7u);
}

TEST(SpecFile, TauCoordinateAndUnit) {
    const auto s = parse_spec_file(R"(
coords = x1 x2 x3 x4
tau = x1
tau_unit = 2 + x2^2
[metric]
g(1,1) = 1
g(2,2) = 1
g(3,3) = 1
g(4,4) = x1*(2 + x2^2)
)");
    EXPECT_EQ(parse_spec_file(format_spec_file(s)), s);
    const MetricChart M = to_chart(s);
    EXPECT_EQ(M.tau_index(), 0u);
    EXPECT_EQ(M.tau(), coordinate("x1") * (Expr(2) + coordinate("x2").pow(2)));
}

TEST(SpecFile, Rejections) {
    const std::string head = "coords = x1 x2 x3 x4\n";
    const std::string body = "[metric]\ng(1,1) = 1\ng(2,2) = 1\ng(3,3) = 1\ng(4,4) = x4\n";
    for (const std::string bad : {
             head + "colour = red\n" + body,                        // unknown key
             head + body + "[extras]\nx = 1\n",                    // unknown section
             head + body + "g(2,1) = 3\n",                         // lower triangle
             head + body + "g(1,1) = 2\n",                         // duplicate
             head + body + "g(1,5) = 1\n",                         // out of range
             head + "dim = 5\n" + body,                            // dim mismatch
             head + "tau = y\n" + body,                            // unknown τ coordinate
             head + "[metric]\ng(1,1) = 1 + y\n",                  // unknown symbol
             head + "[metric]\ng(1,1) = (1 +\n",                   // malformed expression
             head + body + "[box]\nx1 = 1 0\n",                    // empty range
             head + body + "[functions]\nf = 1, a\n",              // not rational
             head + "kind = warped\n[warped]\nf = 1\n" + body,     // warped with [metric]
             std::string("[metric]\ng(1,1) = 1\n"),                // no coordinates
         })
        EXPECT_THROW(parse_spec_file(bad), SpecFileError) << bad;
}

TEST(SpecFile, ErrorsNameTheLine) {
    try {
        parse_spec_file("coords = x1 x2\n\nbogus = 1\n");
        FAIL();
    } catch (const SpecFileError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
    }
}

TEST(Analyze, ModelMetric) {
    const auto r = analyze_file("01_model.metric");
    const auto& c = r.classification;
    EXPECT_TRUE(c.type_changing.transverse);
    EXPECT_EQ(c.transversality.kind, Transversality::Transverse);
    EXPECT_TRUE(c.II_flat.value && c.III_flat.value);
    EXPECT_TRUE(r.K.criteria.value && r.Ric.criteria.value && r.W.criteria.value);
    EXPECT_TRUE(r.K.laurent.value && r.Ric.laurent.value && r.W.laurent.value);
    EXPECT_TRUE(r.agreement());
    EXPECT_EQ(exit_code(r), 0);
}

TEST(Analyze, TangentRadical) {
    const auto r = analyze_file("03_tangent_radical.metric");
    EXPECT_EQ(r.classification.transversality.kind, Transversality::Tangent);
    EXPECT_FALSE(r.K.criteria.value || r.Ric.criteria.value || r.W.criteria.value);
    EXPECT_FALSE(r.K.laurent.value || r.Ric.laurent.value || r.W.laurent.value);
    ASSERT_TRUE(r.witness.available);
    EXPECT_FALSE(r.witness.zero.value);
    EXPECT_GT(r.witness.max_abs, 0);
}

TEST(Analyze, QuadraticWarping) {
    const auto r = analyze_file("09_warped_quadratic.metric");
    EXPECT_TRUE(r.K.criteria.value);
    EXPECT_FALSE(r.Ric.criteria.value);
    EXPECT_TRUE(r.W.criteria.value);
    EXPECT_TRUE(r.agreement());
}

TEST(Analyze, PreconditionFailure) {
    const auto s = parse_spec_file("coords = x1 x2 x3 x4\n[metric]\ng(1,1)=1\ng(2,2)=1\ng(3,3)=1\ng(4,4)=x4^2\n");
    const auto r = analyze(s, "");
    EXPECT_TRUE(r.precondition_failed);
    EXPECT_EQ(exit_code(r), 2);
    EXPECT_FALSE(to_json(r)["status"]["ok"].get<bool>());
}

TEST(Analyze, JsonIsDeterministic) {
    const std::string a = to_json(analyze_file("10_warped_sphere.metric")).dump();
    const std::string b = to_json(analyze_file("10_warped_sphere.metric")).dump();
    EXPECT_EQ(a, b);
    const auto j = nlohmann::json::parse(a);
    EXPECT_EQ(j["input"]["sha256"].get<std::string>().size(), 64u);
    EXPECT_EQ(j["engine"]["version"], engine_version);
    for (const char* k : {"K", "Ric", "W"}) EXPECT_TRUE(j["verdicts"][k]["agree"].get<bool>());
}

TEST(Analyze, SeedChangesOnlySampling) {
    RunOptions a, b;
    a.seed = 3;
    b.seed = 4;
    auto ja = to_json(analyze_file("06_umbilic.metric", a), EvidenceMode::Exact);
    auto jb = to_json(analyze_file("06_umbilic.metric", b), EvidenceMode::Exact);
    EXPECT_EQ(ja["input"]["seed"], 3);
    ja["input"].erase("seed");
    jb["input"].erase("seed");
    EXPECT_EQ(ja.dump(), jb.dump());
}

TEST(Analyze, EvidenceModes) {
    const auto r = analyze_file("03_tangent_radical.metric");
    const auto exact = to_json(r, EvidenceMode::Exact)["diagnostics"]["weyl_witness"];
    const auto numeric = to_json(r, EvidenceMode::Numeric)["diagnostics"]["weyl_witness"];
    EXPECT_TRUE(exact.contains("coefficient"));
    EXPECT_FALSE(exact.contains("samples"));
    EXPECT_FALSE(numeric.contains("coefficient"));
    EXPECT_TRUE(numeric.contains("samples"));
    EXPECT_THROW(evidence_mode("strong"), SpecFileError);
}

TEST(Analyze, Sha256KnownValue) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Conformal, ZeroFactorIsExact) {
    const auto s = parse_spec_file(read(fs::path(corpus_dir) / "06_umbilic.metric"));
    const auto r = conformal(s, "", "0");
    ASSERT_TRUE(r.II_law && r.weyl);
    EXPECT_TRUE(r.II_law->holds);
    EXPECT_EQ(r.II_law->max_residual, 0.0);
    EXPECT_TRUE(r.weyl->W.holds && r.weyl->identical);
    EXPECT_EQ(r.weyl->W.max_residual, 0.0);
}

TEST(Conformal, ModelWithCoordinateFactor) {
    const auto s = parse_spec_file(read(fs::path(corpus_dir) / "01_model.metric"));
    const auto keep = conformal(s, "", "x1");
    ASSERT_TRUE(keep.II_law && keep.III_law);
    EXPECT_TRUE(keep.II_law->holds && keep.III_law->holds);
    EXPECT_TRUE(keep.after.II_flat.value);
    // R f|Σ ≠ 0 moves II_Σ off zero by a multiple of g_Σ
    const auto flip = conformal(s, "", "x4");
    ASSERT_TRUE(flip.II_law);
    EXPECT_TRUE(flip.II_law->holds);
    EXPECT_FALSE(flip.after.II_flat.value);
    EXPECT_TRUE(flip.after.conf_II_flat.value);
    EXPECT_FALSE(flip.III_law.has_value());
    EXPECT_FALSE(flip.III_law_reason.empty());
}

TEST(Conformal, WarpedWeylInvariance) {
    const auto s = parse_spec_file(read(fs::path(corpus_dir) / "08_warped_linear.metric"));
    const auto r = conformal(s, "", "t");
    ASSERT_TRUE(r.weyl);
    EXPECT_TRUE(r.weyl->W.holds);
    EXPECT_EQ(r.weyl->W.max_residual, 0.0);
    EXPECT_TRUE(r.weyl->identical);
    EXPECT_EQ(r.before.conf_III_flat.value, r.after.conf_III_flat.value);
}

TEST(Conformal, RejectsBadFactor) {
    const auto s = parse_spec_file(minimal);
    EXPECT_THROW(conformal(s, "", "1 + y"), ExprError);
}

TEST(Corpus, ShippedCorpusAgrees) {
    const auto rows = run_corpus(corpus_dir);
    EXPECT_GE(rows.size(), 8u);
    for (const auto& row : rows) {
        ASSERT_TRUE(row.report) << row.file << ": " << row.error;
        EXPECT_TRUE(row.report->agreement()) << row.file;
    }
    EXPECT_EQ(corpus_exit_code(rows), 0);
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.file < b.file; }));
}

TEST(Corpus, EmptyDirectory) {
    const auto dir = scratch_dir("empty");
    const auto rows = run_corpus(dir.string());
    EXPECT_TRUE(rows.empty());
    EXPECT_EQ(corpus_exit_code(rows), 0);
    fs::remove_all(dir);
}

TEST(Corpus, CorruptedFileIsReported) {
    const auto dir = scratch_dir("corrupt");
    fs::copy_file(fs::path(corpus_dir) / "01_model.metric", dir / "a.metric");
    std::ofstream(dir / "b.metric") << "coords = x1 x2\n[metric]\ng(1,1) = (\n";
    std::ofstream(dir / "notes.txt") << "ignored\n";
    const auto rows = run_corpus(dir.string());
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(rows[0].report.has_value());
    EXPECT_FALSE(rows[1].report.has_value());
    EXPECT_NE(corpus_table(rows).find("ERROR"), std::string::npos);
    EXPECT_EQ(corpus_exit_code(rows), 1);
    fs::remove_all(dir);
}

#include "rlc/cli/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "rlc/geometry/frame.hpp"

namespace rlc {

namespace {

using json = nlohmann::ordered_json;

// canonical forms with roots, exponentials or opaque symbols can hide a zero
bool needs_numeric(const Expr& e) {
    if (has_opaque_atoms(e)) return true;
    for (const AtomId a : e.atoms()) {
        const auto k = atom_info(a).kind;
        if (k == AtomKind::Root || k == AtomKind::Exp) return true;
    }
    return false;
}

Diagnostic evaluate_on_sigma(const MetricChart& M, const std::vector<Expr>& restricted, std::string representative) {
    Diagnostic d;
    d.available = true;
    d.representative = std::move(representative);
    d.exact_zero = std::all_of(restricted.begin(), restricted.end(), [](const Expr& e) { return e.is_zero(); });
    const auto pts = M.sigma_samples(10);
    for (const auto& p : pts) {
        double v = 0;
        for (const auto& e : restricted)
            if (!e.is_zero()) v = std::max(v, std::abs(evaluate(e, p)));
        d.samples.push_back(v);
        d.max_abs = std::max(d.max_abs, v);
    }
    if (d.exact_zero) {
        d.zero = {true, Evidence::Exact};
    } else if (std::none_of(restricted.begin(), restricted.end(), needs_numeric)) {
        d.zero = {false, Evidence::Exact};
    } else {
        bool all = true;
        for (const auto& e : restricted) all = all && probably_zero(e, M.sigma_samples());
        d.zero = {all, Evidence::Numeric};
    }
    return d;
}

Diagnostic unavailable(std::string reason) {
    Diagnostic d;
    d.reason = std::move(reason);
    return d;
}

struct Representative {
    std::optional<MetricChart> chart;
    std::string name, reason;
};

void set(Representative& r, MetricChart chart, std::string name) {
    r.chart.emplace(std::move(chart));
    r.name = std::move(name);
}

// II-flat and III-flat metrics conformal to M, M itself when it already is one
std::pair<Representative, Representative> representatives(const MetricChart& M, const Classification& c) {
    Representative two, three;
    if (c.II_flat.value) {
        set(two, M, "metric");
    } else if (c.conf_II_flat.value) {
        try {
            set(two, rescale(M, flatten_II(M)), "II-flattened");
        } catch (const ExprError& e) {
            two.reason = e.what();
        }
    } else {
        two.reason = "not conformally II-flat";
    }
    if (c.III_flat.value) {
        set(three, M, "metric");
    } else if (two.chart) {
        try {
            const Expr f = flatten_III(*two.chart);
            if (f.is_zero())
                set(three, *two.chart, two.name);
            else
                set(three, rescale(*two.chart, f), "III-flattened");
        } catch (const ExprError& e) {
            three.reason = e.what();
        }
    } else {
        three.reason = two.reason;
    }
    return {std::move(two), std::move(three)};
}

template <class F>
Diagnostic diagnostic_on(const Representative& rep, const MetricChart& M, const CurvatureBundle& BM, F&& compute) {
    if (!rep.chart) return unavailable(rep.reason);
    try {
        const MetricChart& N = *rep.chart;
        const Frame frame = build_adapted_frame(N);
        const CurvatureBundle B = rep.name == "metric" ? BM : curvature(N);
        return evaluate_on_sigma(rep.name == "metric" ? M : N, compute(N, B, frame), rep.name);
    } catch (const ExprError& e) {
        return unavailable(e.what());
    }
}

void fill_diagnostics(AnalysisReport& r, const MetricChart& M, const CurvatureBundle& B) {
    const auto [two, three] = representatives(M, r.classification);
    r.b_ijk = diagnostic_on(two, M, B, [](const MetricChart& N, const CurvatureBundle& BN, const Frame& F) {
        return b_ijk(N, BN, F).components();
    });
    r.schouten_gap = diagnostic_on(three, M, B, [](const MetricChart& N, const CurvatureBundle& BN, const Frame& F) {
        std::vector<Expr> out;
        for (const auto& row : schouten_gap(N, BN, F)) out.insert(out.end(), row.begin(), row.end());
        return out;
    });
    try {
        const auto G = sigma_geometry(M);
        r.cotton = evaluate_on_sigma(M, G.cotton ? G.cotton->components() : G.bundle.W.components(), "metric");
    } catch (const ExprError& e) {
        r.cotton = unavailable(e.what());
    }
}

json flag_json(const Flag& f) {
    json j;
    j["value"] = f.value;
    j["applicable"] = f.applicable;
    j["evidence"] = to_string(f.evidence);
    return j;
}

json verdict_json(const Verdict& v) { return {{"value", v.value}, {"evidence", to_string(v.evidence)}}; }

json diagnostic_json(const Diagnostic& d, EvidenceMode mode) {
    json j;
    j["available"] = d.available;
    if (!d.available) {
        j["reason"] = d.reason;
        return j;
    }
    j["representative"] = d.representative;
    j["zero"] = d.zero.value;
    j["evidence"] = to_string(d.zero.evidence);
    if (mode != EvidenceMode::Numeric) j["exact_zero"] = d.exact_zero;
    if (mode != EvidenceMode::Exact) {
        j["max_abs"] = d.max_abs;
        j["samples"] = d.samples;
    }
    return j;
}

json witness_json(const LaurentWitness& w) {
    std::vector<std::size_t> one_based;
    for (const auto i : w.index) one_based.push_back(i + 1);
    return {{"tensor", w.tensor}, {"index", one_based}, {"order", w.order}, {"coefficient", w.coefficient.str()}};
}

std::string yes_no(bool b) { return b ? "y" : "n"; }

}  // namespace

EvidenceMode evidence_mode(const std::string& s) {
    if (s == "exact") return EvidenceMode::Exact;
    if (s == "numeric") return EvidenceMode::Numeric;
    if (s == "both") return EvidenceMode::Both;
    throw SpecFileError("evidence must be exact, numeric or both");
}

std::string sha256_hex(const std::string& text) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return out.str();
}

AnalysisReport analyze(const MetricSpecFile& spec, const std::string& input_hash, const RunOptions& opts) {
    AnalysisReport r;
    r.name = spec.name;
    r.input_hash = input_hash;
    const MetricChart M = to_chart(spec, opts.seed);
    r.seed = M.seed();
    r.dim = M.dim();
    r.tau = M.names()[M.tau_index()];

    try {
        r.classification = classify(M);
    } catch (const ExprError& e) {
        r.precondition_failed = true;
        r.precondition = e.what();
        return r;
    }
    const auto& c = r.classification;
    if (!c.type_changing.transverse) {
        r.precondition_failed = true;
        r.precondition = "not transverse type-changing: " + c.type_changing.witness;
        return r;
    }
    const auto crit = extendibility_by_criteria(c);
    r.asserted = crit.asserted;
    r.K.criteria = crit.K;
    r.Ric.criteria = crit.Ric;
    r.W.criteria = crit.W;

    const CurvatureBundle B = curvature(M);
    try {
        const auto laur = extendibility_by_laurent(M, B);
        r.K.laurent = laur.verdicts.K;
        r.Ric.laurent = laur.verdicts.Ric;
        r.W.laurent = laur.verdicts.W;
        r.laurent_frame = laur.frame;
        r.witnesses = laur.witnesses;
    } catch (const ExprError& e) {
        r.precondition_failed = true;
        r.precondition = e.what();
        return r;
    }
    r.witness = unavailable("W extends");
    for (const auto& w : r.witnesses)
        if (w.tensor == "W") r.witness = evaluate_on_sigma(M, {w.coefficient}, "metric");

    r.weyl_zero = {true, Evidence::Exact};
    for (const auto& e : B.W.components()) {
        if (e.is_zero()) continue;
        if (!needs_numeric(e)) {
            r.weyl_zero = {false, Evidence::Exact};
            break;
        }
        const Verdict v = identically_zero(M, e);
        r.weyl_zero = {r.weyl_zero.value && v.value, Evidence::Numeric};
        if (!v.value) break;
    }

    if (c.transversality.kind == Transversality::Transverse) {
        fill_diagnostics(r, M, B);
    } else {
        const std::string why = std::string("radical is ") + to_string(c.transversality.kind);
        r.schouten_gap = r.b_ijk = r.cotton = unavailable(why);
    }
    return r;
}

ConformalReport conformal(const MetricSpecFile& spec, const std::string& input_hash, const std::string& factor,
                          const RunOptions& opts) {
    ConformalReport r;
    r.name = spec.name;
    r.input_hash = input_hash;
    const MetricChart M = to_chart(spec, opts.seed);
    r.seed = M.seed();
    const Expr f = parse_expr(factor, parse_context(spec));
    r.factor = f.str();
    try {
        r.II_law = verify_II_law(M, f);
    } catch (const ExprError& e) {
        r.II_law_reason = e.what();
    }
    try {
        r.III_law = verify_III_law(M, f);
    } catch (const ExprError& e) {
        r.III_law_reason = e.what();
    }
    try {
        r.weyl = verify_weyl_invariance(M, f);
    } catch (const ExprError& e) {
        r.weyl_reason = e.what();
    }
    r.before = classify(M);
    r.after = classify(rescale(M, f));
    return r;
}

json to_json(const AnalysisReport& r, EvidenceMode mode) {
    json j;
    j["engine"] = {{"name", "rlcurv"}, {"version", engine_version}};
    j["input"] = {{"name", r.name}, {"sha256", r.input_hash}, {"seed", r.seed}, {"dim", r.dim}, {"tau", r.tau}};
    j["status"] = {{"ok", !r.precondition_failed}, {"precondition", r.precondition_failed ? json(r.precondition) : json()}};

    const auto& c = r.classification;
    json flags;
    flags["transverse_type_changing"] = verdict_json({c.type_changing.transverse, c.type_changing.evidence});
    if (!r.precondition_failed || c.type_changing.transverse) {
        flags["radical"] = to_string(c.transversality.kind);
        flags["radical_transverse"] =
            verdict_json({c.transversality.kind == Transversality::Transverse, c.transversality.evidence});
    }
    flags["II_flat"] = flag_json(c.II_flat);
    flags["III_flat"] = flag_json(c.III_flat);
    flags["conf_II_flat"] = flag_json(c.conf_II_flat);
    flags["conf_III_flat"] = flag_json(c.conf_III_flat);
    if (mode != EvidenceMode::Numeric) {
        if (c.k_II) flags["conf_II_flat"]["k"] = c.k_II->str();
        if (c.k_III) flags["conf_III_flat"]["k"] = c.k_III->str();
    }
    j["flags"] = flags;
    if (r.precondition_failed) return j;

    json v;
    v["asserted"] = r.asserted;
    v["components"] = r.laurent_frame ? "adapted frame" : "coordinates";
    for (const auto& [name, p] : {std::pair{"K", &r.K}, {"Ric", &r.Ric}, {"W", &r.W}})
        v[name] = {{"criteria", p->criteria.value},
                   {"laurent", p->laurent.value},
                   {"agree", p->agree()},
                   {"evidence", to_string(weaker(p->criteria.evidence, p->laurent.evidence))}};
    v["agreement"] = r.agreement();
    j["verdicts"] = v;

    json d;
    d["weyl_zero"] = verdict_json(r.weyl_zero);
    json w = diagnostic_json(r.witness, mode);
    for (const auto& x : r.witnesses)
        if (x.tensor == "W") {
            const json wj = witness_json(x);
            for (const auto& [k, val] : wj.items())
                if (k != "coefficient" || mode != EvidenceMode::Numeric) w[k] = val;
        }
    d["weyl_witness"] = w;
    d["schouten_gap"] = diagnostic_json(r.schouten_gap, mode);
    d["b_ijk"] = diagnostic_json(r.b_ijk, mode);
    d[r.dim == 4 ? "cotton" : "sigma_weyl"] = diagnostic_json(r.cotton, mode);
    j["diagnostics"] = d;

    json ws = json::array();
    for (const auto& x : r.witnesses) {
        json wj = witness_json(x);
        if (mode == EvidenceMode::Numeric) wj.erase("coefficient");
        ws.push_back(wj);
    }
    j["witnesses"] = ws;
    return j;
}

json to_json(const ConformalReport& r) {
    json j;
    j["engine"] = {{"name", "rlcurv"}, {"version", engine_version}};
    j["input"] = {{"name", r.name}, {"sha256", r.input_hash}, {"seed", r.seed}, {"factor", r.factor}};
    auto law = [](const std::optional<LawCheck>& l, const std::string& reason) {
        if (!l) return json{{"available", false}, {"reason", reason}};
        return json{{"available", true},
                    {"holds", l->holds},
                    {"evidence", to_string(l->evidence)},
                    {"max_residual", l->max_residual}};
    };
    json laws;
    laws["II"] = law(r.II_law, r.II_law_reason);
    laws["III"] = law(r.III_law, r.III_law_reason);
    if (r.weyl) {
        laws["weyl"] = law(r.weyl->W, "");
        laws["weyl_up"] = law(r.weyl->Wup, "");
        laws["weyl_up"]["identical"] = r.weyl->identical;
    } else {
        laws["weyl"] = law(std::nullopt, r.weyl_reason);
    }
    j["laws"] = laws;
    json flags;
    auto row = [](const Flag& a, const Flag& b) {
        return json{{"before", a.value}, {"after", b.value}, {"unchanged", a.value == b.value && a.applicable == b.applicable}};
    };
    flags["II_flat"] = row(r.before.II_flat, r.after.II_flat);
    flags["III_flat"] = row(r.before.III_flat, r.after.III_flat);
    flags["conf_II_flat"] = row(r.before.conf_II_flat, r.after.conf_II_flat);
    flags["conf_III_flat"] = row(r.before.conf_III_flat, r.after.conf_III_flat);
    j["flags"] = flags;
    return j;
}

int exit_code(const AnalysisReport& r) { return r.precondition_failed ? 2 : 0; }

std::vector<CorpusRow> run_corpus(const std::string& dir, const RunOptions& opts) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".metric") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<CorpusRow> rows;
    for (const auto& p : files) {
        CorpusRow row;
        row.file = p.filename().string();
        try {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            const std::string text = buf.str();
            row.report = analyze(parse_spec_file(text), sha256_hex(text), opts);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string corpus_table(const std::vector<CorpusRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(30) << "file" << " radical     II III cII cIII  K    Ric  W     agree\n";
    for (const auto& row : rows) {
        out << std::setw(30) << row.file << ' ';
        if (!row.report) {
            out << "ERROR: " << row.error << '\n';
            continue;
        }
        const auto& r = *row.report;
        if (r.precondition_failed) {
            out << "PRECONDITION: " << r.precondition << '\n';
            continue;
        }
        const auto& c = r.classification;
        auto flag = [](const Flag& f) { return f.applicable ? yes_no(f.value) : "-"; };
        auto pair = [](const VerdictPair& p) { return yes_no(p.criteria.value) + "/" + yes_no(p.laurent.value); };
        out << std::setw(11) << to_string(c.transversality.kind) << ' ' << std::setw(3) << flag(c.II_flat)
            << std::setw(4) << flag(c.III_flat) << std::setw(4) << flag(c.conf_II_flat) << std::setw(6)
            << flag(c.conf_III_flat) << std::setw(5) << pair(r.K) << std::setw(5) << pair(r.Ric) << std::setw(6)
            << pair(r.W) << (r.agreement() ? "yes" : "NO") << '\n';
    }
    return out.str();
}

int corpus_exit_code(const std::vector<CorpusRow>& rows) {
    for (const auto& row : rows)
        if (!row.report || (!row.report->precondition_failed && !row.report->agreement())) return 1;
    return 0;
}

}  // namespace rlc

// rlcurv: curvature extendibility across the degeneracy hypersurface of a type-changing metric.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rlc/cli/report.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rlc::SpecFileError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const nlohmann::ordered_json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature extendibility for transverse type-changing metrics"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::string evidence = "both";
    app.add_option("--seed", seed, "sampling seed (default: the file's seed, then $RLCURV_SEED, then 1)");
    app.add_option("--evidence", evidence, "evidence to report")->check(CLI::IsMember({"exact", "numeric", "both"}));

    std::string file, json_out, factor, dir;
    auto* analyze = app.add_subcommand("analyze", "classify a metric and decide extendibility");
    analyze->add_option("file", file, "metric spec file")->required();
    analyze->add_option("--json", json_out, "write the report here instead of stdout");
    analyze->fallthrough();

    auto* conformal = app.add_subcommand("conformal", "check the conformal transformation laws for e^{2f} g");
    conformal->add_option("file", file, "metric spec file")->required();
    conformal->add_option("--factor", factor, "f as an expression")->required();
    conformal->add_option("--json", json_out, "write the report here instead of stdout");
    conformal->fallthrough();

    auto* corpus = app.add_subcommand("corpus", "analyze every .metric file of a directory");
    corpus->add_option("dir", dir, "directory")->required()->check(CLI::ExistingDirectory);
    corpus->add_option("--json", json_out, "also write all reports as a JSON array");
    corpus->fallthrough();

    CLI11_PARSE(app, argc, argv);

    rlc::RunOptions opts;
    opts.evidence = rlc::evidence_mode(evidence);
    opts.seed = seed;

    try {
        const char* env = std::getenv("RLCURV_SEED");
        auto resolve_seed = [&](const rlc::MetricSpecFile& spec) {
            if (!opts.seed && !spec.seed && env) opts.seed = std::stoull(env);
        };
        if (*analyze) {
            const std::string text = read_file(file);
            const auto spec = rlc::parse_spec_file(text);
            resolve_seed(spec);
            const auto report = rlc::analyze(spec, rlc::sha256_hex(text), opts);
            emit(rlc::to_json(report, opts.evidence), json_out);
            if (report.precondition_failed) std::cerr << "rlcurv: " << report.precondition << '\n';
            return rlc::exit_code(report);
        }
        if (*conformal) {
            const std::string text = read_file(file);
            const auto spec = rlc::parse_spec_file(text);
            resolve_seed(spec);
            emit(rlc::to_json(rlc::conformal(spec, rlc::sha256_hex(text), factor, opts)), json_out);
            return 0;
        }
        if (!opts.seed && env) opts.seed = std::stoull(env);
        const auto rows = rlc::run_corpus(dir, opts);
        std::cout << rlc::corpus_table(rows);
        if (!json_out.empty()) {
            auto all = nlohmann::ordered_json::array();
            for (const auto& row : rows)
                all.push_back(row.report ? rlc::to_json(*row.report, opts.evidence)
                                         : nlohmann::ordered_json{{"file", row.file}, {"error", row.error}});
            emit(all, json_out);
        }
        return rlc::corpus_exit_code(rows);
    } catch (const std::exception& e) {
        std::cerr << "rlcurv: " << e.what() << '\n';
        return 1;
    }
}

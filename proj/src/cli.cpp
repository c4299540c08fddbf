#include "decomp/cli.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "decomp/canonical.hpp"
#include "decomp/parser.hpp"
#include "decomp/pipeline.hpp"
#include "decomp/render.hpp"

namespace decomp::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path output_base(const std::string& input_path, const Config& config) {
    fs::path input(input_path);
    fs::path dir = config.out_dir.empty() ? input.parent_path() : fs::path(config.out_dir);
    if (!dir.empty()) fs::create_directories(dir);
    return dir / input.stem();
}

report::RenderOptions render_options(const Config& config) {
    report::RenderOptions options;
    if (!config.palette.empty()) options.palette = config.palette;
    return options;
}

int report_diagnostic(const std::string& path, const DiagnosticError& error) {
    std::cerr << path << ":" << error.what() << "\n";
    return kExitDiagnostic;
}

void print_dead_code_warnings(const std::string& path, const Analysis& analysis) {
    for (int id : analysis.dead) {
        const auto& node = analysis.graph.node(id);
        std::cerr << path << ":" << node.span.line << ":" << node.span.column
                  << ": warning: dead code: '" << node.label << "' never reaches an output\n";
    }
}

struct ScoreOutcome {
    metrics::QualityReport report;
    bool parsed = true;
    std::string error;
};

ScoreOutcome score_one(const lang::Program& student, const lang::Program& reference,
                       const metrics::Measurements& reference_measurements,
                       const ddg::CanonicalForm& reference_form, const Config& config) {
    ScoreOutcome outcome;
    metrics::Measurements cand = metrics::measure(student);
    ddg::CanonicalForm form = equivalence_form(student);
    bool equivalent = form.equivalent_to(reference_form);
    outcome.report = metrics::compare(cand, reference_measurements, config.weights, equivalent);
    metrics::Thresholds thresholds;
    thresholds.param_threshold = config.param_threshold;
    thresholds.reference = reference_measurements;
    outcome.report.findings = metrics::flag_findings(student, cand, thresholds);
    (void)reference;
    return outcome;
}

// An undecomposed reference is decomposed by the pipeline itself.
lang::Program load_reference(const std::string& path) {
    lang::Program reference = lang::parse(read_file(path));
    if (!reference.functions().empty()) return reference;
    Analysis analysis = analyze_program(reference);
    std::string solution = split::emit_refactored_source(analysis.plan, analysis.flat);
    return lang::parse(solution);
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + temp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw ConfigError("write failed for '" + temp.string() + "'");
    }
    fs::rename(temp, target);
}

int cmd_split(const std::string& input_path, const Config& config) {
    Analysis analysis;
    try {
        analysis = analyze_source(read_file(input_path));
    } catch (const NoGoalsError& e) {
        std::cerr << input_path << ": " << e.what() << "\n";
        return kExitNoGoals;
    } catch (const DiagnosticError& e) {
        return report_diagnostic(input_path, e);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitDiagnostic;
    }
    print_dead_code_warnings(input_path, analysis);

    fs::path base = output_base(input_path, config);
    if (config.formats.count("json")) {
        write_file_atomic(base.string() + ".plan.json", split::plan_to_json(analysis.plan));
    }
    write_file_atomic(base.string() + ".split.src",
                      split::emit_refactored_source(analysis.plan, analysis.flat));
    if (config.formats.count("dot")) {
        write_file_atomic(base.string() + ".dot",
                          report::render_dot(analysis.graph, analysis.coloring, render_options(config)));
    }
    if (config.frames) {
        fs::path frames_dir = base;
        frames_dir += ".frames";
        fs::create_directories(frames_dir);
        std::vector<std::string> frames =
            report::render_frames(analysis.graph, render_options(config));
        for (size_t i = 0; i < frames.size(); ++i) {
            char name[16];
            std::snprintf(name, sizeof(name), "%03zu.dot", i);
            write_file_atomic((frames_dir / name).string(), frames[i]);
        }
    }
    return kExitOk;
}

int cmd_score(const std::string& student_path, const std::string& reference_path,
              const Config& config) {
    lang::Program reference;
    lang::Program student;
    try {
        reference = load_reference(reference_path);
    } catch (const DiagnosticError& e) {
        return report_diagnostic(reference_path, e);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitDiagnostic;
    }
    try {
        student = lang::parse(read_file(student_path));
    } catch (const DiagnosticError& e) {
        return report_diagnostic(student_path, e);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitDiagnostic;
    }

    ScoreOutcome outcome;
    try {
        metrics::Measurements reference_measurements = metrics::measure(reference);
        ddg::CanonicalForm reference_form = equivalence_form(reference);
        outcome = score_one(student, reference, reference_measurements, reference_form, config);
    } catch (const DiagnosticError& e) {
        return report_diagnostic(student_path, e);
    }

    fs::path base = output_base(student_path, config);
    if (config.formats.count("json")) {
        write_file_atomic(base.string() + ".report.json", metrics::report_to_json(outcome.report));
    }
    if (config.formats.count("md")) {
        write_file_atomic(base.string() + ".feedback.md",
                          report::render_feedback_md(outcome.report));
    }
    return outcome.report.equivalent ? kExitOk : kExitNonequivalent;
}

int cmd_batch(const std::string& corpus_dir, const std::string& reference_path,
              const Config& config) {
    lang::Program reference;
    metrics::Measurements reference_measurements;
    ddg::CanonicalForm reference_form;
    try {
        reference = load_reference(reference_path);
        reference_measurements = metrics::measure(reference);
        reference_form = equivalence_form(reference);
    } catch (const DiagnosticError& e) {
        return report_diagnostic(reference_path, e);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitDiagnostic;
    }

    std::vector<std::string> paths;
    try {
        for (const auto& entry : fs::directory_iterator(corpus_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".src") {
                paths.push_back(entry.path().string());
            }
        }
    } catch (const fs::filesystem_error& e) {
        std::cerr << e.what() << "\n";
        return kExitDiagnostic;
    }
    std::sort(paths.begin(), paths.end());

    struct Row {
        std::string path;
        bool parsed = false;
        bool equivalent = false;
        metrics::QualityReport report;
        std::string error;
    };
    std::vector<Row> rows(paths.size());

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= paths.size()) break;
            Row& row = rows[i];
            row.path = paths[i];
            try {
                lang::Program student = lang::parse(read_file(paths[i]));
                ScoreOutcome outcome =
                    score_one(student, reference, reference_measurements, reference_form, config);
                row.parsed = true;
                row.equivalent = outcome.report.equivalent;
                row.report = outcome.report;
            } catch (const DiagnosticError& e) {
                row.error = e.what();
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    // Merge in path order; output is independent of scheduling.
    nlohmann::json out;
    out["results"] = nlohmann::json::array();
    std::vector<double> composites;
    std::map<std::string, std::map<int, int>> histograms;
    for (const Row& row : rows) {
        nlohmann::json r;
        r["path"] = row.path;
        if (!row.error.empty()) {
            r["error"] = row.error;
        } else {
            r["composite"] = row.report.composite;
            r["subscores"] = {{"s1", row.report.subscores[0]},
                              {"s2", row.report.subscores[1]},
                              {"s3", row.report.subscores[2]},
                              {"s4", row.report.subscores[3]}};
            r["equivalent"] = row.equivalent;
            if (row.equivalent) {
                composites.push_back(row.report.composite);
                histograms["srp_violations"][row.report.candidate.srp_violations]++;
                histograms["global_volume"][row.report.candidate.global_volume]++;
                histograms["info_load"][row.report.candidate.info_load]++;
                histograms["reuse_instances"][row.report.candidate.reuse_instances]++;
            }
        }
        out["results"].push_back(std::move(r));
    }
    nlohmann::json summary;
    summary["total"] = paths.size();
    summary["included"] = composites.size();
    if (!composites.empty()) {
        std::vector<double> sorted = composites;
        std::sort(sorted.begin(), sorted.end());
        double mean = 0;
        for (double c : sorted) mean += c;
        mean /= static_cast<double>(sorted.size());
        double median = sorted.size() % 2 == 1
                            ? sorted[sorted.size() / 2]
                            : (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]) / 2.0;
        summary["mean_composite"] = mean;
        summary["median_composite"] = median;
    }
    nlohmann::json hist;
    for (const auto& [metric, counts] : histograms) {
        nlohmann::json h = nlohmann::json::object();
        for (const auto& [value, count] : counts) h[std::to_string(value)] = count;
        hist[metric] = std::move(h);
    }
    summary["histograms"] = std::move(hist);
    out["summary"] = std::move(summary);

    fs::path dir = config.out_dir.empty() ? fs::path(corpus_dir) : fs::path(config.out_dir);
    fs::create_directories(dir);
    write_file_atomic((dir / "batch.json").string(), out.dump(2));

    // Per-file reports for everything that scored.
    for (const Row& row : rows) {
        if (!row.error.empty()) continue;
        fs::path base = dir / fs::path(row.path).stem();
        if (config.formats.count("json")) {
            write_file_atomic(base.string() + ".report.json", metrics::report_to_json(row.report));
        }
        if (config.formats.count("md")) {
            write_file_atomic(base.string() + ".feedback.md",
                              report::render_feedback_md(row.report));
        }
    }
    return kExitOk;
}

int cmd_dot(const std::string& input_path, const Config& config) {
    Analysis analysis;
    try {
        analysis = analyze_source(read_file(input_path));
    } catch (const NoGoalsError& e) {
        std::cerr << input_path << ": " << e.what() << "\n";
        return kExitNoGoals;
    } catch (const DiagnosticError& e) {
        return report_diagnostic(input_path, e);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitDiagnostic;
    }
    fs::path base = output_base(input_path, config);
    write_file_atomic(base.string() + ".dot",
                      report::render_dot(analysis.graph, analysis.coloring, render_options(config)));
    if (config.frames) {
        fs::path frames_dir = base;
        frames_dir += ".frames";
        fs::create_directories(frames_dir);
        std::vector<std::string> frames =
            report::render_frames(analysis.graph, render_options(config));
        for (size_t i = 0; i < frames.size(); ++i) {
            char name[16];
            std::snprintf(name, sizeof(name), "%03zu.dot", i);
            write_file_atomic((frames_dir / name).string(), frames[i]);
        }
    }
    return kExitOk;
}

}  // namespace decomp::cli

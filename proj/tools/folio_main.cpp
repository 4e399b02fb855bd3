// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "folio/cli/stages.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{
        "folio: a schema-driven pipeline that turns page images of historical documents "
        "into structured, enriched, indexed records"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    const auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "pipeline configuration file (JSON)")
            ->required();
        cmd->add_option("-s,--set", overrides,
                        "override a config key, e.g. --set mode=strict or "
                        "--set concurrency.max_in_flight=2");
    };

    CLI::App* cmd_preprocess =
        app.add_subcommand("preprocess", "normalise and enhance the input page images");
    add_config(cmd_preprocess);
    CLI::App* cmd_extract =
        app.add_subcommand("extract", "run page extraction against the configured backend");
    add_config(cmd_extract);
    CLI::App* cmd_refine =
        app.add_subcommand("refine", "correct, link and aggregate page outputs");
    add_config(cmd_refine);
    CLI::App* cmd_enrich =
        app.add_subcommand("enrich", "link entities, export TEI/CSV/JSONL, index units");
    add_config(cmd_enrich);
    CLI::App* cmd_ingest =
        app.add_subcommand("ingest", "chunk the document and build the retrieval index");
    add_config(cmd_ingest);
    CLI::App* cmd_all = app.add_subcommand("all", "run every stage in order");
    add_config(cmd_all);

    CLI::App* cmd_query = app.add_subcommand("query", "answer questions over the built index");
    add_config(cmd_query);
    std::string query_text;
    cmd_query->add_option("-q,--query", query_text,
                          "one-shot question (omit for an interactive loop)");

    CLI::App* cmd_eval =
        app.add_subcommand("eval", "score transcripts (and optionally layout) against ground truth");
    folio::cli::EvalArgs eval_args;
    std::string ref_dir, hyp_dir, gold_dir, pred_dir, eval_out;
    cmd_eval->add_option("--reference", ref_dir, "directory of per-page reference .txt files")
        ->required();
    cmd_eval->add_option("--hypothesis", hyp_dir, "directory of per-page hypothesis .txt files")
        ->required();
    cmd_eval->add_option("--layout-gold", gold_dir, "directory of per-page gold element JSON");
    cmd_eval->add_option("--layout-pred", pred_dir, "directory of per-page predicted element JSON");
    cmd_eval->add_option("--out", eval_out, "output directory for report.json / report.txt")
        ->required();
    cmd_eval->add_option("--iou", eval_args.iou_threshold, "IoU threshold for layout matching");

    CLI::App* cmd_report =
        app.add_subcommand("report", "compare two evaluation reports, optionally with effort projection");
    folio::cli::ReportArgs report_args;
    std::string report_a, report_b, report_out;
    double correction_spp = 0.0, machine_a = 0.0, machine_b = 0.0;
    int pages = 0;
    cmd_report->add_option("--a", report_a, "baseline report.json")->required();
    cmd_report->add_option("--b", report_b, "compared report.json")->required();
    cmd_report->add_option("--label-a", report_args.label_a, "baseline label");
    cmd_report->add_option("--label-b", report_args.label_b, "compared label");
    cmd_report->add_option("--out", report_out, "output directory")->required();
    CLI::Option* opt_correction = cmd_report->add_option(
        "--correction-seconds", correction_spp, "measured correction seconds/page on the baseline");
    CLI::Option* opt_pages = cmd_report->add_option("--pages", pages, "corpus page count");
    CLI::Option* opt_machine_a =
        cmd_report->add_option("--machine-seconds-a", machine_a, "machine seconds/page, baseline");
    CLI::Option* opt_machine_b =
        cmd_report->add_option("--machine-seconds-b", machine_b, "machine seconds/page, compared");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_eval->parsed()) {
            eval_args.reference_dir = ref_dir;
            eval_args.hypothesis_dir = hyp_dir;
            if (!gold_dir.empty()) eval_args.layout_gold_dir = gold_dir;
            if (!pred_dir.empty()) eval_args.layout_pred_dir = pred_dir;
            eval_args.output_dir = eval_out;
            folio::cli::run_eval(eval_args);
            return folio::cli::kExitOk;
        }
        if (cmd_report->parsed()) {
            report_args.report_a = report_a;
            report_args.report_b = report_b;
            report_args.output_dir = report_out;
            if (*opt_correction) report_args.correction_seconds_per_page = correction_spp;
            if (*opt_pages) report_args.pages = pages;
            if (*opt_machine_a) report_args.machine_seconds_a = machine_a;
            if (*opt_machine_b) report_args.machine_seconds_b = machine_b;
            folio::cli::run_report(report_args);
            return folio::cli::kExitOk;
        }

        const folio::cli::PipelineConfig config =
            folio::cli::load_pipeline_config(config_path, overrides);
        if (cmd_preprocess->parsed()) folio::cli::run_preprocess(config);
        else if (cmd_extract->parsed()) folio::cli::run_extract(config);
        else if (cmd_refine->parsed()) folio::cli::run_refine(config);
        else if (cmd_enrich->parsed()) folio::cli::run_enrich(config);
        else if (cmd_ingest->parsed()) folio::cli::run_ingest(config);
        else if (cmd_all->parsed()) folio::cli::run_all(config);
        else if (cmd_query->parsed()) {
            std::optional<std::string> query;
            if (!query_text.empty()) query = query_text;
            folio::cli::run_query(config, query, std::cin, std::cout);
        }
        return folio::cli::kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return folio::cli::map_exit_code(e);
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }

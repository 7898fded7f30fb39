#include <CLI11.hpp>
#include <iostream>

#include "texcat/dataset_io.hpp"
#include "texcat/pipeline.hpp"

using namespace texcat;

int main(int argc, char** argv) {
    CLI::App app{"GLCM texture classification pipeline for MIAS-style mammograms"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("-c,--config", config_path, "key=value run configuration file")->required();

    auto* ingest = app.add_subcommand("ingest", "build the manifest cache from the MIAS index");
    bool strict = false;
    ingest->add_flag("--strict", strict, "fail on the first unreadable image");

    auto* extract = app.add_subcommand("extract", "extract feature datasets (CSV + ARFF) per mode");

    auto* reduce = app.add_subcommand("reduce", "fit Fisherfaces on a feature CSV");
    std::string reduce_csv;
    reduce->add_option("csv", reduce_csv, "feature CSV path")->required();

    auto* som = app.add_subcommand("som", "train a SOM on a reduced CSV");
    std::string som_csv, som_map = "10x10";
    som->add_option("csv", som_csv, "reduced feature CSV path")->required();
    som->add_option("--map", som_map, "map size, e.g. 10x10");

    auto* evaluate = app.add_subcommand("evaluate", "cross-validate one pipeline cell");
    std::string eval_mode = "fixed_bloc", eval_som = "off", eval_map = "10x10",
                eval_classifier = "1nn";
    evaluate->add_option("--mode", eval_mode, "fixed_bloc | pixel_wise | bloc_wise");
    evaluate->add_option("--som", eval_som, "off | replace | augment");
    evaluate->add_option("--map", eval_map, "SOM map size");
    evaluate->add_option("--classifier", eval_classifier, "1nn | gnb");

    auto* run = app.add_subcommand("run", "evaluate the full feature-set x SOM x classifier grid");

    auto* export_arff = app.add_subcommand("export-arff", "convert a feature CSV to ARFF");
    std::string arff_csv, arff_relation = "texcat", arff_out;
    export_arff->add_option("csv", arff_csv, "feature CSV path")->required();
    export_arff->add_option("--relation", arff_relation, "ARFF relation name");
    export_arff->add_option("-o,--output", arff_out, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    auto parse_map = [](const std::string& s) {
        size_t x = s.find('x');
        if (x == std::string::npos) throw ConfigError("map size must look like 10x10");
        return std::make_pair(std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1)));
    };

    try {
        RunConfig cfg = RunConfig::parse_file(config_path);
        if (strict) cfg.strict = true;

        if (ingest->parsed()) {
            cmd_ingest(cfg, std::cout);
        } else if (extract->parsed()) {
            cmd_extract(cfg, std::cout);
        } else if (reduce->parsed()) {
            std::cout << cmd_reduce(cfg, reduce_csv, std::cout) << "\n";
        } else if (som->parsed()) {
            auto [r, c] = parse_map(som_map);
            std::cout << cmd_som(cfg, som_csv, r, c, std::cout) << "\n";
        } else if (evaluate->parsed()) {
            auto [r, c] = parse_map(eval_map);
            EvalReport rep = cmd_evaluate(cfg, roi_mode_from_string(eval_mode),
                                          som_use_from_string(eval_som), r, c,
                                          classifier_from_string(eval_classifier), std::cout);
            std::cout << "accuracy " << rep.overall_accuracy << " sensitivity " << rep.sensitivity
                      << " specificity " << rep.specificity << "\n";
        } else if (run->parsed()) {
            RunResult res = cmd_run(cfg, std::cout);
            std::cout << "report: " << res.report_text_path << "\n";
        } else if (export_arff->parsed()) {
            FeatureDataset ds = dataset_from_csv(read_file(arff_csv));
            std::vector<std::string> warnings;
            atomic_write_file(arff_out,
                              dataset_to_arff(ds, arff_relation, cfg.fingerprint(), &warnings));
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

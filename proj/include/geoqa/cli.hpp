#pragma once

/// @file cli.hpp
/// Command-line pipeline driver. Lives in a header so tests can run the
/// exact production code paths in-process and compare output bytes.
/// Exit codes: 0 success, 1 validation/config/usage, 2 I/O.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoqa/assemble.hpp"
#include "geoqa/catalog.hpp"
#include "geoqa/collection.hpp"
#include "geoqa/dataset.hpp"
#include "geoqa/errors.hpp"
#include "geoqa/eval.hpp"
#include "geoqa/profile.hpp"
#include "geoqa/stats.hpp"
#include "geoqa/templates.hpp"
#include "geoqa/tiling.hpp"

namespace geoqa::cli {

namespace detail {

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("failed while writing: " + path);
}

inline std::string pretty(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

inline TemplateTable load_templates(const GenerationProfile& profile,
                                    const std::string& profile_path) {
    if (profile.templates_file.empty()) return TemplateTable::defaults();
    std::filesystem::path p(profile.templates_file);
    if (p.is_relative()) p = std::filesystem::path(profile_path).parent_path() / p;
    std::ifstream in(p);
    if (!in) throw IoError("cannot open templates file: " + p.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ParseError(p.string() + ": malformed JSON");
    return TemplateTable::from_json(doc);
}

struct GenerateArgs {
    std::string geo, profile_path, out_dir;
    unsigned workers = 0;  // 0 = hardware concurrency
    std::vector<std::string> overrides;
    std::string crs = "metric";
};

inline void cmd_generate(const GenerateArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    const GenerationProfile profile = load_profile(a.profile_path, a.overrides);
    const TemplateTable templates = load_templates(profile, a.profile_path);
    const ElementCatalog catalog = default_catalog();

    CrsPolicy policy;
    if (a.crs == "metric") {
        policy = CrsPolicy::require_metric;
    } else if (a.crs == "equirectangular") {
        policy = CrsPolicy::equirectangular_approx;
    } else {
        throw ConfigError("--crs must be 'metric' or 'equirectangular'");
    }
    const ObjectCollection collection = load_collection(a.geo, policy);
    std::cerr << "[geoqa] loaded objects=" << collection.size() << "\n";

    const std::vector<SourceSpec> sources = resolve_sources(profile, collection.bounds());
    std::vector<TileFootprint> tiles;
    std::vector<std::string> tiled_sources;
    for (const SourceSpec& s : sources) {
        std::vector<TileFootprint> grid =
            tile_grid(s.rect, profile.tile_pixels, profile.resolution, s.id);
        if (grid.empty()) {
            std::cerr << "[geoqa] warning: source " << s.id << " is smaller than one tile\n";
            continue;
        }
        tiled_sources.push_back(s.id);
        for (TileFootprint& t : grid) tiles.push_back(std::move(t));
    }
    if (tiles.empty()) throw ValidationError("no source produces a whole tile");

    const std::map<std::string, Split> splits =
        assign_splits(tiled_sources, profile.split_fractions, profile.seed);
    apply_splits(tiles, splits);
    sort_tiles(tiles);

    const unsigned workers =
        a.workers > 0 ? a.workers : std::max(1u, std::thread::hardware_concurrency());
    const AssembleResult result =
        assemble(collection, tiles, profile, catalog, templates, workers);

    ensure_dir(a.out_dir);
    const std::filesystem::path out(a.out_dir);
    write_dataset(result.triplets, (out / "triplets.jsonl").string());
    write_text((out / "report.json").string(), pretty(report_to_json(result.report)));
    write_text((out / "manifest.json").string(),
               pretty(build_manifest(profile, catalog, splits, tiles)));

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    std::cerr << "[geoqa] generate tiles=" << tiles.size()
              << " questions=" << result.triplets.size() << " workers=" << workers
              << " elapsed_ms=" << elapsed << "\n";
}

inline void cmd_stats(const std::string& dataset) {
    const std::vector<QATriplet> triplets = read_dataset(dataset);
    if (triplets.empty()) throw ValidationError("dataset is empty: " + dataset);
    std::cout << pretty(report_to_json(stats(triplets)));
}

inline std::vector<std::string> vocabulary_for(const std::string& scale_flag,
                                               std::uint32_t max_count,
                                               const std::vector<QATriplet>& triplets) {
    if (scale_flag == "lr") return lr_vocabulary();
    if (scale_flag == "hr") return hr_vocabulary(max_count);
    return infer_vocabulary(triplets, max_count);
}

inline void cmd_evaluate(const std::string& dataset, const std::string& predictions_path,
                         const std::string& out_dir, const std::string& scale_flag,
                         std::uint32_t max_count) {
    const std::vector<QATriplet> triplets = read_dataset(dataset);
    if (triplets.empty()) throw ValidationError("dataset is empty: " + dataset);
    const std::vector<Prediction> predictions = read_predictions(predictions_path);
    const MetricsReport report =
        score(predictions, triplets, vocabulary_for(scale_flag, max_count, triplets));
    ensure_dir(out_dir);
    const std::filesystem::path out(out_dir);
    write_text((out / "metrics.json").string(), pretty(metrics_to_json(report)));
    write_text((out / "confusion.csv").string(), confusion_csv(report));
    std::cerr << "[geoqa] evaluate n=" << report.n_scored << " oa=" << report.oa
              << " aa=" << report.aa << " illogical=" << report.illogical_count << "\n";
}

inline void cmd_shuffle(const std::string& dataset, std::uint64_t seed,
                        const std::string& out_file) {
    const std::vector<QATriplet> triplets = read_dataset(dataset);
    const ShuffleManifest manifest = shuffle_manifest(triplets, seed);
    if (manifest.identity)
        std::cerr << "[geoqa] warning: fewer than 2 tiles; emitting identity map\n";
    nlohmann::json j;
    for (const auto& [qid, tile] : manifest.reassignment) j[qid] = tile;
    if (j.is_null()) j = nlohmann::json::object();
    write_text(out_file, pretty(j));
    std::cerr << "[geoqa] shuffle questions=" << manifest.reassignment.size() << " seed=" << seed
              << "\n";
}

inline void cmd_baseline(const std::string& train_path, const std::string& test_path,
                         const std::string& out_dir, const std::string& scale_flag,
                         std::uint32_t max_count) {
    const std::vector<QATriplet> train = read_dataset(train_path);
    const std::vector<QATriplet> test = read_dataset(test_path);
    if (test.empty()) throw ValidationError("test dataset is empty: " + test_path);
    const PriorBaseline baseline = prior_baseline(train);
    const std::vector<Prediction> predictions = predict(baseline, test);
    const MetricsReport report =
        score(predictions, test, vocabulary_for(scale_flag, max_count, test));
    ensure_dir(out_dir);
    const std::filesystem::path out(out_dir);
    write_predictions(predictions, (out / "predictions.jsonl").string());
    write_text((out / "metrics.json").string(), pretty(metrics_to_json(report)));
    std::cerr << "[geoqa] baseline n=" << report.n_scored << " oa=" << report.oa
              << " aa=" << report.aa << "\n";
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
    CLI::App app{"geoqa: synthesize and score geo visual-question-answering datasets"};
    app.require_subcommand(1);

    detail::GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "build a dataset from vector geo-data");
    generate->add_option("--geo", gen.geo, "GeoJSON FeatureCollection")->required();
    generate->add_option("--profile", gen.profile_path, "generation profile JSON")->required();
    generate->add_option("--out", gen.out_dir, "output directory")->required();
    generate->add_option("--workers", gen.workers, "parallel tile workers (default: all cores)");
    generate->add_option("--set", gen.overrides, "profile override key=value (repeatable)");
    generate->add_option("--crs", gen.crs, "metric | equirectangular (default metric)");

    std::string stats_dataset;
    CLI::App* stats_cmd = app.add_subcommand("stats", "print dataset distribution report");
    stats_cmd->add_option("--dataset", stats_dataset, "triplets JSONL")->required();

    std::string eval_dataset, eval_predictions, eval_out, eval_scale;
    std::uint32_t eval_max_count = 89;
    CLI::App* evaluate = app.add_subcommand("evaluate", "score predictions against ground truth");
    evaluate->add_option("--dataset", eval_dataset, "ground-truth triplets JSONL")->required();
    evaluate->add_option("--predictions", eval_predictions, "predictions JSONL")->required();
    evaluate->add_option("--out", eval_out, "output directory")->required();
    evaluate->add_option("--scale", eval_scale, "vocabulary: lr | hr (default: inferred)");
    evaluate->add_option("--max-count", eval_max_count, "HR vocabulary count ceiling");

    std::string shuffle_dataset, shuffle_out;
    std::uint64_t shuffle_seed = 0;
    CLI::App* shuffle = app.add_subcommand("shuffle", "emit the image-reassignment bias probe");
    shuffle->add_option("--dataset", shuffle_dataset, "triplets JSONL")->required();
    shuffle->add_option("--seed", shuffle_seed, "reassignment seed")->required();
    shuffle->add_option("--out", shuffle_out, "output JSON map")->required();

    std::string base_train, base_test, base_out, base_scale;
    std::uint32_t base_max_count = 89;
    CLI::App* baseline = app.add_subcommand("baseline", "modal-answer prior baseline and score");
    baseline->add_option("--train", base_train, "training triplets JSONL")->required();
    baseline->add_option("--test", base_test, "test triplets JSONL")->required();
    baseline->add_option("--out", base_out, "output directory")->required();
    baseline->add_option("--scale", base_scale, "vocabulary: lr | hr (default: inferred)");
    baseline->add_option("--max-count", base_max_count, "HR vocabulary count ceiling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nRun with --help for usage.\n";
        return 1;
    }

    try {
        if (*generate) detail::cmd_generate(gen);
        if (*stats_cmd) detail::cmd_stats(stats_dataset);
        if (*evaluate)
            detail::cmd_evaluate(eval_dataset, eval_predictions, eval_out, eval_scale,
                                 eval_max_count);
        if (*shuffle) detail::cmd_shuffle(shuffle_dataset, shuffle_seed, shuffle_out);
        if (*baseline)
            detail::cmd_baseline(base_train, base_test, base_out, base_scale, base_max_count);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

inline int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(int(argv.size()), argv.data());
}

}  // namespace geoqa::cli

// End-to-end acceptance checks. Each criterion prints one [PASS]/[FAIL] line;
// the binary exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "synthetic.hpp"
#include "texcat/dataset_io.hpp"
#include "texcat/eval.hpp"
#include "texcat/fisherfaces.hpp"
#include "texcat/glcm.hpp"
#include "texcat/pgm.hpp"
#include "texcat/pipeline.hpp"
#include "texcat/roi.hpp"
#include "texcat/som.hpp"

using namespace texcat;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what;
    if (!ok && !detail.empty()) std::cout << " -- " << detail;
    std::cout << std::endl;
    if (!ok) ++failures;
}

void run(int criterion, const std::string& what, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(criterion, what, false, std::string("exception: ") + e.what());
    }
}

struct Check {
    bool ok = true;
    std::string detail;
    void expect(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            detail = msg;
        }
    }
};

// Independent GLCM oracle: enumerate every pixel pair directly.
Glcm brute_glcm(const GrayImage& img, int dx, int dy, const std::vector<uint8_t>* mask) {
    Glcm m;
    m.levels = img.levels;
    m.p.assign(static_cast<size_t>(img.levels) * img.levels, 0.0);
    long pairs = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            int x2 = x + dx, y2 = y + dy;
            if (x2 < 0 || x2 >= img.width || y2 < 0 || y2 >= img.height) continue;
            if (mask) {
                size_t a = static_cast<size_t>(y) * img.width + x;
                size_t b = static_cast<size_t>(y2) * img.width + x2;
                if (!(*mask)[a] || !(*mask)[b]) continue;
            }
            m.at(img.at(x, y), img.at(x2, y2)) += 1.0;
            m.at(img.at(x2, y2), img.at(x, y)) += 1.0;
            ++pairs;
        }
    m.pair_count = pairs;
    if (pairs > 0)
        for (double& v : m.p) v /= 2.0 * pairs;
    return m;
}

void criterion1() {
    run(1, "GLCM matches a brute-force oracle on 1000 random images", [] {
        auto start = std::chrono::steady_clock::now();
        std::mt19937 rng(42);
        Check chk;
        for (int trial = 0; trial < 1000 && chk.ok; ++trial) {
            int w = 1 + static_cast<int>(rng() % 16);
            int h = 1 + static_cast<int>(rng() % 16);
            int g = 2 + static_cast<int>(rng() % 7);  // G in [2, 8]
            GrayImage img;
            img.width = w;
            img.height = h;
            img.levels = g;
            img.pixels.resize(static_cast<size_t>(w) * h);
            for (int& px : img.pixels) px = static_cast<int>(rng() % g);

            std::vector<uint8_t> mask;
            const std::vector<uint8_t>* mp = nullptr;
            if (trial % 2) {
                mask.resize(img.pixels.size());
                for (auto& b : mask) b = rng() % 4 != 0;
                mp = &mask;
            }
            int dx = static_cast<int>(rng() % 3) - 1;
            int dy = static_cast<int>(rng() % 3) - 1;
            if (dx == 0 && dy == 0) dx = 1;

            Glcm got = compute_glcm(img, dx, dy, mp);
            Glcm want = brute_glcm(img, dx, dy, mp);
            chk.expect(got.pair_count == want.pair_count, "pair counts differ");
            for (size_t i = 0; i < want.p.size(); ++i)
                chk.expect(std::abs(got.p[i] - want.p[i]) < 1e-12, "matrix cell mismatch");

            // hand formulas for the four statistics
            TextureFeatures f = features_from_glcm(got);
            double dis = 0, uni = 0, ent = 0, con = 0;
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j) {
                    double c = want.at(i, j);
                    dis += c * std::abs(i - j);
                    uni += c * c;
                    if (c > 0) ent -= c * std::log2(c);
                    con += c * (i - j) * (i - j);
                }
            chk.expect(std::abs(f.dissimilarity - dis) < 1e-12, "dissimilarity mismatch");
            chk.expect(std::abs(f.uniformity - uni) < 1e-12, "uniformity mismatch");
            chk.expect(std::abs(f.entropy - ent) < 1e-12, "entropy mismatch");
            chk.expect(std::abs(f.contrast - con) < 1e-12, "contrast mismatch");
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        chk.expect(secs < 5.0, "runtime " + std::to_string(secs) + "s exceeds 5s");
        report(1, "GLCM matches a brute-force oracle on 1000 random images", chk.ok, chk.detail);
    });
}

void criterion2() {
    run(2, "feature dimensions are 192 / 72 / 72 for the three ROI modes", [] {
        GrayImage img = testutil::synthetic_texture("CALC", 7, 48, 64);
        img = quantize_gray_levels(img, 32);
        Check chk;
        struct Want {
            RoiMode mode;
            int dim;
        };
        for (Want w : {Want{RoiMode::fixed_bloc, 192}, Want{RoiMode::pixel_wise, 72},
                       Want{RoiMode::bloc_wise, 72}}) {
            PartitionConfig cfg;
            cfg.mode = w.mode;
            chk.expect(cfg.feature_dim() == w.dim,
                       to_string(w.mode) + " declares dim " + std::to_string(cfg.feature_dim()));
            ExtractionResult res = extract_features(img, cfg);
            chk.expect(static_cast<int>(res.values.size()) == w.dim,
                       to_string(w.mode) + " produced " + std::to_string(res.values.size()) +
                           " values");
        }
        report(2, "feature dimensions are 192 / 72 / 72 for the three ROI modes", chk.ok,
               chk.detail);
    });
}

void criterion3() {
    run(3, "Fisherfaces scatter identity, closed form, m = c-1 and optimality", [] {
        Check chk;
        std::mt19937 rng(11);
        std::normal_distribution<double> gauss(0.0, 1.0);

        // S_T = S_b + S_w on random labeled data
        {
            Eigen::MatrixXd x(30, 4);
            std::vector<int> labels;
            for (int i = 0; i < 30; ++i) {
                labels.push_back(i % 3);
                for (int j = 0; j < 4; ++j) x(i, j) = gauss(rng) + labels.back();
            }
            ScatterSet s = compute_scatter(x, labels);
            double rel = (s.total - s.between - s.within).norm() / s.total.norm();
            chk.expect(rel < 1e-8, "S_T != S_b + S_w, rel error " + std::to_string(rel));
        }

        // two-class direction vs the closed form, in the standardized space
        Eigen::MatrixXd x(80, 2);
        std::vector<int> labels;
        for (int i = 0; i < 80; ++i) {
            int cls = i < 40 ? 0 : 1;
            x(i, 0) = (cls ? 4.0 : 0.0) + gauss(rng);
            x(i, 1) = gauss(rng);
            labels.push_back(cls);
        }
        FisherModel model = fit_fisherfaces(x, labels);
        chk.expect(model.output_dim == 1, "two classes should give m = 1");
        Eigen::MatrixXd z =
            (x.rowwise() - model.mean.transpose()) * model.scale.cwiseInverse().asDiagonal();
        ScatterSet s = compute_scatter(z, labels);
        Eigen::VectorXd w_ref = s.within.ldlt().solve(s.class_means[0] - s.class_means[1]);
        w_ref.normalize();
        double align = std::abs(w_ref.dot(model.w_opt.col(0).normalized()));
        chk.expect(std::abs(align - 1.0) < 1e-6,
                   "closed-form alignment " + std::to_string(align));

        // 7 classes reduce to 6 dimensions
        {
            int c = 7, per = 10, d = 15;
            Eigen::MatrixXd x7(c * per, d);
            std::vector<int> l7;
            for (int i = 0; i < c * per; ++i) {
                int cls = i % c;
                l7.push_back(cls);
                for (int j = 0; j < d; ++j) x7(i, j) = gauss(rng) * 0.3 + (j % c == cls ? 3.0 : 0.0);
            }
            FisherModel m7 = fit_fisherfaces(x7, l7);
            chk.expect(m7.output_dim == 6, "7 classes gave m = " + std::to_string(m7.output_dim));
        }

        // the fitted direction maximizes the Fisher criterion against 1000 random directions
        auto ratio = [&](const Eigen::VectorXd& w) {
            double den = w.dot(s.within * w);
            return w.dot(s.between * w) / (den > 0 ? den : 1e-300);
        };
        double fitted = ratio(model.w_opt.col(0));
        for (int i = 0; i < 1000; ++i) {
            Eigen::VectorXd w(2);
            w << gauss(rng), gauss(rng);
            if (w.norm() == 0) continue;
            w.normalize();
            chk.expect(ratio(w) <= fitted + 1e-9, "a random direction beat the fitted one");
        }
        report(3, "Fisherfaces scatter identity, closed form, m = c-1 and optimality", chk.ok,
               chk.detail);
    });
}

void criterion4() {
    run(4, "SOM update contraction, monotone schedules, QE improvement, quantization", [] {
        Check chk;

        // single update shrinks the distance to the sample by exactly (1 - alpha*h)
        SomMap map;
        map.rows = map.cols = 3;
        map.dim = 2;
        std::mt19937 rng(3);
        std::normal_distribution<double> gauss(0.0, 2.0);
        map.prototypes.assign(9, {0.0, 0.0});
        for (auto& p : map.prototypes) p = {gauss(rng), gauss(rng)};
        std::vector<double> sample = {1.0, -1.0};
        int winner = find_bmu(map, sample);
        double alpha = 0.42, sigma = 1.1;
        for (int i = 0; i < map.units(); ++i) {
            double h = neighborhood(map, winner, i, sigma);
            double before = std::hypot(map.prototypes[i][0] - sample[0],
                                       map.prototypes[i][1] - sample[1]);
            std::vector<double> updated = map.prototypes[i];
            for (int d = 0; d < 2; ++d) updated[d] += alpha * h * (sample[d] - map.prototypes[i][d]);
            double after = std::hypot(updated[0] - sample[0], updated[1] - sample[1]);
            chk.expect(std::abs(after - (1 - alpha * h) * before) < 1e-12,
                       "contraction factor deviates from (1 - alpha*h)");
        }

        // monotone schedules
        SomConfig sched;
        sched.rows = sched.cols = 10;
        sched.iterations = 2000;
        double pa = 1e300, ps = 1e300;
        for (long t = 0; t < sched.iterations; ++t) {
            double a = som_alpha(sched, t), sg = som_sigma(sched, t);
            chk.expect(a <= pa && sg <= ps, "schedule increased at t=" + std::to_string(t));
            pa = a;
            ps = sg;
        }

        // training a 10x10 map on 300 random 6-dim points improves mean QE (3 seeds)
        std::vector<std::vector<double>> data;
        for (int i = 0; i < 300; ++i) {
            std::vector<double> v(6);
            for (double& d : v) d = gauss(rng) + (i % 4) * 3.0;
            data.push_back(std::move(v));
        }
        SomMap trained10;
        for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            SomConfig cfg;
            cfg.rows = cfg.cols = 10;
            cfg.iterations = 20000;
            cfg.seed = seed;
            SomMap initial = init_som(cfg, data);
            trained10 = train_som(initial, data, cfg);
            double qe0 = mean_quantization_error(initial, data);
            double qe1 = mean_quantization_error(trained10, data);
            chk.expect(qe1 <= qe0, "seed " + std::to_string(seed) + ": QE rose from " +
                                       std::to_string(qe0) + " to " + std::to_string(qe1));
        }

        // quantize_replace emits prototypes only and is idempotent
        FeatureDataset ds;
        ds.dim = 6;
        for (int j = 0; j < 6; ++j) ds.feature_names.push_back("f" + std::to_string(j));
        ds.class_names = {"A"};
        for (size_t i = 0; i < data.size(); ++i)
            ds.rows.push_back({"r" + std::to_string(i), data[i], "A"});
        FeatureDataset once = quantize_replace(trained10, ds);
        for (const auto& row : once.rows) {
            bool is_proto = false;
            for (const auto& p : trained10.prototypes)
                if (p == row.values) is_proto = true;
            chk.expect(is_proto, "a quantized row is not a prototype");
        }
        FeatureDataset twice = quantize_replace(trained10, once);
        for (size_t i = 0; i < once.rows.size(); ++i)
            chk.expect(once.rows[i].values == twice.rows[i].values,
                       "quantize_replace is not idempotent");

        report(4, "SOM update contraction, monotone schedules, QE improvement, quantization",
               chk.ok, chk.detail);
    });
}

void criterion5() {
    run(5, "3-class synthetic corpus reaches accuracy 1.0 with Fisherfaces + SOM + 1-NN", [] {
        auto start = std::chrono::steady_clock::now();
        // constant / checkerboard / noise textures, 30 images each
        DatasetManifest manifest =
            testutil::synthetic_manifest({{"NORM", 30}, {"CIRC", 30}, {"CALC", 30}}, 32);

        PartitionConfig pc;
        pc.mode = RoiMode::fixed_bloc;
        FeatureDataset ds = assemble_dataset(manifest, pc);

        std::vector<std::string> labels;
        for (const auto& row : ds.rows) labels.push_back(row.label);
        FoldPlan plan = kfold_split(labels, 10, 1, true);

        PipelineOptions opts;
        opts.fisherfaces = true;
        opts.som_use = SomUse::replace;
        opts.som.rows = opts.som.cols = 10;
        opts.som.iterations = 20000;
        opts.classifier = Classifier::one_nn;
        opts.leakage = LeakageMode::per_fold;
        EvalReport rep = evaluate_features(ds, plan, opts);

        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        Check chk;
        chk.expect(rep.pooled.total() == 90, "pooled confusion covers " +
                                                 std::to_string(rep.pooled.total()) + " samples");
        chk.expect(rep.overall_accuracy == 1.0,
                   "accuracy " + std::to_string(rep.overall_accuracy));
        chk.expect(secs < 60.0, "runtime " + std::to_string(secs) + "s exceeds 60s");
        report(5, "3-class synthetic corpus reaches accuracy 1.0 with Fisherfaces + SOM + 1-NN",
               chk.ok, chk.detail);
    });
}

fs::path write_experiment_corpus(const fs::path& root) {
    fs::path data = root / "data";
    fs::create_directories(data);
    std::ostringstream index;
    int instance = 0;
    for (const auto& [label, count] : testutil::mias_sample_counts()) {
        for (int i = 0; i < count; ++i, ++instance) {
            char id[16];
            std::snprintf(id, sizeof(id), "syn%03d", instance);
            save_pgm_file(testutil::synthetic_texture(label, instance),
                          (data / (std::string(id) + ".pgm")).string());
            index << id << " G " << label;
            if (label != "NORM") index << " B 100 100 20";
            index << "\n";
        }
    }
    atomic_write_file((data / "index.txt").string(), index.str());
    return data;
}

void criterion6() {
    run(6, "experiment-scale run completes, exports ARFF and beats the majority baseline", [] {
        // The published MIAS corpus is not redistributable, so a 71-image
        // synthetic corpus with the same class distribution (30/10/7/8/5/7/4)
        // stands in; the published accuracy tables also depend on workbench
        // classifier settings that are not part of this pipeline, so the
        // check is completion + ARFF export + beating the 30/71 baseline.
        fs::path root = fs::temp_directory_path() / "texcat_acceptance_run";
        fs::remove_all(root);
        fs::path data = write_experiment_corpus(root);

        RunConfig cfg;
        cfg.data_root = data.string();
        cfg.index_file = (data / "index.txt").string();
        cfg.out_dir = (root / "out").string();
        cfg.som_iterations = 3000;  // keep the full grid tractable

        std::ostringstream log;
        IngestResult ing = cmd_ingest(cfg, log);
        Check chk;
        chk.expect(ing.records == 71, "ingested " + std::to_string(ing.records) + " records");

        RunResult res = cmd_run(cfg, log);
        // full grid: 3 modes x 2 classifiers x (base + 3 map sizes)
        chk.expect(res.cells.size() == 24,
                   "grid has " + std::to_string(res.cells.size()) + " cells");
        chk.expect(res.arff_paths.size() == 3, "expected one ARFF per mode");
        for (const auto& p : res.arff_paths) {
            chk.expect(fs::exists(p), "missing ARFF " + p);
            FeatureDataset back = dataset_from_arff(read_file(p));
            chk.expect(back.rows.size() == 71, "ARFF row count off in " + p);
        }
        for (const auto& cell : res.cells)
            chk.expect(!cell.failed, cell.feature_set + " " + cell.map_size + " " +
                                         cell.classifier + " failed: " + cell.error);
        double best_1nn = 0;
        for (const auto& cell : res.cells)
            if (cell.classifier == "1nn" && cell.feature_set == "FixedBloc" && !cell.failed)
                best_1nn = std::max(best_1nn, cell.accuracy);
        chk.expect(best_1nn >= 30.0 / 71.0,
                   "1-NN accuracy " + std::to_string(best_1nn) + " below the 30/71 baseline");

        std::string text = read_file(res.report_text_path);
        for (const char* heading : {"FixedBloc", "PixelWise", "BlocWise"})
            chk.expect(text.find(heading) != std::string::npos,
                       std::string("report lacks section ") + heading);
        for (const char* size : {"5x5", "10x10", "15x15"})
            chk.expect(text.find(size) != std::string::npos,
                       std::string("report lacks map size ") + size);
        fs::remove_all(root);
        report(6, "experiment-scale run completes, exports ARFF and beats the majority baseline",
               chk.ok, chk.detail);
    });
}

void criterion7() {
    run(7, "10-fold split of 71 samples tests each exactly once with sizes 7x9 + 8x1", [] {
        std::vector<std::string> labels;
        for (const auto& [label, count] : testutil::mias_sample_counts())
            for (int i = 0; i < count; ++i) labels.push_back(label);
        FoldPlan plan = kfold_split(labels, 10, 1, true);

        Check chk;
        chk.expect(plan.assignment.size() == 71, "assignment size off");
        std::vector<int> sizes(10, 0);
        for (int f : plan.assignment) {
            chk.expect(f >= 0 && f < 10, "fold index out of range");
            ++sizes[f];  // one entry per sample: tested exactly once by construction
        }
        std::sort(sizes.begin(), sizes.end());
        for (int i = 0; i < 9; ++i) chk.expect(sizes[i] == 7, "expected nine folds of size 7");
        chk.expect(sizes[9] == 8, "expected one fold of size 8");

        // and the evaluator pools exactly one prediction per sample
        FeatureDataset ds;
        ds.dim = 1;
        ds.feature_names = {"f0"};
        ds.class_names = {"NORM", "CALC", "CIRC", "SPIC", "MISC", "ARCH", "ASYM"};
        std::mt19937 rng(9);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (size_t i = 0; i < labels.size(); ++i)
            ds.rows.push_back({"r" + std::to_string(i), {gauss(rng)}, labels[i]});
        PipelineOptions opts;
        opts.fisherfaces = false;
        EvalReport rep = evaluate_features(ds, plan, opts);
        chk.expect(rep.pooled.total() == 71,
                   "pooled total " + std::to_string(rep.pooled.total()));
        report(7, "10-fold split of 71 samples tests each exactly once with sizes 7x9 + 8x1",
               chk.ok, chk.detail);
    });
}

void criterion8() {
    run(8, "two runs from one config produce byte-identical outputs", [] {
        fs::path root = fs::temp_directory_path() / "texcat_acceptance_det";
        fs::remove_all(root);
        fs::path data = write_experiment_corpus(root);

        RunConfig cfg;
        cfg.data_root = data.string();
        cfg.index_file = (data / "index.txt").string();
        cfg.out_dir = (root / "out").string();
        cfg.modes = {RoiMode::fixed_bloc};
        cfg.som_sizes = {{5, 5}};
        cfg.som_iterations = 2000;

        std::ostringstream log;
        cmd_ingest(cfg, log);
        RunResult first = cmd_run(cfg, log);
        std::string text = read_file(first.report_text_path);
        std::string json = read_file(first.report_json_path);
        std::string arff = read_file(first.arff_paths[0]);

        RunResult second = cmd_run(cfg, log);
        Check chk;
        chk.expect(read_file(second.report_text_path) == text, "report.txt differs");
        chk.expect(read_file(second.report_json_path) == json, "report.json differs");
        chk.expect(read_file(second.arff_paths[0]) == arff, "ARFF differs");
        fs::remove_all(root);
        report(8, "two runs from one config produce byte-identical outputs", chk.ok, chk.detail);
    });
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (failures) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}

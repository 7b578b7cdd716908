#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "geotomo/harness.hpp"
#include "geotomo/io.hpp"

using namespace geotomo;
using nlohmann::json;

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

template <typename T>
void maybe(const json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

void apply_options_json(const json& j, AlgorithmOptions& o) {
    if (j.contains("sirt")) {
        const json& s = j["sirt"];
        maybe(s, "iterations", o.sirt.iterations);
        maybe(s, "lambda", o.sirt.lambda);
        maybe(s, "threshold", o.sirt.threshold);
    }
    if (j.contains("bart")) {
        const json& s = j["bart"];
        maybe(s, "art_sweeps", o.bart.art_sweeps);
        maybe(s, "relaxation", o.bart.relaxation);
        maybe(s, "lower", o.bart.lower);
        maybe(s, "upper", o.bart.upper);
        maybe(s, "contour_threshold", o.bart.contour_threshold);
        maybe(s, "filter_rounds", o.bart.filter_rounds);
    }
    if (j.contains("dart")) {
        const json& s = j["dart"];
        maybe(s, "init_sirt_iters", o.dart.init_sirt_iters);
        maybe(s, "dart_iters", o.dart.dart_iters);
        maybe(s, "inner_sirt_iters", o.dart.inner_sirt_iters);
        maybe(s, "rho", o.dart.rho);
        maybe(s, "fix_fraction", o.dart.fix_fraction);
        maybe(s, "lambda", o.dart.lambda);
    }
    if (j.contains("gkxr")) {
        const json& s = j["gkxr"];
        maybe(s, "direction_angles", o.gkxr.direction_angles);
        maybe(s, "lines_per_direction", o.gkxr.lines_per_direction);
        maybe(s, "pair_merge_threshold", o.gkxr.pair_merge_threshold);
        maybe(s, "iir_rounds", o.gkxr.iir_rounds);
        maybe(s, "window_fraction", o.gkxr.window_fraction);
        if (s.contains("anneal")) {
            const json& a = s["anneal"];
            maybe(a, "initial_temperature", o.gkxr.anneal.initial_temperature);
            maybe(a, "cooling_factor", o.gkxr.anneal.cooling_factor);
            maybe(a, "steps_per_temperature", o.gkxr.anneal.steps_per_temperature);
            maybe(a, "min_temperature_fraction", o.gkxr.anneal.min_temperature_fraction);
            maybe(a, "step_scale", o.gkxr.anneal.step_scale);
        }
    }
    if (j.contains("ngon")) {
        const json& s = j["ngon"];
        maybe(s, "n", o.ngon.n);
        maybe(s, "poly_degree", o.ngon.poly_degree);
        maybe(s, "omega", o.ngon.omega);
        maybe(s, "spacing_tolerance", o.ngon.spacing_tolerance);
    }
    maybe(j, "shadow_threshold", o.shadow_threshold);
}

ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config");
    json j = json::parse(in);
    maybe(j, "phantoms", cfg.phantoms);
    maybe(j, "algorithms", cfg.algorithms);
    maybe(j, "schedules", cfg.schedules);
    maybe(j, "sigmas", cfg.sigmas);
    maybe(j, "trials", cfg.trials);
    maybe(j, "base_seed", cfg.base_seed);
    maybe(j, "out_dir", cfg.out_dir);
    maybe(j, "workers", cfg.workers);
    maybe(j, "save_images", cfg.save_images);
    maybe(j, "size", cfg.size);
    maybe(j, "hires_factor", cfg.hires_factor);
    if (j.contains("options")) apply_options_json(j["options"], cfg.options);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D slice-by-slice geometric tomography toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, sino_path, stack_dir, algo = "sirt";
    std::string schedule = "S_140_1", phantom_list = "1", algo_list, sigma_list, file_a, file_b;
    double sigma = 0.0;
    int phantom = 1, trials = 0, workers = 0, mask_size = 512;
    uint64_t seed = 0;
    bool save_images = false, no_opening = false;

    auto* gen = app.add_subcommand("gen", "generate phantom data (sinogram CSV + ground truth)");
    gen->add_option("--phantom", phantom, "phantom id 1..6")->required();
    gen->add_option("--schedule", schedule, "S_180_1|S_140_1|S_180_10|S_140_10 or angle list");
    gen->add_option("--sigma", sigma, "noise sigma");
    gen->add_option("--seed", seed, "noise seed");
    gen->add_option("--out", out_dir, "output directory")->required();
    gen->add_option("--config", config_path, "JSON config");

    auto* recon = app.add_subcommand("recon", "reconstruct one sinogram CSV");
    recon->add_option("--algo", algo, "sirt|bart|dart|gkxr|ufbp|mpw|2ngon")->required();
    recon->add_option("--sino", sino_path, "sinogram CSV")->required();
    recon->add_option("--out", out_dir, "output directory")->required();
    recon->add_option("--seed", seed, "seed for seeded algorithms");
    recon->add_option("--phantom", phantom, "score against this phantom's ground truth");
    recon->add_option("--config", config_path, "JSON config");

    auto* bench = app.add_subcommand("bench", "run the benchmark grid");
    bench->add_option("--config", config_path, "JSON config (flags override it)");
    bench->add_option("--phantom", phantom_list, "comma list of phantom ids");
    bench->add_option("--algo", algo_list, "comma list of algorithms");
    bench->add_option("--schedule", schedule, "comma list of schedules");
    bench->add_option("--sigma", sigma_list, "comma list of noise sigmas");
    bench->add_option("--trials", trials, "trials per cell");
    bench->add_option("--seed", seed, "base seed");
    bench->add_option("--out", out_dir, "output directory");
    bench->add_option("--workers", workers, "worker threads (0: all cores)");
    bench->add_flag("--save-images", save_images, "write per-trial PGM/CSV artifacts");

    auto* stack = app.add_subcommand("stack", "reconstruct a directory of slice_%04d.csv");
    stack->add_option("--dir", stack_dir, "input directory")->required();
    stack->add_option("--algo", algo, "algorithm")->required();
    stack->add_option("--out", out_dir, "output directory")->required();
    stack->add_option("--config", config_path, "JSON config");
    stack->add_flag("--no-opening", no_opening, "skip the cross-slice morphological opening");

    auto* metrics = app.add_subcommand("metrics", "delta_S / delta_H between two masks");
    metrics->add_option("--a", file_a, "PGM image or pixel-set CSV")->required();
    metrics->add_option("--b", file_b, "PGM image or pixel-set CSV")->required();
    metrics->add_option("--size", mask_size, "grid size for CSV inputs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            ExperimentConfig cfg = load_config(config_path);
            std::filesystem::create_directories(out_dir);
            PhantomSpec spec = make_phantom(phantom);
            Sinogram sino = generate_sinogram(spec, named_schedule(schedule), sigma, seed,
                                              cfg.size, cfg.hires_factor);
            write_sinogram_csv(out_dir + "/sinogram.csv", sino);
            write_polygon_csv(out_dir + "/phantom_poly.csv", spec.polygon);
            PixelSet truth = rasterize_phantom(spec, cfg.size);
            write_pgm(out_dir + "/phantom.pgm", to_image(truth));
            write_pixelset_csv(out_dir + "/phantom_pixels.csv", truth);
            std::printf("wrote %s/sinogram.csv (%zu angles, %d bins)\n", out_dir.c_str(),
                        sino.schedule.count(), sino.detector_count);
        } else if (*recon) {
            ExperimentConfig cfg = load_config(config_path);
            std::filesystem::create_directories(out_dir);
            Sinogram sino = read_sinogram_csv(sino_path);
            Reconstruction rec = reconstruct(algo, sino, cfg.options, seed);
            if (!rec.no_reconstruction_reason.empty()) {
                std::printf("no_reconstruction:%s\n", rec.no_reconstruction_reason.c_str());
                return 2;
            }
            write_pgm(out_dir + "/recon.pgm", to_image(rec.mask));
            if (rec.polygon) write_polygon_csv(out_dir + "/recon_poly.csv", *rec.polygon);
            if (recon->count("--phantom")) {
                PixelSet truth = rasterize_phantom(make_phantom(phantom), sino.detector_count);
                ErrorPair e = reconstruction_errors(truth, rec.mask);
                std::printf("delta_s=%lld delta_h=%lld\n", e.delta_s, e.delta_h);
            }
            std::printf("wrote %s/recon.pgm\n", out_dir.c_str());
        } else if (*bench) {
            ExperimentConfig cfg = load_config(config_path);
            if (bench->count("--phantom") || config_path.empty()) {
                cfg.phantoms.clear();
                for (const auto& p : split_list(phantom_list)) cfg.phantoms.push_back(std::stoi(p));
            }
            if (!algo_list.empty()) cfg.algorithms = split_list(algo_list);
            if (bench->count("--schedule")) cfg.schedules = split_list(schedule);
            if (!sigma_list.empty()) {
                cfg.sigmas.clear();
                for (const auto& s : split_list(sigma_list)) cfg.sigmas.push_back(std::stod(s));
            }
            if (trials > 0) cfg.trials = trials;
            if (bench->count("--seed")) cfg.base_seed = seed;
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            if (workers > 0) cfg.workers = workers;
            if (save_images) cfg.save_images = true;
            ExperimentResult result = run_experiment(cfg);
            std::printf("%-3s %-6s %-9s %-6s %5s %5s %9s %8s %8s\n", "ph", "algo", "sched",
                        "sigma", "ok", "norec", "mean_dS", "std_dS", "mean_dH");
            for (const CellSummary& s : result.summary)
                std::printf("%-3d %-6s %-9s %-6.0f %5d %5d %9.1f %8.1f %8.2f\n", s.phantom,
                            s.algorithm.c_str(), s.schedule.c_str(), s.sigma, s.n_ok,
                            s.n_no_reconstruction, s.mean_delta_s, s.std_delta_s, s.mean_delta_h);
            if (!cfg.out_dir.empty())
                std::printf("wrote %s/trials.csv and summary.csv\n", cfg.out_dir.c_str());
        } else if (*stack) {
            ExperimentConfig cfg = load_config(config_path);
            auto reports = run_stack(stack_dir, algo, cfg, out_dir, !no_opening);
            int ok = 0;
            for (const auto& r : reports) ok += r.status == "ok";
            std::printf("%d/%zu slices reconstructed; manifest at %s/manifest.csv\n", ok,
                        reports.size(), out_dir.c_str());
        } else if (*metrics) {
            auto load = [&](const std::string& p) {
                if (p.size() > 4 && p.substr(p.size() - 4) == ".csv")
                    return read_pixelset_csv(p, mask_size);
                return read_pgm_mask(p);
            };
            PixelSet a = load(file_a), b = load(file_b);
            ErrorPair e = reconstruction_errors(a, b);
            std::printf("delta_s=%lld delta_h=%lld%s\n", e.delta_s, e.delta_h,
                        e.hausdorff_degenerate ? " (degenerate: one side empty)" : "");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

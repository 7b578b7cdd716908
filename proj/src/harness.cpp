#include "geotomo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "geotomo/io.hpp"

namespace geotomo {

namespace fs = std::filesystem;

TiltSchedule named_schedule(const std::string& name) {
    if (name == "S_180_1") return TiltSchedule::regular(180.0, 1.0);
    if (name == "S_140_1") return TiltSchedule::regular(140.0, 1.0);
    if (name == "S_180_10") return TiltSchedule::regular(180.0, 10.0);
    if (name == "S_140_10") return TiltSchedule::regular(140.0, 10.0);
    // explicit comma-separated list
    std::vector<double> angles;
    std::stringstream ss(name);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) angles.push_back(std::stod(tok));
    }
    if (angles.empty()) throw std::invalid_argument("unknown schedule: " + name);
    return TiltSchedule(angles);
}

Sinogram project_hires(const PhantomSpec& phantom, const TiltSchedule& schedule, int size,
                       int hires_factor) {
    PixelSet hires = rasterize_phantom(phantom, size * hires_factor, size);
    ImageGrid img = to_image(hires, 1.0 / hires_factor);
    return project(img, schedule);
}

Sinogram degrade_sinogram(const Sinogram& hires, double sigma, uint64_t seed, int hires_factor) {
    Sinogram noisy = add_noise(hires, {sigma, seed});
    Sinogram binned = bin_sinogram(noisy, hires_factor);
    double scale = 1.0 / (static_cast<double>(hires_factor) * hires_factor);
    for (auto& row : binned.values)
        for (double& v : row) v *= scale;
    return binned;
}

Sinogram generate_sinogram(const PhantomSpec& phantom, const TiltSchedule& schedule, double sigma,
                           uint64_t seed, int size, int hires_factor) {
    return degrade_sinogram(project_hires(phantom, schedule, size, hires_factor), sigma, seed,
                            hires_factor);
}

Reconstruction reconstruct(const std::string& algorithm, const Sinogram& sino,
                           const AlgorithmOptions& options, uint64_t seed) {
    Reconstruction rec;
    const int size = sino.detector_count;
    const double spacing = sino.detector_spacing;

    if (algorithm == "sirt") {
        rec.mask = pixel_set(sirt(sino, options.sirt).binary);
        return rec;
    }
    if (algorithm == "bart") {
        rec.mask = pixel_set(bart(sino, options.bart));
        return rec;
    }
    if (algorithm == "dart") {
        DartConfig cfg = options.dart;
        cfg.seed = seed;
        rec.mask = pixel_set(dart(sino, cfg));
        return rec;
    }
    if (algorithm == "gkxr") {
        GkxrConfig cfg = options.gkxr;
        cfg.anneal.seed = seed;
        ConvexPolygon poly = gkxr(sino, cfg);
        rec.polygon = poly;
        rec.mask = rasterize(poly, size, spacing);
        return rec;
    }

    ShadowSet shadows = extract_shadows(sino, options.shadow_threshold);
    if (algorithm == "ufbp") {
        ConvexPolygon poly = ufbp(shadows);
        rec.polygon = poly;
        rec.mask = rasterize(poly, size, spacing);
        return rec;
    }
    if (algorithm == "mpw") {
        ConvexPolygon poly = mpw(shadows);
        rec.polygon = poly;
        rec.mask = rasterize(poly, size, spacing);
        return rec;
    }
    if (algorithm == "2ngon") {
        NgonResult res = ngon_2n(shadows, options.ngon);
        if (!res.ok()) {
            rec.mask = PixelSet(size);
            rec.no_reconstruction_reason = res.no_reconstruction_reason;
            return rec;
        }
        rec.polygon = *res.polygon;
        rec.mask = rasterize(*res.polygon, size, spacing);
        return rec;
    }
    throw std::invalid_argument("unknown algorithm: " + algorithm);
}

uint64_t trial_seed(uint64_t base, int phantom, const std::string& algorithm,
                    const std::string& schedule, double sigma, int trial) {
    auto hash_str = [](const std::string& s) {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
        return h;
    };
    uint64_t h = mix_seed(base);
    h = mix_seed(h ^ static_cast<uint64_t>(phantom));
    h = mix_seed(h ^ hash_str(algorithm));
    h = mix_seed(h ^ hash_str(schedule));
    uint64_t sigma_bits;
    static_assert(sizeof(sigma_bits) == sizeof(sigma));
    std::memcpy(&sigma_bits, &sigma, sizeof(sigma));
    h = mix_seed(h ^ sigma_bits);
    h = mix_seed(h ^ static_cast<uint64_t>(trial));
    return h;
}

namespace {

// GKXR measures its own four fixed directions regardless of the cell's tilt
// schedule (they are a subset of the dense schedules only).
TiltSchedule generation_schedule(const std::string& algorithm, const std::string& schedule_name,
                                 const AlgorithmOptions& options) {
    if (algorithm == "gkxr") return TiltSchedule(options.gkxr.direction_angles);
    return named_schedule(schedule_name);
}

NgonConfig ngon_options_for_phantom(const NgonConfig& base, int phantom,
                                    const std::string& schedule_name) {
    NgonConfig cfg = base;
    if (phantom == 4) cfg.n = 4;  // octagon
    TiltSchedule s = named_schedule(schedule_name);
    cfg.omega = std::min(180.0, s.angles.back() + (s.angles.size() > 1
                                                       ? s.angles[1] - s.angles[0]
                                                       : 1.0));
    return cfg;
}

TrialReport score_trial(int phantom, const std::string& algorithm, const std::string& schedule,
                        double sigma, int trial, const ExperimentConfig& cfg,
                        const Sinogram& hires, const PixelSet& truth) {
    TrialReport report;
    report.phantom = phantom;
    report.algorithm = algorithm;
    report.schedule = schedule;
    report.sigma = sigma;
    report.trial = trial;
    report.seed = trial_seed(cfg.base_seed, phantom, algorithm, schedule, sigma, trial);

    auto t0 = std::chrono::steady_clock::now();
    try {
        Sinogram sino = degrade_sinogram(hires, sigma, report.seed, cfg.hires_factor);
        AlgorithmOptions options = cfg.options;
        options.ngon = ngon_options_for_phantom(options.ngon, phantom, schedule);
        Reconstruction rec = reconstruct(algorithm, sino, options, mix_seed(report.seed + 1));
        auto t1 = std::chrono::steady_clock::now();
        report.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (!rec.no_reconstruction_reason.empty()) {
            report.status = "no_reconstruction:" + rec.no_reconstruction_reason;
            return report;
        }
        ErrorPair err = reconstruction_errors(truth, rec.mask);
        report.status = "ok";
        report.delta_s = err.delta_s;
        report.delta_h = err.delta_h;

        if (cfg.save_images && !cfg.out_dir.empty()) {
            std::ostringstream stem;
            stem << cfg.out_dir << "/p" << phantom << "_" << algorithm << "_" << schedule << "_s"
                 << sigma << "_t" << trial;
            write_pgm(stem.str() + ".pgm", to_image(rec.mask));
            if (rec.polygon) write_polygon_csv(stem.str() + "_poly.csv", *rec.polygon);
        }
    } catch (const std::exception& e) {
        auto t1 = std::chrono::steady_clock::now();
        report.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        report.status = std::string("error:") + e.what();
    }
    return report;
}

}  // namespace

TrialReport run_single_trial(int phantom, const std::string& algorithm,
                             const std::string& schedule, double sigma, int trial,
                             const ExperimentConfig& cfg) {
    PhantomSpec spec = make_phantom(phantom);
    TiltSchedule gen = generation_schedule(algorithm, schedule, cfg.options);
    Sinogram hires = project_hires(spec, gen, cfg.size, cfg.hires_factor);
    PixelSet truth = rasterize_phantom(spec, cfg.size);
    return score_trial(phantom, algorithm, schedule, sigma, trial, cfg, hires, truth);
}

const CellSummary* ExperimentResult::find(int phantom, const std::string& algo,
                                          const std::string& schedule, double sigma) const {
    for (const CellSummary& s : summary)
        if (s.phantom == phantom && s.algorithm == algo && s.schedule == schedule &&
            s.sigma == sigma)
            return &s;
    return nullptr;
}

std::vector<CellSummary> summarize(const std::vector<TrialReport>& trials) {
    std::map<std::tuple<int, std::string, std::string, double>, std::vector<const TrialReport*>>
        cells;
    for (const TrialReport& t : trials)
        cells[{t.phantom, t.algorithm, t.schedule, t.sigma}].push_back(&t);

    std::vector<CellSummary> out;
    for (const auto& [key, list] : cells) {
        CellSummary s;
        std::tie(s.phantom, s.algorithm, s.schedule, s.sigma) = key;
        s.n_trials = static_cast<int>(list.size());
        double sum_s = 0.0, sum_h = 0.0, sum_t = 0.0;
        for (const TrialReport* t : list) {
            sum_t += t->wall_time_ms;
            if (t->ok()) {
                s.n_ok += 1;
                sum_s += static_cast<double>(t->delta_s);
                sum_h += static_cast<double>(t->delta_h);
            } else if (t->status.rfind("no_reconstruction", 0) == 0) {
                s.n_no_reconstruction += 1;
            } else {
                s.n_error += 1;
            }
        }
        s.mean_wall_time_ms = sum_t / s.n_trials;
        if (s.n_ok > 0) {
            s.mean_delta_s = sum_s / s.n_ok;
            s.mean_delta_h = sum_h / s.n_ok;
            double var_s = 0.0, var_h = 0.0;
            for (const TrialReport* t : list) {
                if (!t->ok()) continue;
                var_s += (t->delta_s - s.mean_delta_s) * (t->delta_s - s.mean_delta_s);
                var_h += (t->delta_h - s.mean_delta_h) * (t->delta_h - s.mean_delta_h);
            }
            if (s.n_ok > 1) {
                s.std_delta_s = std::sqrt(var_s / (s.n_ok - 1));
                s.std_delta_h = std::sqrt(var_h / (s.n_ok - 1));
            }
        }
        out.push_back(s);
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);

    struct Job {
        int phantom;
        std::string algorithm;
        std::string schedule;
        double sigma;
        int trial;
        const Sinogram* hires;
        const PixelSet* truth;
    };

    // Shared per-(phantom, generation-schedule) projections and ground truths.
    std::map<std::pair<int, std::string>, Sinogram> hires_cache;
    std::map<int, PixelSet> truth_cache;
    std::vector<Job> jobs;
    for (int phantom : cfg.phantoms) {
        if (!truth_cache.count(phantom))
            truth_cache[phantom] = rasterize_phantom(make_phantom(phantom), cfg.size);
        for (const std::string& algo : cfg.algorithms) {
            for (const std::string& schedule : cfg.schedules) {
                TiltSchedule gen = generation_schedule(algo, schedule, cfg.options);
                std::ostringstream key_ss;
                for (double a : gen.angles) key_ss << a << ",";
                auto key = std::make_pair(phantom, key_ss.str());
                if (!hires_cache.count(key))
                    hires_cache[key] =
                        project_hires(make_phantom(phantom), gen, cfg.size, cfg.hires_factor);
                for (double sigma : cfg.sigmas)
                    for (int t = 0; t < cfg.trials; ++t)
                        jobs.push_back({phantom, algo, schedule, sigma, t, &hires_cache[key],
                                        &truth_cache[phantom]});
            }
        }
    }

    std::vector<TrialReport> reports(jobs.size());
    std::atomic<size_t> next{0};
    int workers = cfg.workers > 0 ? cfg.workers
                                  : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<int>(workers, static_cast<int>(jobs.size()));
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& j = jobs[i];
            reports[i] = score_trial(j.phantom, j.algorithm, j.schedule, j.sigma, j.trial, cfg,
                                     *j.hires, *j.truth);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ExperimentResult result;
    result.trials = std::move(reports);
    result.summary = summarize(result.trials);
    if (!cfg.out_dir.empty()) {
        write_trials_csv(cfg.out_dir + "/trials.csv", result.trials);
        write_summary_csv(cfg.out_dir + "/summary.csv", result.summary);
    }
    return result;
}

namespace {

std::string format_double(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

}  // namespace

void write_trials_csv(const std::string& path, const std::vector<TrialReport>& trials) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "phantom,algorithm,schedule,sigma,trial,seed,status,delta_s,delta_h,wall_time_ms\n";
    for (const TrialReport& t : trials) {
        out << t.phantom << "," << t.algorithm << "," << t.schedule << "," << format_double(t.sigma)
            << "," << t.trial << "," << t.seed << "," << t.status << ",";
        if (t.ok())
            out << t.delta_s << "," << t.delta_h;
        else
            out << ",";
        out << "," << format_double(t.wall_time_ms) << "\n";
    }
}

std::vector<TrialReport> read_trials_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::vector<TrialReport> trials;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> f;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        while (f.size() < 10) f.push_back("");
        TrialReport t;
        t.phantom = std::stoi(f[0]);
        t.algorithm = f[1];
        t.schedule = f[2];
        t.sigma = std::stod(f[3]);
        t.trial = std::stoi(f[4]);
        t.seed = std::stoull(f[5]);
        t.status = f[6];
        if (t.ok()) {
            t.delta_s = std::stoll(f[7]);
            t.delta_h = std::stoll(f[8]);
        }
        t.wall_time_ms = std::stod(f[9]);
        trials.push_back(t);
    }
    return trials;
}

void write_summary_csv(const std::string& path, const std::vector<CellSummary>& summary) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "phantom,algorithm,schedule,sigma,n_trials,n_ok,n_no_reconstruction,n_error,"
           "mean_delta_s,std_delta_s,mean_delta_h,std_delta_h,mean_wall_time_ms\n";
    for (const CellSummary& s : summary) {
        out << s.phantom << "," << s.algorithm << "," << s.schedule << "," << format_double(s.sigma)
            << "," << s.n_trials << "," << s.n_ok << "," << s.n_no_reconstruction << ","
            << s.n_error << "," << format_double(s.mean_delta_s) << ","
            << format_double(s.std_delta_s) << "," << format_double(s.mean_delta_h) << ","
            << format_double(s.std_delta_h) << "," << format_double(s.mean_wall_time_ms) << "\n";
    }
}

std::vector<StackSliceReport> run_stack(const std::string& dir, const std::string& algorithm,
                                        const ExperimentConfig& cfg, const std::string& out_dir,
                                        bool cross_slice_opening) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("slice_", 0) == 0 && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    }
    if (files.empty()) throw std::invalid_argument("run_stack: no slice_*.csv files in " + dir);
    std::sort(files.begin(), files.end());
    fs::create_directories(out_dir);

    std::vector<Sinogram> slices;
    slices.reserve(files.size());
    for (const auto& f : files) slices.push_back(read_sinogram_csv(f.string()));

    const bool shadow_based = algorithm == "ufbp" || algorithm == "mpw" || algorithm == "2ngon";
    std::vector<ShadowSet> shadow_sets;
    if (shadow_based)
        shadow_sets = extract_shadows_stack(slices, cfg.options.shadow_threshold,
                                            cross_slice_opening);

    std::vector<StackSliceReport> reports;
    for (size_t s = 0; s < slices.size(); ++s) {
        StackSliceReport rep;
        rep.slice = static_cast<int>(s);
        char stem[64];
        std::snprintf(stem, sizeof(stem), "slice_%04zu", s);
        try {
            Reconstruction rec;
            uint64_t seed = trial_seed(cfg.base_seed, 0, algorithm, "stack", 0.0,
                                       static_cast<int>(s));
            if (shadow_based) {
                AlgorithmOptions options = cfg.options;
                const Sinogram& sino = slices[s];
                const ShadowSet& shadows = shadow_sets[s];
                if (algorithm == "ufbp") {
                    ConvexPolygon poly = ufbp(shadows);
                    rec.polygon = poly;
                    rec.mask = rasterize(poly, sino.detector_count, sino.detector_spacing);
                } else if (algorithm == "mpw") {
                    ConvexPolygon poly = mpw(shadows);
                    rec.polygon = poly;
                    rec.mask = rasterize(poly, sino.detector_count, sino.detector_spacing);
                } else {
                    NgonResult res = ngon_2n(shadows, cfg.options.ngon);
                    if (!res.ok()) {
                        rep.status = "no_reconstruction:" + res.no_reconstruction_reason;
                        reports.push_back(rep);
                        continue;
                    }
                    rec.polygon = *res.polygon;
                    rec.mask = rasterize(*res.polygon, sino.detector_count,
                                         sino.detector_spacing);
                }
            } else {
                rec = reconstruct(algorithm, slices[s], cfg.options, seed);
                if (!rec.no_reconstruction_reason.empty()) {
                    rep.status = "no_reconstruction:" + rec.no_reconstruction_reason;
                    reports.push_back(rep);
                    continue;
                }
            }
            rep.status = "ok";
            rep.image_pgm = out_dir + "/" + stem + ".pgm";
            write_pgm(rep.image_pgm, to_image(rec.mask));
            if (rec.polygon) {
                rep.polygon_csv = out_dir + "/" + stem + "_poly.csv";
                write_polygon_csv(rep.polygon_csv, *rec.polygon);
            }
        } catch (const std::exception& e) {
            rep.status = std::string("error:") + e.what();
        }
        reports.push_back(rep);
    }

    std::ofstream manifest(out_dir + "/manifest.csv");
    manifest << "slice,status,polygon_csv,image_pgm\n";
    for (const auto& r : reports)
        manifest << r.slice << "," << r.status << "," << r.polygon_csv << "," << r.image_pgm
                 << "\n";
    return reports;
}

double residual_norm(const Sinogram& sino, const PixelSet& reconstruction) {
    ImageGrid img = to_image(reconstruction, sino.detector_spacing);
    Sinogram proj = project(img, sino.schedule);
    double acc = 0.0;
    for (size_t a = 0; a < proj.values.size(); ++a)
        for (size_t j = 0; j < proj.values[a].size(); ++j) {
            double r = proj.values[a][j] - sino.values[a][j];
            acc += r * r;
        }
    return std::sqrt(acc);
}

}  // namespace geotomo

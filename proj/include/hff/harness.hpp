#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hff/checkpoint.hpp"
#include "hff/image_io.hpp"
#include "hff/trainer.hpp"

namespace hff {

/// One experiment invocation: inputs, preprocessing, training configuration,
/// ablation grids, and output location.
struct ExperimentSpec {
  std::vector<std::string> inputs;  // files or directories
  std::string out_dir = "out";
  int resize_h = 0;  // 0 keeps the source size
  int resize_w = 0;
  bool grayscale = false;
  bool baseline = false;  // also run the stage1=0 twin of every fit
  int workers = 1;
  TrainConfig train;
  std::vector<double> tau_list;  // ablation grids; empty means "hold fixed"
  std::vector<int> n_list;
  std::vector<int> stage1_list;
};

struct ReportRow {
  std::string image;
  std::string backbone;
  double tau = 0.0;
  double alpha = 0.0;
  int n = 0;
  int stage1_epochs = 0;
  int stage2_epochs = 0;
  std::uint64_t seed = 0;
  Psnr psnr;
  double ssim = std::numeric_limits<double>::quiet_NaN();
  Psnr hf_psnr;
  Psnr lf_psnr;
  double wall_seconds = 0.0;
};

inline const char* csv_header() {
  return "image,backbone,tau,alpha,n,stage1_epochs,stage2_epochs,seed,psnr,ssim,"
         "hf_psnr,lf_psnr,wall_seconds";
}

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

inline std::string to_csv(const ReportRow& r) {
  std::ostringstream os;
  os << r.image << ',' << r.backbone << ',' << detail::fmt(r.tau) << ','
     << detail::fmt(r.alpha) << ',' << r.n << ',' << r.stage1_epochs << ','
     << r.stage2_epochs << ',' << r.seed << ',' << r.psnr.str() << ','
     << detail::fmt(r.ssim) << ',' << r.hf_psnr.str() << ',' << r.lf_psnr.str()
     << ',' << detail::fmt(r.wall_seconds);
  return os.str();
}

inline void write_report(const std::string& path, const std::vector<ReportRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report: cannot open " + path);
  out << csv_header() << '\n';
  for (const auto& r : rows) out << to_csv(r) << '\n';
}

namespace detail {

inline bool has_image_extension(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

/// Expands files and directories into a sorted list of image paths.
inline std::vector<std::string> resolve_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    std::filesystem::path p(in);
    if (std::filesystem::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& entry : std::filesystem::directory_iterator(p))
        if (entry.is_regular_file() && has_image_extension(entry.path()))
          found.push_back(entry.path().string());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(in);
    }
  }
  return files;
}

struct LoadedImage {
  std::string id;    // unique stem used in artifact names and report rows
  Image pixels;
};

inline std::vector<LoadedImage> load_inputs(const ExperimentSpec& spec) {
  std::vector<LoadedImage> images;
  std::map<std::string, int> stems;
  for (const auto& file : resolve_inputs(spec.inputs)) {
    try {
      Image img = load_image(file);
      if (spec.grayscale) img = to_grayscale(img);
      if (spec.resize_h > 0 && spec.resize_w > 0)
        img = resize(img, spec.resize_h, spec.resize_w);
      std::string stem = std::filesystem::path(file).stem().string();
      int count = ++stems[stem];
      if (count > 1) stem += "_" + std::to_string(count);
      images.push_back({std::move(stem), std::move(img)});
    } catch (const std::exception& e) {
      std::cerr << "skipping " << file << ": " << e.what() << "\n";
    }
  }
  return images;
}

/// Runs tasks under a bounded worker count; results land at fixed indices so
/// the output order never depends on scheduling.
inline void run_parallel(int workers, std::size_t count,
                         const std::function<void(std::size_t)>& task) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) task(i);
  };
  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(std::min<std::size_t>(workers, count));
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

inline ReportRow row_from_result(const std::string& id, const TrainConfig& cfg,
                                 const TrainResult& result, double wall_seconds) {
  ReportRow row;
  row.image = id;
  row.backbone = to_string(cfg.activation.kind);
  row.tau = cfg.mask.tau;
  row.alpha = cfg.mask.alpha;
  row.n = cfg.mask.n;
  row.stage1_epochs = cfg.stage1_epochs;
  row.stage2_epochs = cfg.stage2_epochs;
  row.seed = cfg.seed;
  row.psnr = result.psnr;
  row.ssim = result.ssim;
  row.hf_psnr = result.regions.hf;
  row.lf_psnr = result.regions.lf;
  row.wall_seconds = wall_seconds;
  return row;
}

/// Per-image mean of PSNR (the usual benchmark convention). Any infinite
/// member makes the mean infinite; undefined members are skipped.
inline Psnr mean_psnr(const std::vector<Psnr>& values) {
  double sum = 0.0;
  int count = 0;
  bool any_inf = false;
  for (const auto& v : values) {
    if (v.is_infinite()) any_inf = true;
    if (v.is_finite()) {
      sum += v.db;
      ++count;
    }
  }
  if (any_inf) return Psnr::infinite();
  if (count == 0) return Psnr::undefined();
  return Psnr::finite(sum / count);
}

inline ReportRow mean_row(const std::vector<const ReportRow*>& group) {
  ReportRow mean = *group.front();
  mean.image = "MEAN";
  std::vector<Psnr> psnrs, hfs, lfs;
  double ssim_sum = 0.0, wall_sum = 0.0;
  for (const ReportRow* r : group) {
    psnrs.push_back(r->psnr);
    hfs.push_back(r->hf_psnr);
    lfs.push_back(r->lf_psnr);
    ssim_sum += r->ssim;
    wall_sum += r->wall_seconds;
  }
  mean.psnr = mean_psnr(psnrs);
  mean.hf_psnr = mean_psnr(hfs);
  mean.lf_psnr = mean_psnr(lfs);
  mean.ssim = ssim_sum / static_cast<double>(group.size());
  mean.wall_seconds = wall_sum / static_cast<double>(group.size());
  return mean;
}

}  // namespace detail

/// Fits every input image, writes reconstruction/mask/checkpoint artifacts
/// and report.csv; with the baseline flag each image also gets a stage1=0
/// twin sharing the seed. Returns a process exit code.
inline int run_fit(const ExperimentSpec& spec) {
  auto images = detail::load_inputs(spec);
  if (images.empty()) {
    std::cerr << "run_fit: no readable inputs\n";
    return 1;
  }
  std::filesystem::create_directories(spec.out_dir);
  const auto out = std::filesystem::path(spec.out_dir);

  struct Cell {
    std::size_t image_index;
    TrainConfig cfg;
    bool is_baseline;
  };
  std::vector<Cell> cells;
  for (std::size_t k = 0; k < images.size(); ++k) {
    TrainConfig cfg = spec.train;
    cfg.seed = spec.train.seed + k;
    cells.push_back({k, cfg, false});
    if (spec.baseline) {
      TrainConfig twin = cfg;
      twin.stage1_epochs = 0;
      twin.stage2_epochs = cfg.stage1_epochs + cfg.stage2_epochs;
      cells.push_back({k, twin, true});
    }
  }

  std::vector<std::optional<ReportRow>> rows(cells.size());
  detail::run_parallel(spec.workers, cells.size(), [&](std::size_t i) {
    const Cell& cell = cells[i];
    const auto& [id, pixels] = images[cell.image_index];
    try {
      auto t0 = std::chrono::steady_clock::now();
      TrainResult result = fit(pixels, cell.cfg);
      double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      const std::string stem = cell.is_baseline ? id + "_baseline" : id;
      save_image(result.reconstruction, (out / (stem + "_recon.png")).string());
      save_checkpoint(result.params, (out / (stem + ".ckpt")).string());
      if (!cell.is_baseline) {
        // Heatmap of the training mask, channels collapsed by max.
        SoftMask mask = compute_mask(pixels, cell.cfg.mask);
        Image heat(mask.height, mask.width, 1);
        for (int p = 0; p < mask.height * mask.width; ++p) {
          double peak = 0.0;
          for (int c = 0; c < mask.channels; ++c)
            peak = std::max(peak, mask.data[static_cast<std::size_t>(p) * mask.channels + c]);
          heat.data[p] = peak;
        }
        save_image(heat, (out / (id + "_mask.png")).string());
      }
      rows[i] = detail::row_from_result(id, cell.cfg, result, wall);
    } catch (const std::exception& e) {
      std::cerr << "fit failed for " << id << ": " << e.what() << "\n";
    }
  });

  std::vector<ReportRow> report;
  std::vector<std::size_t> hf_rows, baseline_rows;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!rows[i]) continue;
    (cells[i].is_baseline ? baseline_rows : hf_rows).push_back(report.size());
    report.push_back(*rows[i]);
  }
  if (report.empty()) {
    std::cerr << "run_fit: every fit failed\n";
    return 1;
  }
  for (const auto& group_rows : {hf_rows, baseline_rows}) {
    if (group_rows.empty()) continue;
    std::vector<const ReportRow*> group;
    for (std::size_t r : group_rows) group.push_back(&report[r]);
    report.push_back(detail::mean_row(group));
  }
  write_report((out / "report.csv").string(), report);
  return 0;
}

/// Grid ablation: the Cartesian product of tau, n, and stage-1 values over
/// every input image, one full fit per cell, a MEAN row after each cell.
/// When a stage-1 grid is given the total epoch budget of the base config is
/// held fixed (stage2 = total - stage1).
inline int run_ablation(const ExperimentSpec& spec) {
  auto images = detail::load_inputs(spec);
  if (images.empty()) {
    std::cerr << "run_ablation: no readable inputs\n";
    return 1;
  }
  std::vector<double> taus = spec.tau_list.empty()
                                 ? std::vector<double>{spec.train.mask.tau}
                                 : spec.tau_list;
  std::vector<int> ns = spec.n_list.empty() ? std::vector<int>{spec.train.mask.n}
                                            : spec.n_list;
  std::vector<int> stage1s = spec.stage1_list.empty()
                                 ? std::vector<int>{spec.train.stage1_epochs}
                                 : spec.stage1_list;
  const int total_epochs = spec.train.stage1_epochs + spec.train.stage2_epochs;

  struct Cell {
    TrainConfig cfg;
  };
  std::vector<Cell> cells;
  for (double tau : taus)
    for (int n : ns)
      for (int s1 : stage1s) {
        TrainConfig cfg = spec.train;
        cfg.mask.tau = tau;
        cfg.mask.n = n;
        cfg.stage1_epochs = s1;
        cfg.stage2_epochs = total_epochs - s1;
        if (cfg.stage2_epochs < 0)
          throw std::invalid_argument(
              "run_ablation: stage-1 grid exceeds the total epoch budget");
        cells.push_back({cfg});
      }

  struct Task {
    std::size_t cell;
    std::size_t image_index;
    bool is_baseline;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t k = 0; k < images.size(); ++k) {
      tasks.push_back({c, k, false});
      if (spec.baseline) tasks.push_back({c, k, true});
    }

  std::vector<std::optional<ReportRow>> rows(tasks.size());
  detail::run_parallel(spec.workers, tasks.size(), [&](std::size_t i) {
    const auto& [cell, image_index, is_baseline] = tasks[i];
    const auto& [id, pixels] = images[image_index];
    TrainConfig cfg = cells[cell].cfg;
    cfg.seed = spec.train.seed + image_index;
    if (is_baseline) {
      cfg.stage2_epochs += cfg.stage1_epochs;
      cfg.stage1_epochs = 0;
    }
    try {
      auto t0 = std::chrono::steady_clock::now();
      TrainResult result = fit(pixels, cfg);
      double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rows[i] = detail::row_from_result(id, cfg, result, wall);
    } catch (const std::exception& e) {
      std::cerr << "ablation cell failed for " << id << ": " << e.what() << "\n";
    }
  });

  std::vector<ReportRow> report;
  bool any = false;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::size_t start = report.size();
    std::vector<std::size_t> hf_rows, baseline_rows;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].cell != c || !rows[i]) continue;
      (tasks[i].is_baseline ? baseline_rows : hf_rows).push_back(report.size());
      report.push_back(*rows[i]);
    }
    if (report.size() == start) continue;
    any = true;
    for (const auto& group_rows : {hf_rows, baseline_rows}) {
      if (group_rows.empty()) continue;
      std::vector<const ReportRow*> group;
      for (std::size_t r : group_rows) group.push_back(&report[r]);
      report.push_back(detail::mean_row(group));
    }
  }
  if (!any) {
    std::cerr << "run_ablation: every cell failed\n";
    return 1;
  }
  std::filesystem::create_directories(spec.out_dir);
  write_report((std::filesystem::path(spec.out_dir) / "report.csv").string(), report);
  return 0;
}

struct EvalOptions {
  bool region = false;      // also report mask-split HF/LF PSNR
  MaskConfig mask;          // mask parameters for the region split
  double region_threshold = 0.5;
  int resize_h = 0;
  int resize_w = 0;
  bool grayscale = false;
  std::string out_dir = "out";
};

/// Compares a reconstruction against its ground truth, prints the metrics,
/// and writes a one-row report.
inline int run_eval(const std::string& recon_path, const std::string& truth_path,
                    const EvalOptions& opts) {
  Image recon = load_image(recon_path);
  Image truth = load_image(truth_path);
  if (opts.grayscale) {
    recon = to_grayscale(recon);
    truth = to_grayscale(truth);
  }
  if (opts.resize_h > 0 && opts.resize_w > 0) {
    recon = resize(recon, opts.resize_h, opts.resize_w);
    truth = resize(truth, opts.resize_h, opts.resize_w);
  }
  if (!recon.same_shape(truth)) {
    std::cerr << "run_eval: shape mismatch between " << recon_path << " and "
              << truth_path << "\n";
    return 1;
  }

  auto t0 = std::chrono::steady_clock::now();
  ReportRow row;
  row.image = std::filesystem::path(recon_path).stem().string();
  row.backbone = "-";
  row.psnr = psnr(truth, recon);
  SsimConfig scfg;
  row.ssim = (truth.height >= scfg.window() && truth.width >= scfg.window())
                 ? ssim(truth, recon, scfg)
                 : std::numeric_limits<double>::quiet_NaN();
  std::cout << "psnr=" << row.psnr.str() << " ssim=" << detail::fmt(row.ssim);
  if (opts.region) {
    SoftMask mask = compute_mask(truth, opts.mask);
    RegionReport regions = region_psnr(truth, recon, mask, opts.region_threshold);
    row.tau = opts.mask.tau;
    row.alpha = opts.mask.alpha;
    row.n = opts.mask.n;
    row.hf_psnr = regions.hf;
    row.lf_psnr = regions.lf;
    std::cout << " hf_psnr=" << row.hf_psnr.str() << " lf_psnr=" << row.lf_psnr.str();
  }
  std::cout << "\n";
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(opts.out_dir);
  write_report((std::filesystem::path(opts.out_dir) / "report.csv").string(), {row});
  return 0;
}

}  // namespace hff

// hffit: fits coordinate-MLP image representations with high-frequency-first
// two-stage training, runs ablation grids, and evaluates reconstructions.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "hff/config.hpp"
#include "hff/hff.hpp"

namespace {

struct CliOptions {
  std::vector<std::string> inputs;
  std::string config_file;
  std::string profile;
  std::string out_dir;
  std::string backbone;
  std::string pad;
  std::string resize;
  std::uint64_t seed = 0;
  double tau = 0.0, alpha = 0.0, lr = 0.0, omega0 = 0.0, finer_bias_scale = 0.0;
  double region_threshold = 0.0;
  int n = 0, stage1 = 0, stage2 = 0, width = 0, layers = 0, workers = 0;
  int eval_every = 0;
  bool grayscale = false, baseline = false, verbose = false;
  std::vector<double> tau_grid;
  std::vector<int> n_grid, stage1_grid;
};

void add_shared_flags(CLI::App* sub, CliOptions& o) {
  sub->add_option("--config", o.config_file, "JSON experiment file; flags override");
  sub->add_option("--profile", o.profile, "preset: desk (64x64, width 64, 100/150) or paper (256x256, width 256, 200/300)")
      ->check(CLI::IsMember({"desk", "paper"}));
  sub->add_option("--out", o.out_dir, "output directory");
  sub->add_option("--seed", o.seed, "base RNG seed");
  sub->add_option("--backbone", o.backbone, "siren or finer")
      ->check(CLI::IsMember({"siren", "finer"}));
  sub->add_option("--tau", o.tau, "mask threshold in (0,1)");
  sub->add_option("--alpha", o.alpha, "mask sigmoid sharpness");
  sub->add_option("--n", o.n, "neighborhood size")->check(CLI::IsMember({4, 8, 12}));
  sub->add_option("--pad", o.pad, "border padding: edge or mirror")
      ->check(CLI::IsMember({"edge", "mirror"}));
  sub->add_option("--stage1", o.stage1, "weighted-stage epochs");
  sub->add_option("--stage2", o.stage2, "full-MSE-stage epochs");
  sub->add_option("--lr", o.lr, "learning rate");
  sub->add_option("--width", o.width, "hidden layer width");
  sub->add_option("--layers", o.layers, "hidden layer count");
  sub->add_option("--omega0", o.omega0, "activation frequency scale");
  sub->add_option("--finer-bias-scale", o.finer_bias_scale, "finer bias init half-range");
  sub->add_option("--eval-every", o.eval_every, "epochs between history snapshots");
  sub->add_option("--resize", o.resize, "resize inputs to HxW, e.g. 256x256");
  sub->add_option("--workers", o.workers, "parallel fits");
  sub->add_option("--region-threshold", o.region_threshold, "mask cut for HF/LF regions");
  sub->add_flag("--grayscale", o.grayscale, "convert inputs to grayscale");
  sub->add_flag("--verbose", o.verbose, "progress lines on stderr");
}

std::pair<int, int> parse_resize(const std::string& s) {
  int h = 0, w = 0;
  char sep = 0;
  std::istringstream in(s);
  if (!(in >> h >> sep >> w) || (sep != 'x' && sep != 'X') || h < 1 || w < 1)
    throw CLI::ValidationError("--resize expects HxW, e.g. 256x256");
  return {h, w};
}

void apply_profile(hff::ExperimentSpec& spec, const std::string& profile) {
  if (profile == "desk") {
    spec.resize_h = spec.resize_w = 64;
    spec.train.width = 64;
    spec.train.stage1_epochs = 100;
    spec.train.stage2_epochs = 150;
  } else if (profile == "paper") {
    spec.resize_h = spec.resize_w = 256;
    spec.train.width = 256;
    spec.train.stage1_epochs = 200;
    spec.train.stage2_epochs = 300;
  }
}

// Precedence: built-in defaults < profile < config file < explicit flags.
hff::ExperimentSpec build_spec(const CLI::App* sub, const CliOptions& o) {
  hff::ExperimentSpec spec;
  if (sub->count("--profile")) apply_profile(spec, o.profile);
  if (sub->count("--config")) hff::apply_config_file(spec, o.config_file);
  if (!o.inputs.empty()) spec.inputs = o.inputs;
  if (sub->count("--out")) spec.out_dir = o.out_dir;
  if (sub->count("--seed")) spec.train.seed = o.seed;
  if (sub->count("--backbone"))
    spec.train.activation.kind = hff::activation_from_string(o.backbone);
  if (sub->count("--tau")) spec.train.mask.tau = o.tau;
  if (sub->count("--alpha")) spec.train.mask.alpha = o.alpha;
  if (sub->count("--n")) spec.train.mask.n = o.n;
  if (sub->count("--pad")) spec.train.mask.pad = hff::detail::pad_from_string(o.pad);
  if (sub->count("--stage1")) spec.train.stage1_epochs = o.stage1;
  if (sub->count("--stage2")) spec.train.stage2_epochs = o.stage2;
  if (sub->count("--lr")) spec.train.learning_rate = o.lr;
  if (sub->count("--width")) spec.train.width = o.width;
  if (sub->count("--layers")) spec.train.hidden_layers = o.layers;
  if (sub->count("--omega0")) spec.train.activation.omega0 = o.omega0;
  if (sub->count("--finer-bias-scale"))
    spec.train.activation.finer_bias_scale = o.finer_bias_scale;
  if (sub->count("--eval-every")) spec.train.eval_every = o.eval_every;
  if (sub->count("--resize")) {
    auto [h, w] = parse_resize(o.resize);
    spec.resize_h = h;
    spec.resize_w = w;
  }
  if (sub->count("--workers")) spec.workers = o.workers;
  if (sub->count("--region-threshold")) spec.train.region_threshold = o.region_threshold;
  if (o.grayscale) spec.grayscale = true;
  if (o.baseline) spec.baseline = true;
  if (o.verbose) spec.train.log_progress = true;
  auto grid_given = [&](const char* name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt && opt->count() > 0;
  };
  if (grid_given("--tau-grid")) spec.tau_list = o.tau_grid;
  if (grid_given("--n-grid")) spec.n_list = o.n_grid;
  if (grid_given("--stage1-grid")) spec.stage1_list = o.stage1_grid;
  return spec;
}

int run_mask_command(const CLI::App* sub, const CliOptions& o) {
  hff::ExperimentSpec spec = build_spec(sub, o);
  if (spec.inputs.empty()) {
    std::cerr << "mask: no inputs given\n";
    return 1;
  }
  std::filesystem::create_directories(spec.out_dir);
  int written = 0;
  for (const auto& file : hff::detail::resolve_inputs(spec.inputs)) {
    try {
      hff::Image img = hff::load_image(file);
      if (spec.grayscale) img = hff::to_grayscale(img);
      if (spec.resize_h > 0 && spec.resize_w > 0)
        img = hff::resize(img, spec.resize_h, spec.resize_w);
      hff::SoftMask mask = hff::compute_mask(img, spec.train.mask);
      hff::Image heat(mask.height, mask.width, 1);
      for (int p = 0; p < mask.height * mask.width; ++p) {
        double peak = 0.0;
        for (int c = 0; c < mask.channels; ++c)
          peak = std::max(peak, mask.data[static_cast<std::size_t>(p) * mask.channels + c]);
        heat.data[p] = peak;
      }
      auto out = std::filesystem::path(spec.out_dir) /
                 (std::filesystem::path(file).stem().string() + "_mask.png");
      hff::save_image(heat, out.string());
      std::cout << out.string() << "\n";
      ++written;
    } catch (const std::exception& e) {
      std::cerr << "skipping " << file << ": " << e.what() << "\n";
    }
  }
  return written > 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordinate-MLP image fitting with high-frequency-first training"};
  app.require_subcommand(1);

  CliOptions fit_opts, ablate_opts, eval_opts, mask_opts;

  CLI::App* fit = app.add_subcommand("fit", "fit each input image and write artifacts");
  fit->add_option("inputs", fit_opts.inputs, "image files or directories");
  add_shared_flags(fit, fit_opts);
  fit->add_flag("--baseline", fit_opts.baseline, "also run the stage1=0 twin");

  CLI::App* ablate = app.add_subcommand("ablate", "grid ablation over tau, n, stage-1 epochs");
  ablate->add_option("inputs", ablate_opts.inputs, "image files or directories");
  add_shared_flags(ablate, ablate_opts);
  ablate->add_flag("--baseline", ablate_opts.baseline, "also run the stage1=0 twin of every cell");
  ablate->add_option("--tau-grid", ablate_opts.tau_grid, "tau values")->delimiter(',');
  ablate->add_option("--n-grid", ablate_opts.n_grid, "neighborhood sizes")->delimiter(',');
  ablate->add_option("--stage1-grid", ablate_opts.stage1_grid,
                     "stage-1 epoch values; total budget stays fixed")
      ->delimiter(',');

  CLI::App* eval = app.add_subcommand("eval", "metrics for a reconstruction against its truth");
  std::string recon_path, truth_path;
  eval->add_option("reconstruction", recon_path, "reconstructed image")->required();
  eval->add_option("truth", truth_path, "ground-truth image")->required();
  add_shared_flags(eval, eval_opts);
  bool region = false;
  eval->add_flag("--region", region, "also report mask-split HF/LF PSNR");

  CLI::App* mask = app.add_subcommand("mask", "write soft-mask heatmaps");
  mask->add_option("inputs", mask_opts.inputs, "image files or directories");
  add_shared_flags(mask, mask_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) return hff::run_fit(build_spec(fit, fit_opts));
    if (ablate->parsed()) return hff::run_ablation(build_spec(ablate, ablate_opts));
    if (eval->parsed()) {
      hff::ExperimentSpec spec = build_spec(eval, eval_opts);
      hff::EvalOptions opts;
      opts.region = region;
      opts.mask = spec.train.mask;
      opts.region_threshold = spec.train.region_threshold;
      opts.resize_h = spec.resize_h;
      opts.resize_w = spec.resize_w;
      opts.grayscale = spec.grayscale;
      opts.out_dir = spec.out_dir;
      return hff::run_eval(recon_path, truth_path, opts);
    }
    if (mask->parsed()) return run_mask_command(mask, mask_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

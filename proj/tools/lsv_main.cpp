// lsv: command-line surface for the Lovász/Jaccard loss library.
// Exit codes: 0 success, 1 runtime or data error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "lovasz/harness.hpp"
#include "lovasz/io.hpp"
#include "lovasz/jaccard.hpp"
#include "lovasz/metrics.hpp"
#include "lovasz/optim.hpp"
#include "lovasz/props.hpp"

namespace fs = std::filesystem;

namespace {

std::string num(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

struct CommonFlags {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

fs::path prepare_out_dir(const CommonFlags& flags) {
  fs::path dir(flags.out_dir);
  fs::create_directories(dir);
  return dir;
}

int run_gradcheck(const CommonFlags& flags, const std::string& loss, int p, int classes,
                  int trials, double tol) {
  const std::vector<double> errors = lsv::props::gradcheck(loss, p, classes, trials, flags.seed);
  lsv::io::CsvTable table{{"trial", "max_abs_err"}};
  bool all_ok = true;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    table.push_back({std::to_string(i), num(errors[i])});
    all_ok = all_ok && errors[i] < tol;
  }
  const fs::path out = prepare_out_dir(flags) / "gradcheck.csv";
  lsv::io::write_text_atomic(out, lsv::io::to_csv(table));
  const double worst = *std::max_element(errors.begin(), errors.end());
  std::cout << "gradcheck " << loss << ": " << trials << " trials, max_abs_err=" << num(worst)
            << (all_ok ? " < " : " >= ") << num(tol) << " -> " << out.string() << "\n";
  return all_ok ? 0 : 1;
}

int run_toy_sweep(const CommonFlags& flags, const lsv::SyntheticConfig& cfg,
                  bool assert_claim) {
  lsv::SyntheticData data = lsv::generate_circles(cfg);
  const std::vector<lsv::LossKind> menu{
      lsv::LossKind::kCrossEntropy, lsv::LossKind::kHinge, lsv::LossKind::kLovaszHinge,
      lsv::LossKind::kRahmanWang};
  const auto rows = lsv::bias_sweep(data, menu, cfg.bias_grid);

  lsv::io::CsvTable table{{"loss", "bias", "value"}};
  for (const auto& row : rows)
    table.push_back({row.loss, num(row.bias), num(row.value)});
  const fs::path out = prepare_out_dir(flags) / "bias_sweep.csv";
  lsv::io::write_text_atomic(out, lsv::io::to_csv(table));

  const double step = cfg.bias_grid.size() > 1 ? cfg.bias_grid[1] - cfg.bias_grid[0] : 0.0;
  const double jaccard_argmin = lsv::bias_sweep_argmin(rows, "jaccard");
  std::cout << "bias sweep -> " << out.string() << "\n";
  for (const auto& name : {"cross_entropy", "hinge", "lovasz_hinge", "rahman_wang"}) {
    const double argmin = lsv::bias_sweep_argmin(rows, name);
    std::cout << "  argmin " << name << " = " << num(argmin)
              << " (jaccard argmin " << num(jaccard_argmin) << ")\n";
  }
  if (assert_claim) {
    const double lovasz_argmin = lsv::bias_sweep_argmin(rows, "lovasz_hinge");
    if (std::abs(lovasz_argmin - jaccard_argmin) > step + 1e-12) {
      std::cout << "ASSERT FAILED: lovasz_hinge argmin not within one grid step of "
                   "the jaccard argmin\n";
      return 1;
    }
    std::cout << "assert ok: lovasz_hinge argmin within one grid step of jaccard\n";
  }
  return 0;
}

int run_toy_train(const CommonFlags& flags, const lsv::SyntheticConfig& data_cfg,
                  lsv::TrainConfig train_cfg) {
  lsv::SyntheticData data = lsv::generate_circles(data_cfg);
  train_cfg.seed = flags.seed;
  const lsv::ExperimentResult result = lsv::train_linear(data, train_cfg);
  const fs::path out = prepare_out_dir(flags) / "train.csv";
  lsv::io::write_text_atomic(out, lsv::experiment_csv(result));
  std::cout << "train " << lsv::loss_kind_name(train_cfg.loss) << " -> " << out.string()
            << "\n";
  if (!result.records.empty()) {
    const auto& last = result.records.back();
    std::cout << "  final: step=" << last.step << " loss=" << num(last.loss)
              << " image_miou=" << num(last.image_miou)
              << " dataset_miou=" << num(last.dataset_miou) << "\n";
  }
  return 0;
}

int run_metrics(const CommonFlags& flags, const std::string& gt_dir,
                const std::string& pred_dir, int classes) {
  const auto list_pgm = [](const fs::path& dir) {
    if (!fs::is_directory(dir))
      throw std::runtime_error("not a directory: " + dir.string());
    std::map<std::string, fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".pgm")
        files[entry.path().filename().string()] = entry.path();
    return files;
  };
  const auto gt_files = list_pgm(gt_dir);
  const auto pred_files = list_pgm(pred_dir);

  std::vector<std::string> only_gt, only_pred;
  for (const auto& [name, path] : gt_files)
    if (!pred_files.count(name)) only_gt.push_back(name);
  for (const auto& [name, path] : pred_files)
    if (!gt_files.count(name)) only_pred.push_back(name);
  if (!only_gt.empty() || !only_pred.empty() || gt_files.empty()) {
    std::cerr << "error: mask filename sets differ";
    for (const auto& name : only_gt) std::cerr << "\n  only in gt: " << name;
    for (const auto& name : only_pred) std::cerr << "\n  only in pred: " << name;
    if (gt_files.empty()) std::cerr << " (no .pgm files found)";
    std::cerr << "\n";
    return 1;
  }

  lsv::ConfusionAccumulator acc(classes);
  std::vector<lsv::LabelMask> gts, preds;
  for (const auto& [name, gt_path] : gt_files) {
    const lsv::io::MaskImage gt = lsv::io::read_pgm(gt_path);
    const lsv::io::MaskImage pred = lsv::io::read_pgm(pred_files.at(name));
    acc.accumulate(gt.labels, pred.labels);
    gts.push_back(gt.labels);
    preds.push_back(pred.labels);
  }

  std::ostringstream report;
  lsv::write_report_csv(report, acc);
  std::cout << report.str();
  const fs::path out_dir = prepare_out_dir(flags);
  lsv::io::write_text_atomic(out_dir / "metrics.csv", report.str());

  lsv::io::CsvTable summary{{"metric", "class", "value"}};
  for (int c = 0; c < classes; ++c) {
    double dice_sum = 0.0;
    for (std::size_t i = 0; i < gts.size(); ++i) dice_sum += lsv::dice(gts[i], preds[i], c);
    summary.push_back({"dice", std::to_string(c),
                       num(dice_sum / static_cast<double>(gts.size()))});
  }
  summary.push_back({"image_miou", "", num(lsv::image_miou(gts, preds, classes))});
  summary.push_back({"dataset_miou", "", num(lsv::dataset_miou(acc).mean_iou)});
  lsv::io::write_text_atomic(out_dir / "metrics_summary.csv", lsv::io::to_csv(summary));
  std::cout << "image_miou," << num(lsv::image_miou(gts, preds, classes)) << "\n";
  return 0;
}

int run_bench(const CommonFlags& flags, std::size_t p_min, std::size_t p_max, int reps,
              bool assert_claim) {
  const auto log2_of = [](std::size_t p) {
    int l = 0;
    while ((std::size_t{1} << l) < p) ++l;
    return l;
  };
  const auto points =
      lsv::props::bench_jaccard_grad(log2_of(p_min), log2_of(p_max), reps, flags.seed);
  lsv::io::CsvTable table{{"p", "median_ns"}};
  for (const auto& pt : points)
    table.push_back({std::to_string(pt.p), num(pt.median_ns)});
  const fs::path out = prepare_out_dir(flags) / "bench.csv";
  lsv::io::write_text_atomic(out, lsv::io::to_csv(table));
  const double slope = lsv::props::bench_loglog_slope(points);
  std::cout << "bench -> " << out.string() << "\nlog-log slope = " << num(slope) << "\n";
  if (assert_claim && (slope < 1.0 || slope > 1.15)) {
    std::cout << "ASSERT FAILED: slope outside [1.0, 1.15]\n";
    return 1;
  }
  return 0;
}

int run_prox_demo(const CommonFlags& flags, double nu, double eta, double alpha,
                  int steps, double x0, double y0) {
  const std::array<double, 2> start{x0, y0};
  lsv::io::CsvTable table{{"method", "step", "x1", "x2", "objective"}};
  const auto emit = [&](const char* method, const std::vector<lsv::TrajectoryPoint>& traj) {
    for (const auto& pt : traj)
      table.push_back({method, std::to_string(pt.step), num(pt.x[0]), num(pt.x[1]),
                       num(pt.objective)});
  };
  if (steps > 0) {
    emit("gd", lsv::run_toy_gradient_descent(start, nu, eta, steps));
    emit("momentum", lsv::run_toy_momentum(start, nu, eta, alpha, steps));
    emit("prox", lsv::run_toy_prox(start, nu, eta, steps));
  }
  const fs::path out = prepare_out_dir(flags) / "prox_demo.csv";
  lsv::io::write_text_atomic(out, lsv::io::to_csv(table));
  std::cout << "prox demo (nu=" << num(nu) << ") -> " << out.string() << "\n";
  return 0;
}

int run_props(const CommonFlags& flags, bool heavy) {
  const auto results = lsv::props::run_all(flags.seed, heavy);
  bool all_ok = true;
  for (const auto& res : results) {
    std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << res.name << " (" << res.detail
              << ")\n";
    all_ok = all_ok && res.pass;
  }
  std::cout << (all_ok ? "all properties hold\n" : "property violations found\n");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jaccard-loss surrogates, metrics and experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed/--out-dir may follow the subcommand
  app.footer("LSV_THREADS caps the worker thread count.");

  CommonFlags flags;
  app.add_option("--seed", flags.seed, "RNG seed shared by all subcommands");
  app.add_option("--out-dir", flags.out_dir, "directory for emitted CSV files");

  const std::vector<std::string> loss_names{
      "cross_entropy", "hinge",        "lovasz_hinge", "lovasz_softmax_all",
      "lovasz_softmax_present", "rahman_wang"};
  std::vector<std::string> gradcheck_losses = loss_names;
  gradcheck_losses.push_back("lovasz_extension");

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient checks");
  std::string gc_loss;
  int gc_p = 32, gc_classes = 3, gc_trials = 100;
  double gc_tol = 1e-4;
  gradcheck->add_option("--loss", gc_loss, "loss layer to check")
      ->required()
      ->check(CLI::IsMember(gradcheck_losses));
  gradcheck->add_option("--p", gc_p, "pixels per instance")->check(CLI::PositiveNumber);
  gradcheck->add_option("--classes", gc_classes, "classes for multiclass losses")
      ->check(CLI::Range(2, 64));
  gradcheck->add_option("--trials", gc_trials, "random points")->check(CLI::PositiveNumber);
  gradcheck->add_option("--tol", gc_tol, "max allowed |analytic - central difference|");

  // toy
  auto* toy = app.add_subcommand("toy", "synthetic circle experiment");
  bool toy_sweep = false, toy_train = false, toy_assert = false;
  lsv::SyntheticConfig toy_cfg;
  double grid_min = -3.0, grid_max = 3.0, grid_step = 0.01;
  std::string toy_loss = "lovasz_hinge", toy_opt = "momentum";
  lsv::TrainConfig toy_train_cfg;
  toy->add_flag("--bias-sweep", toy_sweep, "exhaustive bias search over the grid");
  toy->add_flag("--train", toy_train, "train the linear pixel classifier");
  toy->add_flag("--assert", toy_assert, "turn the surrogate-argmin claim into the exit code");
  toy->add_option("--images", toy_cfg.n_images)->check(CLI::PositiveNumber);
  toy->add_option("--height", toy_cfg.height)->check(CLI::PositiveNumber);
  toy->add_option("--width", toy_cfg.width)->check(CLI::PositiveNumber);
  toy->add_option("--eps", toy_cfg.feature_mean_gap, "foreground feature mean");
  toy->add_option("--noise", toy_cfg.noise_std)->check(CLI::PositiveNumber);
  toy->add_option("--grid-min", grid_min);
  toy->add_option("--grid-max", grid_max);
  toy->add_option("--grid-step", grid_step)->check(CLI::PositiveNumber);
  toy->add_option("--loss", toy_loss, "training loss")->check(CLI::IsMember(loss_names));
  toy->add_option("--optimizer", toy_opt)->check(CLI::IsMember({"sgd", "momentum", "prox"}));
  toy->add_option("--epochs", toy_train_cfg.epochs)->check(CLI::PositiveNumber);
  toy->add_option("--batch-size", toy_train_cfg.batch_size)->check(CLI::PositiveNumber);
  toy->add_option("--lr", toy_train_cfg.lr_base)->check(CLI::PositiveNumber);
  toy->add_flag("--equibatch", toy_train_cfg.equibatch, "cycle classes when sampling batches");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "IoU report for PGM mask directories");
  std::string gt_dir, pred_dir;
  int classes = 2;
  metrics->add_option("--gt-dir", gt_dir, "ground-truth masks")->required();
  metrics->add_option("--pred-dir", pred_dir, "predicted masks")->required();
  metrics->add_option("--classes", classes, "declared class count")
      ->check(CLI::Range(1, 256));

  // bench
  auto* bench = app.add_subcommand("bench", "jaccard_grad runtime scaling");
  std::size_t p_min = 1024, p_max = 1048576;
  int reps = 9;
  bool bench_assert = false;
  const auto power_of_two = CLI::Validator(
      [](std::string& input) -> std::string {
        const unsigned long long value = std::stoull(input);
        if (value == 0 || (value & (value - 1)) != 0) return "must be a power of two";
        return {};
      },
      "POW2");
  bench->add_option("--p-min", p_min)->check(power_of_two);
  bench->add_option("--p-max", p_max)->check(power_of_two);
  bench->add_option("--reps", reps)->check(CLI::PositiveNumber);
  bench->add_flag("--assert", bench_assert, "require log-log slope in [1.0, 1.15]");

  // prox-demo
  auto* prox_demo = app.add_subcommand("prox-demo", "optimizer trajectories on the toy objective");
  double nu = 1.3, eta = 0.1, alpha = 0.9, demo_x0 = 1.0, demo_y0 = 1.5;
  int demo_steps = 50;
  prox_demo->add_option("--nu", nu)->check(CLI::PositiveNumber);
  prox_demo->add_option("--eta", eta)->check(CLI::PositiveNumber);
  prox_demo->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
  prox_demo->add_option("--steps", demo_steps)->check(CLI::NonNegativeNumber);
  prox_demo->add_option("--x0", demo_x0, "start point, first coordinate");
  prox_demo->add_option("--y0", demo_y0, "start point, second coordinate");

  // props
  auto* props = app.add_subcommand("props", "run the full invariant suite");
  bool heavy = false;
  props->add_flag("--heavy", heavy, "include the training-based statistical checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gradcheck->parsed())
      return run_gradcheck(flags, gc_loss, gc_p, gc_classes, gc_trials, gc_tol);
    if (toy->parsed()) {
      if (toy_sweep == toy_train) {
        std::cerr << "error: pass exactly one of --bias-sweep / --train\n";
        return 2;
      }
      toy_cfg.seed = flags.seed;
      toy_cfg.bias_grid.clear();
      for (double b = grid_min; b <= grid_max + 1e-12; b += grid_step)
        toy_cfg.bias_grid.push_back(b);
      if (toy_sweep) return run_toy_sweep(flags, toy_cfg, toy_assert);
      toy_train_cfg.loss = *lsv::parse_loss_kind(toy_loss);
      toy_train_cfg.optimizer = toy_opt == "sgd"       ? lsv::OptimizerKind::kSgd
                                : toy_opt == "momentum" ? lsv::OptimizerKind::kMomentum
                                                        : lsv::OptimizerKind::kProx;
      return run_toy_train(flags, toy_cfg, toy_train_cfg);
    }
    if (metrics->parsed()) return run_metrics(flags, gt_dir, pred_dir, classes);
    if (bench->parsed()) {
      if (p_min > p_max) {
        std::cerr << "error: --p-min must not exceed --p-max\n";
        return 2;
      }
      return run_bench(flags, p_min, p_max, reps, bench_assert);
    }
    if (prox_demo->parsed())
      return run_prox_demo(flags, nu, eta, alpha, demo_steps, demo_x0, demo_y0);
    if (props->parsed()) return run_props(flags, heavy);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "wpg/bench.hpp"
#include "wpg/graphlearn.hpp"
#include "wpg/matrix_io.hpp"
#include "wpg/synthetic.hpp"
#include "wpg/tracker.hpp"

namespace wpg::cli {
namespace fs = std::filesystem;

namespace {

// Tags of the eleven OTB attributes; groups absent from a dataset are
// reported as empty.
const std::vector<std::string> kStandardTags = {"IV", "SV", "OCC", "DEF", "MB", "FM", "IPR", "OPR", "OV", "BC", "LR"};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::kIo, "cannot create directory " + dir.string());
}

SequenceSpec truncated(SequenceSpec spec, int max_frames) {
  if (max_frames > 0 && static_cast<std::size_t>(max_frames) < spec.frames.size()) {
    spec.frames.resize(max_frames);
    spec.truth.resize(max_frames);
  }
  return spec;
}

std::string result_line(const FrameResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.4f,%.4f,%.4f,%.4f,%.6f,%d\n", r.index, r.box.lx, r.box.ly, r.box.w, r.box.h,
                r.confidence, r.updated ? 1 : 0);
  return buf;
}

std::string scores(const std::string& prefix, double pr, double auc, double half) {
  return prefix + ".pr: " + fixed(pr, 6) + "\n" + prefix + ".sr_auc: " + fixed(auc, 6) + "\n" + prefix +
         ".sr_at_0.5: " + fixed(half, 6) + "\n";
}

std::vector<fs::path> discover_sequences(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorKind::kInput, "dataset root not found: " + root.string());
  if (fs::exists(root / "groundtruth_rect.txt")) return {root};
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "groundtruth_rect.txt")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(ErrorKind::kInput, "no sequences under " + root.string());
  return out;
}

std::vector<double> mean_curve(const std::vector<const std::vector<double>*>& curves) {
  std::vector<double> out(curves.front()->size(), 0.0);
  for (const auto* c : curves) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += (*c)[i];
  }
  for (double& v : out) v /= static_cast<double>(curves.size());
  return out;
}

}  // namespace

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kFormat:
    case ErrorKind::kParameter:
    case ErrorKind::kInput:
    case ErrorKind::kEmptySequence:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

void cmd_solve(const SolveOptions& opt, const RunConfig& config, std::ostream& log) {
  if (config.variant == "wpg_w") throw Error(ErrorKind::kParameter, "variant wpg_w has no solver");
  const SolverVariant variant = parse_solver_variant(config.variant);
  const SolverInput input = read_solver_input(opt.input);
  const GraphSolution sol = solve_variant(input.x, input.seeds, config.tracker.graph, variant);

  ensure_dir(opt.output_dir);
  write_matrix(opt.output_dir / "w.txt", sol.w);
  write_matrix(opt.output_dir / "A.txt", sol.a);

  std::ostringstream trace;
  trace << "# variant: " << to_string(variant) << '\n';
  for (std::size_t k = 0; k < sol.trace.size(); ++k) trace << k + 1 << ' ' << sol.trace[k] << '\n';
  write_file(opt.output_dir / "trace.txt", trace.str());

  std::ostringstream report;
  report << config.describe();
  report << "input: " << opt.input.string() << '\n';
  report << "nodes: " << input.x.cols() << '\n';
  report << "converged: " << (sol.converged ? "true" : "false") << '\n';
  report << "iterations: " << sol.iterations << '\n';
  report << "final_change: " << (sol.trace.empty() ? 0.0 : sol.trace.back()) << '\n';
  write_file(opt.output_dir / "report.txt", report.str());

  log << "solve: " << to_string(variant) << ", " << sol.iterations << " iterations, "
      << (sol.converged ? "converged" : "not converged") << '\n';
}

void cmd_track(const TrackOptions& opt, const RunConfig& config, std::ostream& log) {
  const TrackerParams params = config.resolved_tracker();
  const SequenceSpec spec = truncated(load_otb_sequence(opt.sequence), opt.max_frames);

  WpgOpeTracker tracker(params);
  const SequenceReport report = run_ope(spec, tracker);

  std::string lines;
  int failures = 0, updates = 0;
  for (const auto& r : tracker.results()) {
    lines += result_line(r);
    failures += r.failed;
    updates += r.updated;
    if (r.failed) log << "warning: frame " << r.index << ": " << r.message << '\n';
  }
  if (!opt.output.parent_path().empty()) ensure_dir(opt.output.parent_path());
  write_file(opt.output, lines);

  // Deterministic content only, so repeated runs compare equal byte for byte.
  std::string text = config.describe();
  text += "sequence: " + spec.name + "\n";
  text += "frames: " + std::to_string(spec.frames.size()) + "\n";
  text += "updates: " + std::to_string(updates) + "\n";
  text += "failures: " + std::to_string(failures) + "\n";
  text += scores("score", report.pr, report.success.auc, report.success.at_half);
  write_file(fs::path(opt.output.string() + ".report"), text);

  log << "track: " << spec.name << ", " << spec.frames.size() << " frames, PR(20) " << fixed(report.pr, 3)
      << ", AUC " << fixed(report.success.auc, 3) << ", " << fixed(report.fps, 2) << " fps\n";
}

int cmd_eval(const EvalOptions& opt, const RunConfig& config, std::ostream& log) {
  const std::vector<fs::path> dirs = discover_sequences(opt.root);
  std::vector<std::string> variants = opt.variants;
  if (variants.empty()) variants.push_back(config.variant);
  if (variants.size() == 1 && variants.front() == "all") variants = {"full", "wpg_a", "wpg_z", "wpg_e", "wpg_w"};
  for (const auto& v : variants) parse_tracker_variant(v);

  std::vector<std::optional<SequenceSpec>> specs(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    try {
      specs[i] = truncated(load_otb_sequence(dirs[i]), opt.max_frames);
    } catch (const Error& e) {
      log << "warning: skipping " << dirs[i].string() << ": " << e.what() << '\n';
    }
  }

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned jobs = opt.jobs > 0 ? static_cast<unsigned>(opt.jobs) : hw;
  int completed_total = 0;
  std::mutex log_mutex;

  for (const auto& variant : variants) {
    RunConfig vc = config;
    vc.set("variant", variant);
    const TrackerParams params = vc.resolved_tracker();

    std::vector<std::optional<SequenceReport>> reports(dirs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < dirs.size(); i = next++) {
        if (!specs[i]) continue;
        try {
          WpgOpeTracker tracker(params);
          reports[i] = run_ope(*specs[i], tracker);
        } catch (const Error& e) {
          std::lock_guard lock(log_mutex);
          log << "warning: " << variant << ": " << specs[i]->name << " failed: " << e.what() << '\n';
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::min<std::size_t>(jobs, dirs.size()); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<SequenceReport> done;
    for (auto& r : reports) {
      if (r) done.push_back(std::move(*r));
    }
    completed_total += static_cast<int>(done.size());
    if (done.empty()) {
      log << "warning: " << variant << ": no sequence completed\n";
      continue;
    }

    const fs::path out_dir = opt.output_dir / variant;
    ensure_dir(out_dir);
    std::string text = vc.describe();
    text += "sequences: " + std::to_string(done.size()) + "\n";
    std::vector<const std::vector<double>*> pr_curves, sr_curves;
    for (const auto& r : done) {
      text += scores("sequence." + r.name, r.pr, r.success.auc, r.success.at_half);
      text += "sequence." + r.name + ".fps: " + fixed(r.fps, 3) + "\n";
      emit_plot_data(r.precision, r.success, out_dir / r.name);
      pr_curves.push_back(&r.precision);
      sr_curves.push_back(&r.success.values);
    }
    const AttributeGroup all = aggregate(done);
    text += scores("overall", all.pr, all.sr_auc, all.sr_half);

    std::vector<std::string> tags = kStandardTags;
    for (const auto& r : done) {
      for (const auto& t : r.attributes) {
        if (std::find(tags.begin(), tags.end(), t) == tags.end()) tags.push_back(t);
      }
    }
    for (const auto& tag : tags) {
      const AttributeGroup g = group_by_attribute(done, tag);
      if (g.empty()) {
        text += "attribute." + tag + ": empty\n";
      } else {
        text += "attribute." + tag + ".sequences: " + std::to_string(g.sequences) + "\n";
        text += scores("attribute." + tag, g.pr, g.sr_auc, g.sr_half);
      }
    }
    write_file(out_dir / "report.txt", text);

    SuccessCurve mean_sr;
    mean_sr.values = mean_curve(sr_curves);
    mean_sr.auc = all.sr_auc;
    mean_sr.at_half = mean_sr.values[10];
    emit_plot_data(mean_curve(pr_curves), mean_sr, out_dir / "overall");

    log << "eval: " << variant << ", " << done.size() << " sequences, PR(20) " << fixed(all.pr, 3) << ", AUC "
        << fixed(all.sr_auc, 3) << '\n';
  }
  return completed_total;
}

void cmd_synth(const SynthOptions& opt, std::ostream& log) {
  synthetic::Sequence seq;
  if (opt.kind == "linear") {
    synthetic::LinearMotionOptions o;
    if (opt.frames > 0) o.frames = opt.frames;
    o.seed = opt.seed;
    seq = synthetic::linear_motion(o);
  } else if (opt.kind == "zoom") {
    synthetic::ZoomOptions o;
    if (opt.frames > 0) o.frames = opt.frames;
    o.seed = opt.seed;
    seq = synthetic::zoom(o);
  } else if (opt.kind == "static") {
    seq = synthetic::static_target(opt.frames > 0 ? opt.frames : 10, 200, 160, {70.0, 50.0, 48.0, 40.0}, 2.0,
                                   opt.seed);
  } else {
    throw Error(ErrorKind::kParameter, "unknown synthetic sequence '" + opt.kind + "'");
  }
  synthetic::write_otb(seq, opt.output_dir);
  log << "synth: " << opt.kind << ", " << seq.frames.size() << " frames in " << opt.output_dir.string() << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted patch graph tracker: graph solver, tracking and OTB-style evaluation", "wpg"};
  app.require_subcommand(1);

  struct Common {
    std::string config_file;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> variant;
    bool unscaled_q = false;
    bool gate_below_theta = false;
  };
  auto add_common = [](CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_file, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set", c.sets, "Override one key, e.g. --set theta=0.3 (repeatable)");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--variant", c.variant, "full, wpg_a, wpg_z, wpg_e or wpg_w");
    sub->add_flag("--unscaled-q", c.unscaled_q, "Use gamma instead of gamma/mu in the Q step");
    sub->add_flag("--gate-below-theta", c.gate_below_theta, "Update the model when confidence is below theta");
  };

  Common solve_common, track_common, eval_common;
  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "Run the graph solver on a matrix file");
  solve->add_option("input", solve_opt.input, "Matrix file: header 'd n', d rows, r line, Gamma line")->required();
  solve->add_option("-o,--output", solve_opt.output_dir, "Output directory")->required();
  add_common(solve, solve_common);

  TrackOptions track_opt;
  auto* track = app.add_subcommand("track", "Track one OTB-layout sequence");
  track->add_option("sequence", track_opt.sequence, "Sequence directory")->required();
  track->add_option("-o,--output", track_opt.output, "Per-frame results CSV")->required();
  track->add_option("--frames", track_opt.max_frames, "Track only the first N frames")->check(CLI::NonNegativeNumber);
  add_common(track, track_common);

  EvalOptions eval_opt;
  std::string variant_list;
  auto* eval = app.add_subcommand("eval", "One-pass evaluation over a dataset root");
  eval->add_option("root", eval_opt.root, "Dataset root or a single sequence directory")->required();
  eval->add_option("-o,--output", eval_opt.output_dir, "Output directory")->required();
  eval->add_option("--variants", variant_list, "Comma-separated variants, or 'all'");
  eval->add_option("--jobs", eval_opt.jobs, "Parallel sequences (0: all cores)")->check(CLI::NonNegativeNumber);
  eval->add_option("--frames", eval_opt.max_frames, "Evaluate only the first N frames")->check(CLI::NonNegativeNumber);
  add_common(eval, eval_common);

  SynthOptions synth_opt;
  auto* synth = app.add_subcommand("synth", "Write a synthetic sequence in OTB layout");
  synth->add_option("kind", synth_opt.kind, "linear, zoom or static")->required();
  synth->add_option("-o,--output", synth_opt.output_dir, "Output directory")->required();
  synth->add_option("--frames", synth_opt.frames, "Frame count")->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_opt.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // Defaults, then the config file, then individual flags.
  auto resolve = [](const Common& c) {
    RunConfig config;
    if (!c.config_file.empty()) config.load_file(c.config_file);
    for (const auto& kv : c.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::kParameter, "--set expects key=value, got '" + kv + "'");
      config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.seed) config.tracker.seed = *c.seed;
    if (c.variant) config.set("variant", *c.variant);
    if (c.unscaled_q) config.tracker.graph.unscaled_q = true;
    if (c.gate_below_theta) config.tracker.gate_below_theta = true;
    return config;
  };

  try {
    if (*solve) {
      cmd_solve(solve_opt, resolve(solve_common), out);
    } else if (*track) {
      cmd_track(track_opt, resolve(track_common), err);
    } else if (*eval) {
      const RunConfig config = resolve(eval_common);
      if (!variant_list.empty()) {
        std::stringstream ss(variant_list);
        for (std::string v; std::getline(ss, v, ',');) {
          if (!v.empty()) eval_opt.variants.push_back(v);
        }
      }
      if (cmd_eval(eval_opt, config, err) == 0) {
        err << "error: no sequence completed\n";
        return kExitRuntime;
      }
    } else if (*synth) {
      cmd_synth(synth_opt, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace wpg::cli

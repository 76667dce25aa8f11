#include "histlayer/cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <CLI11.hpp>

#include "histlayer/benchmark.hpp"
#include "histlayer/gradcheck.hpp"
#include "histlayer/io.hpp"
#include "histlayer/oracle.hpp"
#include "histlayer/pipeline.hpp"
#include "histlayer/random.hpp"
#include "histlayer/synth.hpp"
#include "histlayer/train.hpp"

namespace histlayer {

namespace {

// Exit code for a missed acceptance threshold.
constexpr int kThresholdFailure = 2;

struct BinFlags {
  double lo = -1.0;
  double hi = 1.0;
  std::size_t bins = 20;

  void add_to(CLI::App& app) {
    app.add_option("--lo", lo, "Lower edge of the bin range")->capture_default_str();
    app.add_option("--hi", hi, "Upper edge of the bin range")->capture_default_str();
    app.add_option("--bins", bins, "Number of equal-width bins")->capture_default_str();
  }
  BinSpec make() const { return make_uniform_bins(lo, hi, bins); }
  void echo(Json& j) const {
    j["lo"] = lo;
    j["hi"] = hi;
    j["bins"] = bins;
  }
};

struct KernelFlags {
  double base = 1.01;
  double bandwidth = 0.0;
  double slope = 0.0;
  double gamma = 0.0;
  CLI::Option* base_opt = nullptr;
  CLI::Option* bandwidth_opt = nullptr;
  CLI::Option* slope_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;

  void add_to(CLI::App& app) {
    base_opt = app.add_option("--base", base, "HistLayer base b > 1")->capture_default_str();
    bandwidth_opt = app.add_option("--bandwidth", bandwidth, "KDE bandwidth B (default omega/2.5)");
    slope_opt = app.add_option("--slope", slope, "LBF slope w for every bin (default 1/omega)");
    gamma_opt = app.add_option("--gamma", gamma, "RBF gamma for every bin (default sqrt(ln 2)/omega)");
  }

  Kernel make(KernelKind kind, const BinSpec& bins) const {
    switch (kind) {
      case KernelKind::histlayer:
        return Kernel(HistLayerParams{base});
      case KernelKind::lbf:
        if (slope_opt->count()) return Kernel(LbfParams{std::vector<double>(bins.size(), slope)});
        break;
      case KernelKind::rbf:
        if (gamma_opt->count()) return Kernel(RbfParams{std::vector<double>(bins.size(), gamma)});
        break;
      case KernelKind::kde:
        if (bandwidth_opt->count()) return Kernel(KdeParams{bandwidth});
        break;
    }
    return default_kernel(kind, bins);
  }

  // Effective scalar parameters, so a rerun from the echo rebuilds identical kernels.
  void echo(Json& j, const std::vector<Kernel>& kernels) const {
    for (const Kernel& k : kernels) {
      if (const auto* p = std::get_if<HistLayerParams>(&k.params())) j["base"] = p->base;
      if (const auto* p = std::get_if<KdeParams>(&k.params())) j["bandwidth"] = p->bandwidth;
    }
    if (slope_opt->count()) j["slope"] = slope;
    if (gamma_opt->count()) j["gamma"] = gamma;
  }
};

struct DistFlags {
  std::string dist = "normal";
  NormalDist normal;
  UniformDist uniform;
  BimodalDist bimodal;

  void add_to(CLI::App& app, const std::string& dist_flag, const std::string& default_dist) {
    dist = default_dist;
    app.add_option(dist_flag, dist, "Distribution")->capture_default_str();
    app.add_option("--mean", normal.mean, "normal: mean")->capture_default_str();
    app.add_option("--std", normal.stddev, "normal: standard deviation")->capture_default_str();
    app.add_option("--uniform-lo", uniform.lo, "uniform: lower bound")->capture_default_str();
    app.add_option("--uniform-hi", uniform.hi, "uniform: upper bound")->capture_default_str();
    app.add_option("--mean1", bimodal.mean1, "bimodal: first mean")->capture_default_str();
    app.add_option("--std1", bimodal.stddev1, "bimodal: first stddev")->capture_default_str();
    app.add_option("--mean2", bimodal.mean2, "bimodal: second mean")->capture_default_str();
    app.add_option("--std2", bimodal.stddev2, "bimodal: second stddev")->capture_default_str();
    app.add_option("--mix", bimodal.mix, "bimodal: weight of the first component")
        ->capture_default_str();
  }

  Distribution make() const {
    if (dist == "normal") return normal;
    if (dist == "uniform") return uniform;
    if (dist == "bimodal") return bimodal;
    throw ValidationError("unknown distribution '" + dist + "'");
  }

  void echo(Json& j, const std::string& dist_key) const {
    j[dist_key] = dist;
    if (dist == "normal") {
      j["mean"] = normal.mean;
      j["std"] = normal.stddev;
    } else if (dist == "uniform") {
      j["uniform-lo"] = uniform.lo;
      j["uniform-hi"] = uniform.hi;
    } else if (dist == "bimodal") {
      j["mean1"] = bimodal.mean1;
      j["std1"] = bimodal.stddev1;
      j["mean2"] = bimodal.mean2;
      j["std2"] = bimodal.stddev2;
      j["mix"] = bimodal.mix;
    }
  }
};

// Sample source shared by hist, compare and decompose-check: a file, or a
// synthetic batch when --in is absent.
struct InputFlags {
  std::string in;
  std::size_t n = 10000;
  std::uint64_t seed = 42;
  DistFlags dist;

  void add_to(CLI::App& app) {
    app.add_option("--in", in, "Sample file (one value per line); synthesized when omitted");
    app.add_option("--n", n, "Synthetic sample count")->capture_default_str();
    app.add_option("--seed", seed, "Synthetic sample seed")->capture_default_str();
    dist.add_to(app, "--dist", "normal");
  }

  SampleBatch load() const {
    if (!in.empty()) return read_samples(in);
    return synth(dist.make(), n, seed);
  }

  void echo(Json& j) const {
    if (!in.empty()) {
      j["in"] = in;
      return;
    }
    dist.echo(j, "dist");
    j["n"] = n;
    j["seed"] = seed;
    j["prng"] = Rng::kAlgorithm;
  }
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

std::vector<KernelKind> parse_kernel_list(const std::string& spec) {
  if (spec == "all")
    return {KernelKind::histlayer, KernelKind::lbf, KernelKind::rbf, KernelKind::kde};
  std::vector<KernelKind> kinds;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    auto comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    kinds.push_back(parse_kernel_kind(spec.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return kinds;
}

std::string json_value_to_arg(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw ValidationError("config value " + v.dump() + " is not a scalar");
}

bool given_explicitly(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Appends "--key value" for every config entry the subcommand knows and the
// command line did not set. Accepts a flat object or an artifact with an
// embedded "config" object.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (!config_path || args.empty()) return args;

  CLI::App* sub = nullptr;
  for (CLI::App* s : app.get_subcommands([](CLI::App*) { return true; }))
    if (s->get_name() == args.front()) sub = s;
  if (sub == nullptr) return args;

  Json cfg;
  try {
    cfg = Json::parse(read_file(*config_path));
  } catch (const Json::parse_error& e) {
    throw ValidationError("config '" + *config_path + "': " + e.what());
  }
  if (cfg.contains("config") && cfg["config"].is_object()) cfg = cfg["config"];
  if (!cfg.is_object()) throw ValidationError("config '" + *config_path + "' is not an object");
  if (cfg.contains("command") && cfg["command"].is_string() &&
      cfg["command"].get<std::string>() != sub->get_name())
    throw ValidationError("config is for '" + cfg["command"].get<std::string>() + "', not '" +
                          sub->get_name() + "'");

  std::vector<std::string> expanded = args;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (key == "config" || given_explicitly(args, flag)) continue;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) expanded.push_back(flag);
      continue;
    }
    expanded.push_back(flag);
    expanded.push_back(json_value_to_arg(value));
  }
  return expanded;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentiable histogram toolkit: soft binning kernels, error benchmark, "
               "gradient checks and distribution matching", "histlayer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "histlayer 0.1.0");
  std::string config_path;

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate seeded samples");
  std::size_t synth_n = 10000;
  std::uint64_t synth_seed = 42;
  std::string synth_out;
  DistFlags synth_dist;
  synth_dist.add_to(*synth_cmd, "--dist", "normal");
  synth_cmd->add_option("--n", synth_n, "Sample count")->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output file (stdout when omitted)");

  // hist
  auto* hist_cmd = app.add_subcommand("hist", "Compute one histogram");
  InputFlags hist_in;
  BinFlags hist_bins;
  KernelFlags hist_kernel;
  std::string hist_kind = "histlayer";
  std::string hist_norm = "probability";
  std::string hist_boundary = "right_open";
  std::string hist_out;
  hist_in.add_to(*hist_cmd);
  hist_bins.add_to(*hist_cmd);
  hist_kernel.add_to(*hist_cmd);
  hist_cmd->add_option("--kernel", hist_kind, "histlayer|lbf|rbf|kde|hard")->capture_default_str();
  hist_cmd->add_option("--normalize", hist_norm, "counts|probability")->capture_default_str();
  hist_cmd->add_option("--boundary", hist_boundary, "Hard-binning convention: open|right_open")
      ->capture_default_str();
  hist_cmd->add_option("--out", hist_out, "Histogram JSON (stdout when omitted)");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Approximation error of each kernel against hard binning");
  InputFlags cmp_in;
  BinFlags cmp_bins;
  KernelFlags cmp_kernel;
  std::string cmp_metric = "sum_abs";
  std::string cmp_boundary = "right_open";
  std::string cmp_norm = "probability";
  std::string cmp_kernels = "all";
  std::string cmp_out;
  std::string cmp_per_bin;
  cmp_in.add_to(*cmp_cmd);
  cmp_bins.add_to(*cmp_cmd);
  cmp_kernel.add_to(*cmp_cmd);
  cmp_cmd->add_option("--metric", cmp_metric, "sum_abs|mean_abs")->capture_default_str();
  cmp_cmd->add_option("--boundary", cmp_boundary, "open|right_open")->capture_default_str();
  cmp_cmd->add_option("--normalize", cmp_norm, "counts|probability")->capture_default_str();
  cmp_cmd->add_option("--kernels", cmp_kernels, "Comma-separated kernels or 'all'")
      ->capture_default_str();
  cmp_cmd->add_option("--out", cmp_out, "Report JSON");
  cmp_cmd->add_option("--per-bin", cmp_per_bin, "Per-bin CSV");

  // gradcheck
  auto* gc_cmd = app.add_subcommand("gradcheck", "Finite-difference check of vote derivatives");
  BinFlags gc_bins;
  KernelFlags gc_kernel;
  std::string gc_kinds = "all";
  SamplingPlan gc_plan;
  double gc_eps = 1e-6;
  double gc_exclusion = 1e-4;
  double gc_tolerance = 1e-6;
  std::string gc_out;
  gc_bins.add_to(*gc_cmd);
  gc_kernel.add_to(*gc_cmd);
  gc_cmd->add_option("--kernel", gc_kinds, "Kernel, comma list or 'all'")->capture_default_str();
  gc_cmd->add_option("--points", gc_plan.n_points, "Test abscissae")->capture_default_str();
  gc_cmd->add_option("--range-lo", gc_plan.lo, "Lower end of the test range")->capture_default_str();
  gc_cmd->add_option("--range-hi", gc_plan.hi, "Upper end of the test range")->capture_default_str();
  gc_cmd->add_option("--seed", gc_plan.seed, "Jitter seed")->capture_default_str();
  gc_cmd->add_option("--eps", gc_eps, "Central-difference step")->capture_default_str();
  gc_cmd->add_option("--exclusion", gc_exclusion, "Exclusion radius around kinks")
      ->capture_default_str();
  gc_cmd->add_option("--tolerance", gc_tolerance, "Pass threshold on max relative error")
      ->capture_default_str();
  gc_cmd->add_option("--out", gc_out, "Report JSON");

  // decompose-check
  auto* dc_cmd = app.add_subcommand("decompose-check", "Layer pipeline against the direct formula");
  InputFlags dc_in;
  BinFlags dc_bins;
  double dc_base = 1.01;
  double dc_tolerance = 1e-9;
  std::string dc_out;
  dc_in.add_to(*dc_cmd);
  dc_bins.add_to(*dc_cmd);
  dc_cmd->add_option("--base", dc_base, "HistLayer base")->capture_default_str();
  dc_cmd->add_option("--tolerance", dc_tolerance, "Max allowed discrepancy")->capture_default_str();
  dc_cmd->add_option("--out", dc_out, "Report JSON");

  // train
  auto* tr_cmd = app.add_subcommand("train", "Fit a generator so its soft histogram matches a target");
  BinFlags tr_bins;
  KernelFlags tr_kernel;
  DistFlags tr_target;
  std::string tr_kind = "kde";
  std::string tr_target_file;
  std::size_t tr_target_n = 100000;
  std::uint64_t tr_target_seed = 8;
  double tr_target_a = 0.5;
  double tr_target_b = 0.2;
  std::string tr_generator = "affine";
  double tr_init_a = 1.0;
  double tr_init_b = 0.0;
  std::size_t tr_hidden = 8;
  std::uint64_t tr_init_seed = 3;
  NoiseSpec tr_noise;
  std::string tr_noise_dist = "uniform";
  std::string tr_loss = "l2";
  std::string tr_optimizer = "adam";
  OptimizerConfig tr_opt;
  std::string tr_trace;
  std::string tr_out;
  tr_bins.add_to(*tr_cmd);
  tr_kernel.add_to(*tr_cmd);
  tr_target.add_to(*tr_cmd, "--target-dist", "affine");
  tr_cmd->add_option("--kernel", tr_kind, "Loss kernel: histlayer|lbf|rbf|kde")->capture_default_str();
  tr_cmd->add_option("--target-file", tr_target_file, "Target histogram JSON (with --target-dist file)");
  tr_cmd->add_option("--target-n", tr_target_n, "Samples used to bin an analytic target")
      ->capture_default_str();
  tr_cmd->add_option("--target-seed", tr_target_seed, "Seed for the target samples")
      ->capture_default_str();
  tr_cmd->add_option("--target-a", tr_target_a, "affine target: scale applied to noise")
      ->capture_default_str();
  tr_cmd->add_option("--target-b", tr_target_b, "affine target: offset")->capture_default_str();
  tr_cmd->add_option("--generator", tr_generator, "affine|mlp")->capture_default_str();
  tr_cmd->add_option("--init-a", tr_init_a, "affine generator: initial scale")->capture_default_str();
  tr_cmd->add_option("--init-b", tr_init_b, "affine generator: initial offset")->capture_default_str();
  tr_cmd->add_option("--hidden", tr_hidden, "mlp generator: hidden units")->capture_default_str();
  tr_cmd->add_option("--init-seed", tr_init_seed, "mlp generator: initialization seed")
      ->capture_default_str();
  tr_cmd->add_option("--noise", tr_noise_dist, "uniform|normal")->capture_default_str();
  tr_cmd->add_option("--batch", tr_noise.n, "Noise batch size (fixed across steps)")
      ->capture_default_str();
  tr_cmd->add_option("--seed", tr_noise.seed, "Noise seed")->capture_default_str();
  tr_cmd->add_option("--loss", tr_loss, "l1|l2")->capture_default_str();
  tr_cmd->add_option("--optimizer", tr_optimizer, "sgd|adam")->capture_default_str();
  tr_cmd->add_option("--lr", tr_opt.learning_rate, "Learning rate")->capture_default_str();
  tr_cmd->add_option("--steps", tr_opt.steps, "Optimization steps")->capture_default_str();
  tr_cmd->add_option("--beta1", tr_opt.beta1, "Adam beta1")->capture_default_str();
  tr_cmd->add_option("--beta2", tr_opt.beta2, "Adam beta2")->capture_default_str();
  tr_cmd->add_option("--adam-eps", tr_opt.epsilon, "Adam epsilon")->capture_default_str();
  tr_cmd->add_option("--trace", tr_trace, "Trace CSV (step,loss,grad_norm)");
  tr_cmd->add_option("--out", tr_out, "Result JSON");

  for (CLI::App* sub : {synth_cmd, hist_cmd, cmp_cmd, gc_cmd, dc_cmd, tr_cmd})
    sub->add_option("--config", config_path, "JSON defaults; explicit flags win");

  try {
    std::vector<std::string> expanded = expand_config(args, app);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(expanded);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (synth_cmd->parsed()) {
      Json cfg{{"command", "synth"}};
      synth_dist.echo(cfg, "dist");
      cfg["n"] = synth_n;
      cfg["seed"] = synth_seed;
      cfg["prng"] = Rng::kAlgorithm;
      const SampleBatch batch = synth(synth_dist.make(), synth_n, synth_seed);
      emit(synth_out, format_samples(batch, cfg), out);
      return 0;
    }

    if (hist_cmd->parsed()) {
      const BinSpec bins = hist_bins.make();
      const SampleBatch samples = hist_in.load();
      const Normalization norm = parse_normalization(hist_norm);
      Json cfg{{"command", "hist"}};
      hist_in.echo(cfg);
      hist_bins.echo(cfg);
      cfg["kernel"] = hist_kind;
      cfg["normalize"] = hist_norm;
      HistogramVector h;
      if (hist_kind == "hard") {
        const BoundaryMode mode = parse_boundary_mode(hist_boundary);
        cfg["boundary"] = to_string(mode);
        h = normalize(hard_histogram(samples, bins, mode), norm);
      } else {
        const Kernel kernel = hist_kernel.make(parse_kernel_kind(hist_kind), bins);
        hist_kernel.echo(cfg, {kernel});
        h = soft_histogram(samples, bins, kernel, norm);
      }
      emit(hist_out, histogram_json(h, bins, hist_kind, cfg).dump(2) + "\n", out);
      return 0;
    }

    if (cmp_cmd->parsed()) {
      const BinSpec bins = cmp_bins.make();
      const SampleBatch samples = cmp_in.load();
      std::vector<Kernel> kernels;
      for (KernelKind kind : parse_kernel_list(cmp_kernels)) kernels.push_back(cmp_kernel.make(kind, bins));
      ComparisonOptions opts{parse_boundary_mode(cmp_boundary), parse_normalization(cmp_norm),
                             parse_error_metric(cmp_metric)};
      Json cfg{{"command", "compare"}};
      cmp_in.echo(cfg);
      cmp_bins.echo(cfg);
      cfg["kernels"] = cmp_kernels;
      cmp_kernel.echo(cfg, kernels);
      cfg["metric"] = to_string(opts.metric);
      cfg["boundary"] = to_string(opts.boundary);
      cfg["normalize"] = to_string(opts.normalization);

      const ErrorReport report = run_comparison(samples, bins, kernels, opts);
      out << format_report_table(report);
      if (!cmp_out.empty()) write_file_atomic(cmp_out, report_json(report, cfg).dump(2) + "\n");
      if (!cmp_per_bin.empty()) write_file_atomic(cmp_per_bin, format_per_bin_csv(report));
      if (report.histlayer_bound && !report.histlayer_bound->holds) {
        err << "error: histlayer error exceeds its analytic bound\n";
        return kThresholdFailure;
      }
      return 0;
    }

    if (gc_cmd->parsed()) {
      const BinSpec bins = gc_bins.make();
      Json reports = Json::array();
      bool ok = true;
      for (KernelKind kind : parse_kernel_list(gc_kinds)) {
        const Kernel kernel = gc_kernel.make(kind, bins);
        const GradCheckReport r = check_kernel(kernel, bins, gc_plan, gc_eps, gc_exclusion);
        const bool smooth = kind == KernelKind::rbf || kind == KernelKind::kde;
        const bool pass = r.passed(gc_tolerance) && (!smooth || r.excluded_points == 0);
        ok = ok && pass;
        out << (pass ? "PASS " : "FAIL ") << to_string(kind) << " points=" << r.n_points
            << " nonzero=" << r.n_nonzero << " excluded=" << r.excluded_points
            << " max_rel_error=" << format_double(r.max_rel_error) << "\n";
        Json j = to_json(r);
        j["params"] = to_json(kernel);
        j["passed"] = pass;
        reports.push_back(j);
      }
      if (!gc_out.empty()) {
        Json cfg{{"command", "gradcheck"}, {"kernel", gc_kinds}, {"points", gc_plan.n_points},
                 {"range-lo", gc_plan.lo}, {"range-hi", gc_plan.hi}, {"seed", gc_plan.seed},
                 {"eps", gc_eps}, {"exclusion", gc_exclusion}, {"tolerance", gc_tolerance}};
        gc_bins.echo(cfg);
        write_file_atomic(gc_out, Json{{"config", cfg}, {"reports", reports}}.dump(2) + "\n");
      }
      return ok ? 0 : kThresholdFailure;
    }

    if (dc_cmd->parsed()) {
      const BinSpec bins = dc_bins.make();
      const SampleBatch samples = dc_in.load();
      const EquivalenceReport r = pipeline_equivalence_check(samples, bins, dc_base);
      const bool pass = r.max_abs_discrepancy <= dc_tolerance;
      out << (pass ? "PASS" : "FAIL") << " n=" << r.n_samples
          << " max_abs_discrepancy=" << format_double(r.max_abs_discrepancy)
          << " bitwise_equal=" << (r.bitwise_equal ? "true" : "false") << "\n";
      if (!dc_out.empty()) {
        Json cfg{{"command", "decompose-check"}, {"base", dc_base}, {"tolerance", dc_tolerance}};
        dc_in.echo(cfg);
        dc_bins.echo(cfg);
        Json j = to_json(r);
        j["config"] = cfg;
        j["passed"] = pass;
        write_file_atomic(dc_out, j.dump(2) + "\n");
      }
      return pass ? 0 : kThresholdFailure;
    }

    if (tr_cmd->parsed()) {
      const BinSpec bins = tr_bins.make();
      tr_noise.distribution = parse_noise_distribution(tr_noise_dist);
      tr_opt.kind = parse_optimizer_kind(tr_optimizer);
      const Kernel kernel = tr_kernel.make(parse_kernel_kind(tr_kind), bins);

      Json cfg{{"command", "train"}};
      tr_bins.echo(cfg);
      HistogramVector target;
      if (tr_target.dist == "file") {
        if (tr_target_file.empty()) throw ValidationError("--target-dist file needs --target-file");
        HistogramFile f = read_histogram(tr_target_file);
        if (!(f.bins == bins)) throw ValidationError("target file bins differ from --lo/--hi/--bins");
        target = normalize(f.histogram, Normalization::probability);
        cfg["target-dist"] = "file";
        cfg["target-file"] = tr_target_file;
      } else if (tr_target.dist == "affine") {
        NoiseSpec tn{tr_noise.distribution, tr_target_n, tr_target_seed};
        target = target_from_generator(Generator::affine(tr_target_a, tr_target_b), tn, bins);
        cfg["target-dist"] = "affine";
        cfg["target-a"] = tr_target_a;
        cfg["target-b"] = tr_target_b;
      } else {
        target = target_from_samples(synth(tr_target.make(), tr_target_n, tr_target_seed), bins);
        tr_target.echo(cfg, "target-dist");
      }
      if (tr_target.dist != "file") {
        cfg["target-n"] = tr_target_n;
        cfg["target-seed"] = tr_target_seed;
      }

      const Generator g0 = parse_generator_kind(tr_generator) == GeneratorKind::affine
                               ? Generator::affine(tr_init_a, tr_init_b)
                               : Generator::mlp_random(tr_hidden, tr_init_seed);
      cfg["generator"] = tr_generator;
      if (g0.kind() == GeneratorKind::affine) {
        cfg["init-a"] = tr_init_a;
        cfg["init-b"] = tr_init_b;
      } else {
        cfg["hidden"] = tr_hidden;
        cfg["init-seed"] = tr_init_seed;
      }
      cfg["kernel"] = tr_kind;
      tr_kernel.echo(cfg, {kernel});
      cfg["noise"] = tr_noise_dist;
      cfg["batch"] = tr_noise.n;
      cfg["seed"] = tr_noise.seed;
      cfg["loss"] = tr_loss;
      cfg["optimizer"] = tr_optimizer;
      cfg["lr"] = tr_opt.learning_rate;
      cfg["steps"] = tr_opt.steps;
      cfg["beta1"] = tr_opt.beta1;
      cfg["beta2"] = tr_opt.beta2;
      cfg["adam-eps"] = tr_opt.epsilon;
      cfg["prng"] = Rng::kAlgorithm;

      const TrainConfig tc{target, tr_noise, kernel, parse_loss_kind(tr_loss), tr_opt, bins};
      const TrainTrace trace = train(tc, g0);
      const Json result = train_result_json(trace, target, bins, cfg);
      out << "loss " << format_double(result["initial_loss"].get<double>()) << " -> "
          << format_double(result["final_loss"].get<double>()) << "; histlayer distance "
          << format_double(result["histlayer_distance_before"].get<double>()) << " -> "
          << format_double(result["histlayer_distance_after"].get<double>()) << "\n";
      if (!tr_trace.empty()) write_file_atomic(tr_trace, format_trace_csv(trace));
      emit(tr_out, result.dump(2) + "\n", out);
      return 0;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const TrainingError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace histlayer

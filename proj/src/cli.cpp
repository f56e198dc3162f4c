#include "mvgb/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mvgb/common_info.hpp"
#include "mvgb/serialize.hpp"

namespace mvgb {

namespace {

constexpr const char* kConfigKeyHelp =
    "Config keys (JSON file, all optional):\n"
    "  generator.mode            discrete-exact | signal-noise | gaussian-mixture\n"
    "  generator.y_card          label classes (count, <= 4)\n"
    "  generator.m               views (count)\n"
    "  generator.d               nuisance coordinates per view (count, <= 4)\n"
    "  generator.coord_card      coordinate alphabet size (count, <= 16)\n"
    "  generator.x_card          view alphabet size (count, <= 16)\n"
    "  generator.class_stride    class offset in symbols (count)\n"
    "  generator.flip_prob       nonzero-coordinate probability (probability)\n"
    "  generator.p_y             label prior (probabilities)\n"
    "  generator.gauss_sep       class separation (noise sigmas)\n"
    "  n_grid, m_grid            study grid (counts)\n"
    "  replicates                Monte Carlo replicates per cell (count)\n"
    "  gamma                     typical-set slack (unitless, > 0)\n"
    "  delta                     confidence level (probability)\n"
    "  lambda                    Renyi order is 1 - lambda (unitless)\n"
    "  beta_scale                fast-rate temperature scale (unitless)\n"
    "  master_seed               64-bit seed; all randomness derives from it\n"
    "  trainer.code_levels       quantized code levels per head (count)\n"
    "  trainer.hidden            hidden width, 0 = linear (count)\n"
    "  trainer.lr                SGD learning rate\n"
    "  trainer.epochs            training epochs (count)\n"
    "  trainer.penalty_weight    information-bottleneck regularizer weight\n"
    "  trainer.weight_decay      L2 decay rate\n"
    "  trainer.objective         classification | reconstruction\n"
    "  correlation.width_grid    code levels / hidden widths (counts)\n"
    "  correlation.penalty_grid  regularizer weights\n"
    "  correlation.decay_grid    weight decays\n"
    "  correlation.seeds         training seeds per cell (count)\n"
    "  correlation.draws         dataset draws per cell (count)\n"
    "  correlation.n             samples per dataset (count)\n"
    "  correlation.phi_replicates  replicates for the model-information\n"
    "                              estimate (count)\n"
    "  correlation.probe_count   fingerprint probe inputs (count)\n"
    "All information quantities are reported in nats.";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::string> axes_arg(const JointDistribution& dist, const std::string& arg) {
  if (arg == "all") {
    std::vector<std::string> names;
    for (const auto& a : dist.axes()) names.push_back(a.name);
    return names;
  }
  return split(arg, ',');
}

// Dotted-path scalar override, e.g. "generator.flip_prob=0.2".
void apply_override(json& config, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw ValidationError("override '" + spec + "' is not of the form key=value");
  std::string path = spec.substr(0, eq), value = spec.substr(eq + 1);
  json* node = &config;
  std::vector<std::string> keys = split(path, '.');
  if (keys.empty()) throw ValidationError("override '" + spec + "' has an empty key");
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) node = &(*node)[keys[i]];
  try {
    (*node)[keys.back()] = json::parse(value);
  } catch (const json::exception&) {
    (*node)[keys.back()] = value;  // bare strings are taken verbatim
  }
}

struct StudyArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool dump_config = false;
};

void add_study_options(CLI::App* cmd, StudyArgs& args) {
  cmd->add_option("--config", args.config_path, "Study configuration JSON");
  cmd->add_option("--out", args.out_dir, "Output directory for records.csv / summary.json");
  cmd->add_option("--set", args.overrides,
                  "Override a config key, e.g. --set replicates=50 (repeatable)");
  cmd->add_option("--seed", args.seed, "Master seed override (64-bit)")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_flag("--dump-config", args.dump_config,
                "Print the effective configuration JSON and exit");
}

ExperimentConfig resolve_config(const StudyArgs& args, const ExperimentConfig& fallback) {
  json base = args.config_path.empty() ? to_json(fallback) : load_json_file(args.config_path);
  for (const auto& o : args.overrides) apply_override(base, o);
  ExperimentConfig cfg = config_from_json(base);
  if (args.seed_set) cfg.master_seed = args.seed;
  return cfg;
}

int run_study(const StudyArgs& args, const ExperimentConfig& fallback,
              StudyReport (*study)(const ExperimentConfig&), std::ostream& out) {
  ExperimentConfig cfg = resolve_config(args, fallback);
  if (args.dump_config) {
    out << to_json(cfg).dump(2) << "\n";
    return 0;
  }
  if (args.out_dir.empty())
    throw ValidationError("--out directory is required (or use --dump-config)");
  std::filesystem::create_directories(args.out_dir);
  StudyReport report = study(cfg);
  write_report_csv(report, args.out_dir + "/records.csv");
  save_json_file(report_summary_json(report, cfg), args.out_dir + "/summary.json");
  write_plot_series(report, args.out_dir + "/plots");
  out << report.kind << ": " << report.rows.size() << " records -> " << args.out_dir << "\n";
  for (const auto& [k, v] : report.coverage) {
    out << std::fixed << std::setprecision(6) << "  coverage " << k << " = ";
    if (std::isnan(v))
      out << "n/a\n";
    else
      out << v << "\n";
  }
  for (const auto& [k, v] : report.slopes)
    out << std::fixed << std::setprecision(6) << "  " << k << " = " << v << "\n";
  for (const auto& [k, v] : report.pearson_table) {
    out << std::fixed << std::setprecision(6) << "  pearson " << k << " = ";
    if (std::isnan(v))
      out << "undefined\n";
    else
      out << v << "\n";
  }
  return 0;
}

}  // namespace

ExperimentConfig default_validate_config() {
  ExperimentConfig cfg;
  cfg.generator.y_card = 2;
  cfg.generator.m = 2;
  cfg.generator.d = 1;
  cfg.generator.coord_card = 2;
  cfg.generator.x_card = 4;
  cfg.generator.class_stride = 2;
  cfg.generator.flip_prob = 0.25;
  cfg.n_grid = {50, 100, 200, 400, 800};
  cfg.m_grid = {2, 4};
  cfg.replicates = 200;
  cfg.delta = 0.1;
  return cfg;
}

ExperimentConfig default_correlate_config() {
  ExperimentConfig cfg = default_validate_config();
  cfg.generator.flip_prob = 0.3;
  cfg.corr_n = 48;
  return cfg;
}

ExperimentConfig default_scale_config() {
  ExperimentConfig cfg;
  cfg.generator.y_card = 2;
  cfg.generator.m = 2;
  cfg.generator.d = 1;
  cfg.generator.coord_card = 2;
  cfg.generator.x_card = 2;
  cfg.generator.class_stride = 1;
  cfg.generator.flip_prob = 0.1;
  cfg.n_grid = {50, 100, 200, 400, 800};
  cfg.m_grid = {2};
  cfg.replicates = 200;
  cfg.delta = 0.1;
  return cfg;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact information measures and multi-view generalization bounds"};
  app.require_subcommand(1);

  // info
  auto* info = app.add_subcommand(
      "info", "Information measures of a distribution file (values in nats)");
  std::string info_dist, entropy_axes, renyi_axes, cond_target, cond_given, tc_blocks, kl_other;
  std::vector<std::string> mi_axes, cmi_axes;
  double alpha = 2.0;
  bool bits = false;
  info->add_option("--dist", info_dist, "Distribution JSON: {axes:[{name,size}], probs:[...]}")
      ->required();
  info->add_option("--entropy", entropy_axes, "Shannon entropy of AXES ('a,b' or 'all')");
  info->add_option("--renyi", renyi_axes, "Renyi entropy of AXES (with --alpha)");
  info->add_option("--alpha", alpha, "Renyi order (> 0, != 1)");
  info->add_option("--cond", cond_target, "Conditional entropy target AXES");
  info->add_option("--given", cond_given, "Conditioning AXES for --cond");
  info->add_option("--mi", mi_axes, "Mutual information between two axis sets")
      ->expected(2);
  info->add_option("--cmi", cmi_axes, "Conditional mutual information (a b given)")
      ->expected(3);
  info->add_option("--tc", tc_blocks, "Total correlation over blocks 'a,b;c;d'");
  info->add_option("--kl", kl_other, "KL divergence against a second distribution file");
  info->add_flag("--bits", bits, "Report in bits instead of nats");

  // gk
  auto* gk = app.add_subcommand("gk", "Common-information solvers over view axes");
  std::string gk_dist, gk_json;
  std::uint64_t gk_budget = 1u << 20;
  bool gk_multiview = false, gk_no_fallback = false;
  gk->add_option("--dist", gk_dist, "Joint distribution over m >= 2 view axes")->required();
  gk->add_flag("--multiview", gk_multiview,
               "Maximize I(X^j;C) over agreeing tuples (enumeration within budget)");
  gk->add_option("--budget", gk_budget, "Enumeration budget (function tuples, count)");
  gk->add_flag("--no-fallback", gk_no_fallback,
               "Mark results as approximate when the budget is exceeded");
  gk->add_option("--json", gk_json, "Also write the labeling as JSON");

  // bound
  auto* bound = app.add_subcommand("bound", "Evaluate a generalization/validation bound");
  std::string bound_profile, bound_params, bound_json;
  int theorem = 0;
  bool bound_bits = false;
  bound->add_option("--profile", bound_profile, "InfoProfile JSON (fields in nats)")
      ->required();
  bound->add_option("--params", bound_params,
                    "Bound parameters JSON: n,m,d (counts), gamma, delta, lambda, beta, "
                    "xi, sigma_u, sup_loss_rms, empirical_risk, envelope{r_x,...}")
      ->required();
  bound->add_option("--theorem", theorem, "Theorem number: 1-4, 7 (bounds), 5-6 (validation)")
      ->required();
  bound->add_option("--json", bound_json, "Also write the breakdown as JSON");
  bound->add_flag("--bits", bound_bits, "Report information terms in bits");

  // studies
  StudyArgs validate_args, correlate_args, scale_args;
  auto* validate = app.add_subcommand(
      "validate", std::string("Monte Carlo coverage study of theorems 1, 3 and 7.\n") +
                      kConfigKeyHelp);
  add_study_options(validate, validate_args);
  auto* correlate = app.add_subcommand(
      "correlate",
      std::string("Hyperparameter sweep + Pearson correlation of complexity metrics "
                  "against the gap.\n") + kConfigKeyHelp);
  add_study_options(correlate, correlate_args);
  auto* scale = app.add_subcommand(
      "scale", std::string("Log-log scaling-rate study of bounds and measured gap.\n") +
                   kConfigKeyHelp);
  add_study_options(scale, scale_args);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    auto parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    out << std::fixed << std::setprecision(6);
    double unit = bits ? 1.0 / 0.6931471805599453 : 1.0;
    const char* unit_name = bits ? "bits" : "nats";

    if (*info) {
      JointDistribution dist = distribution_from_json(load_json_file(info_dist));
      bool any = false;
      if (!entropy_axes.empty()) {
        auto ax = axes_arg(dist, entropy_axes);
        out << "entropy(" << entropy_axes << ") = " << entropy(dist, ax) * unit << " "
            << unit_name << "\n";
        any = true;
      }
      if (!renyi_axes.empty()) {
        auto ax = axes_arg(dist, renyi_axes);
        out << "renyi_" << alpha << "(" << renyi_axes
            << ") = " << renyi_entropy(dist, ax, alpha) * unit << " " << unit_name << "\n";
        any = true;
      }
      if (!cond_target.empty() || !cond_given.empty()) {
        if (cond_target.empty() || cond_given.empty())
          throw ValidationError("--cond and --given must be used together");
        out << "H(" << cond_target << " | " << cond_given << ") = "
            << conditional_entropy(dist, axes_arg(dist, cond_target),
                                   axes_arg(dist, cond_given)) * unit
            << " " << unit_name << "\n";
        any = true;
      }
      if (!mi_axes.empty()) {
        out << "I(" << mi_axes[0] << " ; " << mi_axes[1] << ") = "
            << mutual_information(dist, axes_arg(dist, mi_axes[0]),
                                  axes_arg(dist, mi_axes[1])) * unit
            << " " << unit_name << "\n";
        any = true;
      }
      if (!cmi_axes.empty()) {
        out << "I(" << cmi_axes[0] << " ; " << cmi_axes[1] << " | " << cmi_axes[2] << ") = "
            << conditional_mutual_information(dist, axes_arg(dist, cmi_axes[0]),
                                              axes_arg(dist, cmi_axes[1]),
                                              axes_arg(dist, cmi_axes[2])) * unit
            << " " << unit_name << "\n";
        any = true;
      }
      if (!tc_blocks.empty()) {
        std::vector<std::vector<std::string>> blocks;
        for (const auto& b : split(tc_blocks, ';')) blocks.push_back(split(b, ','));
        out << "TC(" << tc_blocks << ") = " << total_correlation(dist, blocks) * unit << " "
            << unit_name << "\n";
        any = true;
      }
      if (!kl_other.empty()) {
        JointDistribution q = distribution_from_json(load_json_file(kl_other));
        out << "KL = " << kl_divergence(dist, q) * unit << " " << unit_name << "\n";
        any = true;
      }
      if (!any) {
        std::vector<std::string> all;
        for (const auto& a : dist.axes()) all.push_back(a.name);
        out << "entropy(all) = " << entropy(dist, all) * unit << " " << unit_name << "\n";
      }
      return 0;
    }

    if (*gk) {
      JointDistribution dist = distribution_from_json(load_json_file(gk_dist));
      CommonPartLabeling part = gk_multiview
                                    ? multiview_common_information(dist, gk_budget,
                                                                   !gk_no_fallback)
                                    : gk_common_information(dist);
      out << "value = " << part.value << " nats\n";
      out << "components = " << part.component_count << "\n";
      out << "status = " << part.status << "\n";
      for (std::size_t j = 0; j < part.labels.size(); ++j) {
        out << "view " << j << ":";
        for (int id : part.labels[j]) out << " " << id;
        out << "\n";
      }
      if (!gk_json.empty()) {
        json doc = {{"value", part.value},
                    {"components", part.component_count},
                    {"status", part.status},
                    {"labels", part.labels},
                    {"per_view_mi", part.per_view_mi}};
        save_json_file(doc, gk_json);
      }
      return 0;
    }

    if (*bound) {
      InfoProfile profile = profile_from_json(load_json_file(bound_profile));
      auto [params, env] = params_from_json(load_json_file(bound_params));
      BoundBreakdown breakdown = (theorem == 5 || theorem == 6)
                                     ? evaluate_validation_bound(theorem, profile, env, params)
                                     : evaluate_bound(theorem, profile, env, params);
      print_breakdown(breakdown, out, bound_bits);
      if (!bound_json.empty()) save_json_file(to_json(breakdown), bound_json);
      return 0;
    }

    if (*validate)
      return run_study(validate_args, default_validate_config(), &run_bound_validation, out);
    if (*correlate)
      return run_study(correlate_args, default_correlate_config(), &run_correlation_study, out);
    if (*scale) return run_study(scale_args, default_scale_config(), &run_scaling_study, out);
    err << "error: no subcommand selected\n";
    return 2;
  } catch (const RegimeError& e) {
    err << "regime error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mvgb

#include "mvgb/serialize.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace mvgb {

namespace {

const json& need(const json& j, const char* key) {
  if (!j.contains(key))
    throw ValidationError(std::string("missing required field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

std::optional<double> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json opt_to(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const JointDistribution& dist) {
  json axes = json::array();
  for (const auto& a : dist.axes()) axes.push_back({{"name", a.name}, {"size", a.size}});
  return {{"axes", axes}, {"probs", dist.probs()}};
}

JointDistribution distribution_from_json(const json& j, bool renormalize) {
  std::vector<Alphabet> axes;
  for (const auto& a : need(j, "axes")) {
    if (!a.contains("name") || !a.contains("size"))
      throw ValidationError("each axis needs 'name' and 'size'");
    axes.push_back({a.at("name").get<std::string>(), a.at("size").get<int>()});
  }
  std::vector<double> probs = need(j, "probs").get<std::vector<double>>();
  return JointDistribution(std::move(axes), std::move(probs), renormalize);
}

json to_json(const MultiViewDataset& data) {
  json samples = json::array();
  for (const auto& s : data.samples)
    samples.push_back({{"views", s.views}, {"label", s.label}});
  return {{"m", data.m},           {"d", data.d},
          {"x_card", data.x_card}, {"y_card", data.y_card},
          {"seed", data.seed},     {"samples", samples}};
}

MultiViewDataset dataset_from_json(const json& j) {
  MultiViewDataset data;
  data.m = need(j, "m").get<int>();
  data.d = need(j, "d").get<int>();
  data.x_card = need(j, "x_card").get<int>();
  data.y_card = need(j, "y_card").get<int>();
  data.seed = get_or<std::uint64_t>(j, "seed", 0);
  for (const auto& s : need(j, "samples")) {
    MultiViewSample sample;
    sample.views = need(s, "views").get<std::vector<int>>();
    sample.label = need(s, "label").get<int>();
    data.samples.push_back(std::move(sample));
  }
  data.validate();
  return data;
}

json to_json(const GenerativeModel& model) {
  return {{"y_card", model.y_card},       {"p_y", model.p_y},
          {"m", model.m},                 {"d", model.d},
          {"coord_card", model.coord_card}, {"p_coord", model.p_coord},
          {"x_card", model.x_card},       {"theta", model.theta}};
}

GenerativeModel model_from_json(const json& j) {
  GenerativeModel m;
  m.y_card = need(j, "y_card").get<int>();
  m.p_y = need(j, "p_y").get<std::vector<double>>();
  m.m = need(j, "m").get<int>();
  m.d = need(j, "d").get<int>();
  m.coord_card = need(j, "coord_card").get<int>();
  m.p_coord = need(j, "p_coord").get<std::vector<double>>();
  m.x_card = need(j, "x_card").get<int>();
  m.theta = need(j, "theta").get<std::vector<int>>();
  m.validate();
  return m;
}

json to_json(const RepresentationFunction& rep) {
  json j = {{"m", rep.m},           {"x_card", rep.x_card}, {"c_card", rep.c_card},
            {"u_card", rep.u_card}, {"stochastic", rep.stochastic}};
  if (rep.stochastic)
    j["kernel"] = rep.kernel;
  else {
    j["c_table"] = rep.c_table;
    j["u_table"] = rep.u_table;
  }
  return j;
}

RepresentationFunction representation_from_json(const json& j) {
  RepresentationFunction rep;
  rep.m = need(j, "m").get<int>();
  rep.x_card = need(j, "x_card").get<int>();
  rep.c_card = need(j, "c_card").get<int>();
  rep.u_card = need(j, "u_card").get<int>();
  rep.stochastic = get_or(j, "stochastic", false);
  if (rep.stochastic) {
    rep.kernel = need(j, "kernel").get<std::vector<std::vector<std::vector<double>>>>();
  } else {
    rep.c_table = need(j, "c_table").get<std::vector<std::vector<int>>>();
    rep.u_table = need(j, "u_table").get<std::vector<std::vector<int>>>();
  }
  rep.validate();
  return rep;
}

json to_json(const InfoProfile& p) {
  return {{"h_c", p.h_c},
          {"h_u_sum", p.h_u_sum},
          {"mi_common_sum", p.mi_common_sum},
          {"mi_unique_sum", p.mi_unique_sum},
          {"mi_code_sum", p.mi_code_sum},
          {"cmi_sum", p.cmi_sum},
          {"renyi_phi", p.renyi_phi},
          {"h_c_given_x", p.h_c_given_x},
          {"h_u_given_x_sum", p.h_u_given_x_sum},
          {"h_z_given_x1_y", p.h_z_given_x1_y},
          {"c_phi", p.c_phi},
          {"y_card", p.y_card},
          {"mi_phi_s", opt_to(p.mi_phi_s)},
          {"mi_phi_u", opt_to(p.mi_phi_u)},
          {"mi_phi_usup", opt_to(p.mi_phi_usup)},
          {"h_phi_given_u", opt_to(p.h_phi_given_u)},
          {"h_phi_given_usup", opt_to(p.h_phi_given_usup)}};
}

InfoProfile profile_from_json(const json& j) {
  InfoProfile p;
  p.h_c = get_or(j, "h_c", 0.0);
  p.h_u_sum = get_or(j, "h_u_sum", 0.0);
  p.mi_common_sum = get_or(j, "mi_common_sum", 0.0);
  p.mi_unique_sum = get_or(j, "mi_unique_sum", 0.0);
  p.mi_code_sum = get_or(j, "mi_code_sum", 0.0);
  p.cmi_sum = get_or(j, "cmi_sum", 0.0);
  p.renyi_phi = get_or(j, "renyi_phi", 0.0);
  p.h_c_given_x = get_or(j, "h_c_given_x", 0.0);
  p.h_u_given_x_sum = get_or(j, "h_u_given_x_sum", 0.0);
  p.h_z_given_x1_y = get_or(j, "h_z_given_x1_y", 0.0);
  p.c_phi = get_or(j, "c_phi", 0.0);
  p.y_card = need(j, "y_card").get<int>();
  p.mi_phi_s = opt_from(j, "mi_phi_s");
  p.mi_phi_u = opt_from(j, "mi_phi_u");
  p.mi_phi_usup = opt_from(j, "mi_phi_usup");
  p.h_phi_given_u = opt_from(j, "h_phi_given_u");
  p.h_phi_given_usup = opt_from(j, "h_phi_given_usup");
  return p;
}

json to_json(const LossEnvelope& env) {
  return {{"r_x", env.r_x}, {"r_xy", env.r_xy}, {"r_s_x", env.r_s_x}, {"r_s_xy", env.r_s_xy}};
}

LossEnvelope envelope_from_json(const json& j) {
  LossEnvelope env;
  env.r_x = get_or(j, "r_x", 0.0);
  env.r_xy = get_or(j, "r_xy", 0.0);
  env.r_s_x = get_or(j, "r_s_x", 0.0);
  env.r_s_xy = get_or(j, "r_s_xy", 0.0);
  return env;
}

json params_to_json(const BoundParams& p, const LossEnvelope& env) {
  return {{"n", p.n},
          {"m", p.m},
          {"d", p.d},
          {"gamma", p.gamma},
          {"delta", p.delta},
          {"lambda", p.lambda},
          {"beta", p.beta},
          {"xi", opt_to(p.xi)},
          {"sigma_u", opt_to(p.sigma_u)},
          {"sup_loss_rms", opt_to(p.sup_loss_rms)},
          {"empirical_risk", p.empirical_risk},
          {"envelope", to_json(env)}};
}

std::pair<BoundParams, LossEnvelope> params_from_json(const json& j) {
  BoundParams p;
  p.n = need(j, "n").get<double>();
  p.m = need(j, "m").get<double>();
  p.d = get_or(j, "d", 1.0);
  p.gamma = get_or(j, "gamma", 1.0);
  p.delta = get_or(j, "delta", 0.05);
  p.lambda = get_or(j, "lambda", 0.1);
  p.beta = get_or(j, "beta", 0.3);
  p.xi = opt_from(j, "xi");
  p.sigma_u = opt_from(j, "sigma_u");
  p.sup_loss_rms = opt_from(j, "sup_loss_rms");
  p.empirical_risk = get_or(j, "empirical_risk", 0.0);
  LossEnvelope env = envelope_from_json(need(j, "envelope"));
  return {p, env};
}

json to_json(const BoundBreakdown& b) {
  json constants = json::object(), inputs = json::object();
  for (const auto& [k, v] : b.constants) constants[k] = v;
  for (const auto& [k, v] : b.inputs) inputs[k] = v;
  return {{"theorem", b.theorem},        {"bound", b.bound},
          {"info_term", b.info_term},    {"main_term", b.main_term},
          {"additive_term", b.additive_term}, {"constants", constants},
          {"inputs", inputs}};
}

void print_breakdown(const BoundBreakdown& b, std::ostream& out, bool bits) {
  double unit = bits ? 1.0 / 0.6931471805599453 : 1.0;
  const char* suffix = bits ? " (bits)" : " (nats)";
  out << std::fixed << std::setprecision(6);
  out << "theorem " << b.theorem << "\n";
  out << std::left << std::setw(22) << "  bound" << b.bound << "\n";
  out << std::left << std::setw(22) << "  main term" << b.main_term << "\n";
  out << std::left << std::setw(22) << "  additive term" << b.additive_term << "\n";
  out << std::left << std::setw(22) << ("  info term" + std::string(suffix))
      << b.info_term * unit << "\n";
  for (const auto& [k, v] : b.constants)
    out << "  " << std::left << std::setw(20) << k << v << "\n";
}

json to_json(const ExperimentConfig& c) {
  const char* mode = "gaussian-mixture";
  if (c.generator.mode == GeneratorSpec::Mode::discrete_exact) mode = "discrete-exact";
  if (c.generator.mode == GeneratorSpec::Mode::signal_noise) mode = "signal-noise";
  const char* objective =
      c.trainer.objective == Task::classification ? "classification" : "reconstruction";
  return {{"generator",
           {{"mode", mode},
            {"y_card", c.generator.y_card},
            {"m", c.generator.m},
            {"d", c.generator.d},
            {"coord_card", c.generator.coord_card},
            {"x_card", c.generator.x_card},
            {"class_stride", c.generator.class_stride},
            {"flip_prob", c.generator.flip_prob},
            {"p_y", c.generator.p_y},
            {"gauss_sep", c.generator.gauss_sep}}},
          {"n_grid", c.n_grid},
          {"m_grid", c.m_grid},
          {"replicates", c.replicates},
          {"gamma", c.gamma},
          {"delta", c.delta},
          {"lambda", c.lambda},
          {"beta_scale", c.beta_scale},
          {"trainer",
           {{"code_levels", c.trainer.code_levels},
            {"c_levels", c.trainer.c_levels},
            {"hidden", c.trainer.hidden},
            {"penalty_scale", c.trainer.penalty_scale},
            {"label_head_reads_unique", c.trainer.label_head_reads_unique},
            {"lr", c.trainer.lr},
            {"epochs", c.trainer.epochs},
            {"penalty_weight", c.trainer.penalty_weight},
            {"weight_decay", c.trainer.weight_decay},
            {"objective", objective}}},
          {"master_seed", c.master_seed},
          {"correlation",
           {{"width_grid", c.width_grid},
            {"penalty_grid", c.penalty_grid},
            {"decay_grid", c.decay_grid},
            {"seeds", c.corr_seeds},
            {"draws", c.corr_draws},
            {"n", c.corr_n},
            {"phi_replicates", c.phi_replicates},
            {"probe_count", c.probe_count}}}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("generator")) {
    const json& g = j.at("generator");
    std::string mode = get_or<std::string>(g, "mode", "discrete-exact");
    if (mode == "discrete-exact")
      c.generator.mode = GeneratorSpec::Mode::discrete_exact;
    else if (mode == "signal-noise")
      c.generator.mode = GeneratorSpec::Mode::signal_noise;
    else if (mode == "gaussian-mixture")
      c.generator.mode = GeneratorSpec::Mode::gaussian_mixture;
    else
      throw ValidationError(
          "generator.mode must be 'discrete-exact', 'signal-noise' or 'gaussian-mixture'");
    c.generator.y_card = get_or(g, "y_card", c.generator.y_card);
    c.generator.m = get_or(g, "m", c.generator.m);
    c.generator.d = get_or(g, "d", c.generator.d);
    c.generator.coord_card = get_or(g, "coord_card", c.generator.coord_card);
    c.generator.x_card = get_or(g, "x_card", c.generator.x_card);
    c.generator.class_stride = get_or(g, "class_stride", c.generator.class_stride);
    c.generator.flip_prob = get_or(g, "flip_prob", c.generator.flip_prob);
    c.generator.p_y = get_or(g, "p_y", c.generator.p_y);
    c.generator.gauss_sep = get_or(g, "gauss_sep", c.generator.gauss_sep);
  }
  c.n_grid = get_or(j, "n_grid", c.n_grid);
  c.m_grid = get_or(j, "m_grid", c.m_grid);
  c.replicates = get_or(j, "replicates", c.replicates);
  c.gamma = get_or(j, "gamma", c.gamma);
  c.delta = get_or(j, "delta", c.delta);
  c.lambda = get_or(j, "lambda", c.lambda);
  c.beta_scale = get_or(j, "beta_scale", c.beta_scale);
  if (j.contains("trainer")) {
    const json& t = j.at("trainer");
    c.trainer.code_levels = get_or(t, "code_levels", c.trainer.code_levels);
    c.trainer.c_levels = get_or(t, "c_levels", c.trainer.c_levels);
    c.trainer.hidden = get_or(t, "hidden", c.trainer.hidden);
    c.trainer.penalty_scale = get_or(t, "penalty_scale", c.trainer.penalty_scale);
    c.trainer.label_head_reads_unique =
        get_or(t, "label_head_reads_unique", c.trainer.label_head_reads_unique);
    c.trainer.lr = get_or(t, "lr", c.trainer.lr);
    c.trainer.epochs = get_or(t, "epochs", c.trainer.epochs);
    c.trainer.penalty_weight = get_or(t, "penalty_weight", c.trainer.penalty_weight);
    c.trainer.weight_decay = get_or(t, "weight_decay", c.trainer.weight_decay);
    std::string objective = get_or<std::string>(t, "objective", "classification");
    if (objective == "classification")
      c.trainer.objective = Task::classification;
    else if (objective == "reconstruction")
      c.trainer.objective = Task::reconstruction;
    else
      throw ValidationError("trainer.objective must be 'classification' or 'reconstruction'");
  }
  c.master_seed = get_or<std::uint64_t>(j, "master_seed", c.master_seed);
  if (j.contains("correlation")) {
    const json& k = j.at("correlation");
    c.width_grid = get_or(k, "width_grid", c.width_grid);
    c.penalty_grid = get_or(k, "penalty_grid", c.penalty_grid);
    c.decay_grid = get_or(k, "decay_grid", c.decay_grid);
    c.corr_seeds = get_or(k, "seeds", c.corr_seeds);
    c.corr_draws = get_or(k, "draws", c.corr_draws);
    c.corr_n = get_or(k, "n", c.corr_n);
    c.phi_replicates = get_or(k, "phi_replicates", c.phi_replicates);
    c.probe_count = get_or(k, "probe_count", c.probe_count);
  }
  return c;
}

void write_report_csv(const StudyReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  for (std::size_t i = 0; i < report.columns.size(); ++i)
    out << report.columns[i] << (i + 1 < report.columns.size() ? "," : "\n");
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (std::isnan(row[i]))
        out << "";  // not-applicable cell
      else
        out << row[i];
      out << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

json report_summary_json(const StudyReport& report, const ExperimentConfig& config) {
  json coverage = json::object(), slopes = json::object(), pearson_tbl = json::object();
  for (const auto& [k, v] : report.coverage)
    coverage[k] = std::isnan(v) ? json(nullptr) : json(v);
  for (const auto& [k, v] : report.slopes) slopes[k] = v;
  for (const auto& [k, v] : report.pearson_table)
    pearson_tbl[k] = std::isnan(v) ? json(nullptr) : json(v);
  return {{"kind", report.kind},       {"rows", report.rows.size()},
          {"coverage", coverage},      {"slopes", slopes},
          {"pearson", pearson_tbl},    {"config", to_json(config)}};
}

void write_plot_series(const StudyReport& report, const std::string& dir) {
  if (report.plot_series.empty()) return;
  std::filesystem::create_directories(dir);
  for (const auto& [name, series] : report.plot_series) {
    std::ofstream out(dir + "/" + name + ".txt");
    if (!out) throw ValidationError("cannot open plot file for '" + name + "'");
    out << std::setprecision(17);
    for (const auto& [x, y] : series) out << x << " " << y << "\n";
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

}  // namespace mvgb

// udwlab: figure tables, channel analysis, Wightman evaluation and parameter
// sweeps for the qubit channel induced by an instantaneously coupled detector.
// Exit codes: 0 ok, 2 invalid input, 3 quadrature failure, 4 truncation too
// small, 1 anything else.

#include <CLI11.hpp>
#include <json.hpp>

#include <udw/channel.hpp>
#include <udw/field.hpp>
#include <udw/mode_oracle.hpp>
#include <udw/qmatrix.hpp>
#include <udw/recovery.hpp>
#include <udw/sweep.hpp>

#include <clocale>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw CLI::ValidationError(what, "bad number '" + text + "'");
  }
  if (used != text.size())
    throw CLI::ValidationError(what, "bad number '" + text + "'");
  return v;
}

struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  std::size_t count = 2;
  bool log_scale = false;
};

GridSpec parse_grid(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 3 && parts.size() != 4)
    throw CLI::ValidationError("--grid", "expected start:stop:count[:log]");
  GridSpec g;
  g.start = parse_double(parts[0], "--grid");
  g.stop = parse_double(parts[1], "--grid");
  const double raw_count = parse_double(parts[2], "--grid");
  if (!(raw_count >= 1.0) || raw_count != std::floor(raw_count))
    throw CLI::ValidationError("--grid", "count must be a positive integer");
  if (raw_count > 1e6)
    throw CLI::ValidationError("--grid", "count must be <= 1e6");
  g.count = static_cast<std::size_t>(raw_count);
  if (parts.size() == 4) {
    if (parts[3] != "log")
      throw CLI::ValidationError("--grid", "scale suffix must be 'log'");
    g.log_scale = true;
  }
  if (g.log_scale && (!(g.start > 0.0) || !(g.stop > 0.0)))
    throw CLI::ValidationError("--grid", "log grids need positive endpoints");
  return g;
}

// Endpoints are pinned exactly so single rows like p = 1 come out clean.
std::vector<double> materialize(const GridSpec& g) {
  std::vector<double> v(g.count);
  if (g.count == 1) {
    v[0] = g.start;
    return v;
  }
  const double n1 = static_cast<double>(g.count - 1);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double s = static_cast<double>(i) / n1;
    v[i] = g.log_scale
               ? std::exp(std::log(g.start) +
                          (std::log(g.stop) - std::log(g.start)) * s)
               : g.start + (g.stop - g.start) * s;
  }
  v.front() = g.start;
  v.back() = g.stop;
  return v;
}

Eigen::Vector3d parse_vec3(const std::string& text, const char* what) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 3)
    throw CLI::ValidationError(what, "expected nx,ny,nz");
  return {parse_double(parts[0], what), parse_double(parts[1], what),
          parse_double(parts[2], what)};
}

Eigen::Vector3d parse_axis(const std::string& text) {
  if (text == "x") return {1.0, 0.0, 0.0};
  if (text == "y") return {0.0, 1.0, 0.0};
  if (text == "z") return {0.0, 0.0, 1.0};
  Eigen::Vector3d n = parse_vec3(text, "--axis");
  const double len = n.norm();
  if (!(len > 0.0) || !std::isfinite(len))
    throw CLI::ValidationError("--axis", "axis must have positive length");
  return n / len;
}

udw::QuadratureConfig quad_config() {
  udw::QuadratureConfig cfg;
  if (const char* s = std::getenv("UDWLAB_QUAD_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
      throw CLI::ValidationError("UDWLAB_QUAD_TOL", "must be a positive number");
    cfg.rel_tol = v;
  }
  return cfg;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw udw::DomainError("cannot open output file " + path);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw udw::Error("short write to " + path);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void emit_table(const Table& t, const std::string& format,
                const std::string& out_path) {
  std::string text;
  if (format == "json") {
    ordered_json j;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    text = j.dump(2);
    text.push_back('\n');
  } else {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c) text.push_back(',');
      text += t.columns[c];
    }
    text.push_back('\n');
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) text.push_back(',');
        text += fmt(row[c]);
      }
      text.push_back('\n');
    }
  }
  write_output(text, out_path);
}

void emit_report(const ordered_json& rep, const std::string& out_path) {
  std::string text = rep.dump(2);
  text.push_back('\n');
  write_output(text, out_path);
}

ordered_json matrix_json(const udw::Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

struct CommonOpts {
  std::string out;
  std::string format = "csv";
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "Output path (default stdout)");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", o.jobs, "Parallel row workers")
      ->check(CLI::Range(1, 4096));
}

void run_fig1(const GridSpec& grid, const CommonOpts& o) {
  const std::vector<double> ps = materialize(grid);
  Table t;
  t.columns = {"p", "entropy_diff", "petz_bound"};
  t.rows.resize(ps.size());
  udw::run_rows(ps.size(), o.jobs, [&](std::size_t i) {
    const auto rows = udw::recovery_gap_ground({ps[i]});
    t.rows[i] = {rows[0].p, rows[0].entropy_diff, rows[0].bound};
  });
  emit_table(t, o.format, o.out);
}

void run_fig2(const std::vector<double>& betas, const GridSpec& grid,
              const CommonOpts& o) {
  if (betas.empty())
    throw CLI::ValidationError("--beta", "need at least one value");
  const std::vector<double> ps = materialize(grid);
  Table t;
  t.columns = {"beta_omega",       "p",    "entropy_diff",      "bound",
               "closed_form_diff", "closed_form_fidelity"};
  t.rows.resize(betas.size() * ps.size());
  udw::run_rows(t.rows.size(), o.jobs, [&](std::size_t idx) {
    const double beta = betas[idx / ps.size()];
    const double p = ps[idx % ps.size()];
    const auto rows = udw::recovery_gap_thermal(beta, {p});
    const auto& r = rows[0];
    t.rows[idx] = {beta,   r.p,
                   r.entropy_diff, r.bound,
                   r.closed_form_diff, r.closed_form_fidelity};
  });
  emit_table(t, o.format, o.out);
}

void run_fig3(const GridSpec& grid, const std::vector<double>& masses,
              double T, double lambda, const CommonOpts& o) {
  if (masses.empty())
    throw CLI::ValidationError("--mass", "need at least one value");
  if (!(T > 0.0)) throw CLI::ValidationError("--T", "must be positive");
  if (lambda < 0.0)
    throw CLI::ValidationError("--lambda", "must be non-negative");
  const std::vector<double> thetas = materialize(grid);
  for (double theta : thetas)
    if (!(theta > 0.0))
      throw CLI::ValidationError("--grid", "temperatures must be positive");
  const udw::QuadratureConfig qc = quad_config();

  Table t;
  t.columns = {"temperature", "mass", "W", "S2_field"};
  t.rows.resize(masses.size() * thetas.size());
  udw::run_rows(t.rows.size(), o.jobs, [&](std::size_t idx) {
    const double mass = masses[idx / thetas.size()];
    const double theta = thetas[idx % thetas.size()];
    udw::SmearingProfile prof;
    prof.coupling = lambda;
    prof.switching_width = T;
    prof.mass = mass;
    prof.beta = T / theta;  // theta is the dimensionless temperature T/beta
    const double w = udw::smeared_wightman(prof, qc);
    t.rows[idx] = {theta, mass, w, udw::field_renyi2(w)};
  });
  emit_table(t, o.format, o.out);
}

struct AnalyzeOpts {
  double nu_raw = 0.0;
  std::string state = "vacuum";
  double W = 0.0;
  double E = 0.0;
  double zeta_E = 0.0;
  double zeta_W = 0.0;
  double zeta_overlap = 0.0;
  std::string axis = "x";
  std::string input_bloch = "0,0,-1";
};

udw::FieldKind parse_field_kind(const std::string& s) {
  if (s == "vacuum") return udw::FieldKind::Vacuum;
  if (s == "thermal") return udw::FieldKind::Thermal;
  if (s == "coherent") return udw::FieldKind::Coherent;
  if (s == "squeezed") return udw::FieldKind::Squeezed;
  if (s == "custom") return udw::FieldKind::Custom;
  throw CLI::ValidationError("--state", "unknown field state '" + s + "'");
}

void run_analyze(const AnalyzeOpts& a, bool nu_given, const CommonOpts& o) {
  const Eigen::Vector3d axis = parse_axis(a.axis);

  udw::ChannelParams params(udw::Complex(1.0, 0.0), axis);
  double w_eff = 0.0;
  if (nu_given) {
    params = udw::ChannelParams(udw::Complex(a.nu_raw, 0.0), axis);
    const double mod = std::abs(a.nu_raw);
    w_eff = mod > 0.0 ? -0.5 * std::log(mod)
                      : std::numeric_limits<double>::infinity();
  } else {
    udw::FieldStateSpec spec;
    spec.kind = parse_field_kind(a.state);
    spec.W_ff = a.W;
    spec.E_alpha_f = a.E;
    spec.E_zeta_f = a.zeta_E;
    spec.W_zeta_zeta = a.zeta_W;
    spec.ReW_f_zeta = a.zeta_overlap;
    params = udw::to_channel_params(spec, axis);
    w_eff = spec.kind == udw::FieldKind::Squeezed ? udw::squeezed_wightman(spec)
                                                  : spec.W_ff;
  }

  const udw::KrausSet kraus = udw::build_channel(params);
  const Eigen::Vector3d r = parse_vec3(a.input_bloch, "--input-bloch");
  if (r.norm() > 1.0 + 1e-12)
    throw CLI::ValidationError("--input-bloch", "Bloch vector longer than 1");
  const udw::DensityMatrix input(udw::bloch_state_matrix(r));
  const udw::DensityMatrix output = udw::apply_channel(kraus, input);
  const udw::DensityMatrix choi = udw::choi_matrix(kraus);
  const udw::Spectrum choi_spec = udw::eig_hermitian(choi.mat());
  const udw::MixedUnitaryDecomposition mix =
      udw::mixed_unitary_decomposition(params);
  const udw::FixedPointFamily fixed = udw::fixed_points(params);
  const Eigen::Vector3d out_bloch = udw::bloch_vector(output.mat());

  ordered_json rep;
  rep["nu_re"] = params.nu.real();
  rep["nu_im"] = params.nu.imag();
  rep["p"] = (1.0 + params.nu.real()) / 2.0;
  rep["axis"] = {axis.x(), axis.y(), axis.z()};
  rep["kraus_labels"] = kraus.labels;
  ordered_json ops = ordered_json::array();
  for (const udw::Matrix& op : kraus.ops) ops.push_back(matrix_json(op));
  rep["kraus_ops"] = ops;
  rep["mixed_unitary_probabilities"] = mix.probabilities;
  rep["mixed_unitary_labels"] = mix.labels;
  rep["choi_eigenvalues"] = {choi_spec.eigenvalues(0), choi_spec.eigenvalues(1),
                             choi_spec.eigenvalues(2),
                             choi_spec.eigenvalues(3)};
  rep["negativity"] = udw::negativity(choi);
  rep["entanglement_breaking"] = udw::is_entanglement_breaking(kraus);
  rep["fixed_point_axis"] = {fixed.axis.x(), fixed.axis.y(), fixed.axis.z()};
  rep["cohering_power"] =
      udw::cohering_power(udw::Complex(params.nu.imag(), 0.0));
  rep["decohering_power"] = 1.0 - std::abs(params.nu.real());
  rep["field_renyi2"] = udw::field_renyi2(w_eff);
  rep["input_bloch"] = {r.x(), r.y(), r.z()};
  rep["output_bloch"] = {out_bloch.x(), out_bloch.y(), out_bloch.z()};
  rep["output_entropy"] = udw::von_neumann_entropy(output);
  emit_report(rep, o.out);
}

void run_wightman(double lambda, double T, bool beta_given, double beta,
                  double mass, double sigma_x, const CommonOpts& o) {
  udw::SmearingProfile prof;
  prof.coupling = lambda;
  prof.switching_width = T;
  prof.mass = mass;
  if (beta_given) prof.beta = beta;
  if (sigma_x < 0.0)
    throw CLI::ValidationError("--sigma-x", "must be non-negative");
  if (sigma_x > 0.0) {
    prof.spatial = udw::SpatialProfile::GaussianBall;
    prof.sigma_x = sigma_x;
  }
  const udw::WightmanResult res =
      udw::smeared_wightman_detailed(prof, quad_config());
  const double nu = udw::nu_from_wightman(res.value);
  const double p = (1.0 + nu) / 2.0;
  if (o.format == "json") {
    ordered_json rep;
    rep["W"] = res.value;
    rep["error_estimate"] = res.error_estimate;
    rep["cutoff_k"] = res.cutoff_k;
    rep["panels"] = res.panels;
    rep["nu"] = nu;
    rep["p"] = p;
    emit_report(rep, o.out);
  } else {
    Table t;
    t.columns = {"W", "error_estimate", "cutoff_k", "panels", "nu", "p"};
    t.rows = {{res.value, res.error_estimate, res.cutoff_k,
               static_cast<double>(res.panels), nu, p}};
    emit_table(t, "csv", o.out);
  }
}

struct OracleOpts {
  double r_f = 1.0;
  double probe_u = 0.3;
  double probe_v = 0.7;
  int truncation = 64;
  std::string state = "vacuum";
  double beta_mode = 1.0;
  double z_re = 0.4;
  double z_im = 0.0;
  double squeeze_r = 0.4;
  std::string axis = "x";
  std::string input_bloch = "0,0,-1";
};

udw::ModeStateKind parse_mode_kind(const std::string& s) {
  if (s == "vacuum") return udw::ModeStateKind::Vacuum;
  if (s == "thermal") return udw::ModeStateKind::Thermal;
  if (s == "coherent") return udw::ModeStateKind::Coherent;
  if (s == "squeezed") return udw::ModeStateKind::Squeezed;
  throw CLI::ValidationError("--mode-state", "unknown mode state '" + s + "'");
}

// Closed-form nu predictions the truncated-Fock numbers are held against.
udw::Complex analytic_mode_nu(const udw::OracleConfig& cfg) {
  const double r2 = cfg.r_f * cfg.r_f;
  switch (cfg.state) {
    case udw::ModeStateKind::Vacuum:
      return std::exp(-r2);
    case udw::ModeStateKind::Thermal:
      return std::exp(-r2 / std::tanh(cfg.beta_mode / 2.0));
    case udw::ModeStateKind::Coherent:
      return std::polar(std::exp(-r2), 2.0 * std::sqrt(2.0) *
                                           cfg.coherent_z.real() * cfg.r_f);
    case udw::ModeStateKind::Squeezed:
      return std::exp(-r2 * std::exp(-2.0 * cfg.squeeze_r));
  }
  throw udw::Error("analytic_mode_nu: unknown state kind");
}

void run_oracle(const OracleOpts& oo, const CommonOpts& o) {
  udw::OracleConfig cfg;
  cfg.r_f = oo.r_f;
  cfg.probe_u = oo.probe_u;
  cfg.probe_v = oo.probe_v;
  cfg.truncation = oo.truncation;
  cfg.state = parse_mode_kind(oo.state);
  cfg.beta_mode = oo.beta_mode;
  cfg.coherent_z = udw::Complex(oo.z_re, oo.z_im);
  cfg.squeeze_r = oo.squeeze_r;

  const Eigen::Vector3d axis = parse_axis(oo.axis);
  const Eigen::Vector3d r = parse_vec3(oo.input_bloch, "--input-bloch");
  if (r.norm() > 1.0 + 1e-12)
    throw CLI::ValidationError("--input-bloch", "Bloch vector longer than 1");
  const udw::DensityMatrix rho_d(udw::bloch_state_matrix(r));

  const udw::Complex nu_pred = analytic_mode_nu(cfg);
  const udw::Complex nu_oracle = udw::oracle_nu(cfg);

  const udw::DensityMatrix out_oracle = udw::oracle_channel(cfg, rho_d, axis);
  const udw::DensityMatrix out_channel =
      udw::apply_channel(udw::build_channel(udw::ChannelParams(nu_pred, axis)),
                         rho_d);
  const double channel_dev =
      (out_oracle.mat() - out_channel.mat()).cwiseAbs().maxCoeff();

  udw::OracleConfig base_cfg = cfg;
  base_cfg.r_f = 0.0;
  const udw::Complex base = udw::oracle_field_expectation(base_cfg, rho_d, axis);
  const double a = (udw::pauli_from_axis(axis) * rho_d.mat()).trace().real();
  const double E = cfg.r_f * cfg.probe_v;
  const udw::Complex evolved_pred = udw::evolved_weyl_expectation(base, E, a);
  const udw::Complex evolved_oracle =
      udw::oracle_field_expectation(cfg, rho_d, axis);
  const double modulation_dev = std::abs(evolved_oracle - evolved_pred);

  const udw::OracleEntropies ent = udw::oracle_entropies(cfg, rho_d, axis);
  const double mod_nu = std::abs(nu_pred);
  const double w_pred = mod_nu > 0.0 ? -0.5 * std::log(mod_nu)
                                     : std::numeric_limits<double>::infinity();
  const double s2_closed = udw::field_renyi2(w_pred);

  ordered_json rep;
  rep["truncation"] = cfg.truncation;
  rep["r_f"] = cfg.r_f;
  rep["probe_u"] = cfg.probe_u;
  rep["probe_v"] = cfg.probe_v;
  rep["mode_state"] = oo.state;
  rep["nu_oracle_re"] = nu_oracle.real();
  rep["nu_oracle_im"] = nu_oracle.imag();
  rep["nu_analytic_re"] = nu_pred.real();
  rep["nu_analytic_im"] = nu_pred.imag();
  rep["nu_dev"] = std::abs(nu_oracle - nu_pred);
  rep["channel_max_dev"] = channel_dev;
  rep["weyl_base_re"] = base.real();
  rep["weyl_base_im"] = base.imag();
  rep["weyl_oracle_re"] = evolved_oracle.real();
  rep["weyl_oracle_im"] = evolved_oracle.imag();
  rep["weyl_predicted_re"] = evolved_pred.real();
  rep["weyl_predicted_im"] = evolved_pred.imag();
  rep["modulation_dev"] = modulation_dev;
  rep["s2_detector"] = ent.S2_detector;
  rep["s2_mode"] = ent.S2_mode;
  rep["s2_detector_mode_dev"] = std::abs(ent.S2_detector - ent.S2_mode);
  rep["s2_closed_form"] = s2_closed;
  rep["s2_closed_form_dev"] = std::abs(ent.S2_detector - s2_closed);
  rep["max_deviation"] =
      std::max({std::abs(nu_oracle - nu_pred), channel_dev, modulation_dev});
  emit_report(rep, o.out);
}

void run_sweep(const GridSpec& grid, const std::string& axis_text,
               const CommonOpts& o) {
  const std::vector<double> ws = materialize(grid);
  const Eigen::Vector3d axis = parse_axis(axis_text);
  udw::Matrix ground = udw::Matrix::Zero(2, 2);
  ground(1, 1) = 1.0;
  const udw::DensityMatrix rho_g(ground);

  Table t;
  t.columns = {"W",          "nu",        "p",
               "negativity", "entanglement_breaking", "decohering_power",
               "field_renyi2", "ground_output_entropy"};
  t.rows.resize(ws.size());
  udw::run_rows(ws.size(), o.jobs, [&](std::size_t i) {
    const double w = ws[i];
    const double nu = udw::nu_from_wightman(w);
    const udw::ChannelParams params(udw::Complex(nu, 0.0), axis);
    const udw::KrausSet kraus = udw::build_channel(params);
    const udw::DensityMatrix choi = udw::choi_matrix(kraus);
    t.rows[i] = {w,
                 nu,
                 (1.0 + nu) / 2.0,
                 udw::negativity(choi),
                 udw::is_entanglement_breaking(kraus) ? 1.0 : 0.0,
                 udw::decohering_power(w),
                 udw::field_renyi2(w),
                 udw::von_neumann_entropy(udw::apply_channel(kraus, rho_g))};
  });
  emit_table(t, o.format, o.out);
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{
      "Channel laboratory for an instantaneously coupled two-level detector: "
      "figure tables, channel analysis, Wightman quadrature, sweeps"};
  app.fallthrough();  // lets --config/--help trail the subcommand name
  app.set_config("--config", "",
                 "Config file (flags > file > defaults; TOML-style sections "
                 "per subcommand)");
  app.require_subcommand(1);

  // fig1
  auto* fig1 = app.add_subcommand(
      "fig1", "Ground-state recovery gap: p, entropy_diff, petz_bound");
  std::string fig1_grid = "0.500001:1:200";
  CommonOpts fig1_common;
  fig1->add_option("--grid", fig1_grid, "p grid start:stop:count[:log]");
  add_common(fig1, fig1_common);
  fig1->callback([&] { run_fig1(parse_grid(fig1_grid), fig1_common); });

  // fig2
  auto* fig2 = app.add_subcommand(
      "fig2", "Thermal recovery gap with the printed closed forms alongside");
  std::vector<double> fig2_betas = {0.1, 1.0, 5.0};
  std::string fig2_grid = "0.500001:1:200";
  CommonOpts fig2_common;
  fig2->add_option("--beta", fig2_betas, "beta*Omega values")->delimiter(',');
  fig2->add_option("--grid", fig2_grid, "p grid start:stop:count[:log]");
  add_common(fig2, fig2_common);
  fig2->callback(
      [&] { run_fig2(fig2_betas, parse_grid(fig2_grid), fig2_common); });

  // fig3
  auto* fig3 = app.add_subcommand(
      "fig3", "Field Renyi-2 vs dimensionless temperature, per mass");
  std::string fig3_grid = "0.01:100:40:log";
  std::vector<double> fig3_masses = {0.0, 1.0, 5.0};
  double fig3_T = 1.0;
  double fig3_lambda = 0.1;
  CommonOpts fig3_common;
  fig3->add_option("--grid", fig3_grid,
                   "temperature grid start:stop:count[:log], in units of 1/T");
  fig3->add_option("--mass", fig3_masses, "field masses")->delimiter(',');
  fig3->add_option("--T", fig3_T, "Gaussian switching width");
  fig3->add_option("--lambda", fig3_lambda, "coupling");
  add_common(fig3, fig3_common);
  fig3->callback([&] {
    run_fig3(parse_grid(fig3_grid), fig3_masses, fig3_T, fig3_lambda,
             fig3_common);
  });

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "Full channel report for a field state or raw nu (JSON)");
  AnalyzeOpts an;
  CommonOpts an_common;
  auto* nu_opt = analyze->add_option("--nu", an.nu_raw, "raw nu in [-1, 1]");
  analyze->add_option("--state", an.state,
                      "field state: vacuum|thermal|coherent|squeezed|custom");
  analyze->add_option("--W", an.W, "W(f,f)");
  analyze->add_option("--E", an.E, "coherent pairing E(alpha~, f)");
  analyze->add_option("--zeta-E", an.zeta_E, "squeezed pairing E(zeta~, f)");
  analyze->add_option("--zeta-W", an.zeta_W, "W0(zeta~, zeta~)");
  analyze->add_option("--zeta-overlap", an.zeta_overlap, "Re W0(f, zeta~)");
  analyze->add_option("--axis", an.axis, "monopole axis x|y|z|nx,ny,nz");
  analyze->add_option("--input-bloch", an.input_bloch,
                      "detector input Bloch vector");
  add_common(analyze, an_common);
  analyze->callback(
      [&] { run_analyze(an, nu_opt->count() > 0, an_common); });

  // wightman
  auto* wightman = app.add_subcommand(
      "wightman", "Smeared Wightman value with convergence metadata");
  double wi_lambda = 1.0, wi_T = 1.0, wi_beta = 1.0, wi_mass = 0.0,
         wi_sigma = 0.0;
  CommonOpts wi_common;
  wightman->add_option("--lambda", wi_lambda, "coupling");
  wightman->add_option("--T", wi_T, "Gaussian switching width");
  auto* beta_opt =
      wightman->add_option("--beta", wi_beta, "inverse temperature (omit for vacuum)");
  wightman->add_option("--mass", wi_mass, "field mass");
  wightman->add_option("--sigma-x", wi_sigma,
                       "Gaussian ball width (0 = pointlike)");
  add_common(wightman, wi_common);
  wightman->callback([&] {
    run_wightman(wi_lambda, wi_T, beta_opt->count() > 0, wi_beta, wi_mass,
                 wi_sigma, wi_common);
  });

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "Truncated-Fock cross-check report (JSON)");
  OracleOpts oc;
  CommonOpts oc_common;
  oracle->add_option("--rf", oc.r_f, "phi_f coefficient of x");
  oracle->add_option("--probe-u", oc.probe_u, "probe x coefficient");
  oracle->add_option("--probe-v", oc.probe_v, "probe p coefficient");
  oracle->add_option("--N", oc.truncation, "Fock truncation");
  oracle->add_option("--mode-state", oc.state,
                     "vacuum|thermal|coherent|squeezed");
  oracle->add_option("--beta-mode", oc.beta_mode, "thermal mode beta");
  oracle->add_option("--z-re", oc.z_re, "coherent amplitude Re z");
  oracle->add_option("--z-im", oc.z_im, "coherent amplitude Im z");
  oracle->add_option("--squeeze-r", oc.squeeze_r, "squeeze parameter");
  oracle->add_option("--axis", oc.axis, "monopole axis");
  oracle->add_option("--input-bloch", oc.input_bloch,
                     "detector input Bloch vector");
  add_common(oracle, oc_common);
  oracle->callback([&] { run_oracle(oc, oc_common); });

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Channel property sweep over a W(f,f) grid");
  std::string sweep_grid = "0.0001:10:100:log";
  std::string sweep_axis = "x";
  CommonOpts sweep_common;
  sweep->add_option("--grid", sweep_grid, "W grid start:stop:count[:log]");
  sweep->add_option("--axis", sweep_axis, "monopole axis");
  add_common(sweep, sweep_common);
  sweep->callback(
      [&] { run_sweep(parse_grid(sweep_grid), sweep_axis, sweep_common); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const udw::QuadratureNoConvergence& e) {
    std::cerr << "quadrature failure: " << e.what() << '\n';
    return 3;
  } catch (const udw::TruncationTooSmall& e) {
    std::cerr << "truncation too small: " << e.what() << '\n';
    return 4;
  } catch (const udw::Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

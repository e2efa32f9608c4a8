// Acceptance gate. Each numbered check prints exactly one [PASS]/[FAIL] line
// with the measured numbers and its tolerance; the exit code is the number of
// failed checks. The CLI checks drive the binary named by UDWLAB_BIN.

#include <udw/channel.hpp>
#include <udw/field.hpp>
#include <udw/mode_oracle.hpp>
#include <udw/qmatrix.hpp>
#include <udw/recovery.hpp>

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using nlohmann::json;
using udw::ChannelParams;
using udw::Complex;
using udw::DensityMatrix;
using udw::KrausSet;
using udw::Matrix;

namespace {

const Eigen::Vector3d kX{1.0, 0.0, 0.0};
int failures = 0;

void report(int idx, bool pass, const std::string& detail) {
  std::printf("%s %d: %s\n", pass ? "[PASS]" : "[FAIL]", idx, detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct RunResult {
  int status = -1;
  std::string out;
  double seconds = 0.0;
};

RunResult run_cli(const std::string& args) {
  RunResult res;
  const char* bin = std::getenv("UDWLAB_BIN");
  if (!bin) return res;
  const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  const auto t0 = std::chrono::steady_clock::now();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
  const int raw = pclose(pipe);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return res;
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
  v.back() = b;
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i)
    v[i] = std::exp(la + (lb - la) * static_cast<double>(i) / (n - 1));
  return v;
}

// 1: the massless pointlike vacuum value lambda^2/(4 pi), via the CLI, for
// three switching widths, each under a second.
void check_wightman_closed_form() {
  const double want = 1.0 / (4.0 * M_PI);
  double max_dev = 0.0, max_sec = 0.0;
  bool ok = true;
  for (double T : {0.1, 1.0, 10.0}) {
    const RunResult r =
        run_cli("wightman --lambda 1 --T " + fmt(T) + " --format json");
    if (r.status != 0) {
      ok = false;
      break;
    }
    const double w = json::parse(r.out)["W"].get<double>();
    max_dev = std::max(max_dev, std::abs(w - want));
    max_sec = std::max(max_sec, r.seconds);
  }
  ok = ok && max_dev <= 1e-8 && max_sec < 1.0;
  report(1, ok,
         "wightman closed form: max dev " + fmt(max_dev) +
             " (tol 1e-8), slowest run " + fmt(max_sec) + " s (limit 1)");
}

// 2: detector Renyi-2 after the channel equals the field-side closed form.
void check_entropy_production_equality() {
  Matrix g = Matrix::Zero(2, 2);
  g(1, 1) = 1.0;
  const DensityMatrix ground(g);
  double max_dev = 0.0;
  for (double w : logspace(1e-4, 10.0, 50)) {
    const KrausSet k = udw::build_channel(
        ChannelParams(Complex(udw::nu_from_wightman(w), 0.0), kX));
    const double s2 = udw::renyi_entropy(udw::apply_channel(k, ground), 2.0);
    const double closed = 1.0 - std::log2(1.0 + std::exp(-4.0 * w));
    max_dev = std::max(max_dev, std::abs(s2 - closed));
  }
  report(2, max_dev <= 1e-12,
         "entropy production equality on 50 log-spaced W: max dev " +
             fmt(max_dev) + " (tol 1e-12)");
}

// 3: field Renyi-2 curve endpoints and monotonicity at lambda = 0.1.
void check_fig3_shape() {
  const RunResult r =
      run_cli("fig3 --mass 0 --lambda 0.1 --grid 0.01:100:40:log");
  if (r.status != 0) {
    report(3, false, "fig3 run failed with exit " + std::to_string(r.status));
    return;
  }
  const auto rows = parse_csv_rows(r.out);
  const double low = rows.front()[3], high = rows.back()[3];
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][3] < rows[i - 1][3] - 1e-7) monotone = false;
  const bool ok = low <= 0.02 && high >= 0.98 && monotone && r.seconds < 60.0;
  report(3, ok,
         "fig3 shape at lambda 0.1: S2(0.01) " + fmt(low) +
             " (need <= 0.02), S2(100) " + fmt(high) +
             " (need >= 0.98), monotone " + (monotone ? "yes" : "no") +
             ", took " + fmt(r.seconds) + " s");
}

// 4: the entropy difference dominates the Petz fidelity bound on the ground
// state; the textbook closed form (1-p)^2 is carried along as documentation
// of how far it sits from the numerically recovered fidelity.
void check_ground_bound() {
  const auto rows = udw::recovery_gap_ground(linspace(0.5 + 1e-6, 1.0, 200));
  double min_margin = 1e300, closed_form_gap = 0.0;
  for (const auto& row : rows) {
    min_margin = std::min(min_margin, row.entropy_diff - row.bound);
    const double f_numeric = std::exp2(-row.bound);
    const double printed = (1.0 - row.p) * (1.0 - row.p);
    closed_form_gap = std::max(closed_form_gap, std::abs(printed - f_numeric));
  }
  report(4, min_margin >= -1e-9,
         "ground recovery bound on 200 points: min margin " + fmt(min_margin) +
             " (tol -1e-9); printed closed form (1-p)^2 deviates from the "
             "recovered fidelity by up to " + fmt(closed_form_gap) +
             " (documented, not gated)");
}

// 5: thermal rows keep the inequality, collapse onto the ground rows at low
// temperature, and flatten out at high temperature.
void check_thermal_cross_check() {
  const std::vector<double> ps = linspace(0.5 + 1e-6, 1.0, 50);
  const auto ground = udw::recovery_gap_ground(ps);

  bool inequality = true;
  double cold_dev = 0.0, hot_max_diff = 0.0;
  for (double bo : {0.1, 1.0, 5.0}) {
    const auto rows = udw::recovery_gap_thermal(bo, ps);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].entropy_diff < rows[i].bound - 1e-9) inequality = false;
      if (bo == 5.0) {
        cold_dev = std::max(cold_dev,
                            std::abs(rows[i].entropy_diff - ground[i].entropy_diff));
        cold_dev = std::max(cold_dev, std::abs(rows[i].bound - ground[i].bound));
      }
      if (bo == 0.1)
        hot_max_diff = std::max(hot_max_diff, rows[i].entropy_diff);
    }
  }
  const bool ok = inequality && cold_dev <= 1e-3 && hot_max_diff <= 0.02;
  report(5, ok,
         std::string("thermal cross-check: inequality ") +
             (inequality ? "holds" : "broken") + ", betaOmega=5 vs ground dev " +
             fmt(cold_dev) + " (tol 1e-3), betaOmega=0.1 max diff " +
             fmt(hot_max_diff) + " (tol 0.02)");
}

// 6: CPTP + unitality + majorization on random parameters, negativity on a
// real-nu grid, and the entanglement-breaking verdict at the boundary.
void check_channel_structure() {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n;
  auto random_axis = [&] {
    Eigen::Vector3d v{n(rng), n(rng), n(rng)};
    return Eigen::Vector3d(v / v.norm());
  };
  auto random_nu = [&] {
    return std::polar(std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
  };

  double completeness = 0.0, unitality = 0.0;
  bool majorized = true;
  const Matrix half = 0.5 * Matrix::Identity(2, 2);
  for (int i = 0; i < 1000; ++i) {
    const KrausSet k =
        udw::build_channel(ChannelParams(random_nu(), random_axis()));
    Matrix acc = Matrix::Zero(2, 2);
    for (const Matrix& op : k.ops) acc += op.adjoint() * op;
    completeness = std::max(
        completeness, (acc - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff());
    unitality = std::max(
        unitality,
        (udw::apply_channel_matrix(k, half) - half).cwiseAbs().maxCoeff());

    Matrix g(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) g(r, c) = Complex(n(rng), n(rng));
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    const DensityMatrix rho(m);
    if (!udw::majorizes(rho, udw::apply_channel(k, rho))) majorized = false;
  }

  double neg_dev = 0.0;
  for (double nu : linspace(-1.0, 1.0, 50)) {
    const KrausSet k = udw::build_channel(ChannelParams(Complex(nu, 0.0), kX));
    neg_dev = std::max(neg_dev, std::abs(udw::negativity(udw::choi_matrix(k)) -
                                         std::abs(nu) / 2.0));
  }

  bool eb_ok = true;
  for (double nu : {0.0, 1e-10, -1e-10, 9.9e-11}) {
    if (!udw::is_entanglement_breaking(
            udw::build_channel(ChannelParams(Complex(nu, 0.0), kX))))
      eb_ok = false;
  }
  for (double nu : {1.01e-10, 2e-10, 1e-9, 0.1, -0.3}) {
    if (udw::is_entanglement_breaking(
            udw::build_channel(ChannelParams(Complex(nu, 0.0), kX))))
      eb_ok = false;
  }

  const bool ok = completeness <= 1e-10 && unitality <= 1e-15 && majorized &&
                  neg_dev <= 1e-10 && eb_ok;
  report(6, ok,
         "channel structure: completeness dev " + fmt(completeness) +
             " (tol 1e-10), unitality dev " + fmt(unitality) +
             " (rounding only), majorization " + (majorized ? "all" : "broken") +
             ", negativity dev " + fmt(neg_dev) + " (tol 1e-10), EB boundary " +
             (eb_ok ? "exact" : "wrong"));
}

// 7: truncated-Fock oracle vs the analytic channel and modulation law.
void check_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  double max_dev = 0.0;
  for (udw::ModeStateKind kind :
       {udw::ModeStateKind::Vacuum, udw::ModeStateKind::Thermal,
        udw::ModeStateKind::Coherent, udw::ModeStateKind::Squeezed}) {
    udw::OracleConfig cfg;
    cfg.state = kind;
    cfg.probe_u = 0.3;
    cfg.probe_v = 0.7;
    cfg.beta_mode = 1.0;
    cfg.coherent_z = Complex(0.4, 0.0);
    cfg.squeeze_r = 0.4;

    Complex nu_pred;
    const double r2 = cfg.r_f * cfg.r_f;
    switch (kind) {
      case udw::ModeStateKind::Vacuum: nu_pred = std::exp(-r2); break;
      case udw::ModeStateKind::Thermal:
        nu_pred = std::exp(-r2 / std::tanh(cfg.beta_mode / 2.0));
        break;
      case udw::ModeStateKind::Coherent:
        nu_pred = std::polar(std::exp(-r2),
                             2.0 * std::sqrt(2.0) * cfg.coherent_z.real() * cfg.r_f);
        break;
      case udw::ModeStateKind::Squeezed:
        nu_pred = std::exp(-r2 * std::exp(-2.0 * cfg.squeeze_r));
        break;
    }
    max_dev = std::max(max_dev, std::abs(udw::oracle_nu(cfg) - nu_pred));

    const KrausSet k = udw::build_channel(ChannelParams(nu_pred, kX));
    for (const Eigen::Vector3d& r :
         {Eigen::Vector3d{0.0, 0.0, -1.0}, Eigen::Vector3d{0.2, -0.5, 0.6}}) {
      const DensityMatrix in(udw::bloch_state_matrix(r));
      const Matrix direct = udw::apply_channel_matrix(k, in.mat());
      const Matrix exact = udw::oracle_channel(cfg, in, kX).mat();
      max_dev = std::max(max_dev, (exact - direct).cwiseAbs().maxCoeff());
    }

    udw::OracleConfig base_cfg = cfg;
    base_cfg.r_f = 0.0;
    const double E = cfg.r_f * cfg.probe_v;
    for (double a : {-1.0, 0.0, 1.0}) {
      const DensityMatrix in(
          udw::bloch_state_matrix({a, 0.0, a == 0.0 ? -1.0 : 0.0}));
      const Complex base = udw::oracle_field_expectation(base_cfg, in, kX);
      const Complex evolved = udw::oracle_field_expectation(cfg, in, kX);
      max_dev = std::max(
          max_dev, std::abs(evolved - udw::evolved_weyl_expectation(base, E, a)));
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(7, max_dev <= 1e-6 && secs < 120.0,
         "oracle equivalence over four mode states: max dev " + fmt(max_dev) +
             " (tol 1e-6), took " + fmt(secs) + " s (limit 120)");
}

// 8: cohering power vanishes for quasifree states, follows nu|sin 2E| for
// displaced ones; decohering power is 1 - e^{-2W}.
void check_coherence_powers() {
  udw::FieldStateSpec quasifree;
  quasifree.kind = udw::FieldKind::Vacuum;
  quasifree.W_ff = 0.3;
  bool quasifree_zero =
      udw::cohering_power(Complex(0.0, 0.0)) == 0.0 &&
      udw::cohering_power(Complex(
          udw::to_channel_params(quasifree, kX).nu.imag(), 0.0)) == 0.0;

  double coh_dev = 0.0;
  const double nu0 = 0.62;
  for (double e : linspace(0.0, 3.0, 20)) {
    const auto c = udw::coherent_channel_coefficients(nu0, e);
    const double power = udw::cohering_power(Complex(c.nu_complex.imag(), 0.0));
    coh_dev = std::max(coh_dev,
                       std::abs(power - nu0 * std::abs(std::sin(2.0 * e))));
  }

  double dec_dev = 0.0;
  for (double w : logspace(1e-3, 5.0, 20)) {
    dec_dev = std::max(dec_dev, std::abs(udw::decohering_power(w) -
                                         (1.0 - std::exp(-2.0 * w))));
  }

  const bool ok = quasifree_zero && coh_dev <= 1e-12 && dec_dev <= 1e-12;
  report(8, ok,
         std::string("coherence powers: quasifree cohering ") +
             (quasifree_zero ? "exactly 0" : "nonzero") + ", displaced dev " +
             fmt(coh_dev) + ", decohering dev " + fmt(dec_dev) +
             " (tol 1e-12 each)");
}

// 9: byte-identical reruns for every subcommand under --jobs 4.
void check_determinism() {
  const char* cmds[] = {
      "fig1 --jobs 4",
      "fig2 --jobs 4",
      "fig3 --grid 0.1:10:8:log --jobs 4",
      "analyze --state coherent --W 0.3 --E 0.7 --jobs 4",
      "wightman --beta 1 --jobs 4",
      "oracle --mode-state squeezed --jobs 4",
      "sweep --jobs 4",
  };
  int stable = 0, total = 0;
  std::string first_broken;
  for (const char* cmd : cmds) {
    ++total;
    const RunResult a = run_cli(cmd);
    const RunResult b = run_cli(cmd);
    if (a.status == 0 && b.status == 0 && !a.out.empty() && a.out == b.out)
      ++stable;
    else if (first_broken.empty())
      first_broken = cmd;
  }
  report(9, stable == total,
         "determinism with --jobs 4: " + std::to_string(stable) + "/" +
             std::to_string(total) + " subcommands byte-identical" +
             (first_broken.empty() ? "" : " (first broken: " + first_broken + ")"));
}

}  // namespace

int main() {
  if (!std::getenv("UDWLAB_BIN"))
    std::fprintf(stderr, "warning: UDWLAB_BIN unset; CLI-driven checks fail\n");
  check_wightman_closed_form();
  check_entropy_production_equality();
  check_fig3_shape();
  check_ground_bound();
  check_thermal_cross_check();
  check_channel_structure();
  check_oracle_equivalence();
  check_coherence_powers();
  check_determinism();
  std::printf("%d of 9 checks failed\n", failures);
  return failures;
}

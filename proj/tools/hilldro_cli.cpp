// hilldro: tables, propagation, comparison, contours and periodic-orbit
// correction for distant retrograde orbits of the Hill problem.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csv.hpp"
#include "hilldro/cases.hpp"
#include "hilldro/errors.hpp"
#include "hilldro/models.hpp"
#include "hilldro/periodic.hpp"
#include "hilldro/reduction.hpp"
#include "hilldro/secular.hpp"

namespace hilldro::cli {
namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  double mu = 1.0;
  double omega = 1.0;
  double tol = 1e-12;
  std::string mode = "closed6";
  int corrections = 0;
  std::string out;
  std::string config;

  ModelParams params() const {
    ModelParams p;
    p.mu = mu;
    p.omega = omega;
    p.validate();
    return p;
  }
  IntegratorConfig integ() const {
    IntegratorConfig c;
    c.rtol = tol;
    c.atol = tol;
    c.validate();
    return c;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--mu", c.mu, "gravitational parameter")->capture_default_str();
  sub->add_option("--omega", c.omega, "rotation rate")->capture_default_str();
  sub->add_option("--tol", c.tol, "integrator rtol = atol")->capture_default_str();
  sub->add_option("--mode", c.mode, "averaging mode: closed6, series8, quadrature")
      ->capture_default_str();
  sub->add_option("--corrections", c.corrections,
                  "short-period correction order (0 or 4..9)")
      ->capture_default_str();
  sub->add_option("--out", c.out, "output file (default: stdout)");
  sub->add_option("--config", c.config, "key=value file; flags override it");
}

// Initial condition selection shared by several subcommands.
struct IcChoice {
  int case_id = 0;
  std::vector<double> ic;

  void add(CLI::App* sub) {
    sub->add_option("--case", case_id, "reference case 1..3");
    sub->add_option("--ic", ic, "x,y,X,Y")->delimiter(',')->expected(4);
  }
  CartesianState state() const {
    if (!ic.empty()) {
      if (ic.size() != 4) throw ConfigError("--ic needs four values");
      return {0.0, ic[0], ic[1], ic[2], ic[3]};
    }
    if (case_id >= 1 && case_id <= 3) return kTestCases[case_id - 1].ic;
    throw ConfigError("give --case 1..3 or --ic x,y,X,Y");
  }
};

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

void write_plot_script(const std::string& csv, const std::string& body) {
  if (csv.empty()) return;
  std::ofstream gp(csv + ".gp");
  if (!gp) throw ConfigError("cannot write " + csv + ".gp");
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set grid\n"
     << body;
}

// ---------------------------------------------------------------- table1

int run_table1(const Common& c) {
  const ModelParams p = c.params();
  Output out(c.out);
  auto& os = out.stream();
  CsvWriter w(os);
  w.header({"case", "T", "T_ref", "T_rel", "T_star", "T_star_ref",
            "T_star_rel", "Phi", "Phi_ref", "Phi_abs"});
  for (const auto& tc : kTestCases) {
    const SecularState s = as_mean(to_reduced(tc.ic, p));
    const Periods per = periods6(s, p);
    w.row({static_cast<double>(tc.id), per.T, tc.T, per.T / tc.T - 1.0,
           per.T_star, tc.T_star, per.T_star / tc.T_star - 1.0, s.Phi, tc.Phi,
           s.Phi - tc.Phi});
  }
  return 0;
}

// ------------------------------------------------------------- propagate

struct PropagateArgs {
  IcChoice ic;
  std::string model = "truth";
  double t_end = 0.0;
  std::size_t samples = 2001;
  std::string span = "libration";
};

double default_span(const CartesianState& ic, const std::string& span,
                    const ModelParams& p) {
  const SecularState s = as_mean(to_reduced(ic, p));
  const Periods per = periods6(s, p);
  if (span == "libration") return per.T_star;
  if (span == "orbit") return per.T;
  throw ConfigError("--span must be libration or orbit");
}

ModelSpec model_spec(const std::string& model, const Common& c) {
  ModelSpec m = parse_model(model);
  if (model == "secular") m.mode = parse_mode(c.mode);
  m.corrections = c.corrections;
  return m;
}

std::vector<CartesianState> run_model(const PropagateArgs& a, const Common& c,
                                      std::vector<double>& grid) {
  const ModelParams p = c.params();
  const CartesianState ic = a.ic.state();
  const double t_end = a.t_end > 0.0 ? a.t_end : default_span(ic, a.span, p);
  grid = uniform_grid(0.0, t_end, a.samples);
  return evaluate_model(model_spec(a.model, c), ic, grid, p, c.integ());
}

int run_propagate(const PropagateArgs& a, const Common& c) {
  const ModelParams p = c.params();
  std::vector<double> grid;
  const auto states = run_model(a, c, grid);
  Output out(c.out);
  CsvWriter w(out.stream());
  w.header({"t", "x", "y", "X", "Y", "energy", "x_C", "y_C", "r"});
  for (const auto& s : states) {
    const ReducedState r = to_reduced(s, p);
    const EllipseFrame f = ellipse_frame(r, p);
    w.row({s.t, s.x, s.y, s.X, s.Y, hamiltonian(s, p), f.xC, f.yC,
           std::hypot(s.x, s.y)});
  }
  write_plot_script(out.path(),
                    "set size ratio -1\nset xlabel 'x'\nset ylabel 'y'\n"
                    "plot '" + out.path() + "' using 2:3 with lines, '' using 7:8 "
                    "with lines\n");
  return 0;
}

// ---------------------------------------------------------- center-track

int run_center_track(const PropagateArgs& a, const Common& c) {
  const ModelParams p = c.params();
  std::vector<double> grid;
  const auto states = run_model(a, c, grid);
  Output out(c.out);
  CsvWriter w(out.stream());
  w.header({"t", "x_C", "y_C", "phi", "q", "Phi", "Q"});
  for (const auto& s : states) {
    const ReducedState r = to_reduced(s, p);
    const EllipseFrame f = ellipse_frame(r, p);
    w.row({s.t, f.xC, f.yC, r.phi, r.q, r.Phi, r.Q});
  }
  write_plot_script(out.path(),
                    "set xlabel 'x_C'\nset ylabel 'y_C'\n"
                    "plot '" + out.path() + "' using 2:3 with lines\n");
  return 0;
}

// --------------------------------------------------------------- compare

struct CompareArgs {
  std::string a;
  std::string b;
};

int run_compare(const CompareArgs& args, const Common& c) {
  const CsvTable A = read_csv(args.a);
  const CsvTable B = read_csv(args.b);
  if (A.rows.size() != B.rows.size()) {
    throw ConfigError("compare: grids differ in length");
  }
  const std::vector<std::string> need{"t", "x", "y", "X", "Y", "x_C", "y_C"};
  std::vector<std::size_t> ia, ib;
  for (const auto& n : need) {
    ia.push_back(A.column(n));
    ib.push_back(B.column(n));
  }
  Output out(c.out);
  CsvWriter w(out.stream());
  w.header({"t", "dx", "dy", "dX", "dY", "dpos", "dvel", "dx_C", "dy_C"});
  double worst = 0.0;
  double size = 0.0;
  for (std::size_t i = 0; i < A.rows.size(); ++i) {
    const auto& ra = A.rows[i];
    const auto& rb = B.rows[i];
    const double t = ra[ia[0]];
    if (std::abs(t - rb[ib[0]]) > 1e-9 * std::max(1.0, std::abs(t))) {
      throw ConfigError("compare: time grids differ at row " +
                        std::to_string(i + 1));
    }
    double d[6];
    for (int k = 0; k < 4; ++k) d[k] = ra[ia[k + 1]] - rb[ib[k + 1]];
    d[4] = ra[ia[5]] - rb[ib[5]];
    d[5] = ra[ia[6]] - rb[ib[6]];
    const double dp = std::hypot(d[0], d[1]);
    worst = std::max(worst, dp);
    size = std::max(size, std::hypot(rb[ib[1]], rb[ib[2]]));
    w.row({t, d[0], d[1], d[2], d[3], dp, std::hypot(d[2], d[3]), d[4], d[5]});
  }
  std::cerr << "max position error " << fmt(worst) << ", relative "
            << fmt(size > 0.0 ? worst / size : 0.0) << " (max |r| " << fmt(size) << ")\n";
  write_plot_script(out.path(),
                    "set xlabel 't'\nplot '" + out.path() +
                        "' using 1:2 with lines, '' using 1:3 with lines\n");
  return 0;
}

// --------------------------------------------------------------- contour

struct ContourArgs {
  double Phi = 45.0;
  std::vector<double> q_range{-15.0, 15.0};
  std::vector<double> Q_range{-0.3, 0.3};
  std::size_t nq = 121;
  std::size_t nQ = 121;
};

int run_contour(const ContourArgs& a, const Common& c) {
  const ModelParams p = c.params();
  if (a.q_range.size() != 2 || a.Q_range.size() != 2) {
    throw ConfigError("ranges take two values lo,hi");
  }
  const ContourGrid g = contour_grid(a.Phi, {a.q_range[0], a.q_range[1]},
                                     {a.Q_range[0], a.Q_range[1]}, a.nq, a.nQ, p);
  Output out(c.out);
  CsvWriter w(out.stream());
  w.header({"q", "Q", "K"});
  for (std::size_t i = 0; i < g.q.size(); ++i) {
    for (std::size_t j = 0; j < g.Q.size(); ++j) {
      w.row({g.q[i], g.Q[j], g.at(i, j)});
    }
  }
  write_plot_script(out.path(),
                    "set contour base\nunset surface\nset view map\n"
                    "set cntrparam levels 30\nset dgrid3d " +
                        std::to_string(a.nQ) + "," + std::to_string(a.nq) +
                        "\nsplot '" + out.path() + "' using 1:2:3 with lines\n");
  return 0;
}

// --------------------------------------------------------------- correct

struct CorrectArgs {
  IcChoice ic;
  double period = 0.0;
  std::string period_from = "orbit";
  double target = 1e-12;
  int max_iterations = 20;
  std::string phase = "anchored-position";
  bool verbose = false;
};

int run_correct(const CorrectArgs& a, const Common& c) {
  const ModelParams p = c.params();
  const CartesianState seed = a.ic.state();
  double T = a.period;
  if (!(T > 0.0)) {
    if (a.period_from == "orbit") {
      T = periods6(as_mean(to_reduced(seed, p)), p).T;
    } else if (a.period_from == "libration") {
      SecularSolutionConfig sc;
      sc.mode = parse_mode(c.mode);
      T = secular_libration_period(
          initial_mean_elements(seed, c.corrections, p), sc, p, c.integ());
    } else {
      throw ConfigError("--period-from must be orbit or libration");
    }
  }
  CorrectorConfig cc;
  cc.integ = c.integ();
  cc.target_epsilon = a.target;
  cc.max_iterations = a.max_iterations;
  if (a.phase == "moving") {
    cc.phase = PhaseCondition::moving;
  } else if (a.phase == "anchored") {
    cc.phase = PhaseCondition::anchored;
  } else if (a.phase == "anchored-position") {
    cc.phase = PhaseCondition::anchored_position;
  } else {
    throw ConfigError("--phase must be moving, anchored or anchored-position");
  }
  if (a.verbose) {
    cc.on_iteration = [](const PeriodicOrbit& o) {
      std::cerr << "iteration " << o.iterations << " epsilon "
                << fmt(o.epsilon) << " T " << fmt(o.period) << '\n';
    };
  }
  const PeriodicOrbit o = differential_correct(seed, T, cc, p);
  Output out(c.out);
  auto& os = out.stream();
  os << "seed_period=" << fmt(T) << '\n'
     << "iterations=" << o.iterations << '\n'
     << "epsilon=" << fmt(o.epsilon) << '\n'
     << "period=" << fmt(o.period) << '\n'
     << "x=" << fmt(o.initial.x) << '\n'
     << "y=" << fmt(o.initial.y) << '\n'
     << "X=" << fmt(o.initial.X) << '\n'
     << "Y=" << fmt(o.initial.Y) << '\n'
     << "energy=" << fmt(hamiltonian(o.initial, p)) << '\n'
     << "monodromy_trace=" << fmt(o.trace) << '\n'
     << "nontrivial_trace=" << fmt(o.nontrivial_trace()) << '\n'
     << "stability=" << (o.unstable() ? "unstable" : "stable") << '\n';
  return 0;
}

// ----------------------------------------------------------- config file

std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

std::vector<std::pair<std::string, std::string>> read_config(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(n) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv.emplace_back(normalize_key(trim(line.substr(0, eq))),
                    trim(line.substr(eq + 1)));
  }
  return kv;
}

std::set<std::string> long_names(const CLI::App* sub) {
  std::set<std::string> names;
  for (const CLI::Option* o : sub->get_options()) {
    for (const auto& l : o->get_lnames()) names.insert(l);
  }
  names.erase("config");
  names.erase("help");
  return names;
}

// Splice config entries in right after the subcommand name so that later
// command-line flags take precedence.
std::vector<std::string> expand_config(const CLI::App& app,
                                       std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (!path) return args;
  std::size_t at = args.size();
  const CLI::App* sub = nullptr;
  for (std::size_t i = 0; i < args.size() && !sub; ++i) {
    for (const CLI::App* s : app.get_subcommands({})) {
      if (s->get_name() == args[i]) {
        sub = s;
        at = i + 1;
        break;
      }
    }
  }
  if (!sub) throw ConfigError("--config needs a subcommand");
  const auto allowed = long_names(sub);
  std::vector<std::string> extra;
  for (const auto& [k, v] : read_config(*path)) {
    if (!allowed.count(k)) {
      throw ConfigError("unknown config key '" + k + "' for " + sub->get_name());
    }
    extra.push_back("--" + k + "=" + v);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(),
              extra.end());
  return args;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"Distant retrograde orbits of the Hill problem: analytical "
               "solutions against numerical integration"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;

  auto* table1 = app.add_subcommand("table1", "periods and actions of the reference cases");
  add_common(table1, common);

  PropagateArgs prop;
  auto* propagate = app.add_subcommand("propagate", "evaluate a model on a time grid");
  add_common(propagate, common);
  prop.ic.add(propagate);
  propagate->add_option("--model", prop.model,
                        "truth, linear, low6, lindstedt9, secular[:mode]")
      ->capture_default_str();
  propagate->add_option("--t-end", prop.t_end, "final time (default: one period)");
  propagate->add_option("--span", prop.span, "default span: libration or orbit")
      ->capture_default_str();
  propagate->add_option("--samples", prop.samples, "grid points")->capture_default_str();

  PropagateArgs track;
  auto* center = app.add_subcommand("center-track",
                                    "reference-ellipse center and reduced elements");
  add_common(center, common);
  track.ic.add(center);
  center->add_option("--model", track.model)->capture_default_str();
  center->add_option("--t-end", track.t_end);
  center->add_option("--span", track.span)->capture_default_str();
  center->add_option("--samples", track.samples)->capture_default_str();

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "difference of two propagate outputs");
  add_common(compare, common);
  compare->add_option("a", cmp.a, "model CSV")->required();
  compare->add_option("b", cmp.b, "reference CSV")->required();

  ContourArgs ctr;
  auto* contour = app.add_subcommand("contour", "order-8 averaged Hamiltonian on a grid");
  add_common(contour, common);
  contour->add_option("--Phi", ctr.Phi)->capture_default_str();
  contour->add_option("--q-range", ctr.q_range)->delimiter(',')->expected(2);
  contour->add_option("--Q-range", ctr.Q_range)->delimiter(',')->expected(2);
  contour->add_option("--nq", ctr.nq)->capture_default_str();
  contour->add_option("--nQ", ctr.nQ)->capture_default_str();

  CorrectArgs cor;
  auto* correct = app.add_subcommand("correct", "differential correction to a periodic orbit");
  add_common(correct, common);
  cor.ic.add(correct);
  correct->add_option("--period", cor.period, "seed period");
  correct->add_option("--period-from", cor.period_from,
                      "seed period estimate when --period is absent: orbit or libration")
      ->capture_default_str();
  correct->add_option("--target", cor.target, "epsilon target")->capture_default_str();
  correct->add_option("--max-iterations", cor.max_iterations)->capture_default_str();
  correct->add_option("--phase", cor.phase, "moving, anchored, anchored-position")
      ->capture_default_str();
  correct->add_flag("--verbose", cor.verbose, "print every iteration");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(app, args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*table1) return run_table1(common);
  if (*propagate) return run_propagate(prop, common);
  if (*center) return run_center_track(track, common);
  if (*compare) return run_compare(cmp, common);
  if (*contour) return run_contour(ctr, common);
  if (*correct) return run_correct(cor, common);
  return kExitConfig;
}

}  // namespace
}  // namespace hilldro::cli

int main(int argc, char** argv) {
  using namespace hilldro;
  try {
    return cli::main_impl(argc, argv);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return cli::kExitConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return cli::kExitNumerical;
  }
}

#include "rzlab/counterexamples.hpp"
#include "rzlab/report.hpp"
#include "rzlab/semigroup.hpp"
#include "rzlab/verify.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

using namespace rzlab;

namespace {

/// Flags shared by verify and check; unset flags leave the config file values alone.
struct Overrides {
  std::optional<int> d, n, jobs, trials, fk_slices;
  std::optional<double> R, split_tau0, frac_tau0, quad_tol;
  std::optional<std::string> potential, out;
  std::optional<std::uint64_t> seed;
  std::optional<long> fk_paths;
  std::vector<double> p;
  std::string config_path;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--d", d, "dimension");
    app->add_option("--n", n, "points per axis (even)");
    app->add_option("--R", R, "half width of the box");
    app->add_option("--potential", potential, "zero | const:c | harmonic | ce1:eps | ce2:p | ce3 | custom:path");
    app->add_option("--p", p, "exponents")->delimiter(',');
    app->add_option("--seed", seed, "suite seed");
    app->add_option("--trials", trials, "random trial fields");
    app->add_option("--split-tau0", split_tau0, "splitting step");
    app->add_option("--frac-tau0", frac_tau0, "splitting step inside the time quadrature");
    app->add_option("--quad-tol", quad_tol, "time-quadrature tolerance");
    app->add_option("--fk-paths", fk_paths, "Feynman-Kac paths");
    app->add_option("--fk-slices", fk_slices, "Feynman-Kac bridge slices");
    app->add_option("--jobs", jobs, "concurrent checks");
    app->add_option("--out", out, "output directory for report.csv and report.json");
  }

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : config_from_file(config_path);
    if (d) c.d = *d;
    if (n) c.n = *n;
    if (R) c.R = *R;
    if (potential) c.potential = *potential;
    if (!p.empty()) c.p = p;
    if (seed) c.seed = *seed;
    if (trials) c.trials = *trials;
    if (split_tau0) c.split_tau0 = *split_tau0;
    if (frac_tau0) c.frac_tau0 = *frac_tau0;
    if (quad_tol) c.quad_tol = *quad_tol;
    if (fk_paths) c.fk_paths = *fk_paths;
    if (fk_slices) c.fk_slices = *fk_slices;
    if (jobs) c.jobs = *jobs;
    if (out) c.out = *out;
    return c;
  }
};

int emit(const std::vector<CheckReport>& reports, const RunConfig& config) {
  const std::string csv = reports_csv(reports);
  std::cout << csv;
  if (!config.out.empty()) {
    write_text(std::filesystem::path(config.out) / "report.csv", csv);
    write_text(std::filesystem::path(config.out) / "report.json", reports_json(reports, config));
    write_text(std::filesystem::path(config.out) / "config.json", config_to_json(config));
  }
  std::vector<std::string> failing;
  for (const auto& r : reports) {
    for (const auto& note : r.notes) std::cerr << r.id << ": " << note << '\n';
    if (r.verdict != Verdict::Pass) failing.push_back(r.id + " (" + to_string(r.verdict) + ")");
  }
  if (failing.empty()) return 0;
  std::cerr << "failing checks:";
  for (const auto& f : failing) std::cerr << ' ' << f;
  std::cerr << '\n';
  return 1;
}

Point parse_point(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + " needs at least one coordinate");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void dump_field(const Field& f, std::ostream& os) {
  const auto& g = f.grid();
  os << "# d=" << g.dim() << ",n=" << g.samples() << ",R=" << format_double(g.half_width()) << '\n';
  os << "index";
  for (int a = 0; a < g.dim(); ++a) os << ",x" << a;
  os << ",value\n";
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    os << i;
    const Point x = g.point(i);
    for (int a = 0; a < g.dim(); ++a) os << ',' << format_double(x[a]);
    os << ',' << format_double(f[i]) << '\n';
  }
}

Field load_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  int d = 0, n = 0;
  double R = 0.0;
  if (std::sscanf(line.c_str(), "# d=%d,n=%d,R=%lf", &d, &n, &R) != 3)
    throw FormatError(path + ": first line must be '# d=<d>,n=<n>,R=<R>'");
  const GridSpec grid(d, n, R);
  std::getline(in, line);  // column header
  Eigen::VectorXd values(grid.size());
  Eigen::Index count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (count >= grid.size()) throw FormatError(path + ": more rows than grid points");
    const auto comma = line.rfind(',');
    try {
      values[count++] = std::stod(line.substr(comma == std::string::npos ? 0 : comma + 1));
    } catch (const std::exception&) {
      throw FormatError(path + ": bad value on data row " + std::to_string(count));
    }
  }
  if (count != grid.size())
    throw FormatError(path + ": expected " + std::to_string(grid.size()) + " rows, found " + std::to_string(count));
  return Field(grid, values);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rzlab: discrete checks of L^p bounds for Schrodinger Riesz transforms"};
  app.require_subcommand(1);

  Overrides verify_opts;
  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a suite (core, counterexamples, oracles, all)");
  verify->add_option("--suite", suite, "suite id");
  verify_opts.attach(verify);

  Overrides check_opts;
  std::string check_id;
  auto* check = app.add_subcommand("check", "run a single check");
  check->add_option("id", check_id, "check id")->required();
  check_opts.attach(check);

  std::string scan_which, scan_out;
  ScanParams scan_params;
  std::vector<double> scan_xs;
  bool scan_json_out = false;
  auto* scan = app.add_subcommand("scan", "counterexample divergence scan");
  scan->add_option("which", scan_which, "CE1 | CE2 | CE3")->required();
  scan->add_option("--eps", scan_params.eps, "CE1 exponent parameter");
  scan->add_option("--p", scan_params.p, "CE1/CE2 integrability exponent");
  scan->add_option("--d", scan_params.d, "dimension (>= 3)");
  scan->add_option("--points", scan_xs, "deltas (decreasing) or radii (increasing)")->delimiter(',');
  scan->add_flag("--json", scan_json_out, "print the fit summary as JSON instead of tidy CSV");
  scan->add_option("--out", scan_out, "write the tidy CSV here");

  bool use_fk = false, with_dense = false;
  std::string k_potential = "harmonic";
  std::vector<double> kx{0.0}, ky{0.0};
  double kt = 0.25, kR = 4.0;
  long k_paths = 20000;
  std::uint64_t k_seed = 1;
  int k_slices = 256, k_n = 64;
  auto* kernel = app.add_subcommand("kernel", "Schrodinger heat kernel k_t(x, y)");
  kernel->add_flag("--fk", use_fk, "Feynman-Kac estimate")->required();
  kernel->add_option("--potential", k_potential, "potential tag");
  kernel->add_option("--x", kx, "start point")->delimiter(',');
  kernel->add_option("--y", ky, "end point")->delimiter(',');
  kernel->add_option("--t", kt, "time");
  kernel->add_option("--paths", k_paths, "paths");
  kernel->add_option("--seed", k_seed, "seed");
  kernel->add_option("--slices", k_slices, "bridge time slices");
  kernel->add_flag("--dense", with_dense, "also print the dense-oracle value on a grid");
  kernel->add_option("--n", k_n, "grid points per axis for --dense");
  kernel->add_option("--R", kR, "grid half width for --dense");

  auto* field = app.add_subcommand("field", "RZF1 <-> CSV conversion");
  field->require_subcommand(1);
  std::string dump_in, dump_out, load_in, load_out;
  auto* dump = field->add_subcommand("dump", "RZF1 -> CSV");
  dump->add_option("input", dump_in, "RZF1 file")->required();
  dump->add_option("--out", dump_out, "CSV path (stdout if omitted)");
  auto* load = field->add_subcommand("load", "CSV -> RZF1");
  load->add_option("input", load_in, "CSV written by 'field dump'")->required();
  load->add_option("output", load_out, "RZF1 path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      RunConfig c = verify_opts.resolve();
      if (!suite.empty()) c.suite = suite;
      return emit(run_suite(c), c);
    }
    if (*check) {
      RunConfig c = check_opts.resolve();
      c.checks = {check_id};
      return emit(run_suite(c), c);
    }
    if (*scan) {
      const auto rep = divergence_scan(parse_counterexample(scan_which), scan_params, scan_xs);
      const std::string csv = scan_csv(rep);
      if (!scan_out.empty()) write_text(scan_out, csv);
      std::cout << (scan_json_out ? scan_json(rep) : csv);
      return rep.conclusive ? 0 : 1;
    }
    if (*kernel) {
      (void)use_fk;
      const auto pot = Potential::parse(k_potential);
      const Point x = parse_point(kx, "--x"), y = parse_point(ky, "--y");
      FeynmanKacOptions opt;
      opt.slices = k_slices;
      opt.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
      const auto est = fk_kernel_estimate(pot, x, y, kt, k_paths, k_seed, opt);
      std::cout << "estimate,std_error,paths";
      if (with_dense) std::cout << ",dense";
      std::cout << '\n' << format_double(est.estimate) << ',' << format_double(est.std_error) << ',' << est.paths;
      if (with_dense) {
        const GridSpec grid(static_cast<int>(x.size()), k_n, kR);
        const auto op = dense_schrodinger(discretize_potential(pot, grid));
        std::cout << ',' << format_double(dense_heat_kernel(op, kt, grid.nearest(x), grid.nearest(y)));
      }
      std::cout << '\n';
      return 0;
    }
    if (*dump) {
      const Field f = read_field(dump_in);
      if (dump_out.empty()) {
        dump_field(f, std::cout);
      } else {
        std::ostringstream os;
        dump_field(f, os);
        write_text(dump_out, os.str());
      }
      return 0;
    }
    if (*load) {
      write_field(load_out, load_field_csv(load_in));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

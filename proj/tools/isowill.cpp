// isowill: construct, verify and export totally isotropic Willmore surfaces
// in S^6 from normalized potentials.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include <isowill/isowill.hpp>

using namespace isowill;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kBadInput = 2;
constexpr int kMostlyDegenerate = 3;

struct GridFlags {
  std::string kind;
  std::vector<double> radii;
  int arg_count = 0;
  std::vector<double> x, y;
  std::vector<double> lambda_deg;
  std::string mode = "exact", gauge = "detd";
  double fd_step = 1e-4;
};

void add_grid_flags(CLI::App* c, GridFlags& g) {
  c->add_option("--grid", g.kind, "polar or rect (overrides the spec file)")->check(CLI::IsMember({"polar", "rect"}));
  c->add_option("--radii", g.radii, "polar radii")->delimiter(',');
  c->add_option("--arg-count", g.arg_count, "polar angle count")->check(CLI::PositiveNumber);
  c->add_option("--x", g.x, "rect x range: min,max,count")->delimiter(',')->expected(3);
  c->add_option("--y", g.y, "rect y range: min,max,count")->delimiter(',')->expected(3);
  c->add_option("--lambda-deg", g.lambda_deg, "spectral parameter angles in degrees")->delimiter(',');
  c->add_option("--mode", g.mode, "exact or numeric")->check(CLI::IsMember({"exact", "numeric"}));
  c->add_option("--gauge", g.gauge, "detd or unit-middle")->check(CLI::IsMember({"detd", "unit-middle"}));
  c->add_option("--fd-step", g.fd_step, "finite-difference step")->check(CLI::PositiveNumber);
}

RunConfig run_config(const GridFlags& g, const SpecFile& spec) {
  RunConfig cfg;
  cfg.mode = g.mode == "exact" ? Mode::Exact : Mode::Numeric;
  cfg.gauge = g.gauge == "detd" ? Gauge::DetD : Gauge::UnitMiddle;
  cfg.fd_step = g.fd_step;
  cfg.lambda_deg = g.lambda_deg;
  const bool any = !g.kind.empty() || !g.radii.empty() || g.arg_count > 0 || !g.x.empty() || !g.y.empty();
  if (any) {
    GridSpec gs = spec.grid ? *spec.grid : default_grid();
    if (!g.kind.empty()) gs.kind = g.kind == "polar" ? GridSpec::Kind::Polar : GridSpec::Kind::Rect;
    if (!g.radii.empty()) gs.radii = g.radii, gs.kind = GridSpec::Kind::Polar;
    if (g.arg_count > 0) gs.arg_count = g.arg_count;
    auto range = [](const std::vector<double>& v, double& lo, double& hi, int& n) {
      if (v.empty()) return;
      if (v[2] < 1 || v[2] != static_cast<int>(v[2])) throw CLI::ValidationError("grid count must be a positive integer");
      lo = v[0], hi = v[1], n = static_cast<int>(v[2]);
    };
    range(g.x, gs.x_min, gs.x_max, gs.nx);
    range(g.y, gs.y_min, gs.y_max, gs.ny);
    if (!g.x.empty() || !g.y.empty()) gs.kind = GridSpec::Kind::Rect;
    cfg.grid = gs;
  }
  return cfg;
}

// write to a file or to stdout for "-"
template <class Fn>
int emit(const std::string& path, const Fn& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return kOk;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return kFail;
  }
  write(f);
  return f ? kOk : kFail;
}

void print_summary(const Report& r) {
  for (const auto& c : r.checks)
    std::cerr << (c.pass() ? "PASS " : "FAIL ") << c.name << " = " << fmt(c.value) << (c.at_least ? " (min " : " (tol ")
              << fmt(c.tol) << ")\n";
  for (const auto& n : r.notes) std::cerr << "note: " << n << "\n";
  std::cerr << (r.pass() ? "verify: pass\n" : "verify: FAIL\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Totally isotropic Willmore surfaces in S^6 from normalized potentials"};
  app.require_subcommand(1);

  std::string spec_path, out_path, report_path;
  GridFlags grid;

  auto* construct = app.add_subcommand("construct", "run the pipeline over a grid and write a CSV dataset");
  construct->add_option("spec", spec_path, "potential spec file")->required();
  construct->add_option("-o,--out", out_path, "output CSV (default stdout)");
  std::string branch_policy = "both";
  construct->add_option("--branch", branch_policy, "primal, dual or both (rank-1 points)")
      ->check(CLI::IsMember({"primal", "dual", "both"}));
  add_grid_flags(construct, grid);

  auto* verify = app.add_subcommand("verify", "run every residual suite and write a JSON report");
  verify->add_option("spec", spec_path, "potential spec file")->required();
  verify->add_option("-o,--report", report_path, "output JSON report (default stdout)");
  std::optional<double> tol_override;
  double max_flagged = 0;
  verify->add_option("--tol", tol_override, "replace every upper tolerance");
  verify->add_option("--max-flagged", max_flagged, "allowed fraction of failing grid points")->check(CLI::Range(0.0, 1.0));
  add_grid_flags(verify, grid);

  auto* mesh = app.add_subcommand("export-mesh", "triangulate a dataset");
  std::string dataset_path, format = "obj", projection = "1,2,3", mesh_branch = "primal";
  int lambda_index = 0;
  mesh->add_option("dataset", dataset_path, "CSV written by construct")->required();
  mesh->add_option("-o,--out", out_path, "output mesh (default stdout)");
  mesh->add_option("--format", format, "mesh format (obj)");
  mesh->add_option("--projection", projection, "three coordinates of x (e.g. 1,2,3) or pca");
  mesh->add_option("--lambda-index", lambda_index, "which spectral parameter of the dataset")->check(CLI::NonNegativeNumber);
  mesh->add_option("--branch", mesh_branch, "primal or dual (rank-1 points)")->check(CLI::IsMember({"primal", "dual"}));

  auto* golden = app.add_subcommand("golden", "check a built-in closed-form case");
  std::string case_name;
  golden->add_option("case", case_name, "sphere or minimal")->required();
  golden->add_option("-o,--report", report_path, "output JSON report (default stdout)");
  golden->add_option("--tol", tol_override, "replace every upper tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (*construct) {
      SpecFile spec;
      RunConfig cfg;
      try {
        spec = read_spec_file(spec_path);
        cfg = run_config(grid, spec);
        cfg.branches = parse_branch_policy(branch_policy);
      } catch (const ParseError& e) {
        std::cerr << spec_path << ": " << e.what() << "\n";
        return kBadInput;
      }
      const Dataset ds = construct_dataset(spec, cfg);
      int rc = emit(out_path, [&](std::ostream& os) { write_csv(os, ds); });
      if (rc != kOk) return rc;
      std::cerr << "construct: " << ds.records.size() << " records from " << ds.samples << " samples, "
                << ds.big_cell_or_degenerate << " outside the big cell or degenerate\n";
      return 2 * ds.big_cell_or_degenerate > ds.samples ? kMostlyDegenerate : kOk;
    }
    if (*verify) {
      SpecFile spec;
      RunConfig cfg;
      try {
        spec = read_spec_file(spec_path);
        cfg = run_config(grid, spec);
      } catch (const ParseError& e) {
        std::cerr << spec_path << ": " << e.what() << "\n";
        return kBadInput;
      }
      VerifyOptions opt;
      opt.tol_override = tol_override;
      opt.max_flagged = max_flagged;
      const Report r = verify_spec(spec, cfg, opt);
      if (emit(report_path, [&](std::ostream& os) { os << report_string(r); }) != kOk) return kFail;
      print_summary(r);
      return r.pass() ? kOk : kFail;
    }
    if (*mesh) {
      if (format != "obj") {
        std::cerr << "error: UnsupportedFormat: '" << format << "' (only obj)\n";
        return kBadInput;
      }
      std::ifstream f(dataset_path, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot open '" << dataset_path << "'\n";
        return kBadInput;
      }
      MeshInput in;
      Projection proj;
      try {
        in = read_csv(f);
        proj = parse_projection(projection);
      } catch (const Error& e) {
        std::cerr << dataset_path << ": " << e.what() << "\n";
        return kBadInput;
      }
      double deg = 0;
      bool found = false;
      for (const auto& r : in.records)
        if (r.lambda_index == lambda_index) deg = r.lambda_deg, found = true;
      if (!found) {
        std::cerr << "error: dataset has no lambda index " << lambda_index << "\n";
        return kBadInput;
      }
      const Mesh m = build_mesh(in, lambda_index, mesh_branch, proj);
      return emit(out_path, [&](std::ostream& os) { write_obj(os, in, m, lambda_index, deg, mesh_branch, proj); });
    }
    if (*golden) {
      const GoldenCase* gc = nullptr;
      for (const auto& c : golden_cases())
        if (c.name == case_name) gc = &c;
      if (!gc) {
        std::cerr << "error: unknown case '" << case_name << "' (sphere, minimal)\n";
        return kBadInput;
      }
      VerifyOptions opt;
      opt.tol_override = tol_override;
      const Report r = golden_report(*gc, opt);
      if (emit(report_path, [&](std::ostream& os) { os << report_string(r); }) != kOk) return kFail;
      print_summary(r);
      return r.pass() ? kOk : kFail;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kOk;
}

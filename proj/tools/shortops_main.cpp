// Command-line front end: matrix file I/O, one subcommand per operation
// family, JSON reports on stdout, logs on stderr.
//
// Exit codes: 0 ok, 2 input/validation error, 3 route or internal-criteria
// disagreement, 4 property-check failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shortops/matrix_io.hpp"
#include "shortops/parallel_sum.hpp"
#include "shortops/report.hpp"
#include "shortops/shorted.hpp"
#include "shortops/tau_engine.hpp"
#include "shortops/verify.hpp"

namespace {

using namespace shortops;
namespace fs = std::filesystem;

struct GlobalOpts {
  TolerancePolicy pol;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string out_dir;

  MatrixFormat fmt() const { return format_from_name(format); }
};

int emit(const Json& report) {
  std::cout << report.dump(2) << std::endl;
  return report.at("exit_code").get<int>();
}

// Reads, records the raw file digest, then certifies. The digest identifies
// the file as written, not the symmetrized/clamped matrix derived from it.
PsdMatrix load_psd(const std::string& path, const GlobalOpts& opts, Json& rep) {
  const Matrix raw = read_matrix_file(path, opts.fmt());
  add_input(rep, path, raw);
  return psd_validate(raw, opts.pol);
}

void write_output_matrix(Json& rep, const GlobalOpts& opts,
                         const std::string& name, const Matrix& m) {
  rep["outputs"][name] = matrix_to_json(m);
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    const std::string ext = opts.fmt() == MatrixFormat::Csv ? ".csv" : ".txt";
    const std::string path = (fs::path(opts.out_dir) / (name + ext)).string();
    write_matrix_file(path, m, opts.fmt());
    rep["outputs"][name + "_path"] = path;
  }
}

int cmd_parsum(const GlobalOpts& opts, const std::string& x_path,
               const std::string& g_path, const std::string& route) {
  Json rep = make_report("parsum");
  rep["policy"] = policy_to_json(opts.pol);
  const PsdMatrix x = load_psd(x_path, opts, rep);
  const PsdMatrix g = load_psd(g_path, opts, rep);

  const double tol = 1e-8 * (1.0 + std::max(x.lambda_max(), g.lambda_max()));
  const PsdMatrix canonical = parallel_sum(x, g, opts.pol);
  rep["diagnostics"]["route"] = route;
  int exit_code = 0;
  if (route == "shorted") {
    write_output_matrix(rep, opts, "parallel_sum", canonical.entries());
  } else if (route == "via-m") {
    const PsdMatrix v = parallel_sum_via_m(x, g, opts.pol);
    write_output_matrix(rep, opts, "parallel_sum", v.entries());
    rep["diagnostics"]["residuals"]["via_m"] =
        max_abs(v.entries() - canonical.entries());
  } else if (route == "regularized") {
    const ParallelSumResult r =
        parallel_sum_regularized(x, g, default_eps_schedule(), opts.pol);
    write_output_matrix(rep, opts, "parallel_sum", r.value.entries());
    rep["diagnostics"]["residuals"]["regularized"] = r.residual_cross;
    Json trace = Json::array();
    for (const auto& [eps, norm] : r.trace) {
      trace.push_back(Json{{"eps", eps}, {"norm", norm}});
    }
    rep["diagnostics"]["eps_trace"] = std::move(trace);
  } else if (route == "definite") {
    const PsdMatrix v = parallel_sum_definite(x, g, opts.pol);
    write_output_matrix(rep, opts, "parallel_sum", v.entries());
    rep["diagnostics"]["residuals"]["definite"] =
        max_abs(v.entries() - canonical.entries());
  } else if (route == "all") {
    write_output_matrix(rep, opts, "parallel_sum", canonical.entries());
    const PsdMatrix v = parallel_sum_via_m(x, g, opts.pol);
    const ParallelSumResult r =
        parallel_sum_regularized(x, g, default_eps_schedule(), opts.pol);
    double worst = std::max(max_abs(v.entries() - canonical.entries()),
                            r.residual_cross);
    rep["diagnostics"]["residuals"]["via_m"] =
        max_abs(v.entries() - canonical.entries());
    rep["diagnostics"]["residuals"]["regularized"] = r.residual_cross;
    if (x.rank(opts.pol) == x.dim() && g.rank(opts.pol) == g.dim()) {
      const PsdMatrix d = parallel_sum_definite(x, g, opts.pol);
      const double gap = max_abs(d.entries() - canonical.entries());
      rep["diagnostics"]["residuals"]["definite"] = gap;
      worst = std::max(worst, gap);
    }
    rep["diagnostics"]["residual_threshold"] = tol;
    if (worst > tol) exit_code = 3;
  } else {
    throw IoError("parsum: unknown route '" + route + "'");
  }
  rep["exit_code"] = exit_code;
  return emit(rep);
}

int cmd_tau(const GlobalOpts& opts, const std::string& g_path,
            const std::string& x_path, bool with_trace) {
  Json rep = make_report("tau");
  rep["policy"] = policy_to_json(opts.pol);
  const PsdMatrix g = load_psd(g_path, opts, rep);
  const PsdMatrix x = load_psd(x_path, opts, rep);

  int exit_code = 0;
  std::map<std::string, double> residuals;
  try {
    const TauResult result = tau(g, x, opts.pol);
    residuals = result.cross_residuals;
    write_output_matrix(rep, opts, "tau", result.value.entries());
    rep["diagnostics"]["dim_L"] =
        result.subspace_used ? result.subspace_used->dim() : 0;
    rep["diagnostics"]["iterative_hit_max_iter"] = result.hit_max_iter;
  } catch (const RouteDisagreementError& e) {
    residuals = e.residuals();
    rep["diagnostics"]["error"] = e.what();
    exit_code = 3;
  }
  const TauResult closed_m = tau_closed_m(g, x, opts.pol);
  rep["diagnostics"]["dim_M"] =
      closed_m.subspace_used ? closed_m.subspace_used->dim() : 0;
  for (const auto& [route, gap] : residuals) {
    rep["diagnostics"]["route_residuals"][route] = gap;
  }
  const IterationTrace orbit = mu_orbit(g, x, opts.pol);
  rep["diagnostics"]["orbit_length"] =
      static_cast<int>(orbit.iterates.size());
  rep["diagnostics"]["stopped_by"] =
      orbit.stopped_by == IterationTrace::Stop::Converged ? "converged"
                                                          : "max-iter";
  if (with_trace) {
    Json trace;
    trace["step_gaps"] = orbit.step_gaps;
    trace["ps_norms"] = orbit.ps_norms;
    Json iterates = Json::array();
    for (const PsdMatrix& f : orbit.iterates) {
      iterates.push_back(matrix_to_json(f.entries()));
    }
    trace["iterates"] = std::move(iterates);
    Json partials = Json::array();
    for (const PsdMatrix& p : orbit.partial_sums) {
      partials.push_back(matrix_to_json(p.entries()));
    }
    trace["partial_sums"] = std::move(partials);
    rep["diagnostics"]["trace"] = std::move(trace);
  }
  rep["exit_code"] = exit_code;
  return emit(rep);
}

int cmd_short(const GlobalOpts& opts, const std::string& a_path,
              const std::string& b_path) {
  Json rep = make_report("short");
  rep["policy"] = policy_to_json(opts.pol);
  const PsdMatrix a = load_psd(a_path, opts, rep);
  const PsdMatrix b = load_psd(b_path, opts, rep);

  const Decomposition dec = lebesgue_decompose(a, b, opts.pol);
  write_output_matrix(rep, opts, "ac_part", dec.ac_part.entries());
  write_output_matrix(rep, opts, "singular_part", dec.singular_part.entries());
  rep["diagnostics"]["unique"] = dec.unique;
  rep["diagnostics"]["omega_dim"] = dec.omega.dim();
  rep["diagnostics"]["residuals"] =
      Json{{"cross_route_gap", dec.residuals.cross_route_gap},
           {"singularity", dec.residuals.singularity},
           {"orthogonality", dec.residuals.orthogonality}};
  const double tol = 1e-6 * (1.0 + b.lambda_max());
  rep["diagnostics"]["residual_threshold"] = tol;
  rep["exit_code"] = dec.residuals.cross_route_gap > tol ? 3 : 0;
  return emit(rep);
}

struct EnsembleFlags {
  int dim = 4;
  int rank_g = 2;
  int rank_x = 2;
  int overlap = 1;
  bool commuting = false;
  double decay = 0.5;
  int count = 1;
};

int cmd_verify(const GlobalOpts& opts, const std::vector<std::string>& files,
               const EnsembleFlags& ens) {
  Json rep = make_report("verify");
  rep["policy"] = policy_to_json(opts.pol);

  std::vector<std::pair<PsdMatrix, PsdMatrix>> pairs;
  if (files.size() == 2) {
    const PsdMatrix g = load_psd(files[0], opts, rep);
    const PsdMatrix x = load_psd(files[1], opts, rep);
    pairs.emplace_back(g, x);
  } else if (files.empty()) {
    EnsembleSpec spec;
    spec.dim = ens.dim;
    spec.rank_g = ens.rank_g;
    spec.rank_x = ens.rank_x;
    spec.overlap_dim = ens.overlap;
    spec.commuting = ens.commuting;
    spec.spectrum_decay = ens.decay;
    rep["diagnostics"]["ensemble"] =
        Json{{"dim", spec.dim},         {"rank_g", spec.rank_g},
             {"rank_x", spec.rank_x},   {"overlap", spec.overlap_dim},
             {"commuting", spec.commuting}, {"decay", spec.spectrum_decay},
             {"seed", opts.seed},       {"count", ens.count}};
    for (int i = 0; i < ens.count; ++i) {
      spec.seed = opts.seed + static_cast<std::uint64_t>(i);
      pairs.push_back(gen_pair(spec));
    }
  } else {
    throw IoError("verify: pass either two matrix files or none (ensemble mode)");
  }

  Json reports = Json::array();
  int checks = 0, failed = 0, skipped = 0;
  for (const auto& [g, x] : pairs) {
    const PropertyReport battery = run_battery(g, x, opts.pol);
    checks += static_cast<int>(battery.checks.size());
    failed += battery.fail_count();
    skipped += battery.skip_count();
    reports.push_back(battery_to_json(battery));
  }
  rep["outputs"]["reports"] = std::move(reports);
  rep["diagnostics"]["summary"] = Json{{"pairs", static_cast<int>(pairs.size())},
                                       {"checks", checks},
                                       {"failed", failed},
                                       {"skipped", skipped}};
  rep["exit_code"] = failed > 0 ? 4 : 0;
  return emit(rep);
}

int cmd_gen(const GlobalOpts& opts, const std::string& out_dir,
            const EnsembleFlags& ens) {
  Json rep = make_report("gen");
  rep["policy"] = policy_to_json(opts.pol);
  EnsembleSpec spec;
  spec.dim = ens.dim;
  spec.rank_g = ens.rank_g;
  spec.rank_x = ens.rank_x;
  spec.overlap_dim = ens.overlap;
  spec.commuting = ens.commuting;
  spec.spectrum_decay = ens.decay;
  spec.seed = opts.seed;
  const auto [g, x] = gen_pair(spec);

  fs::create_directories(out_dir);
  const std::string ext = opts.fmt() == MatrixFormat::Csv ? ".csv" : ".txt";
  const std::string g_path = (fs::path(out_dir) / ("G" + ext)).string();
  const std::string x_path = (fs::path(out_dir) / ("X" + ext)).string();
  write_matrix_file(g_path, g.entries(), opts.fmt());
  write_matrix_file(x_path, x.entries(), opts.fmt());

  const Json manifest{{"schema", kReportSchema},
                      {"spec",
                       Json{{"dim", spec.dim},
                            {"rank_g", spec.rank_g},
                            {"rank_x", spec.rank_x},
                            {"overlap", spec.overlap_dim},
                            {"commuting", spec.commuting},
                            {"decay", spec.spectrum_decay},
                            {"seed", spec.seed}}},
                      {"format", format_name(opts.fmt())},
                      {"files",
                       Json{{"G", Json{{"path", g_path},
                                       {"digest", matrix_digest(g.entries())}}},
                            {"X", Json{{"path", x_path},
                                       {"digest", matrix_digest(x.entries())}}}}}};
  const std::string manifest_path = (fs::path(out_dir) / "manifest.json").string();
  std::ofstream manifest_out(manifest_path, std::ios::binary);
  if (!manifest_out) throw IoError("cannot write " + manifest_path);
  manifest_out << manifest.dump(2) << "\n";

  rep["outputs"]["G"] = Json{{"path", g_path}, {"digest", matrix_digest(g.entries())}};
  rep["outputs"]["X"] = Json{{"path", x_path}, {"digest", matrix_digest(x.entries())}};
  rep["outputs"]["manifest"] = manifest_path;
  rep["exit_code"] = 0;
  return emit(rep);
}

int fail(const std::string& command, int code, const std::string& message) {
  Json rep = make_report(command);
  rep["exit_code"] = code;
  rep["diagnostics"]["error"] = message;
  std::cerr << "error: " << message << std::endl;
  return emit(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parallel-addition calculus for PSD matrices"};
  app.require_subcommand(1);

  GlobalOpts opts;
  app.add_option("--tol-rank", opts.pol.rank_rel,
                 "relative rank cutoff per dimension");
  app.add_option("--tol-conv", opts.pol.conv_abs, "iteration stop tolerance");
  app.add_option("--eig1-cluster", opts.pol.eig1_cluster,
                 "eigenvalue-1 cluster half-width");
  app.add_option("--loewner-slack", opts.pol.loewner_slack,
                 "Loewner comparison slack");
  app.add_option("--max-iter", opts.pol.max_iter, "iteration cap");
  app.add_option("--seed", opts.seed, "base RNG seed");
  app.add_option("--format", opts.format, "matrix file format: text or csv");
  app.add_option("--out", opts.out_dir, "directory for output matrices");

  std::string parsum_x, parsum_g, parsum_route = "shorted";
  CLI::App* parsum = app.add_subcommand("parsum", "parallel sum X:G");
  parsum->fallthrough();
  parsum->add_option("x-file", parsum_x)->required();
  parsum->add_option("g-file", parsum_g)->required();
  parsum->add_option("--route", parsum_route,
                     "shorted | regularized | definite | via-m | all");

  std::string tau_g, tau_x;
  bool tau_trace = false;
  CLI::App* tau_cmd = app.add_subcommand("tau", "tau_G(X), all routes");
  tau_cmd->fallthrough();
  tau_cmd->add_option("g-file", tau_g)->required();
  tau_cmd->add_option("x-file", tau_x)->required();
  tau_cmd->add_flag("--trace", tau_trace, "emit the full orbit trace");

  std::string short_a, short_b;
  CLI::App* short_cmd =
      app.add_subcommand("short", "Lebesgue-type decomposition of B along A");
  short_cmd->fallthrough();
  short_cmd->add_option("a-file", short_a)->required();
  short_cmd->add_option("b-file", short_b)->required();

  std::vector<std::string> verify_files;
  EnsembleFlags verify_ens;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the identity battery");
  verify_cmd->fallthrough();
  verify_cmd->add_option("files", verify_files, "G and X files (omit for ensemble mode)")
      ->expected(0, 2);
  verify_cmd->add_option("--dim", verify_ens.dim);
  verify_cmd->add_option("--rank-g", verify_ens.rank_g);
  verify_cmd->add_option("--rank-x", verify_ens.rank_x);
  verify_cmd->add_option("--overlap", verify_ens.overlap);
  verify_cmd->add_flag("--commuting", verify_ens.commuting);
  verify_cmd->add_option("--decay", verify_ens.decay);
  verify_cmd->add_option("--count", verify_ens.count);

  std::string gen_out;
  EnsembleFlags gen_ens;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a seeded (G, X) pair");
  gen_cmd->fallthrough();
  gen_cmd->add_option("out-dir", gen_out)->required();
  gen_cmd->add_option("--dim", gen_ens.dim);
  gen_cmd->add_option("--rank-g", gen_ens.rank_g);
  gen_cmd->add_option("--rank-x", gen_ens.rank_x);
  gen_cmd->add_option("--overlap", gen_ens.overlap);
  gen_cmd->add_flag("--commuting", gen_ens.commuting);
  gen_cmd->add_option("--decay", gen_ens.decay);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    opts.pol.validate();
    if (parsum->parsed()) return cmd_parsum(opts, parsum_x, parsum_g, parsum_route);
    if (tau_cmd->parsed()) return cmd_tau(opts, tau_g, tau_x, tau_trace);
    if (short_cmd->parsed()) return cmd_short(opts, short_a, short_b);
    if (verify_cmd->parsed()) return cmd_verify(opts, verify_files, verify_ens);
    if (gen_cmd->parsed()) return cmd_gen(opts, gen_out, gen_ens);
  } catch (const RouteDisagreementError& e) {
    return fail(command, 3, e.what());
  } catch (const InternalInconsistencyError& e) {
    return fail(command, 3, e.what());
  } catch (const Error& e) {
    return fail(command, 2, e.what());
  } catch (const std::exception& e) {
    return fail(command, 2, e.what());
  }
  return 2;
}

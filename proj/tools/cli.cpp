#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "berezin/cp1.hpp"
#include "berezin/json_io.hpp"
#include "berezin/noise.hpp"
#include "berezin/parallel.hpp"

namespace berezin::cli {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitUsage = 64;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!path.empty()) {
    file.open(path);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    out = &file;
  }
  for (const auto& line : lines) *out << line << "\n";
}

std::vector<int> parse_range(const std::string& text) {
  // "2..24" or a comma list "2,3,5".
  std::vector<int> values;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    for (int p = lo; p <= hi; ++p) values.push_back(p);
  } else {
    size_t pos = 0;
    while (pos < text.size()) {
      const auto comma = text.find(',', pos);
      values.push_back(std::stoi(text.substr(pos, comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (values.empty()) throw CLI::ValidationError("empty integer range");
  return values;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> values;
  size_t pos = 0;
  while (pos < text.size()) {
    const auto comma = text.find(',', pos);
    values.push_back(std::stod(text.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return values;
}

json spectral_report_json(const SpectralReport& report, double tol) {
  json clusters = json::array();
  for (const auto& c : report.clusters)
    clusters.push_back({{"value", c.value}, {"count", c.count}});
  return json{{"eigenvalues", report.eigenvalues},
              {"gap", report.gap},
              {"clusters", std::move(clusters)},
              {"tolerance", tol}};
}

struct PovmOptions {
  std::string input;
  double tol = kPovmDefaultTol;
  bool force = false;

  FinitePovm load() const { return povm_from_json(load_json_file(input), force, tol); }
};

void add_povm_options(CLI::App* cmd, PovmOptions& opt, const char* flag = "--in") {
  cmd->add_option(flag, opt.input, "POVM JSON file")->required();
  cmd->add_option("--tol", opt.tol, "validation tolerance");
  cmd->add_flag("--force", opt.force, "load even if validation fails");
}

// ---- povm ----------------------------------------------------------------

int cmd_povm_validate(const PovmOptions& opt) {
  const auto povm = povm_from_json(load_json_file(opt.input), true, opt.tol);
  const auto report = validate(povm, opt.tol);
  std::cout << json{{"resolution_defect", report.resolution_defect},
                    {"min_state_eigenvalue", report.min_state_eigenvalue},
                    {"weight_sum", report.weight_sum},
                    {"tolerance", report.tolerance},
                    {"passed", report.passed()}}
                   .dump(2)
            << "\n";
  return report.passed() ? kExitOk : kExitValidation;
}

int cmd_povm_spectrum(const PovmOptions& opt, const std::string& out_path) {
  const auto povm = opt.load();
  const auto report = berezin_spectrum(povm, true);
  const auto md = moments(povm);
  json j = spectral_report_json(report, opt.tol);
  j["moments"] = {{"I", md.moment_i},
                  {"J", md.moment_j},
                  {"gap_geometric", gap_via_geometry(povm)}};
  if (!out_path.empty()) save_json_file(out_path, j);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_povm_geometry(const PovmOptions& opt) {
  const auto povm = opt.load();
  const auto md = moments(povm);
  std::cout << json{{"I", md.moment_i},
                    {"J", md.moment_j},
                    {"gap_geometric", gap_via_geometry(povm)},
                    {"center", matrix_to_json(md.center.matrix())},
                    {"bestfit_direction",
                     matrix_to_json(md.bestfit_direction.matrix())},
                    {"tolerance", opt.tol}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int cmd_povm_diffusion(const PovmOptions& opt, const std::string& taus,
                       const std::string& out_path) {
  const auto povm = opt.load();
  const auto report = berezin_spectrum(povm, true);
  std::vector<std::string> lines{"tau,s,t,distance"};
  for (double tau : parse_doubles(taus))
    for (int s = 0; s < povm.size(); ++s)
      for (int t = s + 1; t < povm.size(); ++t)
        lines.push_back(fmt(tau) + "," + povm.label(s) + "," + povm.label(t) +
                        "," + fmt(diffusion_distance(report, tau, s, t)));
  write_lines(out_path, lines);
  return kExitOk;
}

// ---- cp1 -----------------------------------------------------------------

int cmd_cp1_gap(const std::string& p_range, int k_max, const std::string& out_path) {
  const std::vector<int> ps = parse_range(p_range);
  std::vector<std::vector<AsymptoticsRow>> per_p(ps.size());
  parallel_for(static_cast<int>(ps.size()), [&](int i) {
    per_p[i] = verify_gap_asymptotics({ps[i]}, std::min(k_max, ps[i]));
  });
  std::vector<std::string> lines{"p,l,gamma,p_times_defect,target,residual,tol"};
  for (const auto& rows : per_p)
    for (const auto& row : rows)
      lines.push_back(std::to_string(row.p) + "," + std::to_string(row.l) + "," +
                      fmt(row.gamma) + "," + fmt(row.p_times_defect) + "," +
                      fmt(row.target) + "," + fmt(row.residual) + "," + fmt(1e-8));
  write_lines(out_path, lines);
  return kExitOk;
}

int cmd_cp1_eigenfunctions(int p, int l) {
  std::cout << json{{"p", p},
                    {"l", l},
                    {"principal_angle_rad", eigenfunction_vs_harmonics(p, l)},
                    {"cluster_size", 2 * l + 1}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

// ---- group ---------------------------------------------------------------

struct GroupSelection {
  GroupBundle bundle;
  std::vector<cplx> chi;
  std::string rep_name;
};

GroupSelection select_group(const std::string& group_name, const std::string& rep) {
  GroupSelection sel{builtin_group(group_name), {}, rep};
  sel.chi = sel.bundle.rep(rep).character();
  return sel;
}

json char_spectrum_json(const GroupSelection& sel) {
  json eigs = json::array();
  for (const auto& e :
       eigenvalues_via_characters(sel.bundle.group, sel.bundle.table, sel.chi))
    eigs.push_back({{"irrep", e.irrep},
                    {"value", e.value},
                    {"multiplicity", e.multiplicity}});
  return eigs;
}

int cmd_group_spectrum(const std::string& group_name, const std::string& rep) {
  const auto sel = select_group(group_name, rep);
  const auto povm = rep_povm(sel.bundle.group, sel.bundle.rep(rep));
  const auto report = berezin_spectrum(povm, false);
  std::cout << json{{"group", group_name},
                    {"rep", rep},
                    {"character_route", char_spectrum_json(sel)},
                    {"matrix_route", spectral_report_json(report, 1e-8)},
                    {"gap", report.gap}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int cmd_group_demo(const std::string& group_name, const std::string& rep,
                   const std::string& taus) {
  const auto sel = select_group(group_name, rep);
  const auto predicate =
      gap_zero_predicate(sel.bundle.group, sel.bundle.table, sel.chi);
  const auto vanishing = vanishing_off_subgroup(sel.bundle.group, sel.chi);

  json j{{"group", group_name},
         {"rep", rep},
         {"order", sel.bundle.group.order()},
         {"spectrum", char_spectrum_json(sel)},
         {"gap_zero", predicate.gap_zero},
         {"vanishing_off_proper", predicate.vanishing_off_proper},
         {"vanishing_off_order", vanishing.size()}};

  if (!predicate.gap_zero) {
    json scales = json::array();
    for (double tau : parse_doubles(taus)) {
      const auto diff =
          group_diffusion(sel.bundle.group, sel.bundle.table, sel.chi, tau);
      json kernel_sizes = json::array();
      for (const auto& k : diff.kernel_series) kernel_sizes.push_back(k.size());
      scales.push_back({{"tau", tau},
                        {"partition_scales", diff.partition_scales},
                        {"kernel_sizes", std::move(kernel_sizes)},
                        {"max_distance", diff.distances.maxCoeff()}});
    }
    j["diffusion"] = std::move(scales);
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_group_diffusion(const std::string& group_name, const std::string& rep,
                        double tau, const std::string& out_path) {
  const auto sel = select_group(group_name, rep);
  const auto diff = group_diffusion(sel.bundle.group, sel.bundle.table, sel.chi, tau);
  std::vector<std::string> lines{"s,t,scale_index,distance"};
  for (int s = 0; s < sel.bundle.group.order(); ++s)
    for (int t = s + 1; t < sel.bundle.group.order(); ++t)
      lines.push_back(sel.bundle.group.label(s) + "," + sel.bundle.group.label(t) +
                      "," + std::to_string(diff.scale_index(s, t)) + "," +
                      fmt(diff.distances(s, t)));
  write_lines(out_path, lines);
  return kExitOk;
}

// ---- donaldson -----------------------------------------------------------

int cmd_donaldson_run(const std::string& input, double tol, int max_iter,
                      const std::string& trace_path) {
  const auto nu = point_measure_from_json(load_json_file(input));
  const PositiveProduct eye(Eigen::MatrixXcd::Identity(nu.dim, nu.dim));
  const auto trace = iterate_to_balance(nu, eye, tol, max_iter);

  if (!trace_path.empty()) {
    std::vector<std::string> lines{"iter,psi,step_distance,det_before_norm"};
    for (size_t r = 0; r < trace.step_distances.size(); ++r)
      lines.push_back(std::to_string(r) + "," + fmt(trace.psi_values[r]) + "," +
                      fmt(trace.step_distances[r]) + "," +
                      fmt(trace.dets_before_norm[r]));
    write_lines(trace_path, lines);
  }

  json j{{"converged", trace.converged},
         {"iterations", trace.iterations()},
         {"fitted_rate", trace.fitted_rate},
         {"tolerance", tol}};
  if (trace.converged) {
    const auto povm = balanced_povm(nu, trace.final_product());
    j["balanced_defect"] = validate(povm).resolution_defect;
    j["gap"] = berezin_spectrum(povm, false).gap;
    j["fixed_point"] = matrix_to_json(trace.final_product().matrix());
  }
  std::cout << j.dump(2) << "\n";
  return trace.converged ? kExitOk : kExitNumerical;
}

int cmd_donaldson_linearize(const std::string& input, double h, double tol,
                            int max_iter) {
  const auto nu = point_measure_from_json(load_json_file(input));
  const PositiveProduct eye(Eigen::MatrixXcd::Identity(nu.dim, nu.dim));
  const auto trace = iterate_to_balance(nu, eye, tol, max_iter);
  if (!trace.converged) {
    std::cout << json{{"converged", false}}.dump(2) << "\n";
    return kExitNumerical;
  }
  const auto fd = linearization_fd(nu, trace.final_product(), h);
  const auto channel = channel_matrix(balanced_povm(nu, trace.final_product()));
  std::cout << json{{"converged", true},
                    {"h", h},
                    {"max_abs_deviation", (fd - channel).cwiseAbs().maxCoeff()},
                    {"check_tolerance", 1e-5}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int cmd_donaldson_check(const std::string& input) {
  const auto nu = point_measure_from_json(load_json_file(input));
  const auto report = check_spade(nu);
  json j{{"spanning", report.spanning}};
  if (report.exact.has_value())
    j["exact"] = *report.exact;
  else
    j["exact"] = nullptr;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

// ---- noise & chain --------------------------------------------------------

int cmd_noise_gap_vs_noise(const PovmOptions& opt) {
  const auto povm = opt.load();
  const auto report = minimal_noise(povm);
  std::cout << json{{"minimal_noise", report.minimal_noise},
                    {"gap_crosscheck", report.gap_crosscheck},
                    {"difference",
                     std::abs(report.minimal_noise - report.gap_crosscheck)},
                    {"tolerance", 1e-9}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int cmd_chain_simulate(const PovmOptions& opt, const std::string& start, int steps,
                       int runs, std::uint64_t seed, const std::string& out_path) {
  const auto povm = opt.load();
  const auto chain = lueders_chain(povm);
  const int start_index = start.empty() ? 0 : povm.index_of(start);
  const auto sim = simulate_chain(chain, start_index, steps, runs, seed);

  if (!out_path.empty()) {
    std::vector<std::string> lines{"state,empirical,exact,stationary"};
    for (int j = 0; j < static_cast<int>(chain.labels.size()); ++j)
      lines.push_back(chain.labels[j] + "," + fmt(sim.empirical[j]) + "," +
                      fmt(sim.exact[j]) + "," + fmt(chain.stationary[j]));
    write_lines(out_path, lines);
  }
  std::cout << json{{"seed", sim.seed},
                    {"steps", steps},
                    {"runs", runs},
                    {"tv_to_exact", sim.tv_to_exact},
                    {"tv_to_stationary", sim.tv_to_stationary},
                    {"sampling_sigma", sim.sampling_sigma},
                    {"three_sigma_ok", sim.tv_to_exact <= 3 * sim.sampling_sigma}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int cmd_chain_power(const PovmOptions& opt, int k_max, const std::string& out_path) {
  const auto povm = opt.load();
  const DensityOperator rho0 = projector_onto(
      Eigen::VectorXcd::Unit(povm.dim(), 0));
  const auto norms = channel_power_convergence(povm, rho0, k_max);
  if (!out_path.empty()) {
    std::vector<std::string> lines{"k,distance"};
    for (size_t k = 0; k < norms.size(); ++k)
      lines.push_back(std::to_string(k) + "," + fmt(norms[k]));
    write_lines(out_path, lines);
  }
  std::cout << json{{"k_max", k_max},
                    {"fitted_rate", fitted_decay_rate(norms)},
                    {"gamma1", 1.0 - berezin_spectrum(povm, false).gap}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"berezin-lab: POVM spectral-gap laboratory"};
  app.require_subcommand(1);

  // Option storage must outlive parse(); everything lives in this frame so
  // repeated run() calls (tests) start from defaults.
  struct {
    PovmOptions validate, spectrum, geometry, diffusion, noise, sim, power;
    std::string spectrum_out, diffusion_taus = "1", diffusion_out;
    std::string cp1_range = "2", cp1_out;
    int cp1_kmax = 1, ef_p = 8, ef_l = 1;
    std::string demo_group = "s4", demo_rep = "standard", demo_taus = "1,2,5,10";
    std::string spec_group = "s4", spec_rep = "standard";
    std::string gd_group = "s4", gd_rep = "standard", gd_out;
    double gd_tau = 2.0;
    std::string don_in, don_trace, lin_in, chk_in;
    double don_tol = 1e-12, lin_h = 1e-5;
    int don_max_iter = 2000;
    std::string sim_start, sim_out, power_out;
    int sim_steps = 30, sim_runs = 10000, power_kmax = 40;
    std::uint64_t sim_seed = 42;
  } o;

  int exit_code = kExitOk;

  auto* povm_cmd = app.add_subcommand("povm", "POVM file analyses");
  povm_cmd->require_subcommand(1);
  {
    auto* validate_cmd = povm_cmd->add_subcommand("validate", "validation report");
    add_povm_options(validate_cmd, o.validate);
    validate_cmd->callback([&] { exit_code = cmd_povm_validate(o.validate); });

    auto* spectrum_cmd = povm_cmd->add_subcommand("spectrum", "Berezin spectrum");
    add_povm_options(spectrum_cmd, o.spectrum);
    spectrum_cmd->add_option("--out", o.spectrum_out, "also write report JSON here");
    spectrum_cmd->callback(
        [&] { exit_code = cmd_povm_spectrum(o.spectrum, o.spectrum_out); });

    auto* geometry_cmd = povm_cmd->add_subcommand("geometry", "moment geometry");
    add_povm_options(geometry_cmd, o.geometry);
    geometry_cmd->callback([&] { exit_code = cmd_povm_geometry(o.geometry); });

    auto* diffusion_cmd = povm_cmd->add_subcommand("diffusion", "diffusion distances");
    add_povm_options(diffusion_cmd, o.diffusion);
    diffusion_cmd->add_option("--tau", o.diffusion_taus, "comma list of times");
    diffusion_cmd->add_option("--out", o.diffusion_out, "CSV path (default stdout)");
    diffusion_cmd->callback([&] {
      exit_code = cmd_povm_diffusion(o.diffusion, o.diffusion_taus, o.diffusion_out);
    });
  }

  auto* cp1_cmd = app.add_subcommand("cp1", "coherent-state quantization of the sphere");
  cp1_cmd->require_subcommand(1);
  {
    auto* gap_cmd = cp1_cmd->add_subcommand("gap", "gap and cluster table");
    gap_cmd->add_option("--p", o.cp1_range, "level or range, e.g. 2..24")->required();
    gap_cmd->add_option("--kmax", o.cp1_kmax, "largest harmonic degree");
    gap_cmd->add_option("--out", o.cp1_out, "CSV path (default stdout)");
    gap_cmd->callback(
        [&] { exit_code = cmd_cp1_gap(o.cp1_range, o.cp1_kmax, o.cp1_out); });

    auto* ef_cmd = cp1_cmd->add_subcommand("eigenfunctions",
                                           "principal angle to harmonics");
    ef_cmd->add_option("--p", o.ef_p, "level")->required();
    ef_cmd->add_option("--l", o.ef_l, "harmonic degree")->required();
    ef_cmd->callback([&] { exit_code = cmd_cp1_eigenfunctions(o.ef_p, o.ef_l); });
  }

  auto* group_cmd = app.add_subcommand("group", "finite-group representation POVMs");
  group_cmd->require_subcommand(1);
  {
    auto* demo_cmd = group_cmd->add_subcommand("demo", "full demo report");
    demo_cmd->add_option("--group", o.demo_group, "builtin group name")->required();
    demo_cmd->add_option("--rep", o.demo_rep, "representation name")->required();
    demo_cmd->add_option("--tau", o.demo_taus, "comma list of diffusion times");
    demo_cmd->callback(
        [&] { exit_code = cmd_group_demo(o.demo_group, o.demo_rep, o.demo_taus); });

    auto* spec_cmd = group_cmd->add_subcommand("spectrum", "both spectral routes");
    spec_cmd->add_option("--group", o.spec_group, "builtin group name")->required();
    spec_cmd->add_option("--rep", o.spec_rep, "representation name")->required();
    spec_cmd->callback(
        [&] { exit_code = cmd_group_spectrum(o.spec_group, o.spec_rep); });

    auto* diff_cmd = group_cmd->add_subcommand("diffusion", "distance table");
    diff_cmd->add_option("--group", o.gd_group, "builtin group name")->required();
    diff_cmd->add_option("--rep", o.gd_rep, "representation name")->required();
    diff_cmd->add_option("--tau", o.gd_tau, "diffusion time");
    diff_cmd->add_option("--out", o.gd_out, "CSV path (default stdout)");
    diff_cmd->callback([&] {
      exit_code = cmd_group_diffusion(o.gd_group, o.gd_rep, o.gd_tau, o.gd_out);
    });
  }

  auto* don_cmd = app.add_subcommand("donaldson", "balanced-product iteration");
  don_cmd->require_subcommand(1);
  {
    auto* run_cmd = don_cmd->add_subcommand("run", "iterate to a balanced product");
    run_cmd->add_option("--in", o.don_in, "point-measure JSON")->required();
    run_cmd->add_option("--tol", o.don_tol, "relative step tolerance");
    run_cmd->add_option("--max-iter", o.don_max_iter, "iteration cap");
    run_cmd->add_option("--trace", o.don_trace, "write per-iteration CSV here");
    run_cmd->callback([&] {
      exit_code = cmd_donaldson_run(o.don_in, o.don_tol, o.don_max_iter, o.don_trace);
    });

    auto* lin_cmd = don_cmd->add_subcommand(
        "linearize", "finite-difference linearization vs channel");
    lin_cmd->add_option("--in", o.lin_in, "point-measure JSON")->required();
    lin_cmd->add_option("--step", o.lin_h, "central-difference step");
    lin_cmd->callback(
        [&] { exit_code = cmd_donaldson_linearize(o.lin_in, o.lin_h, 1e-12, 3000); });

    auto* chk_cmd = don_cmd->add_subcommand("check", "spanning and subspace-mass checks");
    chk_cmd->add_option("--in", o.chk_in, "point-measure JSON")->required();
    chk_cmd->callback([&] { exit_code = cmd_donaldson_check(o.chk_in); });
  }

  auto* noise_cmd = app.add_subcommand("noise", "quantum-noise identities");
  noise_cmd->require_subcommand(1);
  {
    auto* gvn_cmd = noise_cmd->add_subcommand("gap-vs-noise",
                                              "minimal noise vs spectral gap");
    add_povm_options(gvn_cmd, o.noise, "--povm");
    gvn_cmd->callback([&] { exit_code = cmd_noise_gap_vs_noise(o.noise); });
  }

  auto* chain_cmd = app.add_subcommand("chain", "repeated-measurement Markov chain");
  chain_cmd->require_subcommand(1);
  {
    auto* sim_cmd = chain_cmd->add_subcommand("simulate", "Monte Carlo trajectories");
    add_povm_options(sim_cmd, o.sim, "--povm");
    sim_cmd->add_option("--start", o.sim_start, "starting point label (default first)");
    sim_cmd->add_option("--steps", o.sim_steps, "chain length");
    sim_cmd->add_option("--runs", o.sim_runs, "number of trajectories");
    sim_cmd->add_option("--seed", o.sim_seed, "RNG seed");
    sim_cmd->add_option("--out", o.sim_out, "per-state CSV output path");
    sim_cmd->callback([&] {
      exit_code = cmd_chain_simulate(o.sim, o.sim_start, o.sim_steps, o.sim_runs,
                                     o.sim_seed, o.sim_out);
    });

    auto* pow_cmd = chain_cmd->add_subcommand("power", "channel-power convergence");
    add_povm_options(pow_cmd, o.power, "--povm");
    pow_cmd->add_option("--kmax", o.power_kmax, "number of channel applications");
    pow_cmd->add_option("--out", o.power_out, "CSV output path");
    pow_cmd->callback(
        [&] { exit_code = cmd_chain_power(o.power, o.power_kmax, o.power_out); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return exit_code;
}

}  // namespace berezin::cli

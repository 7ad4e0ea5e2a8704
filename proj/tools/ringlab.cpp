// Command-line front end: spectra, simulate, classify, sweep, floquet,
// boundary and two-rings-demo subcommands writing analysis-ready JSON/CSV.
//
// Exit codes: 0 success (and, where applicable, a positive result),
// 2 flag/config errors, 3 numerical failures, 4 no classification.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ringlab/detect.hpp"
#include "ringlab/errors.hpp"
#include "ringlab/fhn.hpp"
#include "ringlab/io.hpp"
#include "ringlab/kinetics.hpp"
#include "ringlab/rng.hpp"
#include "ringlab/spectrum.hpp"
#include "ringlab/sweep.hpp"
#include "ringlab/topology.hpp"
#include "ringlab/waves.hpp"

using namespace ringlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitBadArgs = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUndecided = 4;

std::string out_path(const std::string& dir, const std::string& name) {
  io::ensure_directory(dir);
  return (fs::path(dir) / name).string();
}

json spectrum_json(const std::vector<std::complex<double>>& eigs,
                   const spectral::SpectrumReport& report, int n) {
  json j;
  j["n"] = n;
  json list = json::array();
  for (const auto& e : eigs) list.push_back({e.real(), e.imag()});
  j["eigenvalues"] = std::move(list);
  j["max_im_re_ratio"] = report.max_ratio;
  j["bound"] = report.bound;
  j["bound_satisfied"] = report.bound_satisfied;
  return j;
}

// CSV rate table: 1-based "i,j,q_ij" rows, optional # comments.
Matrix read_rate_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read rate file: " + path);
  struct Entry {
    int i, j;
    double q;
  };
  std::vector<Entry> entries;
  int n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    Entry e;
    char c1, c2;
    if (!(row >> e.i >> c1 >> e.j >> c2 >> e.q) || c1 != ',' || c2 != ',')
      throw DomainError("malformed rate row: " + line);
    if (e.i < 1 || e.j < 1) throw DomainError("rate indices are 1-based");
    n = std::max(n, std::max(e.i, e.j));
    entries.push_back(e);
  }
  if (n < 2) throw DomainError("rate table needs at least two states");
  Matrix rates(n, n);
  for (const Entry& e : entries) {
    if (e.i == e.j) throw DomainError("diagonal rates are derived, not given");
    rates(e.i - 1, e.j - 1) = e.q;
  }
  return rates;
}

net::Topology build_topology(const std::string& name, int n) {
  if (name == "chain") return net::Topology::directed_chain(n);
  if (name == "ring") return net::Topology::directed_ring(n);
  if (name == "two-rings") return net::Topology::two_rings(n);
  throw DomainError("unknown topology: " + name);
}

json classification_json(const detect::Classification& cls, int n,
                         double sigma, std::uint64_t seed, int sample) {
  json j;
  j["n"] = n;
  j["sigma"] = sigma;
  j["seed"] = seed;
  j["sample_index"] = sample;
  j["kind"] = detect::to_string(cls.outcome);
  j["mode"] = cls.mode;
  j["checkpoint_time"] = cls.checkpoint_time;
  if (std::isfinite(cls.sync_error)) j["sync_error"] = cls.sync_error;
  if (cls.wave) {
    j["T"] = cls.wave->period;
    j["tau"] = cls.wave->shift;
    j["orbit_mismatch"] = cls.wave->orbit_mismatch;
    j["phase_defect"] = cls.wave->phase_defect;
  }
  if (!cls.note.empty()) j["note"] = cls.note;
  return j;
}

int cmd_spectra(const std::string& topology, int n, double q,
                const std::string& rates_file, const std::string& out_dir) {
  std::vector<std::complex<double>> eigs;
  int size = 0;
  if (topology == "cycle") {
    auto k = spectral::build_cycle_kinetic(n, q);
    size = n;
    eigs = spectral::eigenvalues(k.matrix());
  } else {
    auto k = spectral::build_custom_kinetic(read_rate_table(rates_file));
    size = k.n();
    eigs = spectral::eigenvalues(k.matrix());
  }
  auto report = spectral::max_im_re_ratio(eigs);
  io::write_file_atomic(out_path(out_dir, "spectrum.json"),
                        spectrum_json(eigs, report, size).dump(2) + "\n");
  std::cout << "n=" << size << " max|Im|/|Re|=" << report.max_ratio
            << " bound=" << report.bound
            << (report.bound_satisfied ? " (satisfied)" : " (violated)")
            << "\n";
  return report.bound_satisfied ? 0 : 1;
}

int cmd_simulate(const std::string& topology, int n, double sigma,
                 std::uint64_t seed, int sample, double t_final, double rtol,
                 double atol, double sample_dt, const std::string& out_dir) {
  auto topo = build_topology(topology, n);
  auto ics = net::sample_initial_conditions(
      topo.n(), sample + 1, mix_seed(seed, static_cast<std::uint64_t>(topo.n())));
  net::CouplingConfig coupling{topo, sigma};
  ode::IntegratorConfig cfg{rtol, atol, 0.0, 0.0, sample_dt};
  auto traj = ode::integrate(net::make_fhn_field({}, coupling),
                             ics[static_cast<std::size_t>(sample)].flat(), 0.0,
                             t_final, cfg);
  traj.meta["topology"] = topology;
  traj.meta["n"] = std::to_string(n);
  traj.meta["sigma"] = io::format_double(sigma);
  traj.meta["seed"] = std::to_string(seed);
  traj.meta["sample_index"] = std::to_string(sample);
  traj.meta["t_final"] = io::format_double(t_final);
  traj.meta["rtol"] = io::format_double(rtol);
  traj.meta["atol"] = io::format_double(atol);
  traj.meta["sample_dt"] = io::format_double(sample_dt);
  const std::string path = out_path(out_dir, "trajectory.csv");
  io::write_file_atomic(path, io::trajectory_csv(traj));
  std::cout << "wrote " << path << " (" << traj.size() << " samples)\n";
  return 0;
}

int cmd_classify(const std::string& topology, int n, double sigma,
                 std::uint64_t seed, int sample, double t_final, double rtol,
                 double atol, double sample_dt, const std::string& out_dir) {
  auto topo = build_topology(topology, n);
  auto ics = net::sample_initial_conditions(
      topo.n(), sample + 1, mix_seed(seed, static_cast<std::uint64_t>(topo.n())));
  net::CouplingConfig coupling{topo, sigma};
  detect::ProtocolConfig cfg;
  cfg.t_final = t_final;
  cfg.integrator.rtol = rtol;
  cfg.integrator.atol = atol;
  cfg.integrator.dense_output_dt = sample_dt;
  auto cls = detect::run_protocol({}, coupling,
                                  ics[static_cast<std::size_t>(sample)], cfg);
  json j = classification_json(cls, topo.n(), sigma, seed, sample);
  const std::string path = out_path(out_dir, "classification.json");
  io::write_file_atomic(path, j.dump(2) + "\n");
  std::cout << j.dump() << "\n";
  return cls.outcome == detect::Outcome::None ? kExitUndecided : 0;
}

int cmd_sweep(const std::string& config_path, bool resolve_stability,
              const std::string& out_dir) {
  sweep::SweepConfig cfg;
  if (!config_path.empty()) cfg = sweep::load_config(config_path);
  io::ensure_directory(out_dir);
  const std::string cells = (fs::path(out_dir) / "cells").string();

  int done = 0;
  auto grid = sweep::run_grid(cfg, cells, [&](const sweep::CellResult& cell) {
    ++done;
    std::cout << "cell n=" << cell.n << " sigma=" << io::format_double(cell.sigma)
              << " sync=" << cell.sync_count << " wave=" << cell.wave_any_count
              << " none=" << cell.none_count << " (" << done << " cells done)"
              << std::endl;
  });

  std::function<bool(int, double)> probe;
  if (resolve_stability) {
    probe = [&](int n, double sigma) {
      try {
        auto orbit =
            waves::find_wave_orbit(n, sigma, mix_seed(cfg.master_seed, 91));
        if (!orbit) return false;
        return waves::floquet_multipliers(*orbit).stable;
      } catch (const Error&) {
        return false;
      }
    };
  }

  io::write_file_atomic(out_path(out_dir, "grid.csv"), sweep::grid_csv(grid));
  io::write_file_atomic(
      out_path(out_dir, "regions.csv"),
      sweep::regions_csv(cfg, sweep::label_regions(grid, probe)));
  std::cout << "wrote grid.csv and regions.csv under " << out_dir << "\n";
  return 0;
}

int cmd_floquet(int n, double sigma, std::uint64_t seed,
                const std::string& out_dir) {
  auto orbit = waves::find_wave_orbit(n, sigma, seed);
  if (!orbit) {
    std::cout << "no mode-1 wave locked at n=" << n
              << " sigma=" << io::format_double(sigma) << "\n";
    return kExitUndecided;
  }
  auto fl = waves::floquet_multipliers(*orbit);
  json j;
  j["n"] = n;
  j["sigma"] = sigma;
  j["seed"] = seed;
  j["period"] = orbit->period;
  j["shift"] = orbit->shift;
  j["shooting_residual"] = orbit->residual;
  j["closure_defect"] = waves::closure_relation_defect(*orbit);
  json mults = json::array();
  for (const auto& m : fl.multipliers) mults.push_back({m.real(), m.imag()});
  j["multipliers"] = std::move(mults);
  j["trivial_defect"] = fl.trivial_defect;
  j["max_nontrivial"] = fl.max_nontrivial;
  j["stable"] = fl.stable;
  j["liouville_defect"] = waves::liouville_defect(*orbit, 64);
  j["delay_model_defect"] =
      waves::delay_model_defect(*orbit, {1e-8, 1e-10, 0.0, 0.0, 0.1});
  const std::string path = out_path(out_dir, "floquet.json");
  io::write_file_atomic(path, j.dump(2) + "\n");
  std::cout << "period=" << orbit->period << " stable=" << (fl.stable ? 1 : 0)
            << " max nontrivial multiplier=" << fl.max_nontrivial << "\n";
  return 0;
}

int cmd_boundary(const std::vector<int>& n_values, double sigma_lo,
                 double sigma_hi, double sigma_step, std::uint64_t seed,
                 const std::string& out_dir) {
  auto points = waves::wave_stability_boundary(n_values, sigma_lo, sigma_hi,
                                               sigma_step, seed);
  std::string csv =
      "# config={\"sigma_lo\":" + io::format_double(sigma_lo) +
      ",\"sigma_hi\":" + io::format_double(sigma_hi) +
      ",\"sigma_step\":" + io::format_double(sigma_step) +
      ",\"seed\":" + std::to_string(seed) + "}\n";
  csv += "n,sigma_critical,max_multiplier_below,max_multiplier_above\n";
  int found = 0;
  for (const auto& pt : points) {
    if (!pt.note.empty()) {
      std::cout << "n=" << pt.n << ": " << pt.note << "\n";
      continue;
    }
    std::cout << "n=" << pt.n << ": boundary in [" << pt.sigma_low << ", "
              << pt.sigma_high << "]\n";
    ++found;
    csv += std::to_string(pt.n);
    csv += ',';
    csv += io::format_double(0.5 * (pt.sigma_low + pt.sigma_high));
    csv += ',';
    csv += io::format_double(pt.max_multiplier_low);
    csv += ',';
    csv += io::format_double(pt.max_multiplier_high);
    csv += '\n';
  }
  const std::string path = out_path(out_dir, "boundary.csv");
  io::write_file_atomic(path, csv);
  std::cout << "wrote " << path << " (" << found << " boundary rows)\n";
  return 0;
}

int cmd_two_rings_demo(int k, double sigma, std::uint64_t seed,
                       const std::string& out_dir) {
  auto topo = net::Topology::two_rings(k);

  // ring 1 from one synchronized box draw, ring 2 on the rotating wave of
  // the isolated ring at this coupling strength
  auto orbit = waves::find_wave_orbit(k, sigma, seed);
  if (!orbit) {
    std::cerr << "no rotating wave locks at k=" << k << " sigma=" << sigma
              << "; pick a cell inside the wave region\n";
    return kExitUndecided;
  }
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(k)));
  std::vector<double> x0(static_cast<std::size_t>(4 * k));
  const double z0 = rng.uniform(-net::ic_z_bound, net::ic_z_bound);
  const double y0 = rng.uniform(-net::ic_y_bound, net::ic_y_bound);
  const std::vector<double> wave_state = orbit->state_at(0.0);
  for (int j = 0; j < k; ++j) {
    x0[static_cast<std::size_t>(2 * j)] = z0;
    x0[static_cast<std::size_t>(2 * j + 1)] = y0;
    x0[static_cast<std::size_t>(2 * (k + j))] =
        wave_state[static_cast<std::size_t>(2 * j)];
    x0[static_cast<std::size_t>(2 * (k + j) + 1)] =
        wave_state[static_cast<std::size_t>(2 * j + 1)];
  }

  net::CouplingConfig coupling{topo, sigma};
  const double t_final = 3000.0;
  auto traj =
      ode::integrate(net::make_fhn_field({}, coupling), x0, 0.0, t_final, {});

  auto pairs = net::neighbour_pairs(topo);
  const std::vector<std::pair<int, int>> ring1(pairs.begin(),
                                               pairs.begin() + k);
  const std::vector<std::pair<int, int>> ring2(pairs.begin() + k,
                                               pairs.begin() + 2 * k);
  auto sync1 = detect::measure_sync(traj, ring1, t_final);
  auto sync2 = detect::measure_sync(traj, ring2, t_final);
  // the cross-ring drive frequency-modulates ring 2's wave; relax the
  // cycle-regularity gate so the shift pattern is still reported
  detect::DetectConfig relaxed;
  relaxed.jitter_tol = 0.3;
  auto wave2 = detect::analyze_wave(traj, ring2, t_final, t_final, relaxed);

  json j;
  j["k"] = k;
  j["sigma"] = sigma;
  j["seed"] = seed;
  j["t_final"] = t_final;
  j["ring1_neighbour_error"] = sync1.error;
  j["ring1_sync"] = sync1.sync;
  j["ring2_neighbour_error"] = sync2.error;
  j["ring2_seed_period"] = orbit->period;
  if (wave2) {
    j["ring2_period"] = wave2->period.period;
    j["ring2_period_jitter"] = wave2->period.jitter;
    j["ring2_shifts"] = wave2->shifts;
  }
  io::write_file_atomic(out_path(out_dir, "two_rings.json"), j.dump(2) + "\n");

  // trailing excerpt of the trajectory for plotting
  ode::Trajectory tail = traj;
  tail.drop_front(tail.index_at(t_final - 200.0));
  tail.meta["topology"] = "two-rings";
  tail.meta["k"] = std::to_string(k);
  tail.meta["sigma"] = io::format_double(sigma);
  tail.meta["seed"] = std::to_string(seed);
  io::write_file_atomic(out_path(out_dir, "two_rings_tail.csv"),
                        io::trajectory_csv(tail));

  std::cout << "ring-1 neighbour error " << sync1.error
            << ", ring-2 neighbour error " << sync2.error << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinetic spectra and coupled relaxation-oscillator networks"};
  app.require_subcommand(1);

  std::string out_dir = "./ringlab-out";
  app.add_option("--out-dir", out_dir, "output directory")
      ->capture_default_str();

  // spectra
  auto* spectra = app.add_subcommand("spectra", "eigenvalues of a kinetic matrix");
  std::string sp_topology = "cycle";
  int sp_n = 0;
  double sp_q = 1.0;
  std::string sp_rates;
  spectra->add_option("--topology", sp_topology, "cycle or custom")
      ->check(CLI::IsMember({"cycle", "custom"}));
  spectra->add_option("--n", sp_n, "number of states (cycle)");
  spectra->add_option("--q", sp_q, "cycle rate constant");
  spectra->add_option("--rates", sp_rates, "CSV rate table i,j,q_ij (custom)");

  // shared simulation flags
  auto add_sim_flags = [](CLI::App* cmd, std::string& topology, int& n,
                          double& sigma, std::uint64_t& seed, int& sample,
                          double& t_final, double& rtol, double& atol,
                          double& dt) {
    cmd->add_option("--topology", topology, "chain, ring or two-rings")
        ->check(CLI::IsMember({"chain", "ring", "two-rings"}));
    cmd->add_option("--n", n, "nodes (ring size for two-rings)")->required();
    cmd->add_option("--sigma", sigma, "coupling strength")->required();
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--sample", sample, "initial-condition index");
    cmd->add_option("--t-final", t_final, "integration horizon");
    cmd->add_option("--rtol", rtol, "relative tolerance");
    cmd->add_option("--atol", atol, "absolute tolerance");
    cmd->add_option("--sample-dt", dt, "output sampling interval");
  };

  auto* simulate = app.add_subcommand("simulate", "integrate and dump a trajectory");
  std::string si_topology = "ring";
  int si_n = 0;
  double si_sigma = 0.0;
  std::uint64_t si_seed = 2026;
  int si_sample = 0;
  double si_tfinal = 2000.0, si_rtol = 1e-5, si_atol = 1e-5, si_dt = 0.1;
  add_sim_flags(simulate, si_topology, si_n, si_sigma, si_seed, si_sample,
                si_tfinal, si_rtol, si_atol, si_dt);

  auto* classify = app.add_subcommand("classify", "run the checkpoint protocol");
  std::string cl_topology = "ring";
  int cl_n = 0;
  double cl_sigma = 0.0;
  std::uint64_t cl_seed = 2026;
  int cl_sample = 0;
  double cl_tfinal = 20000.0, cl_rtol = 1e-5, cl_atol = 1e-5, cl_dt = 0.1;
  add_sim_flags(classify, cl_topology, cl_n, cl_sigma, cl_seed, cl_sample,
                cl_tfinal, cl_rtol, cl_atol, cl_dt);

  auto* sweep_cmd = app.add_subcommand("sweep", "grid scan with region labels");
  std::string sw_config;
  bool sw_stability = false;
  sweep_cmd->add_option("--config", sw_config, "JSON config file");
  sweep_cmd->add_flag("--resolve-stability", sw_stability,
                      "probe wave stability for the sync-region split");

  auto* floquet = app.add_subcommand("floquet", "multipliers of a locked wave");
  int fl_n = 0;
  double fl_sigma = 0.0;
  std::uint64_t fl_seed = 2026;
  floquet->add_option("--n", fl_n, "ring size")->required();
  floquet->add_option("--sigma", fl_sigma, "coupling strength")->required();
  floquet->add_option("--seed", fl_seed, "seed for the wave search");

  auto* boundary = app.add_subcommand("boundary", "wave stability boundary scan");
  std::vector<int> bd_n = {3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  double bd_lo = 0.25, bd_hi = 3.0, bd_step = 0.25;
  std::uint64_t bd_seed = 2026;
  boundary->add_option("--n", bd_n, "ring sizes");
  boundary->add_option("--sigma-lo", bd_lo, "scan start");
  boundary->add_option("--sigma-hi", bd_hi, "scan end");
  boundary->add_option("--sigma-step", bd_step, "scan step");
  boundary->add_option("--seed", bd_seed, "seed for the wave searches");

  auto* demo = app.add_subcommand("two-rings-demo",
                                  "competition between two coupled rings");
  int dm_k = 10;
  double dm_sigma = 0.75;
  std::uint64_t dm_seed = 2026;
  demo->add_option("--k", dm_k, "nodes per ring");
  demo->add_option("--sigma", dm_sigma, "coupling strength");
  demo->add_option("--seed", dm_seed, "seed for the synchronized ring state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadArgs;
  }

  try {
    if (*spectra) {
      if (sp_topology == "cycle" && sp_n < 2) {
        std::cerr << "spectra: --n >= 2 is required for the cycle\n";
        return kExitBadArgs;
      }
      if (sp_topology == "custom" && sp_rates.empty()) {
        std::cerr << "spectra: --rates is required for custom topology\n";
        return kExitBadArgs;
      }
      return cmd_spectra(sp_topology, sp_n, sp_q, sp_rates, out_dir);
    }
    if (*simulate) {
      if (!(si_sigma >= 0.0)) {
        std::cerr << "simulate: sigma must be nonnegative\n";
        return kExitBadArgs;
      }
      return cmd_simulate(si_topology, si_n, si_sigma, si_seed, si_sample,
                          si_tfinal, si_rtol, si_atol, si_dt, out_dir);
    }
    if (*classify) {
      if (!(cl_sigma >= 0.0)) {
        std::cerr << "classify: sigma must be nonnegative\n";
        return kExitBadArgs;
      }
      return cmd_classify(cl_topology, cl_n, cl_sigma, cl_seed, cl_sample,
                          cl_tfinal, cl_rtol, cl_atol, cl_dt, out_dir);
    }
    if (*sweep_cmd) return cmd_sweep(sw_config, sw_stability, out_dir);
    if (*floquet) {
      if (!(fl_sigma > 0.0)) {
        std::cerr << "floquet: sigma must be positive\n";
        return kExitBadArgs;
      }
      return cmd_floquet(fl_n, fl_sigma, fl_seed, out_dir);
    }
    if (*boundary) return cmd_boundary(bd_n, bd_lo, bd_hi, bd_step, bd_seed,
                                       out_dir);
    if (*demo) return cmd_two_rings_demo(dm_k, dm_sigma, dm_seed, out_dir);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  }
  return 0;
}

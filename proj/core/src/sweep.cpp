#include "ringlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <numbers>
#include <thread>

#include "json.hpp"
#include "ringlab/errors.hpp"
#include "ringlab/io.hpp"
#include "ringlab/rng.hpp"

namespace ringlab::sweep {

using nlohmann::json;

namespace {

const char* outcome_name(detect::Outcome o) { return detect::to_string(o); }

detect::Outcome outcome_from(const std::string& s) {
  if (s == "Sync") return detect::Outcome::Sync;
  if (s == "RotatingWave") return detect::Outcome::RotatingWave;
  if (s == "None") return detect::Outcome::None;
  throw DomainError("unknown outcome label: " + s);
}

net::Topology build_topology(const std::string& name, int n) {
  if (name == "ring") return net::Topology::directed_ring(n);
  if (name == "chain") return net::Topology::directed_chain(n);
  throw DomainError("sweep topology must be \"ring\" or \"chain\"");
}

void validate(const SweepConfig& c) {
  build_topology(c.topology, 2);
  if (c.n_values.empty()) throw DomainError("n_values must not be empty");
  for (int n : c.n_values)
    if (n < 2) throw DomainError("n_values entries must be >= 2");
  if (c.sigma_values.empty())
    throw DomainError("sigma_values must not be empty");
  for (double s : c.sigma_values)
    if (!(s > 0.0) || !std::isfinite(s))
      throw DomainError("sigma_values entries must be finite and positive");
  if (c.samples_per_cell < 1)
    throw DomainError("samples_per_cell must be >= 1");
  if (!(c.t_final > 0.0)) throw DomainError("t_final must be positive");
  if (!(c.checkpoint_interval > 0.0) || c.checkpoint_interval > c.t_final)
    throw DomainError("checkpoint_interval must lie in (0, t_final]");
  if (!(c.rtol > 0.0) || !(c.atol > 0.0))
    throw DomainError("tolerances must be positive");
  if (!(c.sample_dt > 0.0)) throw DomainError("sample_dt must be positive");
  if (!(c.detect.sync_window > 0.0) || !(c.detect.sync_tol > 0.0) ||
      !(c.detect.orbit_tol > 0.0) || !(c.detect.phase_tol > 0.0) ||
      !(c.detect.jitter_tol > 0.0) || !(c.detect.tail_fraction > 0.0))
    throw DomainError("detection settings must be positive");
  if (c.workers < 0) throw DomainError("workers must be >= 0");
}

json config_to_json(const SweepConfig& c) {
  json j;
  j["topology"] = c.topology;
  j["n_values"] = c.n_values;
  j["sigma_values"] = c.sigma_values;
  j["samples_per_cell"] = c.samples_per_cell;
  j["t_final"] = c.t_final;
  j["checkpoint_interval"] = c.checkpoint_interval;
  j["master_seed"] = c.master_seed;
  j["rtol"] = c.rtol;
  j["atol"] = c.atol;
  j["sample_dt"] = c.sample_dt;
  j["sync_window"] = c.detect.sync_window;
  j["sync_tol"] = c.detect.sync_tol;
  j["orbit_tol"] = c.detect.orbit_tol;
  j["phase_tol"] = c.detect.phase_tol;
  j["jitter_tol"] = c.detect.jitter_tol;
  j["tail_fraction"] = c.detect.tail_fraction;
  // workers is accepted on input but never serialized: results are
  // worker-independent and the headers identify the experiment only.
  return j;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RINGLAB_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string cell_filename(int n, int sigma_index) {
  return "cell_n" + std::to_string(n) + "_s" + std::to_string(sigma_index) +
         ".json";
}

json cell_to_json(const CellResult& cell, std::uint64_t master_seed) {
  json j;
  j["seed"] = master_seed;
  j["n"] = cell.n;
  j["sigma_index"] = cell.sigma_index;
  j["sigma"] = cell.sigma;
  j["sync"] = cell.sync_count;
  j["wave_mode1"] = cell.wave_mode1_count;
  j["wave_any"] = cell.wave_any_count;
  j["none"] = cell.none_count;
  json samples = json::array();
  for (const SampleResult& s : cell.samples) {
    json e;
    e["sample"] = s.sample;
    e["outcome"] = outcome_name(s.outcome);
    e["mode"] = s.mode;
    e["checkpoint"] = s.checkpoint_time;
    e["sync_error"] = s.sync_error;
    e["note"] = s.note;
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);
  return j;
}

// Returns nothing when the file is absent, malformed or does not match the
// requested cell, so the caller recomputes.
std::optional<CellResult> load_cell(const std::string& path,
                                    const SweepConfig& cfg, int n,
                                    int sigma_index) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    const json j = json::parse(io::read_file(path));
    if (j.at("seed").get<std::uint64_t>() != cfg.master_seed)
      return std::nullopt;
    CellResult cell;
    cell.n = j.at("n").get<int>();
    cell.sigma_index = j.at("sigma_index").get<int>();
    cell.sigma = j.at("sigma").get<double>();
    cell.sync_count = j.at("sync").get<int>();
    cell.wave_mode1_count = j.at("wave_mode1").get<int>();
    cell.wave_any_count = j.at("wave_any").get<int>();
    cell.none_count = j.at("none").get<int>();
    for (const json& e : j.at("samples")) {
      SampleResult s;
      s.sample = e.at("sample").get<int>();
      s.outcome = outcome_from(e.at("outcome").get<std::string>());
      s.mode = e.at("mode").get<int>();
      s.checkpoint_time = e.at("checkpoint").get<double>();
      s.sync_error = e.at("sync_error").get<double>();
      s.note = e.at("note").get<std::string>();
      cell.samples.push_back(std::move(s));
    }
    const double sigma = cfg.sigma_values[static_cast<std::size_t>(sigma_index)];
    if (cell.n != n || cell.sigma_index != sigma_index ||
        std::abs(cell.sigma - sigma) > 1e-12 ||
        static_cast<int>(cell.samples.size()) != cfg.samples_per_cell)
      return std::nullopt;
    return cell;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

SweepConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config root must be a JSON object");

  static const char* known[] = {
      "topology",     "n_values",   "sigma_values", "samples_per_cell",
      "t_final",      "checkpoint_interval",        "master_seed",
      "rtol",         "atol",       "sample_dt",    "sync_window",
      "sync_tol",     "orbit_tol",  "phase_tol",    "jitter_tol",
      "tail_fraction", "workers"};
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw DomainError("unknown config key: " + key);
  }

  SweepConfig c;
  try {
    if (j.contains("topology")) c.topology = j["topology"].get<std::string>();
    if (j.contains("n_values"))
      c.n_values = j["n_values"].get<std::vector<int>>();
    if (j.contains("sigma_values"))
      c.sigma_values = j["sigma_values"].get<std::vector<double>>();
    if (j.contains("samples_per_cell"))
      c.samples_per_cell = j["samples_per_cell"].get<int>();
    if (j.contains("t_final")) c.t_final = j["t_final"].get<double>();
    if (j.contains("checkpoint_interval"))
      c.checkpoint_interval = j["checkpoint_interval"].get<double>();
    if (j.contains("master_seed"))
      c.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("rtol")) c.rtol = j["rtol"].get<double>();
    if (j.contains("atol")) c.atol = j["atol"].get<double>();
    if (j.contains("sample_dt")) c.sample_dt = j["sample_dt"].get<double>();
    if (j.contains("sync_window"))
      c.detect.sync_window = j["sync_window"].get<double>();
    if (j.contains("sync_tol")) c.detect.sync_tol = j["sync_tol"].get<double>();
    if (j.contains("orbit_tol"))
      c.detect.orbit_tol = j["orbit_tol"].get<double>();
    if (j.contains("phase_tol"))
      c.detect.phase_tol = j["phase_tol"].get<double>();
    if (j.contains("jitter_tol"))
      c.detect.jitter_tol = j["jitter_tol"].get<double>();
    if (j.contains("tail_fraction"))
      c.detect.tail_fraction = j["tail_fraction"].get<double>();
    if (j.contains("workers")) c.workers = j["workers"].get<int>();
  } catch (const json::type_error& e) {
    throw DomainError(std::string("config value has the wrong type: ") +
                      e.what());
  }
  validate(c);
  return c;
}

void save_config(const SweepConfig& cfg, const std::string& path) {
  validate(cfg);
  io::write_file_atomic(path, config_to_json(cfg).dump(2) + "\n");
}

CellResult run_cell(const SweepConfig& cfg, int n, int sigma_index) {
  if (sigma_index < 0 ||
      sigma_index >= static_cast<int>(cfg.sigma_values.size()))
    throw DomainError("sigma_index out of range");
  const double sigma =
      cfg.sigma_values[static_cast<std::size_t>(sigma_index)];

  net::CouplingConfig coupling{build_topology(cfg.topology, n), sigma};
  const net::FhnParams params;

  detect::ProtocolConfig pc;
  pc.t_final = cfg.t_final;
  pc.checkpoint_interval = cfg.checkpoint_interval;
  pc.detect = cfg.detect;
  pc.integrator = ode::IntegratorConfig{cfg.rtol, cfg.atol, 0.0, 0.0,
                                        cfg.sample_dt};

  CellResult cell;
  cell.n = n;
  cell.sigma_index = sigma_index;
  cell.sigma = sigma;
  cell.samples.reserve(static_cast<std::size_t>(cfg.samples_per_cell));

  for (int k = 0; k < cfg.samples_per_cell; ++k) {
    Rng rng(mix_seed(cfg.master_seed, static_cast<std::uint64_t>(n),
                     static_cast<std::uint64_t>(sigma_index),
                     static_cast<std::uint64_t>(k)));
    net::NetworkState ic;
    ic.z.resize(static_cast<std::size_t>(n));
    ic.y.resize(static_cast<std::size_t>(n));
    for (int jnode = 0; jnode < n; ++jnode) {
      ic.z[static_cast<std::size_t>(jnode)] =
          rng.uniform(-net::ic_z_bound, net::ic_z_bound);
      ic.y[static_cast<std::size_t>(jnode)] =
          rng.uniform(-net::ic_y_bound, net::ic_y_bound);
    }

    detect::Classification cls =
        detect::run_protocol(params, coupling, ic, pc);

    SampleResult s;
    s.sample = k;
    s.outcome = cls.outcome;
    s.mode = cls.mode;
    s.checkpoint_time = cls.checkpoint_time;
    s.sync_error = std::isfinite(cls.sync_error) ? cls.sync_error : 0.0;
    s.note = cls.note;
    switch (cls.outcome) {
      case detect::Outcome::Sync:
        ++cell.sync_count;
        break;
      case detect::Outcome::RotatingWave:
        ++cell.wave_any_count;
        if (cls.mode == 1) ++cell.wave_mode1_count;
        break;
      case detect::Outcome::None:
        ++cell.none_count;
        break;
    }
    cell.samples.push_back(std::move(s));
  }
  return cell;
}

GridResult run_grid(const SweepConfig& cfg, const std::string& resume_dir,
                    const std::function<void(const CellResult&)>& on_cell) {
  validate(cfg);
  if (!resume_dir.empty()) io::ensure_directory(resume_dir);

  struct Job {
    int n;
    int sigma_index;
  };
  std::vector<Job> jobs;
  for (int n : cfg.n_values)
    for (int si = 0; si < static_cast<int>(cfg.sigma_values.size()); ++si)
      jobs.push_back({n, si});

  std::vector<CellResult> cells(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        const Job job = jobs[i];
        std::optional<CellResult> cell;
        std::string path;
        if (!resume_dir.empty()) {
          path = (std::filesystem::path(resume_dir) /
                  cell_filename(job.n, job.sigma_index))
                     .string();
          cell = load_cell(path, cfg, job.n, job.sigma_index);
        }
        const bool fresh = !cell.has_value();
        if (fresh) cell = run_cell(cfg, job.n, job.sigma_index);
        if (fresh && !resume_dir.empty())
          io::write_file_atomic(
              path, cell_to_json(*cell, cfg.master_seed).dump(2) + "\n");
        cells[i] = std::move(*cell);
        if (on_cell) {
          std::lock_guard lock(report_mutex);
          on_cell(cells[i]);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int workers = std::min<int>(resolve_workers(cfg.workers),
                                    static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  std::stable_sort(cells.begin(), cells.end(),
                   [](const CellResult& a, const CellResult& b) {
                     if (a.n != b.n) return a.n < b.n;
                     return a.sigma_index < b.sigma_index;
                   });
  return GridResult{cfg, std::move(cells)};
}

const char* to_string(Region r) {
  switch (r) {
    case Region::Sync1: return "Sync1";
    case Region::Sync2: return "Sync2";
    case Region::Sync3: return "Sync3";
    case Region::Coexistence: return "Coexistence";
    case Region::Sync23Undetermined: return "Sync23Undetermined";
    case Region::WaveOnly: return "WaveOnly";
    case Region::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

double analytic_sync_sigma(const std::string& topology, int n) {
  if (n < 2) throw DomainError("analytic_sync_sigma: need n >= 2");
  if (topology == "chain") return 1.0;
  if (topology == "ring")
    return 1.0 / (1.0 - std::cos(2.0 * std::numbers::pi / n));
  throw DomainError("analytic_sync_sigma: unknown topology " + topology);
}

std::vector<RegionCell> label_regions(
    const GridResult& grid, const std::function<bool(int, double)>& stable_wave) {
  std::vector<RegionCell> out;
  out.reserve(grid.cells.size());
  for (const CellResult& cell : grid.cells) {
    RegionCell rc;
    rc.n = cell.n;
    rc.sigma = cell.sigma;
    const int total = static_cast<int>(cell.samples.size());
    const bool all_sync = cell.sync_count == total;
    const bool all_wave = cell.wave_any_count == total;
    const double threshold =
        analytic_sync_sigma(grid.config.topology, cell.n);

    if (cell.sigma > threshold) {
      rc.region = all_sync ? Region::Sync1 : Region::Unclassified;
    } else if (cell.none_count > 0) {
      rc.region = Region::Unclassified;
    } else if (cell.sync_count > 0 && cell.wave_any_count > 0) {
      rc.region = Region::Coexistence;
    } else if (all_wave) {
      rc.region = Region::WaveOnly;
    } else if (all_sync) {
      if (stable_wave)
        rc.region = stable_wave(cell.n, cell.sigma) ? Region::Sync3
                                                    : Region::Sync2;
      else
        rc.region = Region::Sync23Undetermined;
    } else {
      rc.region = Region::Unclassified;
    }
    out.push_back(rc);
  }
  return out;
}

std::string grid_csv(const GridResult& grid) {
  std::string out = "# config=" + config_to_json(grid.config).dump() + "\n";
  out += "n,sigma,samples,prop_sync,prop_wave_mode1,prop_wave_any,prop_none,seed\n";
  for (const CellResult& cell : grid.cells) {
    const double total = static_cast<double>(cell.samples.size());
    out += std::to_string(cell.n);
    out += ',';
    out += io::format_double(cell.sigma);
    out += ',';
    out += std::to_string(cell.samples.size());
    out += ',';
    out += io::format_double(cell.sync_count / total);
    out += ',';
    out += io::format_double(cell.wave_mode1_count / total);
    out += ',';
    out += io::format_double(cell.wave_any_count / total);
    out += ',';
    out += io::format_double(cell.none_count / total);
    out += ',';
    out += std::to_string(grid.config.master_seed);
    out += '\n';
  }
  return out;
}

std::string regions_csv(const SweepConfig& cfg,
                        const std::vector<RegionCell>& cells) {
  std::string out = "# config=" + config_to_json(cfg).dump() + "\n";
  out += "n,sigma,region\n";
  for (const RegionCell& rc : cells) {
    out += std::to_string(rc.n);
    out += ',';
    out += io::format_double(rc.sigma);
    out += ',';
    out += to_string(rc.region);
    out += '\n';
  }
  return out;
}

}  // namespace ringlab::sweep

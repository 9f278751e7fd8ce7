#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "classify.hpp"
#include "engines.hpp"
#include "error.hpp"
#include "exact.hpp"
#include "instance.hpp"
#include "instance_io.hpp"
#include "random.hpp"
#include "tebd.hpp"

namespace mpsanneal {

// ---------------------------------------------------------------- files

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string(), "cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw IoError(tmp.string(), "write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path.string(), "rename failed: " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- csv

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\r\n";
}

// Splits one record (no embedded newlines supported). nullopt on bad quoting.
inline std::optional<std::vector<std::string>> csv_split(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else if (c == '"' && cur.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else {
      cur += c;
    }
  }
  if (quoted) return std::nullopt;
  out.push_back(std::move(cur));
  return out;
}

inline const std::vector<std::string>& run_csv_header() {
  static const std::vector<std::string> h{
      "instance_id", "engine", "chi", "sweep_time", "dt", "gamma", "temperature", "seed",
      "success", "final_energy", "readout_energy", "ground_energy", "residual",
      "max_discarded_weight", "status", "readout"};
  return h;
}

inline std::string to_csv_row(const RunRecord& r) {
  return csv_row({r.instance_id, r.engine, std::to_string(r.chi), format_double(r.sweep_time),
                  format_double(r.dt), format_double(r.gamma), format_double(r.temperature),
                  std::to_string(r.seed), r.success ? "1" : "0", format_double(r.final_energy),
                  format_double(r.readout_energy), format_double(r.ground_energy), format_double(r.residual),
                  format_double(r.max_discarded_weight), r.numerical_error ? "numerical_error" : "ok",
                  r.readout.to_string()});
}

inline std::optional<RunRecord> from_csv_row(std::string_view line) {
  const auto f = csv_split(line);
  if (!f || f->size() != run_csv_header().size()) return std::nullopt;
  const auto& v = *f;
  RunRecord r;
  auto num = [](const std::string& s, double& out) {
    const auto d = parse_double(s);
    if (d) out = *d;
    return d.has_value();
  };
  r.instance_id = v[0];
  r.engine = v[1];
  const auto chi = parse_long(v[2]);
  if (!chi) return std::nullopt;
  r.chi = static_cast<int>(*chi);
  if (!num(v[3], r.sweep_time) || !num(v[4], r.dt) || !num(v[5], r.gamma) || !num(v[6], r.temperature))
    return std::nullopt;
  {
    const auto [p, ec] = std::from_chars(v[7].data(), v[7].data() + v[7].size(), r.seed);
    if (ec != std::errc() || p != v[7].data() + v[7].size()) return std::nullopt;
  }
  if (v[8] != "0" && v[8] != "1") return std::nullopt;
  r.success = v[8] == "1";
  if (!num(v[9], r.final_energy) || !num(v[10], r.readout_energy) || !num(v[11], r.ground_energy) ||
      !num(v[12], r.residual) || !num(v[13], r.max_discarded_weight))
    return std::nullopt;
  if (v[14] != "ok" && v[14] != "numerical_error") return std::nullopt;
  r.numerical_error = v[14] == "numerical_error";
  try {
    r.readout = SpinConfig::from_string(v[15]);
  } catch (const Error&) {
    return std::nullopt;
  }
  return r;
}

// Identity of a run for resuming and merging.
using RunKey = std::tuple<std::string, std::string, int, double, double, double, double, std::uint64_t>;

inline RunKey key_of(const RunRecord& r) {
  return {r.instance_id, r.engine, r.chi, r.sweep_time, r.dt, r.gamma, r.temperature, r.seed};
}

inline std::string serialize_runs(std::vector<RunRecord> runs) {
  std::sort(runs.begin(), runs.end(), [](const RunRecord& a, const RunRecord& b) { return key_of(a) < key_of(b); });
  std::string out = csv_row(run_csv_header());
  for (const auto& r : runs) out += to_csv_row(r);
  return out;
}

// Reads runs.csv. A malformed final line (interrupted append) is dropped;
// malformed lines elsewhere are errors. Later duplicates replace earlier ones.
inline std::vector<RunRecord> load_runs(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    const bool complete = nl != std::string::npos;
    if (!complete) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() || complete) lines.push_back(line);
    pos = nl + 1;
  }
  if (lines.empty()) throw IoError(path.string(), "missing header");
  const auto header = csv_split(lines[0]);
  if (!header || *header != run_csv_header()) throw IoError(path.string(), "unexpected header");
  std::map<RunKey, RunRecord> merged;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto r = from_csv_row(lines[i]);
    if (!r) {
      if (i + 1 == lines.size()) break;
      throw IoError(path.string(), "malformed record on line " + std::to_string(i + 1));
    }
    merged[key_of(*r)] = std::move(*r);
  }
  std::vector<RunRecord> out;
  for (auto& kv : merged) out.push_back(std::move(kv.second));
  return out;
}

// ---------------------------------------------------------------- cohort

struct CohortSpec {
  Topology topology = Topology::chain;
  int n = 30;
  int count = 50;
  std::uint64_t seed = 0;
  double delta = 1.0;
};

struct CohortEntry {
  std::string id;
  std::uint64_t seed = 0;
  IsingInstance instance;
  GroundTruth truth;
};

struct Cohort {
  CohortSpec spec;
  std::vector<CohortEntry> entries;
};

inline std::string instance_id(const CohortSpec& spec, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d", index);
  return std::string(to_string(spec.topology)) + std::to_string(spec.n) + "-s" + std::to_string(spec.seed) + "-" + buf;
}

inline Cohort generate_cohort(const CohortSpec& spec) {
  if (spec.count < 1) throw ArgumentError("cohort count must be positive");
  if (spec.topology == Topology::ladder16 && spec.n != 16) throw ArgumentError("ladder16 cohorts have n = 16");
  Cohort c{spec, {}};
  for (int i = 0; i < spec.count; ++i) {
    const std::uint64_t s = derive_seed(spec.seed, static_cast<std::uint64_t>(i));
    IsingInstance inst = spec.topology == Topology::chain ? generate_random_chain(spec.n, s, spec.delta)
                                                          : generate_ladder16(s, spec.delta);
    GroundTruth truth = ground_state(inst);
    c.entries.push_back({instance_id(spec, i), s, std::move(inst), std::move(truth)});
  }
  return c;
}

inline std::filesystem::path instance_path(const std::filesystem::path& dir, const std::string& id) {
  return dir / "instances" / (id + ".ising");
}

inline void write_cohort(const Cohort& c, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "instances", ec);
  if (ec) throw IoError((dir / "instances").string(), "cannot create directory: " + ec.message());
  nlohmann::ordered_json m;
  m["format"] = "mpsanneal-cohort/1";
  m["topology"] = to_string(c.spec.topology);
  m["n"] = c.spec.n;
  m["count"] = c.spec.count;
  m["seed"] = c.spec.seed;
  m["delta"] = c.spec.delta;
  m["instances"] = nlohmann::ordered_json::array();
  for (const auto& e : c.entries) {
    write_file_atomic(instance_path(dir, e.id), serialize(e.instance));
    nlohmann::ordered_json row;
    row["id"] = e.id;
    row["seed"] = e.seed;
    row["file"] = "instances/" + e.id + ".ising";
    row["ground_energy"] = e.truth.energy;
    row["degeneracy"] = e.truth.degeneracy;
    m["instances"].push_back(std::move(row));
  }
  write_file_atomic(dir / "manifest.json", m.dump(2) + "\n");
}

// Loads the manifest and instances and recomputes every ground truth.
inline Cohort load_cohort(const std::filesystem::path& dir) {
  const auto mpath = dir / "manifest.json";
  if (!std::filesystem::exists(mpath)) throw IoError(mpath.string(), "no cohort manifest");
  Cohort c;
  try {
    const auto m = nlohmann::json::parse(read_file(mpath));
    c.spec.topology = topology_from_string(m.at("topology").get<std::string>());
    c.spec.n = m.at("n").get<int>();
    c.spec.count = m.at("count").get<int>();
    c.spec.seed = m.at("seed").get<std::uint64_t>();
    c.spec.delta = m.at("delta").get<double>();
    std::set<std::string> ids;
    for (const auto& row : m.at("instances")) {
      const auto id = row.at("id").get<std::string>();
      if (!ids.insert(id).second) throw IoError(mpath.string(), "duplicate instance id " + id);
      IsingInstance inst = load_instance((dir / row.at("file").get<std::string>()).string());
      GroundTruth truth = ground_state(inst);
      c.entries.push_back({id, row.at("seed").get<std::uint64_t>(), std::move(inst), std::move(truth)});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(mpath.string(), std::string("bad manifest: ") + ex.what());
  }
  return c;
}

// ---------------------------------------------------------------- report

struct EngineSuccess {
  std::size_t runs = 0;
  std::size_t successes = 0;
  double frequency() const { return runs ? static_cast<double>(successes) / static_cast<double>(runs) : 0.0; }
};

struct InstanceReport {
  std::string id;
  bool has_tebd = false;
  std::optional<int> chi_star;
  std::map<int, std::optional<double>> t_star;  // over tebd ranks present
  std::map<std::string, EngineSuccess> engines;  // non-tebd engines by label
};

struct Report {
  std::size_t cohort_size = 0;
  std::size_t unclassified = 0;
  bool partial = false;  // some instance has no tebd records
  std::vector<InstanceReport> instances;
  std::map<int, std::size_t> chi_star_hist;
  std::map<std::pair<int, double>, std::size_t> t_star_hist;  // (chi, T*(chi))
  std::map<std::string, double> mean_success;  // per engine label, mean of per-instance frequencies
};

inline std::string engine_label(const RunRecord& r) {
  return r.engine + " gamma=" + format_double(r.gamma) + " T=" + format_double(r.temperature);
}

// Pure cross-tabulation of run records against the cohort ids.
inline Report compute_report(const std::vector<std::string>& ids, const std::vector<RunRecord>& runs) {
  Report rep;
  rep.cohort_size = ids.size();
  std::map<std::string, InstanceReport> by_id;
  for (const auto& id : ids) by_id[id].id = id;
  for (const auto& r : runs) {
    const auto it = by_id.find(r.instance_id);
    if (it == by_id.end()) continue;
    InstanceReport& ir = it->second;
    if (r.engine == "tebd") {
      ir.has_tebd = true;
      auto& t = ir.t_star[r.chi];
      if (r.success && (!t || r.sweep_time < *t)) t = r.sweep_time;
    } else {
      auto& s = ir.engines[engine_label(r)];
      ++s.runs;
      if (r.success) ++s.successes;
    }
  }
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& id : ids) {
    InstanceReport ir = by_id[id];
    for (const auto& [chi, t] : ir.t_star)
      if (t) {
        if (!ir.chi_star) ir.chi_star = chi;
        ++rep.t_star_hist[{chi, *t}];
      }
    if (!ir.has_tebd) rep.partial = true;
    if (ir.chi_star) ++rep.chi_star_hist[*ir.chi_star];
    else ++rep.unclassified;
    for (const auto& [label, s] : ir.engines) {
      sums[label].first += s.frequency();
      ++sums[label].second;
    }
    rep.instances.push_back(std::move(ir));
  }
  for (const auto& [label, s] : sums) rep.mean_success[label] = s.first / static_cast<double>(s.second);
  return rep;
}

inline std::string hull_csv(const std::string& id, const std::vector<RunRecord>& cells) {
  std::string s = csv_row({"instance_id", "chi", "sweep_time", "success", "residual", "discarded_weight"});
  for (const auto& r : cells)
    s += csv_row({id, std::to_string(r.chi), format_double(r.sweep_time), r.success ? "1" : "0",
                  format_double(r.residual), format_double(r.max_discarded_weight)});
  return s;
}

inline std::string optional_number(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

inline void write_report_files(const std::filesystem::path& dir, const Report& rep,
                               const std::vector<RunRecord>& runs) {
  std::set<int> chis;
  for (const auto& ir : rep.instances)
    for (const auto& kv : ir.t_star) chis.insert(kv.first);
  std::set<std::string> labels;
  for (const auto& kv : rep.mean_success) labels.insert(kv.first);

  {
    std::vector<std::string> header{"instance_id", "chi_star", "status"};
    for (int chi : chis) header.push_back("t_star_chi" + std::to_string(chi));
    for (const auto& l : labels) header.push_back("success " + l);
    std::string s = csv_row(header);
    for (const auto& ir : rep.instances) {
      std::vector<std::string> row{ir.id, ir.chi_star ? std::to_string(*ir.chi_star) : "",
                                   !ir.has_tebd ? "missing" : ir.chi_star ? "classified" : "unclassified"};
      for (int chi : chis) {
        const auto it = ir.t_star.find(chi);
        row.push_back(it == ir.t_star.end() ? "" : optional_number(it->second));
      }
      for (const auto& l : labels) {
        const auto it = ir.engines.find(l);
        row.push_back(it == ir.engines.end() ? "" : format_double(it->second.frequency()));
      }
      s += csv_row(row);
    }
    write_file_atomic(dir / "classification.csv", s);
  }
  {
    std::string s = csv_row({"chi_star", "count"});
    for (const auto& [chi, n] : rep.chi_star_hist) s += csv_row({std::to_string(chi), std::to_string(n)});
    write_file_atomic(dir / "chi_star_hist.csv", s);
  }
  {
    std::string s = csv_row({"chi", "t_star", "count"});
    for (const auto& [k, n] : rep.t_star_hist)
      s += csv_row({std::to_string(k.first), format_double(k.second), std::to_string(n)});
    write_file_atomic(dir / "sweep_time_hist.csv", s);
  }
  {
    std::string s = csv_row({"metric", "value"});
    s += csv_row({"cohort_size", std::to_string(rep.cohort_size)});
    s += csv_row({"classified", std::to_string(rep.cohort_size - rep.unclassified)});
    s += csv_row({"unclassified", std::to_string(rep.unclassified)});
    s += csv_row({"partial", rep.partial ? "1" : "0"});
    for (const auto& [l, m] : rep.mean_success) s += csv_row({"mean_success " + l, format_double(m)});
    write_file_atomic(dir / "report_summary.csv", s);
  }
  std::map<std::string, std::vector<RunRecord>> hull_rows;
  for (const auto& r : runs)
    if (r.engine == "tebd") hull_rows[r.instance_id].push_back(r);
  for (const auto& [id, rows] : hull_rows) write_file_atomic(dir / ("hull_" + id + ".csv"), hull_csv(id, rows));
}

inline Report make_report(const std::filesystem::path& dir) {
  const auto mpath = dir / "manifest.json";
  if (!std::filesystem::exists(mpath)) throw IoError(dir.string(), "empty or missing results directory");
  std::vector<std::string> ids;
  try {
    const auto m = nlohmann::json::parse(read_file(mpath));
    for (const auto& row : m.at("instances")) ids.push_back(row.at("id").get<std::string>());
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(mpath.string(), std::string("bad manifest: ") + ex.what());
  }
  if (ids.empty()) throw IoError(mpath.string(), "cohort has no instances");
  const auto runs_path = dir / "runs.csv";
  std::vector<RunRecord> runs;
  if (std::filesystem::exists(runs_path)) runs = load_runs(runs_path);
  std::sort(runs.begin(), runs.end(), [](const RunRecord& a, const RunRecord& b) { return key_of(a) < key_of(b); });
  Report rep = compute_report(ids, runs);
  write_report_files(dir, rep, runs);
  return rep;
}

// ---------------------------------------------------------------- runs

// "T0", "2T0", "0.5T0" or a plain number.
inline double parse_time_token(const std::string& token, double t0) {
  std::string s = token;
  double scale = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "T0") == 0) {
    s.erase(s.size() - 2);
    scale = t0;
    if (s.empty()) return t0;
  }
  const auto v = parse_double(s);
  if (!v || !(*v > 0.0)) throw ArgumentError("bad sweep time '" + token + "'");
  return *v * scale;
}

struct RunOptions {
  EngineOptions engine;
  std::vector<int> chi_grid = default_chi_grid;
  std::vector<std::string> times{"T0", "2T0", "4T0", "8T0"};
  int workers = 1;
  // tebd: every (chi, T) cell; otherwise the classification schedule `mode`.
  // Other engines always run the full grid.
  bool full_grid = false;
  ClassifyMode mode = ClassifyMode::minimal_time_per_chi;
  int repeats = 1;  // seeds per cell for stochastic engines
  std::uint64_t seed = 0;
  std::function<void(const std::string&)> progress;
};

// MPSANNEAL_WORKERS, when set to a positive integer, overrides the request.
inline int resolve_workers(int requested) {
  if (const char* env = std::getenv("MPSANNEAL_WORKERS")) {
    const auto v = parse_long(env);
    if (v && *v > 0) return static_cast<int>(*v);
  }
  return std::max(1, requested);
}

struct RunSummary {
  std::size_t computed = 0;
  std::size_t reused = 0;
};

inline std::uint64_t run_seed(std::uint64_t base, std::uint64_t instance_seed, int chi, std::size_t ti, int rep) {
  std::uint64_t s = derive_seed(base, instance_seed);
  s = derive_seed(s, static_cast<std::uint64_t>(chi));
  s = derive_seed(s, ti);
  return derive_seed(s, static_cast<std::uint64_t>(rep));
}

// Runs the grid over every instance of the cohort in `dir`, appending new
// records to runs.csv, then rewrites runs.csv sorted and regenerates the
// report. Work units are instances; results do not depend on `workers`.
inline RunSummary run_cohort(const std::filesystem::path& dir, const RunOptions& options) {
  const Cohort cohort = load_cohort(dir);
  if (options.chi_grid.empty() || options.times.empty()) throw ArgumentError("grids must be non-empty");
  if (options.repeats < 1) throw ArgumentError("repeats must be positive");
  const Engine engine = options.engine.engine;
  const auto runs_path = dir / "runs.csv";

  std::map<RunKey, RunRecord> cache;
  if (std::filesystem::exists(runs_path))
    for (auto& r : load_runs(runs_path)) cache.emplace(key_of(r), std::move(r));
  // Rewrite first so the append stream starts from a clean file.
  {
    std::vector<RunRecord> v;
    for (const auto& kv : cache) v.push_back(kv.second);
    write_file_atomic(runs_path, serialize_runs(std::move(v)));
  }
  std::ofstream out(runs_path, std::ios::binary | std::ios::app);
  if (!out) throw IoError(runs_path.string(), "cannot open for appending");

  std::mutex mu;
  RunSummary summary;
  std::vector<RunRecord> fresh;

  auto run_one = [&](const CohortEntry& e, int chi, double time, std::uint64_t seed) {
    RunRecord probe;
    probe.instance_id = e.id;
    probe.engine = to_string(engine);
    probe.chi = uses_rank(engine) ? chi : 0;
    probe.sweep_time = time;
    probe.dt = time / static_cast<double>(step_count(time, options.engine.dt));
    probe.gamma = engine == Engine::tebd ? 0.0 : effective_gamma(options.engine);
    probe.temperature = options.engine.temperature;
    probe.seed = is_stochastic(engine) ? seed : 0;
    if (const auto it = cache.find(key_of(probe)); it != cache.end()) {
      std::lock_guard lock(mu);
      ++summary.reused;
      return it->second;
    }
    RunRecord r = probe;
    try {
      r = run_engine(e.instance, e.truth, chi, time, options.engine, seed);
    } catch (const NumericalError&) {
      r.numerical_error = true;
      r.ground_energy = e.truth.energy;
      r.readout = SpinConfig::all_up(e.instance.size());
    }
    r.instance_id = e.id;
    std::lock_guard lock(mu);
    out << to_csv_row(r);
    out.flush();
    if (!out) throw IoError(runs_path.string(), "append failed");
    fresh.push_back(r);
    ++summary.computed;
    return r;
  };

  auto process = [&](const CohortEntry& e) {
    std::vector<double> times;
    for (const auto& tok : options.times) times.push_back(parse_time_token(tok, default_t0(e.instance)));
    if (engine == Engine::tebd && !options.full_grid) {
      classify_chi_star(options.chi_grid, times, [&](int chi, double t) { return run_one(e, chi, t, 0); },
                        options.mode);
      return;
    }
    const std::vector<int> chis = uses_rank(engine) ? options.chi_grid : std::vector<int>{0};
    const int reps = is_stochastic(engine) ? options.repeats : 1;
    for (int chi : chis)
      for (std::size_t ti = 0; ti < times.size(); ++ti)
        for (int rep = 0; rep < reps; ++rep)
          run_one(e, chi, times[ti], run_seed(options.seed, e.seed, chi, ti, rep));
  };

  const int workers = std::min<int>(resolve_workers(options.workers), static_cast<int>(cohort.entries.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cohort.entries.size()) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      try {
        process(cohort.entries[i]);
        if (options.progress) {
          std::lock_guard lock(mu);
          options.progress(cohort.entries[i].id);
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  out.close();
  if (failure) std::rethrow_exception(failure);

  for (auto& r : fresh) cache[key_of(r)] = std::move(r);
  std::vector<RunRecord> all;
  for (auto& kv : cache) all.push_back(std::move(kv.second));
  write_file_atomic(runs_path, serialize_runs(std::move(all)));
  make_report(dir);
  return summary;
}

}  // namespace mpsanneal

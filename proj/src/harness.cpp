#include "trirem/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "trirem/errors.hpp"
#include "trirem/rng.hpp"

namespace trirem {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  const std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw PreconditionError("config: bad value '" + t + "' for " + key);
  }
  return value;
}

bool parse_bool(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw PreconditionError("config: bad boolean '" + t + "' for " + key);
}

/// "1, 2, 5" or "1..100" (inclusive), or a mix of both.
std::vector<std::uint64_t> parse_uint_list(const std::string& text, const std::string& key) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number<std::uint64_t>(item, key));
      continue;
    }
    const auto lo = parse_number<std::uint64_t>(item.substr(0, dots), key);
    const auto hi = parse_number<std::uint64_t>(item.substr(dots + 2), key);
    if (hi < lo) throw PreconditionError("config: empty range '" + item + "' for " + key);
    for (auto x = lo; x <= hi; ++x) out.push_back(x);
  }
  if (out.empty()) throw PreconditionError("config: empty list for " + key);
  return out;
}

void assign(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "n") {
    c.ns = parse_uint_list(value, key);
  } else if (key == "seeds") {
    c.seeds = parse_uint_list(value, key);
  } else if (key == "replicates") {
    c.replicates = parse_number<std::uint64_t>(value, key);
  } else if (key == "master_seed") {
    c.master_seed = parse_number<std::uint64_t>(value, key);
  } else if (key == "M") {
    c.M = parse_number<int>(value, key);
  } else if (key == "dp") {
    c.snapshot_dp = parse_number<double>(value, key);
  } else if (key == "kappa") {
    c.kappa = parse_number<double>(value, key);
  } else if (key == "alpha") {
    c.alpha = parse_number<double>(value, key);
  } else if (key == "pair_sample") {
    c.pair_sample = parse_number<std::uint64_t>(value, key);
  } else if (key == "full_scan") {
    c.full_scan = parse_bool(value, key);
  } else if (key == "permutation_at_p") {
    c.permutation_at_p = parse_number<double>(value, key);
  } else if (key == "certify_at_p") {
    c.certify_at_p = parse_number<double>(value, key);
  } else if (key == "stop_below_p") {
    c.stop_below_p = parse_number<double>(value, key);
  } else if (key == "output") {
    c.output_dir = trim(value);
  } else if (key == "workers") {
    c.workers = parse_number<unsigned>(value, key);
  } else {
    throw PreconditionError("config: unknown key '" + key + "'");
  }
}

double mean_of(std::span<const double> xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

template <class T>
std::optional<T> opt_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::vector<std::uint64_t> ExperimentConfig::seeds_for(std::uint64_t n) const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 0; r < replicates; ++r) out.push_back(derive_seed(master_seed, n, r));
  return out;
}

void ExperimentConfig::validate() const {
  if (ns.empty()) throw PreconditionError("config: n list is empty");
  for (auto n : ns) {
    if (n == 0) throw PreconditionError("config: n must be positive");
  }
  if (std::set<std::uint64_t>(ns.begin(), ns.end()).size() != ns.size()) {
    throw PreconditionError("config: n values must be distinct");
  }
  if (seeds.empty() && replicates == 0) throw PreconditionError("config: give seeds or replicates > 0");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw PreconditionError("config: seeds must be unique");
  }
  for (auto n : ns) {
    const auto s = seeds_for(n);
    if (std::set<std::uint64_t>(s.begin(), s.end()).size() != s.size()) {
      throw PreconditionError("config: derived seeds collide for n = " + std::to_string(n));
    }
  }
  if (M < 3) throw PreconditionError("config: M must be >= 3");
  if (!(snapshot_dp > 0)) throw PreconditionError("config: dp must be positive");
  if (!(kappa > 0)) throw PreconditionError("config: kappa must be positive");
  if (alpha && !(*alpha > 0)) throw PreconditionError("config: alpha must be positive");
  if (workers == 0) throw PreconditionError("config: workers must be positive");
  for (const auto& [name, p] : {std::pair{"permutation_at_p", permutation_at_p}, std::pair{"certify_at_p", certify_at_p}}) {
    if (p && !(*p > 0 && *p <= 1)) throw PreconditionError(std::string("config: ") + name + " must lie in (0, 1]");
  }
  if (!(stop_below_p >= 0 && stop_below_p < 1)) throw PreconditionError("config: stop_below_p must lie in [0, 1)");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["n"] = ns;
  j["seeds"] = seeds;
  j["replicates"] = replicates;
  j["master_seed"] = master_seed;
  j["M"] = M;
  j["dp"] = snapshot_dp;
  j["kappa"] = kappa;
  j["alpha"] = alpha ? nlohmann::json(*alpha) : nlohmann::json(nullptr);
  j["pair_sample"] = pair_sample;
  j["full_scan"] = full_scan;
  j["permutation_at_p"] = permutation_at_p ? nlohmann::json(*permutation_at_p) : nlohmann::json(nullptr);
  j["certify_at_p"] = certify_at_p ? nlohmann::json(*certify_at_p) : nlohmann::json(nullptr);
  j["stop_below_p"] = stop_below_p;
  // output and workers do not affect results and are left out so that
  // reruns elsewhere produce identical files.
  return j;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw PreconditionError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      assign(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const PreconditionError& e) {
      throw PreconditionError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path));
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw PreconditionError("override '" + assignment + "' is not key=value");
  assign(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

ExponentFit fit_exponent(std::span<const std::pair<double, double>> n_and_mean) {
  std::set<double> distinct;
  for (const auto& [n, m] : n_and_mean) {
    if (!(n > 0) || !(m > 0)) throw PreconditionError("fit_exponent: n and means must be positive");
    distinct.insert(n);
  }
  if (distinct.size() < 3) throw PreconditionError("fit_exponent: need at least three distinct n");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [n, m] : n_and_mean) {
    xs.push_back(std::log(n));
    ys.push_back(std::log(m));
  }
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxx = 0;
  double sxy = 0;
  double syy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (fit.intercept + fit.slope * xs[k]);
    ss_res += r * r;
  }
  // A flat response is fitted perfectly by slope 0.
  fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

RunSummary summarize(const RunResult& r) {
  RunSummary s;
  s.n = r.n;
  s.seed = r.seed;
  s.tau0 = r.tau0;
  s.final_edges = r.final_edges;
  s.completed = r.completed;
  s.mode = mode_name(r.mode);
  s.permutation_at = r.permutation_at;
  s.snapshot_count = r.snapshots.size();
  if (r.survivors) {
    s.certify_at = r.survivors->activation_step;
    s.x_size = r.survivors->x_size();
    s.y_size = r.survivors->y_size;
    s.certified_edges = r.survivors->certified_edges;
    s.disjoint_at_insertion = r.survivors->disjoint_at_insertion;
  }
  return s;
}

Aggregate aggregate(std::span<const RunSummary> runs) {
  Aggregate a;
  std::vector<std::uint64_t> ns;
  for (const auto& r : runs) ns.push_back(r.n);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::vector<std::pair<double, double>> points;
  for (auto n : ns) {
    std::vector<const RunSummary*> group;
    for (const auto& r : runs) {
      if (r.n == n) group.push_back(&r);
    }
    // Sum in seed order so the result does not depend on input order.
    std::sort(group.begin(), group.end(), [](auto* x, auto* y) { return x->seed < y->seed; });
    SizeStats st;
    st.n = n;
    st.runs = group.size();
    st.min_final_edges = group.front()->final_edges;
    st.max_final_edges = group.front()->final_edges;
    double sum = 0;
    double sum_tau = 0;
    for (auto* r : group) {
      sum += static_cast<double>(r->final_edges);
      sum_tau += static_cast<double>(r->tau0);
      st.min_final_edges = std::min(st.min_final_edges, r->final_edges);
      st.max_final_edges = std::max(st.max_final_edges, r->final_edges);
    }
    const double count = static_cast<double>(group.size());
    st.mean_final_edges = sum / count;
    st.mean_tau0 = sum_tau / count;
    double ss = 0;
    for (auto* r : group) {
      const double d = static_cast<double>(r->final_edges) - st.mean_final_edges;
      ss += d * d;
    }
    st.sd_final_edges = group.size() > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
    st.mean_over_n_1_5 = st.mean_final_edges / std::pow(static_cast<double>(n), 1.5);
    a.sizes.push_back(st);
    points.emplace_back(static_cast<double>(n), st.mean_final_edges);
  }
  const bool fittable = points.size() >= 3 &&
                        std::all_of(points.begin(), points.end(), [](const auto& pt) { return pt.second > 0; });
  if (fittable) a.fit = fit_exponent(points);
  return a;
}

nlohmann::json run_summary_json(const RunSummary& s, const ExperimentConfig* config) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  if (config) j["config"] = config->to_json();
  j["n"] = s.n;
  j["seed"] = s.seed;
  j["tau0"] = s.tau0;
  j["final_edges"] = s.final_edges;
  j["completed"] = s.completed;
  j["mode"] = s.mode;
  j["permutation_at"] = s.permutation_at ? nlohmann::json(*s.permutation_at) : nlohmann::json(nullptr);
  j["snapshot_count"] = s.snapshot_count;
  if (s.certify_at) {
    j["survivors"] = {{"activation_step", *s.certify_at},
                      {"x_size", *s.x_size},
                      {"y_size", *s.y_size},
                      {"certified_edges", *s.certified_edges},
                      {"disjoint_at_insertion", *s.disjoint_at_insertion}};
  } else {
    j["survivors"] = nullptr;
  }
  return j;
}

RunSummary parse_run_summary(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw PreconditionError("run summary: unsupported schema_version");
  }
  RunSummary s;
  s.n = j.at("n").get<std::uint64_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.tau0 = j.at("tau0").get<std::uint64_t>();
  s.final_edges = j.at("final_edges").get<std::uint64_t>();
  s.completed = j.at("completed").get<bool>();
  s.mode = j.at("mode").get<std::string>();
  s.permutation_at = opt_field<std::uint64_t>(j, "permutation_at");
  s.snapshot_count = j.at("snapshot_count").get<std::uint64_t>();
  if (j.contains("survivors") && !j.at("survivors").is_null()) {
    const auto& v = j.at("survivors");
    s.certify_at = v.at("activation_step").get<std::uint64_t>();
    s.x_size = v.at("x_size").get<std::uint64_t>();
    s.y_size = v.at("y_size").get<std::uint64_t>();
    s.certified_edges = v.at("certified_edges").get<std::uint64_t>();
    s.disjoint_at_insertion = v.at("disjoint_at_insertion").get<bool>();
  }
  return s;
}

nlohmann::json aggregate_json(const Aggregate& a, const ExperimentConfig* config) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  if (config) j["config"] = config->to_json();
  auto& sizes = j["sizes"] = nlohmann::json::array();
  for (const auto& s : a.sizes) {
    sizes.push_back({{"n", s.n},
                     {"runs", s.runs},
                     {"mean_final_edges", s.mean_final_edges},
                     {"sd_final_edges", s.sd_final_edges},
                     {"min_final_edges", s.min_final_edges},
                     {"max_final_edges", s.max_final_edges},
                     {"mean_tau0", s.mean_tau0},
                     {"mean_over_n_1_5", s.mean_over_n_1_5}});
  }
  if (a.fit) {
    j["fit"] = {{"slope", a.fit->slope}, {"intercept", a.fit->intercept}, {"r2", a.fit->r2}};
  } else {
    j["fit"] = nullptr;
  }
  return j;
}

Aggregate parse_aggregate(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw PreconditionError("aggregate: unsupported schema_version");
  }
  Aggregate a;
  for (const auto& s : j.at("sizes")) {
    SizeStats st;
    st.n = s.at("n").get<std::uint64_t>();
    st.runs = s.at("runs").get<std::uint64_t>();
    st.mean_final_edges = s.at("mean_final_edges").get<double>();
    st.sd_final_edges = s.at("sd_final_edges").get<double>();
    st.min_final_edges = s.at("min_final_edges").get<std::uint64_t>();
    st.max_final_edges = s.at("max_final_edges").get<std::uint64_t>();
    st.mean_tau0 = s.at("mean_tau0").get<double>();
    st.mean_over_n_1_5 = s.at("mean_over_n_1_5").get<double>();
    a.sizes.push_back(st);
  }
  if (j.contains("fit") && !j.at("fit").is_null()) {
    const auto& f = j.at("fit");
    a.fit = ExponentFit{f.at("slope").get<double>(), f.at("intercept").get<double>(), f.at("r2").get<double>()};
  }
  return a;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error while reading '" + path + "'");
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  config.validate();
  struct Job {
    std::uint64_t n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  auto ns = config.ns;
  std::sort(ns.begin(), ns.end());
  for (auto n : ns) {
    auto seeds = config.seeds_for(n);
    std::sort(seeds.begin(), seeds.end());
    for (auto s : seeds) jobs.push_back({n, s});
  }

  std::vector<RunResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      try {
        ProcessConfig pc;
        pc.seed = jobs[k].seed;
        pc.snapshots.dp = config.snapshot_dp;
        pc.snapshots.pair_sample = config.pair_sample;
        pc.snapshots.full_scan = config.full_scan;
        pc.snapshots.stopping.kappa = config.kappa;
        pc.snapshots.stopping.alpha = config.alpha;
        pc.snapshots.stopping.M = config.M;
        pc.stop_below_p = config.stop_below_p;
        if (config.permutation_at_p) pc.permutation_at = step_at_density(jobs[k].n, *config.permutation_at_p);
        if (config.certify_at_p) pc.certify_at = step_at_density(jobs[k].n, *config.certify_at_p);
        results[k] = Process(jobs[k].n, pc).run();
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<std::size_t>(config.workers, std::max<std::size_t>(jobs.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentOutcome out;
  for (const auto& r : results) {
    out.runs.push_back(summarize(r));
    out.snapshots.insert(out.snapshots.end(), r.snapshots.begin(), r.snapshots.end());
  }
  out.aggregate = aggregate(out.runs);

  if (!config.output_dir.empty()) {
    const fs::path dir(config.output_dir);
    std::ostringstream csv;
    csv << kSnapshotCsvHeader << '\n';
    for (const auto& s : out.snapshots) csv << snapshot_csv_row(s) << '\n';
    write_text_file((dir / "snapshots.csv").string(), csv.str());
    for (const auto& r : out.runs) {
      const auto name = "n" + std::to_string(r.n) + "_seed" + std::to_string(r.seed) + ".json";
      write_text_file((dir / "runs" / name).string(), run_summary_json(r, &config).dump(2) + "\n");
    }
    write_text_file((dir / "aggregate.json").string(), aggregate_json(out.aggregate, &config).dump(2) + "\n");
  }
  return out;
}

}  // namespace trirem

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "manifest.hpp"
#include "output.hpp"
#include "mpllab/batch.hpp"
#include "mpllab/error.hpp"
#include "mpllab/graph_io.hpp"
#include "mpllab/reduction.hpp"
#include "mpllab/resistance.hpp"
#include "mpllab/sg_graph.hpp"
#include "mpllab/sg_scaling.hpp"
#include "mpllab/sim.hpp"
#include "mpllab/spectral.hpp"

#ifndef MPLLAB_VERSION
#define MPLLAB_VERSION "0.0.0"
#endif

namespace {

using namespace mpllab;
using namespace mpllab::cli;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string format;
  std::string output;
  unsigned threads = 0;
  std::optional<double> tol;
  std::string manifest;
  std::string summary;
};

struct ResistanceArgs {
  std::string graph;
  std::vector<int> pair;
};

struct ReduceArgs {
  std::string graph;
  int vertex = 0;
};

struct VerifyArgs {
  std::string selector;
  std::string graph;
  std::optional<int> n;
  std::optional<int> max_n;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 1;
  std::optional<double> alpha;
  int path_length = 4;
  int max_level = 6;
};

struct SpectralArgs {
  std::string graph;
  std::optional<int> complete;
  std::string kind = "all";
  std::optional<int> k;
};

struct SimulateArgs {
  std::string graph;
  std::optional<int> sg_level;
  double alpha = 0.5;
  double horizon = 1.0;
  double accel = 1.0;
  std::vector<std::string> boundary;
  std::uint64_t seed = 0;
  double record_every = 0.0;
  std::string events;
};

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("MPL_LAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, "MPL_LAB_THREADS must be a positive integer");
  }
  return 1;
}

Tolerances resolve_tolerances(const Common& c) {
  Tolerances t;
  if (c.tol) {
    if (!(*c.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "--tol must be positive");
    t.identity = *c.tol;
    t.inequality = *c.tol;
  }
  return t;
}

// "a:birth,death", e.g. "0:1.5,0.5".
BoundaryRate parse_boundary(const std::string& s) {
  const auto colon = s.find(':');
  const auto comma = s.find(',', colon == std::string::npos ? 0 : colon);
  if (colon == std::string::npos || comma == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "--boundary expects SITE:BIRTH,DEATH, got '" + s + "'");
  }
  BoundaryRate r{};
  try {
    std::size_t used = 0;
    r.site = std::stoi(s.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("site");
    r.birth = std::stod(s.substr(colon + 1, comma - colon - 1));
    r.death = std::stod(s.substr(comma + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "--boundary expects SITE:BIRTH,DEATH, got '" + s + "'");
  }
  return r;
}

std::string occupancy_string(const Occupancy& o) {
  std::string s;
  s.reserve(o.size());
  for (auto b : o) s.push_back(b ? '1' : '0');
  return s;
}

std::string edge_list_string(const std::vector<Edge>& edges) {
  std::string s;
  for (const Edge& e : edges) {
    if (!s.empty()) s += ' ';
    s += std::to_string(e.u) + "-" + std::to_string(e.v) + ":" + format_double(e.c);
  }
  return s;
}

class Runner {
 public:
  Runner(const Common& common, RunManifest& manifest) : common_(common), manifest_(manifest) {}

  Format format() const { return format_; }
  void init() { format_ = resolve_format(common_.format, !common_.output.empty()); }

  WeightedGraph graph(const std::string& path) {
    WeightedGraph g = load_graph(path);
    manifest_.add_input(path);
    return g;
  }

  int resistance(const ResistanceArgs& a) {
    manifest_.flags["graph"] = a.graph;
    manifest_.flags["pair"] = a.pair;
    const WeightedGraph g = graph(a.graph);
    const ResistanceResult r = effective_resistance(g, a.pair.at(0), a.pair.at(1));
    const double oracle = effective_resistance_oracle(g, a.pair[0], a.pair[1]);
    if (format_ == Format::Jsonl) {
      out_ << json{{"x", a.pair[0]}, {"y", a.pair[1]}, {"resistance", r.resistance}, {"oracle", oracle},
                   {"trace", to_json(r.trace)}}
                  .dump()
           << '\n';
    } else {
      out_ << fixed(r.resistance, 10) << '\n';
      out_ << "start       " << edge_list_string(r.trace.initial) << '\n';
      for (const ReductionStep& s : r.trace.steps) {
        out_ << "remove " << s.removed << std::string(s.removed < 10 ? 5 : 4, ' ') << edge_list_string(s.edges)
             << '\n';
      }
      out_ << "oracle      " << fixed(oracle, 10) << '\n';
    }
    return kExitOk;
  }

  int reduce(const ReduceArgs& a) {
    manifest_.flags["graph"] = a.graph;
    manifest_.flags["vertex"] = a.vertex;
    const WeightedGraph g = graph(a.graph);
    const WeightedGraph reduced = reduce_at(g, a.vertex);
    if (format_ == Format::Jsonl) {
      out_ << json{{"removed", a.vertex}, {"graph", graph_to_json(reduced)}}.dump() << '\n';
    } else {
      out_ << "# removed " << a.vertex << "; vertices above it shift down by one\n" << format_edge_list(reduced);
    }
    return kExitOk;
  }

  int verify(const VerifyArgs& a) {
    BatchOptions opts;
    opts.seed = a.seed;
    opts.trials = a.trials;
    opts.n = a.n;
    opts.max_n = a.max_n;
    opts.threads = resolve_threads(common_.threads);
    opts.tol = resolve_tolerances(common_);
    opts.max_path_length = a.path_length;
    opts.max_level = a.max_level;
    opts.alpha = a.alpha;
    manifest_.seed = a.seed;
    manifest_.flags["selector"] = a.selector;
    manifest_.flags["threads"] = opts.threads;
    manifest_.flags["L"] = a.path_length;
    manifest_.flags["max_level"] = a.max_level;
    if (a.trials) manifest_.flags["trials"] = *a.trials;
    if (a.n) manifest_.flags["n"] = *a.n;
    if (a.max_n) manifest_.flags["max_n"] = *a.max_n;
    if (a.alpha) manifest_.flags["alpha"] = *a.alpha;
    if (common_.tol) manifest_.flags["tol"] = *common_.tol;
    if (!a.graph.empty()) {
      manifest_.flags["graph"] = a.graph;
      opts.graph = graph(a.graph);
    }

    const BatchResult result = run_batch(a.selector, opts);
    if (format_ == Format::Jsonl) {
      for (const VerificationReport& r : result.reports) out_ << to_json(r).dump() << '\n';
      if (!result.extra.empty()) out_ << json{{"selector", a.selector}, {"table", result.extra}}.dump() << '\n';
      json summaries = json::array();
      for (const BatchSummary& s : result.summaries) {
        summaries.push_back({{"name", s.name},
                             {"instances", s.instances},
                             {"passes", s.passes},
                             {"near_equalities", s.near_equalities},
                             {"min_margin", s.min_margin},
                             {"pass_rate", s.pass_rate}});
      }
      out_ << json{{"selector", a.selector}, {"pass", result.all_pass()}, {"summary", summaries}}.dump() << '\n';
    } else {
      print_summary_table(out_, result.summaries);
      if (a.selector == "sg-scaling") print_sg(result.extra);
      if (result.extra.contains("sg-scaling")) print_sg(result.extra["sg-scaling"]);
      std::vector<VerificationReport> failed;
      for (const VerificationReport& r : result.reports)
        if (!r.pass) failed.push_back(r);
      if (!failed.empty()) {
        out_ << "\nfailures\n";
        print_reports_table(out_, failed);
      }
      out_ << (result.all_pass() ? "all checks passed" : "verification FAILED") << '\n';
    }
    if (!common_.summary.empty()) {
      std::ofstream csv(common_.summary);
      if (!csv) throw Error(ErrorCode::IoError, "cannot write '" + common_.summary + "'");
      write_summary_csv(csv, result.summaries);
    }
    return result.all_pass() ? kExitOk : kExitFailed;
  }

  int spectral(const SpectralArgs& a) {
    WeightedGraph g(1, {});
    if (a.complete) {
      if (!a.graph.empty()) throw Error(ErrorCode::InvalidArgument, "give either --graph or --complete, not both");
      g = complete_graph(*a.complete);
      manifest_.flags["complete"] = *a.complete;
    } else if (!a.graph.empty()) {
      g = graph(a.graph);
      manifest_.flags["graph"] = a.graph;
    } else {
      throw Error(ErrorCode::InvalidArgument, "spectral needs --graph FILE or --complete N");
    }
    manifest_.flags["kind"] = a.kind;
    if (a.k) manifest_.flags["k"] = *a.k;

    std::vector<GapResult> rows;
    const int n = g.vertex_count();
    if (a.kind == "rw" || a.kind == "all") rows.push_back(gap_random_walk(g));
    if (a.kind == "ip" || a.kind == "all") rows.push_back(gap_interchange(g));
    if (a.kind == "ex" || a.kind == "all") {
      if (a.k) {
        rows.push_back(gap_exclusion(g, *a.k));
      } else {
        for (int k = 1; k < n; ++k) rows.push_back(gap_exclusion(g, k));
      }
    }
    if (a.kind != "rw" && a.kind != "ip" && a.kind != "ex" && a.kind != "all") {
      throw Error(ErrorCode::InvalidArgument, "--kind must be rw, ip, ex or all");
    }
    if (format_ == Format::Jsonl) {
      for (const GapResult& r : rows) {
        out_ << json{{"kind", r.kind}, {"size", r.size}, {"gap", r.gap}, {"residual", r.residual}}.dump() << '\n';
      }
    } else {
      Table t({"kind", "size", "gap", "residual", "method"});
      for (const GapResult& r : rows) t.add({r.kind, std::to_string(r.size), fixed(r.gap, 12), sci(r.residual), r.method});
      t.print(out_);
    }
    return kExitOk;
  }

  int sg(int max_level) {
    manifest_.flags["max_level"] = max_level;
    const SgScalingTable table = sg_scaling(max_level);
    if (format_ == Format::Jsonl) {
      out_ << to_json(table).dump() << '\n';
    } else {
      print_sg(to_json(table));
    }
    return kExitOk;
  }

  int simulate(const SimulateArgs& a) {
    SimConfig cfg;
    if (a.sg_level) {
      if (!a.graph.empty()) throw Error(ErrorCode::InvalidArgument, "give either --graph or --sg-level, not both");
      cfg.graph = sg_graph(*a.sg_level).graph();
      manifest_.flags["sg_level"] = *a.sg_level;
    } else if (!a.graph.empty()) {
      cfg.graph = graph(a.graph);
      manifest_.flags["graph"] = a.graph;
    } else {
      throw Error(ErrorCode::InvalidArgument, "simulate needs --graph FILE or --sg-level N");
    }
    cfg.alpha = a.alpha;
    cfg.horizon = a.horizon;
    cfg.acceleration = a.accel;
    cfg.seed = a.seed;
    cfg.record_every = a.record_every;
    cfg.record_events = true;
    for (const std::string& b : a.boundary) cfg.boundary.push_back(parse_boundary(b));
    manifest_.seed = a.seed;
    manifest_.flags["alpha"] = a.alpha;
    manifest_.flags["T"] = a.horizon;
    manifest_.flags["accel"] = a.accel;
    manifest_.flags["boundary"] = a.boundary;
    manifest_.flags["record_every"] = a.record_every;

    const Trajectory traj = simulate_trajectory(cfg);
    if (!a.events.empty()) {
      std::ofstream csv(a.events);
      if (!csv) throw Error(ErrorCode::IoError, "cannot write '" + a.events + "'");
      write_events_csv(csv, traj);
      manifest_.flags["events"] = a.events;
    }
    const json summary = trajectory_summary(traj);
    if (format_ == Format::Jsonl) {
      out_ << json{{"summary", summary}}.dump() << '\n';
      for (const Snapshot& s : traj.snapshots) {
        out_ << json{{"time", s.time}, {"occupancy", occupancy_string(s.occupancy)}}.dump() << '\n';
      }
    } else {
      Table t({"statistic", "value"});
      for (const auto& [k, v] : summary.items()) t.add({k, v.dump()});
      t.print(out_);
      if (!traj.snapshots.empty()) {
        out_ << '\n';
        Table snaps({"time", "occupancy"});
        for (const Snapshot& s : traj.snapshots) snaps.add({format_double(s.time), occupancy_string(s.occupancy)});
        snaps.print(out_);
      }
    }
    return kExitOk;
  }

  void flush() {
    if (common_.output.empty()) {
      std::cout << out_.str() << std::flush;
    } else {
      std::ofstream f(common_.output, std::ios::binary);
      if (!f) throw Error(ErrorCode::IoError, "cannot write '" + common_.output + "'");
      f << out_.str();
    }
  }

 private:
  static Trajectory simulate_trajectory(const SimConfig& cfg) { return mpllab::simulate(cfg); }

  void print_sg(const json& t) {
    Table corners({"N", "R_N(a0,a1)", "decimated", "R_N/R_N-1"});
    for (const json& c : t.at("corners")) {
      corners.add({std::to_string(c.at("N").get<int>()), fixed(c.at("resistance").get<double>(), 12),
                   fixed(c.at("decimated").get<double>(), 12), fixed(c.at("ratio").get<double>(), 12)});
    }
    out_ << '\n';
    corners.print(out_);
    Table rows({"N", "j", "sup_ratio", "x", "y", "R_eff", "pairs"});
    for (const json& r : t.at("rows")) {
      rows.add({std::to_string(r.at("N").get<int>()), std::to_string(r.at("j").get<int>()),
                fixed(r.at("sup_ratio").get<double>(), 10), std::to_string(r.at("x").get<int>()),
                std::to_string(r.at("y").get<int>()), fixed(r.at("resistance").get<double>(), 10),
                std::to_string(r.at("pairs").get<std::size_t>())});
    }
    out_ << '\n';
    rows.print(out_);
    out_ << "\nconstant " << fixed(t.at("constant").get<double>(), 10) << '\n';
  }

  const Common& common_;
  RunManifest& manifest_;
  Format format_ = Format::Jsonl;
  std::ostringstream out_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electric network reduction and particle-system inequality checks", "mpl-lab"};
  app.set_version_flag("--version", MPLLAB_VERSION);
  app.require_subcommand(1);

  Common common;
  app.add_option("--format", common.format, "jsonl or table (default: table on a terminal)")
      ->check(CLI::IsMember({"jsonl", "table"}));
  app.add_option("--output,-o", common.output, "Write the report here instead of stdout");
  app.add_option("--threads", common.threads, "Worker threads (falls back to MPL_LAB_THREADS, then 1)");
  app.add_option("--tol", common.tol, "Relative tolerance for identities and inequalities");
  app.add_option("--manifest", common.manifest, "Write a run manifest (JSON) here");
  app.add_option("--summary", common.summary, "verify: write name,instances,min_margin,pass_rate CSV here");
  app.fallthrough();

  ResistanceArgs res;
  auto* res_cmd = app.add_subcommand("resistance", "Effective resistance by sequential star-mesh reduction");
  res_cmd->add_option("--graph", res.graph, "Graph file")->required();
  res_cmd->add_option("--pair", res.pair, "X Y")->required()->expected(2);

  ReduceArgs red;
  auto* red_cmd = app.add_subcommand("reduce", "Eliminate one vertex and print the reduced graph");
  red_cmd->add_option("--graph", red.graph, "Graph file")->required();
  red_cmd->add_option("--vertex", red.vertex, "Vertex to remove")->required();

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Run a seeded batch of checks");
  ver_cmd->add_option("selector", ver.selector, "Which batch")
      ->required()
      ->check(CLI::IsMember(verify_selectors()));
  ver_cmd->add_option("--graph", ver.graph, "Use this graph instead of random ones");
  ver_cmd->add_option("--n", ver.n, "Exact vertex count of random graphs");
  ver_cmd->add_option("--max-n", ver.max_n, "Largest vertex count of random graphs");
  ver_cmd->add_option("--trials", ver.trials, "Instance count");
  ver_cmd->add_option("--seed", ver.seed, "Base seed")->capture_default_str();
  ver_cmd->add_option("--alpha", ver.alpha, "Fix the density");
  ver_cmd->add_option("--L", ver.path_length, "sweep: largest path length")->capture_default_str();
  ver_cmd->add_option("--max-level", ver.max_level, "sg-scaling: finest gasket level")->capture_default_str();

  SpectralArgs spec;
  auto* spec_cmd = app.add_subcommand("spectral", "Spectral gaps of random walk, interchange and exclusion");
  spec_cmd->add_option("--graph", spec.graph, "Graph file");
  spec_cmd->add_option("--complete", spec.complete, "Use the complete graph K_N");
  spec_cmd->add_option("--kind", spec.kind, "rw, ip, ex or all")->capture_default_str();
  spec_cmd->add_option("--k", spec.k, "ex: particle count (default: every k)");

  int sg_level = 6;
  auto* sg_cmd = app.add_subcommand("sg", "Resistance scaling on the Sierpinski gasket");
  sg_cmd->add_option("--max-level", sg_level, "Finest level")->capture_default_str();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate the exclusion process");
  sim_cmd->add_option("--graph", sim.graph, "Graph file");
  sim_cmd->add_option("--sg-level", sim.sg_level, "Use the level-N gasket");
  sim_cmd->add_option("--alpha", sim.alpha, "Initial product density")->capture_default_str();
  sim_cmd->add_option("--T", sim.horizon, "Time horizon")->capture_default_str();
  sim_cmd->add_option("--accel", sim.accel, "Edge rate multiplier")->capture_default_str();
  sim_cmd->add_option("--boundary", sim.boundary, "SITE:BIRTH,DEATH (repeatable)");
  sim_cmd->add_option("--seed", sim.seed, "Seed")->capture_default_str();
  sim_cmd->add_option("--record-every", sim.record_every, "Snapshot spacing")->capture_default_str();
  sim_cmd->add_option("--events", sim.events, "Write the event CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunManifest manifest;
  manifest.version = MPLLAB_VERSION;
  const auto start = std::chrono::steady_clock::now();
  try {
    Runner runner(common, manifest);
    runner.init();
    int code = kExitOk;
    if (res_cmd->parsed()) {
      manifest.subcommand = "resistance";
      code = runner.resistance(res);
    } else if (red_cmd->parsed()) {
      manifest.subcommand = "reduce";
      code = runner.reduce(red);
    } else if (ver_cmd->parsed()) {
      manifest.subcommand = "verify";
      code = runner.verify(ver);
    } else if (spec_cmd->parsed()) {
      manifest.subcommand = "spectral";
      code = runner.spectral(spec);
    } else if (sg_cmd->parsed()) {
      manifest.subcommand = "sg";
      code = runner.sg(sg_level);
    } else if (sim_cmd->parsed()) {
      manifest.subcommand = "simulate";
      code = runner.simulate(sim);
    }
    runner.flush();
    if (!common.manifest.empty()) {
      manifest.flags["format"] = runner.format() == Format::Jsonl ? "jsonl" : "table";
      manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::ofstream f(common.manifest);
      if (!f) throw Error(ErrorCode::IoError, "cannot write '" + common.manifest + "'");
      f << manifest.to_json().dump(2) << '\n';
    }
    return code;
  } catch (const Error& e) {
    std::cerr << "mpl-lab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "mpl-lab: " << e.what() << '\n';
    return kExitUsage;
  }
}

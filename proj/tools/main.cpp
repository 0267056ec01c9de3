#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "taskgrid/batch.hpp"
#include "taskgrid/chat.hpp"
#include "taskgrid/json_io.hpp"
#include "taskgrid/render.hpp"

namespace fs = std::filesystem;
using namespace taskgrid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInfrastructure = 3;

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

uint64_t fnv1a(const std::string& text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

DagSize parse_dag_size(const std::string& s) {
  if (s == "small") return DagSize::Small;
  if (s == "medium") return DagSize::Medium;
  if (s == "large") return DagSize::Large;
  throw ValidationFailure("unknown dag size: " + s);
}

ExploitDemand parse_demand(const std::string& s) {
  if (s == "low") return ExploitDemand::Low;
  if (s == "medium") return ExploitDemand::Medium;
  if (s == "high") return ExploitDemand::High;
  throw ValidationFailure("unknown exploitation demand: " + s);
}

Difficulty parse_difficulty(const std::string& s) {
  if (s == "easy") return Difficulty::Easy;
  if (s == "medium") return Difficulty::Medium;
  if (s == "hard") return Difficulty::Hard;
  throw ValidationFailure("unknown difficulty: " + s);
}

LabelMode parse_label_mode(const std::string& s) {
  if (s == "symbolic") return LabelMode::Symbolic;
  if (s == "semantic") return LabelMode::Semantic;
  throw ValidationFailure("unknown label mode: " + s);
}

CountProbs parse_probs(const ordered_json& j) {
  CountProbs probs;
  for (auto it = j.begin(); it != j.end(); ++it) probs[std::stoi(it.key())] = it.value().get<double>();
  return probs;
}

// Config file mirrors GenConfig/RunSpec field names; explicit CLI flags win.
void apply_config_file(const std::string& path, GenConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  ordered_json doc = ordered_json::parse(buf.str());
  if (doc.contains("dag_size")) cfg.dag_size = parse_dag_size(doc["dag_size"]);
  if (doc.contains("exploit_demand")) cfg.exploit_demand = parse_demand(doc["exploit_demand"]);
  if (doc.contains("difficulty")) cfg.difficulty = parse_difficulty(doc["difficulty"]);
  if (doc.contains("label_mode")) cfg.label_mode = parse_label_mode(doc["label_mode"]);
  if (doc.contains("option_count_probs")) cfg.option_count_probs = parse_probs(doc["option_count_probs"]);
  if (doc.contains("dependency_count_probs"))
    cfg.dependency_count_probs = parse_probs(doc["dependency_count_probs"]);
  if (doc.contains("goal_dependency_count_probs"))
    cfg.goal_dependency_count_probs = parse_probs(doc["goal_dependency_count_probs"]);
  if (doc.contains("parent_depth_bias")) cfg.parent_depth_bias = doc["parent_depth_bias"];
  if (doc.contains("aspect_ratio")) cfg.aspect_ratio = doc["aspect_ratio"];
  if (doc.contains("budget_multiplier")) cfg.budget_multiplier = doc["budget_multiplier"];
  if (doc.contains("layer_cap")) cfg.layer_cap = doc["layer_cap"];
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<uint64_t>();
}

struct RunDefaults {
  std::string agent;
  std::string prompt;
  bool harness = false;
  bool harness_set = false;
  std::string seeds;
  std::string out;
  std::string endpoint;
  std::string model;
};

RunDefaults run_defaults_from_config(const std::string& path) {
  RunDefaults d;
  if (path.empty()) return d;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  ordered_json doc = ordered_json::parse(buf.str());
  if (doc.contains("agent")) d.agent = doc["agent"];
  if (doc.contains("prompt")) d.prompt = doc["prompt"];
  if (doc.contains("harness")) {
    d.harness = doc["harness"].get<bool>();
    d.harness_set = true;
  }
  if (doc.contains("seeds")) d.seeds = doc["seeds"];
  if (doc.contains("out")) d.out = doc["out"];
  if (doc.contains("endpoint")) d.endpoint = doc["endpoint"];
  if (doc.contains("model")) d.model = doc["model"];
  return d;
}

std::vector<uint64_t> parse_seed_list(const std::string& text) {
  std::vector<uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) throw ValidationFailure("seed list is empty");
  return seeds;
}

struct GenFlags {
  std::string dag_size = "small";
  std::string demand = "medium";
  std::string difficulty = "medium";
  std::string label_mode = "symbolic";
  double alpha = 3.0;
  double beta = 1.0;
  double aspect = 1.0;
  int layer_cap = 3;
};

void add_gen_flags(CLI::App* cmd, GenFlags& flags) {
  cmd->add_option("--dag-size", flags.dag_size, "small|medium|large (4/6/8 nodes)");
  cmd->add_option("--exploit-demand", flags.demand, "low|medium|high");
  cmd->add_option("--difficulty", flags.difficulty, "easy|medium|hard");
  cmd->add_option("--label-mode", flags.label_mode, "symbolic|semantic");
  cmd->add_option("--alpha", flags.alpha, "budget multiplier");
  cmd->add_option("--beta", flags.beta, "parent depth bias");
  cmd->add_option("--aspect", flags.aspect, "target width/height ratio");
  cmd->add_option("--layer-cap", flags.layer_cap, "max nodes per layer");
}

// Config-file values seed the config; flags the user actually passed win.
GenConfig make_config(const CLI::App* cmd, const GenFlags& flags, uint64_t seed,
                      const std::string& config_file) {
  GenConfig cfg;
  bool from_file = !config_file.empty();
  if (from_file) apply_config_file(config_file, cfg);
  auto passed = [&](const char* name) { return !from_file || cmd->count(name) > 0; };
  if (passed("--dag-size")) cfg.dag_size = parse_dag_size(flags.dag_size);
  if (passed("--exploit-demand")) cfg.exploit_demand = parse_demand(flags.demand);
  if (passed("--difficulty")) cfg.difficulty = parse_difficulty(flags.difficulty);
  if (passed("--label-mode")) cfg.label_mode = parse_label_mode(flags.label_mode);
  if (passed("--alpha")) cfg.budget_multiplier = flags.alpha;
  if (passed("--beta")) cfg.parent_depth_bias = flags.beta;
  if (passed("--aspect")) cfg.aspect_ratio = flags.aspect;
  if (passed("--layer-cap")) cfg.layer_cap = flags.layer_cap;
  cfg.seed = seed;
  auto errors = cfg.validate();
  if (!errors.empty()) throw ValidationFailure(errors.front());
  return cfg;
}

AgentFactory make_factory(const std::string& kind, uint64_t agent_seed, PromptVariant variant,
                          const ChatAdapterConfig& chat_cfg) {
  if (kind == "random")
    return [agent_seed](const Environment&, const EpisodeState&) {
      return std::make_unique<RandomAgent>(agent_seed);
    };
  if (kind == "explorer")
    return [](const Environment&, const EpisodeState&) {
      return std::make_unique<FrontierExplorerAgent>();
    };
  if (kind == "oracle")
    return [](const Environment& e, const EpisodeState& s) {
      return std::make_unique<OracleAgent>(e, s);
    };
  if (kind == "chat")
    return [chat_cfg, variant](const Environment&, const EpisodeState&) {
      return std::make_unique<ChatModelAgent>(chat_cfg, variant);
    };
  throw ValidationFailure("unknown agent kind: " + kind);
}

struct EvalOutcome {
  std::string name;
  std::string config;
  std::string agent;
  MetricReport report;
};

void print_aggregate(const std::vector<EvalOutcome>& outcomes, const std::string& out_path) {
  std::map<std::string, std::vector<const EvalOutcome*>> groups;
  for (const auto& o : outcomes) groups[o.config.empty() ? "(unknown)" : o.config].push_back(&o);

  ordered_json agg = ordered_json::array();
  std::cout << "config                              episodes success%  explore_err exploit_err "
               "steps(success)\n";
  for (const auto& [key, items] : groups) {
    int n = static_cast<int>(items.size());
    int successes = 0;
    double explore_sum = 0, exploit_sum = 0, steps_sum = 0;
    int explore_n = 0, exploit_n = 0;
    for (const auto* o : items) {
      if (o->report.success) {
        successes += 1;
        steps_sum += o->report.steps;
      }
      if (o->report.exploration_error) {
        explore_sum += *o->report.exploration_error;
        explore_n += 1;
      }
      if (o->report.exploitation_error) {
        exploit_sum += *o->report.exploitation_error;
        exploit_n += 1;
      }
    }
    ordered_json row;
    row["config"] = key;
    row["episodes"] = n;
    row["success_rate"] = n ? double(successes) / n : 0.0;
    row["exploration_error"] =
        explore_n ? ordered_json(explore_sum / explore_n) : ordered_json(nullptr);
    row["exploration_error_defined"] = explore_n;
    row["exploitation_error"] =
        exploit_n ? ordered_json(exploit_sum / exploit_n) : ordered_json(nullptr);
    row["exploitation_error_defined"] = exploit_n;
    row["mean_steps_success"] =
        successes ? ordered_json(steps_sum / successes) : ordered_json(nullptr);
    agg.push_back(row);

    char line[256];
    std::snprintf(line, sizeof(line), "%-36s %8d %8.1f %12.3f %11.3f %14.1f\n", key.c_str(), n,
                  n ? 100.0 * successes / n : 0.0, explore_n ? explore_sum / explore_n : -1.0,
                  exploit_n ? exploit_sum / exploit_n : -1.0,
                  successes ? steps_sum / successes : -1.0);
    std::cout << line;
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << agg.dump(2) << "\n";
  }
}

int cmd_gen(const CLI::App* cmd, const GenFlags& flags, uint64_t seed,
            const std::string& config_file, const std::string& out) {
  GenConfig cfg = make_config(cmd, flags, seed, config_file);
  Environment env = generate_environment(cfg);
  write_environment(out, env);
  std::cout << "wrote " << out << ": grid " << env.map.width() << "x" << env.map.height() << ", "
            << env.map.traversable_count() << " traversable cells, "
            << env.dag.nodes().size() << " nodes, budget " << env.budget << "\n";
  return kExitOk;
}

int cmd_run(const CLI::App* run_cmd, const std::vector<std::string>& env_paths,
            const std::string& agent_kind, const std::string& prompt, bool harness,
            const std::string& seeds_text, uint64_t global_seed, int parallel,
            const std::string& out_dir, const ChatAdapterConfig& chat_cfg,
            const GenFlags& gen_defaults, const std::string& config_file) {
  auto style = parse_prompt_style(prompt);
  if (!style) throw ValidationFailure("unknown prompt variant: " + prompt);
  PromptVariant variant{*style, harness};
  auto seeds = parse_seed_list(seeds_text);

  std::vector<Environment> envs;
  for (const auto& path : env_paths) envs.push_back(read_environment(path));
  if (envs.empty()) {
    // No files: the run spec's environment source is the generator config.
    GenConfig cfg = make_config(run_cmd, gen_defaults, global_seed, config_file);
    envs.push_back(generate_environment(cfg));
  }

  fs::create_directories(out_dir);

  std::vector<EpisodeJob> jobs;
  std::vector<std::string> names;
  for (size_t e = 0; e < envs.size(); ++e) {
    for (uint64_t seed : seeds) {
      uint64_t agent_seed = Rng::mix(Rng::mix(global_seed, fnv1a(envs[e].config_key)), seed);
      std::string name = envs[e].config_key + "-s" + std::to_string(seed);
      ChatAdapterConfig episode_chat = chat_cfg;
      if (agent_kind == "chat")
        episode_chat.wire_log_path = out_dir + "/" + name + ".wire.jsonl";
      jobs.push_back({&envs[e], make_factory(agent_kind, agent_seed, variant, episode_chat),
                      {agent_kind, variant, seed}});
      names.push_back(name);
    }
  }

  auto trajectories = run_batch(jobs, parallel);
  int failures = 0, successes = 0;
  for (size_t i = 0; i < trajectories.size(); ++i) {
    std::string path = out_dir + "/" + names[i] + ".traj.jsonl";
    write_trajectory(path, trajectories[i]);
    if (!trajectories[i].failure.empty()) {
      failures += 1;
      std::cerr << names[i] << ": adapter failure: " << trajectories[i].failure << "\n";
    } else if (!trajectories[i].steps.empty() &&
               trajectories[i].steps.back().terminal == Terminal::Success) {
      successes += 1;
    }
  }
  std::cout << "ran " << trajectories.size() << " episodes: " << successes << " solved, "
            << failures << " adapter failures\n";
  return failures == 0 ? kExitOk : kExitInfrastructure;
}

int cmd_eval(const std::string& env_path, const std::string& traj_path,
             const std::string& traj_dir, bool per_step, bool aggregate, int parallel,
             const std::string& out) {
  // --out names a file for a single --traj, a directory otherwise.
  const bool out_is_file = !traj_path.empty() && traj_dir.empty() && !aggregate;
  std::vector<std::string> traj_files;
  if (!traj_path.empty()) traj_files.push_back(traj_path);
  if (!traj_dir.empty()) {
    for (const auto& entry : fs::directory_iterator(traj_dir)) {
      std::string name = entry.path().filename().string();
      bool wire_log = name.size() > 11 && name.substr(name.size() - 11) == ".wire.jsonl";
      if (entry.path().extension() == ".jsonl" && !wire_log)
        traj_files.push_back(entry.path().string());
    }
    std::sort(traj_files.begin(), traj_files.end());
  }
  if (traj_files.empty()) {
    std::cerr << "warning: no trajectories to evaluate\n";
    if (aggregate) print_aggregate({}, out);
    return kExitOk;
  }

  std::vector<Trajectory> trajectories;
  for (const auto& path : traj_files) trajectories.push_back(read_trajectory(path));

  if (!env_path.empty()) {
    Environment env = read_environment(env_path);
    for (const auto& traj : trajectories)
      if (environment_to_string(traj.env) != environment_to_string(env))
        throw ValidationFailure("trajectory header does not match --env document");
  }

  std::vector<EvalJob> jobs;
  for (const auto& traj : trajectories) jobs.push_back({&traj.env, &traj});
  std::vector<MetricReport> reports;
  try {
    reports = evaluate_batch(jobs, parallel);
  } catch (const ReplayError& e) {
    throw ValidationFailure(e.what());
  }

  std::vector<EvalOutcome> outcomes;
  for (size_t i = 0; i < reports.size(); ++i) {
    std::string stem = fs::path(traj_files[i]).stem().stem().string();
    outcomes.push_back({stem, trajectories[i].config_key, trajectories[i].agent, reports[i]});

    ordered_json doc = metric_report_to_json(reports[i], per_step);
    doc["config"] = trajectories[i].config_key;
    doc["agent"] = trajectories[i].agent;
    std::string report_path;
    if (out_is_file && !out.empty())
      report_path = out;
    else {
      fs::path dir = out.empty() ? fs::path(traj_files[i]).parent_path() : fs::path(out);
      if (!out.empty()) fs::create_directories(dir);
      report_path = (dir / (stem + ".report.json")).string();
    }
    std::ofstream f(report_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + report_path);
    f << doc.dump(2) << "\n";
    if (out_is_file) std::cout << doc.dump(2) << "\n";
  }
  if (aggregate) print_aggregate(outcomes, aggregate && !out.empty() ? out + "/aggregate.json" : "");
  return kExitOk;
}

int cmd_report(const std::string& dir, const std::string& out) {
  std::vector<EvalOutcome> outcomes;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    std::string name = entry.path().filename().string();
    if (name.size() < 12 || name.substr(name.size() - 12) != ".report.json") continue;
    std::ifstream in(entry.path());
    std::stringstream buf;
    buf << in.rdbuf();
    ordered_json doc = ordered_json::parse(buf.str());
    MetricReport report;
    report.success = doc.at("success").get<bool>();
    report.steps = doc.at("steps").get<int>();
    if (!doc.at("exploration_error").is_null())
      report.exploration_error = doc.at("exploration_error").get<double>();
    if (!doc.at("exploitation_error").is_null())
      report.exploitation_error = doc.at("exploitation_error").get<double>();
    outcomes.push_back({entry.path().stem().string(), doc.value("config", ""),
                        doc.value("agent", ""), report});
  }
  if (outcomes.empty()) std::cerr << "warning: no report files under " << dir << "\n";
  print_aggregate(outcomes, out);
  return kExitOk;
}

int cmd_render(const std::string& traj_path, const std::string& backend_name,
               const std::string& out_dir) {
  RenderBackend backend;
  if (backend_name == "ascii")
    backend = RenderBackend::Ascii;
  else if (backend_name == "svg")
    backend = RenderBackend::Svg;
  else
    throw ValidationFailure("unknown render backend: " + backend_name);

  Trajectory traj = read_trajectory(traj_path);
  auto frames = render_frames(traj.env, traj, backend);
  fs::create_directories(out_dir);
  for (size_t i = 0; i < frames.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "frame_%04zu.%s", i, render_extension(backend));
    std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write frame " + std::string(name));
    f << frames[i];
  }
  std::cout << "wrote " << frames.size() << " frames to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taskgrid: procedural gridworld tasks with an exploration/exploitation metric"};
  app.require_subcommand(1);

  uint64_t seed = 0;
  std::string out;
  int parallel = 1;
  std::string config_file;
  app.add_option("--seed", seed, "global seed")->capture_default_str();
  app.add_option("--parallel", parallel, "worker threads for batch commands")
      ->capture_default_str();
  app.add_option("--config", config_file, "JSON config file mirroring generator fields");

  auto* gen = app.add_subcommand("gen", "generate an environment file");
  GenFlags gen_flags;
  add_gen_flags(gen, gen_flags);
  std::string gen_out = "env.json";
  gen->add_option("--out", gen_out, "output environment path")->capture_default_str();

  auto* run = app.add_subcommand("run", "run agent episodes against environments");
  std::vector<std::string> run_envs;
  std::string agent_kind = "explorer";
  std::string prompt = "base";
  bool harness = false;
  std::string seeds_text = "0";
  std::string run_out = "runs";
  ChatAdapterConfig chat_cfg;
  run->add_option("--env", run_envs,
                  "environment file(s); omitted = generate one from --config/--seed");
  add_gen_flags(run, gen_flags);
  run->add_option("--agent", agent_kind, "random|explorer|oracle|chat")->capture_default_str();
  run->add_option("--prompt", prompt, "base|exploration|exploitation|balance")
      ->capture_default_str();
  run->add_flag("--harness", harness, "inject the structured memory summary each turn");
  run->add_option("--seeds", seeds_text, "comma-separated episode seeds")->capture_default_str();
  run->add_option("--out", run_out, "output directory")->capture_default_str();
  run->add_option("--endpoint", chat_cfg.endpoint, "chat completions endpoint (chat agent)");
  run->add_option("--model", chat_cfg.model, "model identifier (chat agent)");
  run->add_option("--temperature", chat_cfg.temperature, "sampling temperature")
      ->capture_default_str();
  run->add_option("--max-retries", chat_cfg.max_retries, "adapter retries per turn")
      ->capture_default_str();
  run->add_option("--credential-env", chat_cfg.credential_env,
                  "environment variable holding the API key")
      ->capture_default_str();

  auto* eval = app.add_subcommand("eval", "evaluate trajectories into metric reports");
  std::string eval_env, eval_traj, eval_traj_dir;
  bool per_step = false, aggregate = false;
  eval->add_option("--env", eval_env, "environment file to cross-check against headers");
  eval->add_option("--traj", eval_traj, "trajectory file");
  eval->add_option("--traj-dir", eval_traj_dir, "directory of .jsonl trajectories");
  eval->add_flag("--per-step", per_step, "include per-step verdicts");
  eval->add_flag("--aggregate", aggregate, "emit an aggregate over all inputs");
  eval->add_option("--out", out, "report file (single) or directory (batch)");

  auto* report = app.add_subcommand("report", "aggregate metric reports into a table");
  std::string report_dir = ".";
  std::string report_out;
  report->add_option("--dir", report_dir, "directory of *.report.json files")
      ->capture_default_str();
  report->add_option("--out", report_out, "aggregate JSON output path");

  auto* render = app.add_subcommand("render", "render per-timestep frames");
  std::string render_traj, render_backend = "ascii", render_out = "frames";
  render->add_option("--traj", render_traj, "trajectory file")->required();
  render->add_option("--backend", render_backend, "ascii|svg")->capture_default_str();
  render->add_option("--out", render_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen, gen_flags, seed, config_file, gen_out);
    if (run->parsed()) {
      // Config-file values fill in anything not given explicitly on the line.
      RunDefaults defaults = run_defaults_from_config(config_file);
      if (!run->count("--agent") && !defaults.agent.empty()) agent_kind = defaults.agent;
      if (!run->count("--prompt") && !defaults.prompt.empty()) prompt = defaults.prompt;
      if (!run->count("--harness") && defaults.harness_set) harness = defaults.harness;
      if (!run->count("--seeds") && !defaults.seeds.empty()) seeds_text = defaults.seeds;
      if (!run->count("--out") && !defaults.out.empty()) run_out = defaults.out;
      if (!run->count("--endpoint") && !defaults.endpoint.empty())
        chat_cfg.endpoint = defaults.endpoint;
      if (!run->count("--model") && !defaults.model.empty()) chat_cfg.model = defaults.model;
      return cmd_run(run, run_envs, agent_kind, prompt, harness, seeds_text, seed, parallel,
                     run_out, chat_cfg, gen_flags, config_file);
    }
    if (eval->parsed())
      return cmd_eval(eval_env, eval_traj, eval_traj_dir, per_step, aggregate, parallel, out);
    if (report->parsed()) return cmd_report(report_dir, report_out);
    if (render->parsed()) return cmd_render(render_traj, render_backend, render_out);
  } catch (const ValidationFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ReplayError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const AgentUnavailable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfrastructure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfrastructure;
  }
  return kExitUsage;
}

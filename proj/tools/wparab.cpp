#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wparab/cli/scenario.hpp"

namespace {

int run(const std::string& config, wparab::cli::RunOptions opt, bool seed_given) {
  using namespace wparab::cli;
  std::ifstream in(config, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << config << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  json cfg;
  try {
    cfg = load_config(buf.str());
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (!seed_given && cfg.contains("seed")) opt.seed = cfg.at("seed").get<std::uint64_t>();
  RunResult r = run_config(cfg, opt);
  std::filesystem::create_directories(opt.out_dir);
  std::ofstream(opt.out_dir / "report.json", std::ios::binary) << r.report.dump(2, ' ', false, json::error_handler_t::replace)
                                                                 << "\n";
  for (const auto& s : r.report.at("scenarios")) {
    std::string line = s.at("id").get<std::string>() + "  " + s.at("task").get<std::string>() + "  ";
    if (s.at("status") == "ok") {
      const json& res = s.at("result");
      if (res.contains("pass")) line += res.at("pass").get<bool>() ? "comparison holds" : "comparison violated";
      else if (res.contains("verdict")) line += res.at("verdict").at("outcome").get<std::string>();
      else if (res.contains("estimate")) line += "p=" + res.at("estimate").at("p").dump();
      else if (res.contains("capacity")) line += "capacity=" + res.at("capacity").dump();
      else if (res.contains("file")) line += res.at("file").get<std::string>();
      else line += "ok";
    } else {
      line += "ERROR " + s.at("error").at("type").get<std::string>() + ": " + s.at("error").at("message").get<std::string>();
    }
    std::cout << line << "\n";
  }
  std::cout << r.report.at("scenarios").size() - r.errors << " ok, " << r.errors << " failed; report at "
            << (opt.out_dir / "report.json").string() << "\n";
  return r.errors ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wparab: parabolicity of weighted submanifolds"};
  app.require_subcommand(1);
  std::string config;
  wparab::cli::RunOptions opt;
  std::string out = "wparab-out";
  std::uint64_t seed = 1;

  struct Sub {
    CLI::App* app;
    const char* task;
  };
  std::vector<Sub> subs = {{app.add_subcommand("run", "Run every scenario of a config"), ""},
                           {app.add_subcommand("curves", "Run only curves scenarios"), "curves"},
                           {app.add_subcommand("mc-verify", "Run only mc-verify scenarios"), "mc-verify"}};
  std::vector<CLI::Option*> seed_opts;
  for (auto& s : subs) {
    s.app->add_option("config", config, "Scenario config (JSON)")->required();
    s.app->add_option("--out", out, "Output directory");
    s.app->add_option("--workers", opt.workers, "Concurrent scenarios")->check(CLI::PositiveNumber);
    seed_opts.push_back(s.app->add_option("--seed", seed, "Master seed"));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.out_dir = out;
  opt.seed = seed;
  bool seed_given = false;
  for (auto* o : seed_opts) seed_given = seed_given || o->count() > 0;
  for (auto& s : subs)
    if (s.app->parsed()) opt.only_task = s.task;
  return run(config, opt, seed_given);
}

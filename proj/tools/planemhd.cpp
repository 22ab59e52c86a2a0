// planemhd run|limit|sweep|bl|verify --config <path> --out <dir>
//                                    [--mu X] [--n-cells N] [--t-end T]
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "planemhd/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"One-dimensional plane-MHD solver and shear-viscosity experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<double> mu;
  std::optional<int> n_cells;
  std::optional<double> t_end;

  const std::pair<const char*, const char*> commands[] = {
      {"run", "integrate the configured problem"},
      {"limit", "integrate the mu = 0 limit system"},
      {"sweep", "vanishing-viscosity sweep and rate fit"},
      {"bl", "boundary-layer thickness and interior-gradient table"},
      {"verify", "steady-state, conservation, oracle and convergence checks"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default: output.directory)");
    sub->add_option("--mu", mu, "override physics.mu");
    sub->add_option("--n-cells", n_cells, "override grid.n_cells");
    sub->add_option("--t-end", t_end, "override time.t_end");
  }
  CLI11_PARSE(app, argc, argv);

  try {
    planemhd::RunConfig cfg = planemhd::load_config(config_path);
    planemhd::apply_overrides(cfg, mu, n_cells, t_end);
    const std::filesystem::path out = out_dir.empty() ? std::filesystem::path(cfg.output_directory) : std::filesystem::path(out_dir);
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "run") return planemhd::cmd_run(cfg, out, std::cout);
    if (cmd == "limit") return planemhd::cmd_limit(cfg, out, std::cout);
    if (cmd == "sweep") return planemhd::cmd_sweep(cfg, out, std::cout);
    if (cmd == "bl") return planemhd::cmd_bl(cfg, out, std::cout);
    return planemhd::cmd_verify(cfg, out, std::cout);
  } catch (const planemhd::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "periwave/config.hpp"
#include "periwave/errors.hpp"
#include "periwave/runners.hpp"

namespace {

struct ModeDesc {
  const char* name;
  const char* help;
};

constexpr ModeDesc kModes[] = {
    {"dispersion", "Band diagram and stop-band intervals"},
    {"scan", "Singularity-indicator map over the multiplier plane"},
    {"contour", "Integration contour construction and validation report"},
    {"solve-full", "Full-guide solution by contour integration"},
    {"solve-half", "Half-guide solution from interface data"},
    {"oracle", "Absorbing-limit reference solution on a truncated strip"},
    {"convergence", "Relative-error table over mesh size and node count"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"periwave: scattering solutions in periodic 2-D waveguides"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  int threads = -1;
  for (const auto& m : kModes) {
    CLI::App* sub = app.add_subcommand(m.name, m.help);
    sub->add_option("--config", config_path, "Run configuration file (key = value)")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides config)");
    sub->add_option("--threads", threads, "Worker thread cap (overrides config; 0 = auto)");
  }

  CLI11_PARSE(app, argc, argv);
  if (app.get_subcommands().empty()) {
    std::fprintf(stderr, "%s\n", app.help().c_str());
    return 2;
  }

  periwave::RunConfig cfg;
  try {
    cfg = periwave::parse_config_file(config_path);
  } catch (const periwave::Error& e) {
    std::fprintf(stderr, "error: %s\n%s\n", e.what(), app.help().c_str());
    return 2;
  }
  cfg.mode = app.get_subcommands().front()->get_name();
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (threads >= 0) cfg.threads = threads;
  return periwave::run_mode(cfg);
}

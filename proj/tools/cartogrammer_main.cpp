#include <unistd.h>

#include <iostream>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cartogrammer/cli.hpp"

namespace cli = cartogrammer::cli;

namespace {

void add_common(CLI::App& cmd, cli::RunConfig& config, std::string& canvas,
                std::string& projection, std::vector<std::string>& colors) {
  cmd.add_option("--map", config.map_path, "Region map (GeoJSON)")->required()->check(CLI::ExistingFile);
  cmd.add_option("--csv", config.csv_path, "Data table, one row per region")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  cmd.add_option("--id-property", config.id_property, "GeoJSON property holding region ids")
      ->capture_default_str();
  cmd.add_option("--name-property", config.name_property)->capture_default_str();
  cmd.add_option("--abbr-property", config.abbr_property)->capture_default_str();
  cmd.add_option("--canvas", canvas, "Canvas size WxH")->capture_default_str();
  cmd.add_option("--project", projection, "Project lon/lat input first")
      ->check(CLI::IsMember({"none", "cea"}))
      ->capture_default_str();
  cmd.add_option("--color", colors, "Fixed region color ID=#RRGGBB (repeatable)");
}

void add_solver(CLI::App& cmd, cli::RunConfig& config, int& snapshot_every) {
  cmd.add_flag("--assume-additive", config.assume_additive,
               "Accept every dataset total without asking");
  cmd.add_option("--max-iter", config.solver.max_iterations)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--tolerance", config.solver.area_tolerance, "Target max relative area error")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd.add_option("--retries", config.solver.max_retries_per_iteration,
                 "Step halvings allowed per iteration")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd.add_option("--snapshot-every", snapshot_every, "Write intermediate GeoJSON every N iterations")
      ->check(CLI::PositiveNumber);
}

void finish(cli::RunConfig& config, const std::string& canvas, const std::string& projection,
            const std::vector<std::string>& colors, int snapshot_every) {
  config.canvas = cli::parse_canvas(canvas);
  config.project = projection == "cea" ? cli::Projection::cea : cli::Projection::none;
  static const std::regex kColor(R"(([^=]+)=(#[0-9A-Fa-f]{6}))");
  for (const std::string& c : colors) {
    std::smatch m;
    if (!std::regex_match(c, m, kColor)) {
      throw CLI::ValidationError("--color", "expected ID=#RRGGBB, got \"" + c + "\"");
    }
    config.color_overrides[m[1].str()] = m[2].str();
  }
  if (snapshot_every > 0) config.solver.snapshot_every = snapshot_every;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Builds continuous area cartograms from a region map and a data table."};
  app.require_subcommand(1);

  cli::RunConfig config;
  std::string canvas = "800x600";
  std::string projection = "none";
  std::vector<std::string> colors;
  int snapshot_every = 0;

  auto* validate = app.add_subcommand("validate", "Check inputs and show each dataset's total");
  auto* generate = app.add_subcommand("generate", "Compute cartograms and write SVG/GeoJSON");
  auto* bundle = app.add_subcommand("bundle", "Write the viewer bundle (bundle.json)");
  for (CLI::App* cmd : {validate, generate, bundle}) add_common(*cmd, config, canvas, projection, colors);
  add_solver(*generate, config, snapshot_every);
  add_solver(*bundle, config, snapshot_every);

  try {
    app.parse(argc, argv);
    finish(config, canvas, projection, colors, snapshot_every);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  }

  cli::Console console{std::cin, std::cout, std::cerr, isatty(STDIN_FILENO) != 0,
                       cli::color_allowed(isatty(STDOUT_FILENO) != 0)};
  if (validate->parsed()) return cli::cmd_validate(config, console);
  if (generate->parsed()) return cli::cmd_generate(config, console);
  return cli::cmd_bundle(config, console);
}

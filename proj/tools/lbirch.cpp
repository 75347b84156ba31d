#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "lbirch/campaigns.hpp"

using lbirch::CampaignConfig;

namespace {

void common_options(CLI::App* sub, CampaignConfig& c) {
  sub->add_option("-p,--prime", c.p, "residue characteristic");
  sub->add_option("-n,--degree", c.n, "GL_n degree (identities: largest size swept)");
  sub->add_option("--seed", c.seed, "sampling seed");
  sub->add_option("--threads", c.threads, "OpenMP threads");
  sub->add_option("--checks", c.checks, "comma-separated subset of the command's checks");
  sub->add_option("-o,--output", c.output, "report path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification campaigns for the local Birch lemma, Hecke relations and p-adic measures"};
  app.require_subcommand(1);
  CampaignConfig c;

  auto* birch = app.add_subcommand("birch", "theorem and corollary checks over primitive characters");
  common_options(birch, c);
  birch->add_option("-m,--conductor", c.m, "conductor exponent");
  birch->add_option("-l,--level", c.l, "level floor (default: minimal per block)");
  birch->add_option("-r,--radius", c.radius, "e-window radius");
  birch->add_option("--chars", c.chars, "all or comma-separated character indices");

  auto* ident = app.add_subcommand("identities", "matrix identities and representative-set propositions");
  common_options(ident, c);
  ident->add_option("-m,--conductor", c.m, "conductor exponent");
  ident->add_flag("--inject-fault", c.inject_fault, "corrupt one comparison (test mode)");

  auto* hecke = app.add_subcommand("hecke", "factorization, V-operators, Satake values, eigen-check, kappa");
  common_options(hecke, c);
  hecke->add_option("--key-radius", c.key_radius, "evaluation keys |e_i| <= radius for the eigen-check");

  auto* meas = app.add_subcommand("measures", "distributions, inversion, order, index formula");
  common_options(meas, c);
  meas->add_option("-M,--depth", c.depth, "top level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  c.command = app.get_subcommands().front()->get_name();

  nlohmann::json report;
  try {
    report = lbirch::run_campaign(c);
  } catch (const lbirch::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }
  const std::string text = report.dump(2) + "\n";
  if (c.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(c.output);
    if (!out) {
      std::cerr << "cannot write " << c.output << "\n";
      return 2;
    }
    out << text;
  }
  return report.at("pass").get<bool>() ? 0 : 1;
}

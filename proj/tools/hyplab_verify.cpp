// Command-line front end for the verification campaigns.
//
//   hyplab-verify <campaign> [--config file.json] [--out dir] [--seed n]
//
// Exit status: 0 when every check passes, 1 when any check fails,
// 2 on usage or configuration errors.

#include "hyplab/verifier.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Verification campaigns for the hyperbolic-space laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;

  const std::vector<std::string> names = [] {
    auto v = hyplab::campaign_names();
    v.push_back("all");
    return v;
  }();
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " campaign");
    sub->add_option("--config", config_path, "JSON configuration (flat keys)");
    sub->add_option("--out", out_dir, "output directory for CSV and summary.json");
    sub->add_option("--seed", seed, "seed for randomized checks (default 42)")
        ->each([&](const std::string&) { seed_given = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string campaign = app.get_subcommands().front()->get_name();
  try {
    hyplab::CampaignConfig cfg;
    if (!config_path.empty()) cfg = hyplab::load_config(config_path);
    if (seed_given) cfg.seed = seed;
    const std::string dir = !out_dir.empty() ? out_dir : cfg.outdir.value_or("verify_out");

    const auto reports = hyplab::run_campaign(campaign, cfg);
    hyplab::write_outputs(reports, dir);

    bool all_pass = true;
    for (const auto& r : reports) {
      std::printf("%-16s %s  %zu checks, %d failed, %.2f s\n", r.campaign.c_str(),
                  r.pass() ? "PASS" : "FAIL", r.rows.size(), r.n_failed(), r.walltime_s);
      for (const std::string& note : r.notes) std::printf("  note: %s\n", note.c_str());
      all_pass = all_pass && r.pass();
    }
    return all_pass ? 0 : 1;
  } catch (const hyplab::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

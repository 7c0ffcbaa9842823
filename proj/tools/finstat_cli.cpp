#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "finstat/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "finstat: finite probability spaces, channels, and entropy laws"};
  app.require_subcommand(1);

  std::string file, kind, target, against, mode, left, right, out_name, suite;
  std::string base = "e";
  double tol = finstat::kEqTol;
  double check_tol = 1e-8;
  std::uint64_t trials = 1000;
  finstat::GenConfig cfg;
  bool full_support = false;
  bool no_sparse = false;
  int rc = 0;

  auto* validate = app.add_subcommand(
      "validate", "Check every object in a document, print a violation table");
  validate->add_option("file", file, "document to validate")->required();
  validate->add_option("--tol", tol, "tolerance for relational constraints")->capture_default_str();
  validate->callback(
      [&] { rc = finstat::cmd_validate(file, tol, std::cout, std::cerr); });

  auto* entropy = app.add_subcommand(
      "entropy", "Evaluate kl / re / ce / re2 on named document objects");
  entropy->add_option("file", file, "document to read")->required();
  entropy->add_option("kind", kind, "kl, re, ce or re2")
      ->required()
      ->check(CLI::IsMember({"kl", "re", "ce", "re2"}));
  entropy->add_option("target", target,
                      "dist (kl), morphism (re) or two_morphism (ce, re2)")
      ->required();
  entropy->add_option("--against", against, "second dist, kl only");
  entropy->add_option("--base", base, "logarithm base")->capture_default_str()
      ->check(CLI::IsMember({"e", "2"}));
  entropy->add_option("--tol", tol, "tolerance when building objects")->capture_default_str();
  entropy->callback([&] {
    rc = finstat::cmd_entropy(
        file, kind, target, against,
        base == "2" ? finstat::LogBase::two : finstat::LogBase::natural, tol,
        std::cout, std::cerr);
  });

  auto* compose = app.add_subcommand(
      "compose", "Compose two named objects; result = left after right");
  compose->add_option("file", file, "document to read")->required();
  compose->add_option("mode", mode, "channel, morphism, vertical, horizontal")
      ->required()
      ->check(CLI::IsMember({"channel", "morphism", "vertical", "horizontal"}));
  compose->add_option("left", left, "name applied second")->required();
  compose->add_option("right", right, "name applied first")->required();
  compose->add_option("out", out_name, "name for the composite")->required();
  compose->add_option("--tol", tol, "tolerance for glue checks")->capture_default_str();
  compose->callback([&] {
    rc = finstat::cmd_compose(file, mode, left, right, out_name, tol,
                              std::cout, std::cerr);
  });

  auto* check = app.add_subcommand(
      "check", "Run a property suite (or 'all'), print the canonical report");
  check->add_option("suite", suite, "suite name or 'all'")->required();
  check->add_option("--trials", trials, "trials per suite")->capture_default_str();
  check->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  check->add_option("--max-size", cfg.max_size, "largest space size")->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  check->add_option("--tol", check_tol, "violation tolerance")->capture_default_str();
  check->add_flag("--full-support", full_support,
                  "generate strictly positive entries only");
  check->add_flag("--no-sparse", no_sparse,
                  "plain simplex rows, no zeroed entries");
  check->callback([&] {
    cfg.full_support = full_support;
    cfg.dirichlet_like = no_sparse;
    rc = finstat::cmd_check(suite, trials, cfg, check_tol, std::cout,
                            std::cerr);
  });

  auto* generate = app.add_subcommand(
      "generate", "Emit a random document of the given kind");
  generate
      ->add_option("kind", kind,
                   "dist, channel, morphism, two_morphism, stacked_pair")
      ->required();
  generate->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  generate->add_option("--max-size", cfg.max_size, "largest space size")->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  generate->add_flag("--full-support", full_support,
                     "generate strictly positive entries only");
  generate->add_flag("--no-sparse", no_sparse,
                     "plain simplex rows, no zeroed entries");
  generate->callback([&] {
    cfg.full_support = full_support;
    cfg.dirichlet_like = no_sparse;
    rc = finstat::cmd_generate(kind, cfg, std::cout, std::cerr);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return rc;
}

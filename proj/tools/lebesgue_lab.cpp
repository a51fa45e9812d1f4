// lebesgue-lab: command-line front end for the L^p Dirichlet kernel bound,
// the level-set comparison and the discrete entropy power checks.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "lebesgue_lab/report.hpp"

namespace {

using lebesgue_lab::cli::Command;
using lebesgue_lab::cli::OutputFormat;
using lebesgue_lab::cli::RunConfig;

struct Spec {
  Command command;
  const char* name;
  const char* help;
  std::vector<std::pair<const char*, const char*>> options;  // value options
  std::vector<std::pair<const char*, const char*>> flags;    // boolean flags
};

const std::vector<Spec>& specs() {
  static const std::vector<Spec> s{
      {Command::lebesgue, "lebesgue", "L^p norms of the normalized Dirichlet kernel",
       {{"l", "kernel lengths, e.g. 6..64 or 6,8,10"}, {"p", "exponents, e.g. 2,2.5,4"}},
       {{"asymptotic", "attach the leading asymptotic term"}}},
      {Command::certify, "certify", "certify int |D_l|^p + error < sqrt(2/(p(l^2-1)))",
       {{"l", "kernel lengths (>= 6)"}, {"p", "exponents (>= 2)"}},
       {}},
      {Command::ball, "ball", "int_R |sin(pi x)/(pi x)|^p dx against sqrt(2/p)",
       {{"p", "exponents (> 1)"}},
       {}},
      {Command::asymptotic, "asymptotic", "ratio of the norm to its leading asymptotic term",
       {{"l", "kernel lengths"}, {"p", "exponents (>= 1)"}},
       {}},
      {Command::np_verify, "np-verify", "single sign change of F - G",
       {{"l", "kernel lengths"}},
       {{"phi", "also evaluate phi(p) on 2,3,4,6,8,12,16,24,32"}}},
      {Command::epi_check, "epi-check", "infinity-Renyi entropy power inequality",
       {{"random", "number of seeded random instances"},
        {"lmin", "smallest l-index drawn"},
        {"lmax", "largest l-index drawn"},
        {"nmin", "fewest summands"},
        {"nmax", "most summands"},
        {"corpus", "JSON corpus file"}},
       {{"handcrafted", "include the built-in corpus"}}},
      {Command::rogozin, "rogozin", "M(sum X_i) <= M(sum U_i)",
       {{"random", "number of seeded random instances"},
        {"lmin", "smallest l-index drawn"},
        {"lmax", "largest l-index drawn"},
        {"nmin", "fewest summands"},
        {"nmax", "most summands"},
        {"corpus", "JSON corpus file"}},
       {{"handcrafted", "include the built-in corpus"}}},
      {Command::sweep, "sweep", "norms, bounds and asymptotic ratios over an (l, p) grid",
       {{"l", "kernel lengths"}, {"p", "exponents (>= 1)"}},
       {}},
      {Command::suite, "suite", "run the full acceptance battery", {}, {}},
      {Command::plot, "plot", "g, f and level lines on [0, 1/2] as CSV",
       {{"l", "kernel length"}, {"resolution", "number of samples (>= 100)"}},
       {}},
  };
  return s;
}

struct Parsed {
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::string out = "-";
  std::string format;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 10'000;
  std::string tail = "tol_driven";
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lebesgue-lab: Dirichlet kernel L^p bounds and discrete entropy power checks"};
  app.require_subcommand(1);
  std::map<std::string, Parsed> parsed;
  std::map<std::string, CLI::App*> subs;
  for (const Spec& s : specs()) {
    Parsed& p = parsed[s.name];
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    subs[s.name] = sub;
    for (const auto& [key, help] : s.options) sub->add_option(std::string("--") + key, p.values[key], help);
    for (const auto& [key, help] : s.flags) sub->add_flag(std::string("--") + key, p.flags[key], help);
    sub->add_option("--out,-o", p.out, "output path, '-' for stdout")->capture_default_str();
    sub->add_option("--format", p.format, "json or csv (default: from the --out extension)")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", p.seed, "first seed")->capture_default_str();
    sub->add_option("--threads", p.threads, "worker threads (0: LEBESGUE_LAB_THREADS or hardware)")
        ->capture_default_str();
    sub->add_option("--abs-tol", p.abs_tol, "quadrature absolute tolerance")->capture_default_str();
    sub->add_option("--rel-tol", p.rel_tol, "quadrature relative tolerance")->capture_default_str();
    sub->add_option("--max-subdivisions", p.max_subdivisions, "subdivision cap per piece")
        ->capture_default_str();
    sub->add_option("--tail", p.tail, "tail cutoff policy for the Ball integral")
        ->check(CLI::IsMember({"tol_driven", "fixed"}))
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const Spec& s : specs()) {
    CLI::App* sub = subs.at(s.name);
    if (!sub->parsed()) continue;
    Parsed& p = parsed.at(s.name);
    RunConfig cfg;
    cfg.command = s.command;
    for (const auto& [key, help] : s.options) {
      if (sub->count(std::string("--") + key) > 0) cfg.parameters[key] = p.values[key];
    }
    for (const auto& [key, help] : s.flags) {
      if (sub->count(std::string("--") + key) > 0) cfg.parameters[key] = p.flags[key] ? "true" : "false";
    }
    cfg.output_path = p.out;
    if (!p.format.empty()) {
      cfg.format = p.format == "csv" ? OutputFormat::csv : OutputFormat::json;
    } else {
      const bool csv = p.out.size() > 4 && p.out.compare(p.out.size() - 4, 4, ".csv") == 0;
      cfg.format = csv || s.command == Command::plot ? OutputFormat::csv : OutputFormat::json;
    }
    cfg.seed = p.seed;
    cfg.threads = p.threads;
    cfg.quadrature.abs_tol = p.abs_tol;
    cfg.quadrature.rel_tol = p.rel_tol;
    cfg.quadrature.max_subdivisions = p.max_subdivisions;
    cfg.quadrature.tail_cutoff_policy = p.tail == "fixed" ? lebesgue_lab::TailCutoffPolicy::fixed
                                                          : lebesgue_lab::TailCutoffPolicy::tol_driven;
    return lebesgue_lab::cli::run(cfg);
  }
  return 2;
}

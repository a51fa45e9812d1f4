#pragma once

// Command orchestration behind the lebesgue-lab executable: resolved run
// configurations, range parsing, JSON/CSV report emission with atomic
// writes, and plot data for g and f.

#include <json.hpp>

#include <charconv>
#include <concepts>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "acceptance.hpp"
#include "epi.hpp"
#include "errors.hpp"
#include "kernel.hpp"
#include "np_comparator.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "serialization.hpp"

namespace lebesgue_lab::cli {

/// Bad flags or parameter values; maps to exit status 2.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command { lebesgue, certify, ball, asymptotic, np_verify, epi_check, rogozin, sweep, suite, plot };
enum class OutputFormat { json, csv };

NLOHMANN_JSON_SERIALIZE_ENUM(Command, {
    {Command::lebesgue, "lebesgue"},
    {Command::certify, "certify"},
    {Command::ball, "ball"},
    {Command::asymptotic, "asymptotic"},
    {Command::np_verify, "np-verify"},
    {Command::epi_check, "epi-check"},
    {Command::rogozin, "rogozin"},
    {Command::sweep, "sweep"},
    {Command::suite, "suite"},
    {Command::plot, "plot"},
})

NLOHMANN_JSON_SERIALIZE_ENUM(OutputFormat, {
    {OutputFormat::json, "json"},
    {OutputFormat::csv, "csv"},
})

inline Command parse_command(const std::string& name) {
  const Command c = json(name).get<Command>();
  if (json(c).get<std::string>() != name) throw usage_error("unknown command: " + name);
  return c;
}

struct RunConfig {
  Command command = Command::lebesgue;
  std::map<std::string, std::string> parameters;  // command specific, defaults resolved
  std::string output_path = "-";                  // "-" is stdout
  OutputFormat format = OutputFormat::json;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = auto (LEBESGUE_LAB_THREADS, then hardware)
  QuadratureConfig quadrature{};

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunConfig, command, parameters, output_path, format, seed,
                                   threads, quadrature)

// ---------------------------------------------------------------------------
// Parameter parsing

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

template <class T>
T parse_number(const std::string& s, const std::string& what) {
  T v{};
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw usage_error("invalid " + what + ": '" + s + "'");
  }
  return v;
}

}  // namespace detail

/// "a..b" (inclusive) and comma lists, mixable: "6..10,12,20..22".
inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& item : detail::split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(detail::parse_number<int>(item, "integer"));
      continue;
    }
    const int a = detail::parse_number<int>(item.substr(0, dots), "range start");
    const int b = detail::parse_number<int>(item.substr(dots + 2), "range end");
    if (b < a) throw usage_error("empty range: " + item);
    for (int v = a; v <= b; ++v) out.push_back(v);
  }
  if (out.empty()) throw usage_error("empty list");
  return out;
}

/// Comma list of reals; "a..b" expands to integer steps.
inline std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : detail::split(text, ',')) {
    if (item.find("..") != std::string::npos) {
      for (int v : parse_int_list(item)) out.push_back(v);
    } else {
      out.push_back(detail::parse_number<double>(item, "number"));
    }
  }
  if (out.empty()) throw usage_error("empty list");
  return out;
}

// ---------------------------------------------------------------------------
// Output

/// Shortest round-trip decimal form.
inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Writes to a temporary sibling and renames it over `path`.
inline void write_atomic(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content << std::flush;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

/// Records of one command: JSON form plus a flat CSV table.
struct CommandOutput {
  json records = json::array();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> metadata;  // emitted as leading '#' lines in CSV
  std::vector<std::string> failures;
};

namespace detail {

inline std::string cell(double v) { return format_number(v); }
inline std::string cell(bool v) { return v ? "true" : "false"; }
template <std::integral T>
  requires(!std::same_as<T, bool>)
std::string cell(T v) {
  return std::to_string(v);
}
inline std::string cell(const std::string& v) { return v; }
template <class T>
std::string cell(const std::optional<T>& v) {
  return v ? cell(*v) : std::string();
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline std::string render(const RunConfig& cfg, const CommandOutput& out) {
  if (cfg.format == OutputFormat::json) {
    json doc{{"config", cfg}, {"records", out.records}, {"failures", out.failures}};
    if (!out.metadata.empty()) doc["metadata"] = out.metadata;
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# config: " << json(cfg).dump() << '\n';
  for (const auto& m : out.metadata) os << "# " << m << '\n';
  for (const auto& f : out.failures) os << "# failure: " << f << '\n';
  for (std::size_t i = 0; i < out.header.size(); ++i) os << (i ? "," : "") << out.header[i];
  os << '\n';
  for (const auto& row : out.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_escape(row[i]);
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Plot data

/// Level lines drawn with g and f: y_1 ... y_M and y_last.
inline std::vector<std::pair<std::string, double>> plot_levels(const KernelSpec& spec) {
  const KernelLevelSets sets(spec);
  std::vector<std::pair<std::string, double>> out;
  const std::vector<double> peaks = sets.peak_levels();
  for (std::size_t m = 0; m < peaks.size(); ++m) out.emplace_back("y_" + std::to_string(m + 1), peaks[m]);
  out.emplace_back("y_last", sets.gaussian().y_last());
  return out;
}

/// Samples x, g(x), f(x) at `resolution` evenly spaced points of [0, 1/2].
inline CommandOutput plot_data(const KernelSpec& spec, int resolution) {
  if (resolution < 100) throw precondition_error("plot resolution must be >= 100");
  const TruncatedGaussian tg(spec);
  CommandOutput out;
  out.header = {"x", "g", "f"};
  json xs = json::array(), gs = json::array(), fs = json::array();
  for (int i = 0; i < resolution; ++i) {
    const double x = 0.5 * i / (resolution - 1);
    const double g = eval_g(spec, x);
    const double f = eval_f(tg, x);
    out.rows.push_back({format_number(x), format_number(g), format_number(f)});
    xs.push_back(x);
    gs.push_back(g);
    fs.push_back(f);
  }
  json levels = json::object();
  for (const auto& [name, y] : plot_levels(spec)) {
    out.metadata.push_back("level," + name + "," + format_number(y));
    levels[name] = y;
  }
  out.records.push_back(json{{"l", spec.length()}, {"x", xs}, {"g", gs}, {"f", fs}, {"levels", levels}});
  return out;
}

/// Writes plot data for `spec` to `path` as CSV; level lines become
/// "# level,<name>,<y>" rows ahead of the x,g,f table.
inline void emit_plot_data(const KernelSpec& spec, int resolution, const std::string& path) {
  RunConfig cfg;
  cfg.command = Command::plot;
  cfg.parameters = {{"l", std::to_string(spec.length())}, {"resolution", std::to_string(resolution)}};
  cfg.output_path = path;
  cfg.format = OutputFormat::csv;
  write_atomic(path, render(cfg, plot_data(spec, resolution)));
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline const std::map<Command, std::map<std::string, std::string>>& parameter_defaults() {
  static const std::map<Command, std::map<std::string, std::string>> d{
      {Command::lebesgue, {{"l", "6"}, {"p", "2"}, {"asymptotic", "false"}}},
      {Command::certify, {{"l", "6..64"}, {"p", "2,2.5,3,4,6,8,16,32"}}},
      {Command::ball, {{"p", "2,2.5,3,4,8,16"}}},
      {Command::asymptotic, {{"l", "50,100,200,400"}, {"p", "2,4"}}},
      {Command::np_verify, {{"l", "6..16"}, {"phi", "false"}}},
      {Command::epi_check, {{"random", "0"}, {"lmin", "6"}, {"lmax", "30"}, {"nmin", "2"},
                            {"nmax", "5"}, {"corpus", ""}, {"handcrafted", "false"}}},
      {Command::rogozin, {{"random", "0"}, {"lmin", "6"}, {"lmax", "30"}, {"nmin", "2"},
                          {"nmax", "5"}, {"corpus", ""}, {"handcrafted", "false"}}},
      {Command::sweep, {{"l", "6..16"}, {"p", "1,2,4,8"}}},
      {Command::suite, {}},
      {Command::plot, {{"l", "8"}, {"resolution", "2000"}}},
  };
  return d;
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw usage_error("invalid boolean: '" + s + "'");
}

template <class T, class Fn>
std::vector<std::pair<std::optional<T>, std::string>> guarded_map(std::size_t n, unsigned threads,
                                                                  Fn&& fn) {
  return parallel_map(n, threads, [&](std::size_t i) {
    std::pair<std::optional<T>, std::string> slot;
    try {
      slot.first = fn(i);
    } catch (const verification_failure& e) {
      slot.second = e.what();
    }
    return slot;
  });
}

struct Grid {
  std::vector<int> ls;
  std::vector<double> ps;
  struct Item {
    int l;
    double p;
  };
  std::vector<Item> items;
};

inline Grid grid(const RunConfig& cfg) {
  Grid g{parse_int_list(cfg.parameters.at("l")), parse_real_list(cfg.parameters.at("p")), {}};
  for (int l : g.ls) {
    for (double p : g.ps) g.items.push_back({l, p});
  }
  return g;
}

inline std::vector<EpiInstance> instances(const RunConfig& cfg) {
  const auto& prm = cfg.parameters;
  std::vector<EpiInstance> out;
  const int count = parse_number<int>(prm.at("random"), "--random");
  if (count < 0) throw usage_error("--random must be >= 0");
  if (count > 0) {
    const int lmin = parse_number<int>(prm.at("lmin"), "--lmin");
    const int lmax = parse_number<int>(prm.at("lmax"), "--lmax");
    const int nmin = parse_number<int>(prm.at("nmin"), "--nmin");
    const int nmax = parse_number<int>(prm.at("nmax"), "--nmax");
    const auto gen = parallel_map(static_cast<std::size_t>(count), resolve_threads(cfg.threads),
                                  [&](std::size_t i) {
                                    return random_instance(cfg.seed + i, {nmin, nmax}, {lmin, lmax});
                                  });
    out.insert(out.end(), gen.begin(), gen.end());
  }
  if (!prm.at("corpus").empty()) {
    std::ifstream is(prm.at("corpus"));
    if (!is) throw usage_error("cannot read corpus file " + prm.at("corpus"));
    json j;
    try {
      is >> j;
    } catch (const json::exception& e) {
      throw usage_error(std::string("corpus is not valid JSON: ") + e.what());
    }
    for (auto& inst : corpus_from_json(j)) out.push_back(std::move(inst));
  }
  if (parse_bool(prm.at("handcrafted"))) {
    for (auto& inst : handcrafted_corpus()) out.push_back(std::move(inst));
  }
  if (out.empty()) throw usage_error("no instances: give --random N, --corpus FILE or --handcrafted");
  return out;
}

inline std::string seed_cell(const std::optional<std::uint64_t>& s) { return cell(s); }

inline CommandOutput run_lebesgue(const RunConfig& cfg, unsigned threads) {
  const Grid g = grid(cfg);
  const bool with_asym = parse_bool(cfg.parameters.at("asymptotic"));
  const auto recs = parallel_map(g.items.size(), threads, [&](std::size_t i) {
    LpNormResult r = lp_norm(KernelSpec(g.items[i].l), g.items[i].p, cfg.quadrature);
    if (with_asym) attach_asymptotic(r, cfg.quadrature);
    return r;
  });
  CommandOutput out;
  out.header = {"l", "p", "value", "bound", "asymptotic", "abs_error_estimate", "converged"};
  for (const auto& r : recs) {
    out.records.push_back(r);
    out.rows.push_back({cell(r.l), cell(r.p), cell(r.value), cell(r.bound), cell(r.asymptotic),
                        cell(r.abs_error_estimate), cell(r.converged)});
    if (!r.converged) {
      out.failures.push_back("lebesgue l=" + cell(r.l) + " p=" + cell(r.p) + " did not converge");
    }
  }
  return out;
}

inline CommandOutput run_certify(const RunConfig& cfg, unsigned threads) {
  const Grid g = grid(cfg);
  const auto recs = parallel_map(g.items.size(), threads, [&](std::size_t i) {
    return evaluate_certification(KernelSpec(g.items[i].l), g.items[i].p, cfg.quadrature);
  });
  CommandOutput out;
  out.header = {"l", "p", "value", "bound", "margin", "error_estimate"};
  for (const auto& r : recs) {
    out.records.push_back(r);
    out.rows.push_back({cell(r.l), cell(r.p), cell(r.value), cell(r.bound), cell(r.margin),
                        cell(r.error_estimate)});
    if (!r.passed) out.failures.push_back(r.describe());
  }
  return out;
}

inline CommandOutput run_ball(const RunConfig& cfg, unsigned threads) {
  const std::vector<double> ps = parse_real_list(cfg.parameters.at("p"));
  const auto slots = guarded_map<BallIntegralResult>(ps.size(), threads, [&](std::size_t i) {
    return ball_integral(ps[i], cfg.quadrature);
  });
  CommandOutput out;
  out.header = {"p", "value", "abs_error_estimate", "cutoff", "bound", "below_bound", "converged"};
  for (const auto& [r, failure] : slots) {
    if (!r) {
      out.failures.push_back(failure);
      continue;
    }
    out.records.push_back(*r);
    out.rows.push_back({cell(r->p), cell(r->value), cell(r->abs_error_estimate), cell(r->cutoff),
                        cell(r->bound), cell(r->below_bound), cell(r->converged)});
  }
  return out;
}

inline CommandOutput run_asymptotic(const RunConfig& cfg, unsigned threads) {
  const Grid g = grid(cfg);
  const auto recs = parallel_map(g.items.size(), threads, [&](std::size_t i) {
    return asymptotic_comparison(KernelSpec(g.items[i].l), g.items[i].p, cfg.quadrature);
  });
  CommandOutput out;
  out.header = {"l", "p", "value", "value_error", "reference", "reference_error", "ratio",
                "ratio_error"};
  for (const auto& r : recs) {
    out.records.push_back(r);
    out.rows.push_back({cell(r.l), cell(r.p), cell(r.value), cell(r.value_error),
                        cell(r.reference), cell(r.reference_error), cell(r.ratio),
                        cell(r.ratio_error)});
  }
  return out;
}

inline CommandOutput run_np_verify(const RunConfig& cfg, unsigned threads) {
  const std::vector<int> ls = parse_int_list(cfg.parameters.at("l"));
  const bool with_phi = parse_bool(cfg.parameters.at("phi"));
  struct Row {
    SignChangeReport report;
    std::vector<PhiRecord> phis;
  };
  const auto slots = guarded_map<Row>(ls.size(), threads, [&](std::size_t i) {
    Row row{detect_sign_change(KernelSpec(ls[i])), {}};
    if (with_phi) {
      for (double p : acceptance::kPhiGrid) {
        row.phis.push_back(phi(KernelSpec(ls[i]), p, row.report.y0, cfg.quadrature));
      }
    }
    return row;
  });
  CommandOutput out;
  out.header = {"l", "y0", "crossings", "F0_lt_G0", "G_lt_F_above_y1", "F0", "y1", "y_last", "levels"};
  for (const auto& [row, failure] : slots) {
    if (!row) {
      out.failures.push_back(failure);
      continue;
    }
    const SignChangeReport& r = row->report;
    json j = r;
    if (with_phi) j["phi"] = row->phis;
    out.records.push_back(j);
    out.rows.push_back({cell(r.l), cell(r.y0), cell(r.crossings), cell(r.F0_lt_G0),
                        cell(r.G_lt_F_above_y1), cell(r.F0), cell(r.y1), cell(r.y_last),
                        cell(r.levels)});
    if (!r.ok()) out.failures.push_back("np-verify l=" + cell(r.l) + " is not ok (report only)");
  }
  return out;
}

inline CommandOutput run_epi_check(const RunConfig& cfg, unsigned threads) {
  const std::vector<EpiInstance> insts = instances(cfg);
  const auto slots = guarded_map<EpiReport>(insts.size(), threads, [&](std::size_t i) {
    return check_epi(insts[i], cfg.quadrature);
  });
  CommandOutput out;
  out.header = {"index", "seed", "l_min", "l_max", "split_case", "lhs", "sum_N", "rhs_general",
                "rhs_exact_M", "asserted", "holds"};
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& [r, failure] = slots[i];
    if (!r) {
      out.failures.push_back("instance " + std::to_string(i) + ": " + failure);
      continue;
    }
    out.records.push_back(*r);
    out.rows.push_back({cell(i), seed_cell(r->seed), cell(r->l_min), cell(r->l_max),
                        to_string(r->split_case), cell(r->lhs), cell(r->sum_N),
                        cell(r->rhs_general), cell(r->rhs_exact_M), cell(r->asserted),
                        cell(r->holds)});
  }
  return out;
}

inline CommandOutput run_rogozin(const RunConfig& cfg, unsigned threads) {
  const std::vector<EpiInstance> insts = instances(cfg);
  const auto slots = guarded_map<RogozinRecord>(insts.size(), threads, [&](std::size_t i) {
    return check_rogozin(insts[i]);
  });
  CommandOutput out;
  out.header = {"index", "seed", "max_sum", "max_uniform_sum", "gap", "holds"};
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& [r, failure] = slots[i];
    if (!r) {
      out.failures.push_back("instance " + std::to_string(i) + ": " + failure);
      continue;
    }
    json j = *r;
    j["seed"] = insts[i].seed;
    out.records.push_back(j);
    out.rows.push_back({cell(i), seed_cell(insts[i].seed), cell(r->max_sum),
                        cell(r->max_uniform_sum), cell(r->gap), cell(r->holds)});
  }
  return out;
}

/// One row per (l, p): the norm, the bound and margin where the bound
/// applies (l >= 6, p >= 2), and the ratio to the leading asymptotic term.
inline CommandOutput run_sweep(const RunConfig& cfg, unsigned threads) {
  const Grid g = grid(cfg);
  struct Row {
    AsymptoticRecord asym;
    std::optional<CertificationRecord> cert;
  };
  const auto rows = parallel_map(g.items.size(), threads, [&](std::size_t i) {
    const KernelSpec spec(g.items[i].l);
    Row row{asymptotic_comparison(spec, g.items[i].p, cfg.quadrature), std::nullopt};
    if (g.items[i].l >= 6 && g.items[i].p >= 2.0) {
      row.cert = evaluate_certification(spec, g.items[i].p, cfg.quadrature);
    }
    return row;
  });
  CommandOutput out;
  out.header = {"l", "p", "value", "value_error", "bound", "margin", "passed", "reference", "ratio"};
  for (const auto& row : rows) {
    const AsymptoticRecord& a = row.asym;
    out.records.push_back(json{{"asymptotic", a}, {"certification", row.cert}});
    std::optional<double> bound, margin;
    std::optional<bool> passed;
    if (row.cert) {
      bound = row.cert->bound;
      margin = row.cert->margin;
      passed = row.cert->passed;
      if (!row.cert->passed) out.failures.push_back(row.cert->describe());
    }
    out.rows.push_back({cell(a.l), cell(a.p), cell(a.value), cell(a.value_error), cell(bound),
                        cell(margin), cell(passed), cell(a.reference), cell(a.ratio)});
  }
  return out;
}

inline CommandOutput run_suite(const RunConfig& cfg, unsigned threads) {
  acceptance::Context ctx;
  ctx.threads = threads;
  ctx.cfg = cfg.quadrature;
  CommandOutput out;
  out.header = {"id", "name", "passed", "seconds", "detail"};
  acceptance::run_all(ctx, [&](const acceptance::CriterionResult& r) {
    std::cerr << r.line() << std::endl;
    out.records.push_back(json{{"id", r.id}, {"name", r.name}, {"passed", r.passed},
                               {"seconds", r.seconds}, {"detail", r.detail}});
    out.rows.push_back({cell(r.id), r.name, cell(r.passed), cell(r.seconds), r.detail});
    if (!r.passed) out.failures.push_back(r.line());
  });
  return out;
}

inline CommandOutput run_plot(const RunConfig& cfg) {
  const int l = parse_number<int>(cfg.parameters.at("l"), "--l");
  const int res = parse_number<int>(cfg.parameters.at("resolution"), "--resolution");
  return plot_data(KernelSpec(l), res);
}

}  // namespace detail

/// Fills in defaults for every parameter of the command and rejects unknown
/// keys. The thread count is resolved as well.
inline RunConfig resolve(RunConfig cfg) {
  const auto& defaults = detail::parameter_defaults().at(cfg.command);
  for (const auto& [key, value] : cfg.parameters) {
    if (!defaults.contains(key)) throw usage_error("unknown parameter '" + key + "'");
  }
  for (const auto& [key, value] : defaults) cfg.parameters.try_emplace(key, value);
  cfg.threads = resolve_threads(cfg.threads);
  try {
    cfg.quadrature.validate();
  } catch (const domain_error& e) {
    throw usage_error(e.what());
  }
  return cfg;
}

/// Runs the command. Throws usage_error/domain_error/precondition_error for
/// bad input; verification problems are collected in `failures`.
inline CommandOutput execute(const RunConfig& cfg) {
  const unsigned threads = resolve_threads(cfg.threads);
  switch (cfg.command) {
    case Command::lebesgue: return detail::run_lebesgue(cfg, threads);
    case Command::certify: return detail::run_certify(cfg, threads);
    case Command::ball: return detail::run_ball(cfg, threads);
    case Command::asymptotic: return detail::run_asymptotic(cfg, threads);
    case Command::np_verify: return detail::run_np_verify(cfg, threads);
    case Command::epi_check: return detail::run_epi_check(cfg, threads);
    case Command::rogozin: return detail::run_rogozin(cfg, threads);
    case Command::sweep: return detail::run_sweep(cfg, threads);
    case Command::suite: return detail::run_suite(cfg, threads);
    case Command::plot: return detail::run_plot(cfg);
  }
  throw usage_error("unknown command");
}

/// Exit status: 0 when every check passed, 1 on a verification failure
/// (failing records are listed on `err` and in the report), 2 on a usage,
/// configuration or I/O error.
inline int run(const RunConfig& requested, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CommandOutput out;
  try {
    cfg = resolve(requested);
    out = execute(cfg);
    write_atomic(cfg.output_path, render(cfg, out));
  } catch (const verification_failure& e) {
    err << "verification failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  for (const auto& f : out.failures) err << "FAILED: " << f << '\n';
  return out.failures.empty() ? 0 : 1;
}

}  // namespace lebesgue_lab::cli

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "weil/census.hpp"
#include "weil/lattice.hpp"

using namespace weil;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCap = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::vector<std::int64_t> q;
  std::string q_range;
  std::vector<int> g;
  std::string S;
  std::int64_t N = 0;
  std::string mode = "ordinary-only";
  std::string format;
  std::string out;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string cache_dir;
  bool quiet = false;

  // command-specific
  std::string kind = "lambda";
  std::int64_t F = 1;
  std::string shift;
  double c = -1;
  std::int64_t mc_samples = 0;
  bool envelope = false;
  bool records = false;
  std::string fault;
  std::int64_t q_class = -1;
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--q", cfg.q, "field size (prime power); repeatable or comma separated")->delimiter(',');
  cmd->add_option("--q-range", cfg.q_range, "inclusive range a:b of prime powers");
  cmd->add_option("--g", cfg.g, "dimension")->delimiter(',');
  cmd->add_option("--S", cfg.S, "prime set, e.g. 2,3,5");
  cmd->add_option("--N", cfg.N, "use S(N) = primes <= N");
  cmd->add_option("--mode", cfg.mode, "ordinary-only | with-candidates");
  cmd->add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", cfg.out, "output path (default stdout)");
  cmd->add_option("--seed", cfg.seed, "seed for Monte Carlo");
  cmd->add_option("--workers", cfg.workers, "worker threads (default: available parallelism)");
  cmd->add_option("--cache-dir", cfg.cache_dir, "enumeration cache directory (fallback: WEIL_CACHE_DIR)");
  cmd->add_flag("--quiet", cfg.quiet, "no progress on stderr");
}

void progress(const RunConfig& cfg, const std::string& msg) {
  if (!cfg.quiet) std::cerr << "weil-census: " << msg << std::endl;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

std::vector<std::int64_t> resolve_qs(const RunConfig& cfg) {
  std::vector<std::int64_t> qs = cfg.q;
  for (auto q : qs)
    if (!as_prime_power(q)) throw ConfigError("q = " + std::to_string(q) + " is not a prime power");
  if (!cfg.q_range.empty()) {
    const auto colon = cfg.q_range.find(':');
    if (colon == std::string::npos) throw ConfigError("--q-range expects a:b");
    const auto lo = parse_int(cfg.q_range.substr(0, colon));
    const auto hi = parse_int(cfg.q_range.substr(colon + 1));
    if (lo > hi) throw ConfigError("--q-range is empty");
    for (auto q : prime_powers_in(lo, hi)) qs.push_back(q);
  }
  if (qs.empty()) throw ConfigError("no q given (use --q or --q-range)");
  return qs;
}

int single_g(const RunConfig& cfg) {
  if (cfg.g.size() != 1) throw ConfigError("give exactly one --g");
  require_supported_dimension(cfg.g.front());
  return cfg.g.front();
}

PrimeSet resolve_S(const RunConfig& cfg, bool required = true) {
  if (!cfg.S.empty() && cfg.N) throw ConfigError("--S and --N are exclusive");
  PrimeSet S;
  try {
    if (cfg.N) S = prime_set_up_to(cfg.N);
    else if (!cfg.S.empty()) S = PrimeSet::parse(cfg.S);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (required && S.empty()) throw ConfigError("the prime set S is empty");
  return S;
}

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) out.push_back(parse_int(tok));
  return out;
}

std::string header(const RunConfig& cfg) {
  return "# weil-census " + cfg.command + " seed=" + std::to_string(cfg.seed) + "\n";
}

ordered_json envelope(const RunConfig& cfg) {
  ordered_json j;
  j["tool"] = "weil-census";
  j["command"] = cfg.command;
  j["seed"] = std::to_string(cfg.seed);
  j["results"] = ordered_json::array();
  return j;
}

std::filesystem::path cache_dir(const RunConfig& cfg) {
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  if (const char* env = std::getenv("WEIL_CACHE_DIR")) return env;
  return {};
}

std::string cmd_enumerate(const RunConfig& cfg) {
  const auto qs = resolve_qs(cfg);
  const int g = single_g(cfg);
  const auto mode = parse_mode(cfg.mode);
  const auto dir = cache_dir(cfg);
  std::ostringstream csv;
  csv << header(cfg);
  if (!cfg.records) csv << "q,g,mode,total,checksum,cache\n";
  auto json = envelope(cfg);
  for (auto q : qs) {
    require_within_cap(q, g);
    Census census;
    std::string cache = "none";
    std::filesystem::path path;
    if (!dir.empty()) {
      std::filesystem::create_directories(dir);
      path = dir / ("q" + std::to_string(q) + "-g" + std::to_string(g) + "-" + std::string(to_string(mode)) + ".wc");
      if (std::filesystem::exists(path)) {
        try {
          census = load(path);
          cache = "hit";
        } catch (const CacheCorrupt& e) {
          progress(cfg, "discarding damaged cache " + path.string() + ": " + e.what());
        }
      }
    }
    if (cache != "hit") {
      progress(cfg, "enumerating q=" + std::to_string(q) + " g=" + std::to_string(g));
      census.records = enumerate_records(q, g, mode, cfg.workers);
      if (!path.empty()) {
        census.manifest = persist(path, q, g, mode, census.records);
        cache = "miss";
      } else {
        census.manifest = build_manifest(q, g, mode, census.records);
      }
    }
    const auto& m = census.manifest;
    if (cfg.records) {
      csv << cache_header(q, g, mode);
      for (const auto& r : census.records) csv << cache_row(r);
    } else {
      csv << q << "," << g << "," << to_string(mode) << "," << m.total << "," << hex32(m.checksum) << "," << cache
          << "\n";
    }
    ordered_json e;
    e["q"] = std::to_string(q);
    e["g"] = std::to_string(g);
    e["mode"] = std::string(to_string(mode));
    e["total"] = std::to_string(m.total);
    e["checksum"] = hex32(m.checksum);
    e["cache"] = cache;
    json["results"].push_back(e);
  }
  return cfg.format == "json" ? json.dump(2) + "\n" : csv.str();
}

std::string cmd_classify(const RunConfig& cfg) {
  const auto qs = resolve_qs(cfg);
  const int g = single_g(cfg);
  const auto S = resolve_S(cfg);
  const auto mode = parse_mode(cfg.mode);
  std::ostringstream csv;
  csv << header(cfg)
      << "q,g,S,mode,n_total,n_nontrivial,n_noncyclic,fraction_cyclic,bound_lower,bound_upper\n";
  auto json = envelope(cfg);
  for (auto q : qs) {
    progress(cfg, "classifying q=" + std::to_string(q) + " g=" + std::to_string(g));
    const auto s = classify(q, g, S, mode, cfg.workers);
    csv << q << "," << g << ",\"" << S.to_string() << "\"," << to_string(mode) << "," << s.n_total << ","
        << s.n_nontrivial << "," << s.n_noncyclic << "," << (s.fraction_cyclic ? to_decimal(*s.fraction_cyclic, 6) : "")
        << "," << to_decimal(s.bound_lower, 6) << "," << to_decimal(s.bound_upper, 6) << "\n";
    json["results"].push_back(ordered_json::parse(s.to_json()));
  }
  return cfg.format == "csv" ? csv.str() : json.dump(2) + "\n";
}

std::string cmd_limits(const RunConfig& cfg) {
  const int g = single_g(cfg);
  const auto S = resolve_S(cfg);
  if (S.size() != 1) throw ConfigError("limits takes a single prime in --S");
  const auto ell = S.primes().front();
  std::vector<std::int64_t> ladder;
  for (auto q : resolve_qs(cfg)) {
    if (q % ell == 0) continue;
    if (cfg.q_class >= 0 && q % ell != cfg.q_class) continue;
    ladder.push_back(q);
  }
  if (ladder.empty()) throw ConfigError("no q left in the ladder");
  progress(cfg, "limits over " + std::to_string(ladder.size()) + " fields");
  const auto rows = limits_ladder(ell, g, ladder, parse_mode(cfg.mode), cfg.workers);
  if (cfg.format != "json") return header(cfg) + limits_csv(rows);
  auto json = envelope(cfg);
  for (const auto& r : rows) {
    ordered_json e;
    e["q"] = std::to_string(r.q);
    e["q_mod_ell"] = std::to_string(r.q_mod_ell);
    e["n_nontrivial"] = std::to_string(r.n_nontrivial);
    e["n_noncyclic"] = std::to_string(r.n_noncyclic);
    e["fraction"] = r.fraction ? ordered_json(to_decimal(*r.fraction, 6)) : ordered_json(nullptr);
    e["expected"] = to_decimal(r.expected, 6);
    json["results"].push_back(e);
  }
  return json.dump(2) + "\n";
}

std::string cmd_sigma_table(const RunConfig& cfg) {
  if (cfg.N < 2) throw ConfigError("sigma-table needs --N >= 2");
  const auto rows = bound_stabilization_table(cfg.N);
  if (cfg.format != "json") return header(cfg) + stabilization_csv(rows);
  auto json = envelope(cfg);
  for (const auto& r : rows) {
    ordered_json e;
    e["N"] = std::to_string(r.N);
    e["lower"] = to_decimal(r.lower, 6);
    e["upper"] = to_decimal(r.upper, 6);
    json["results"].push_back(e);
  }
  return json.dump(2) + "\n";
}

std::string cmd_residue_count(const RunConfig& cfg) {
  const auto qs = resolve_qs(cfg);
  const int g = single_g(cfg);
  const auto S = resolve_S(cfg);
  std::ostringstream csv;
  csv << header(cfg) << "q,g,S,quantity,measured,formula,lower,upper,match\n";
  auto json = envelope(cfg);
  for (auto q : qs) {
    progress(cfg, "residue scan q=" + std::to_string(q) + " g=" + std::to_string(g));
    const auto c = residue_census(q, g, S, cfg.workers);
    const std::string prefix = std::to_string(q) + "," + std::to_string(g) + ",\"" + S.to_string() + "\",";
    csv << prefix << "nontrivial," << c.n_nontrivial_residues << "," << to_string(c.nontrivial_formula) << ",,,"
        << (c.nontrivial_matches() ? "true" : "false") << "\n";
    csv << prefix << "noncyclic," << c.n_noncyclic_residues << "," << to_string(c.noncyclic_crt) << ","
        << to_decimal(c.noncyclic_lower, 3) << "," << to_decimal(c.noncyclic_upper, 3) << ","
        << (BigInt(c.n_noncyclic_residues) == c.noncyclic_crt ? "true" : "false") << "\n";
    for (const auto& l : c.locals)
      csv << prefix << "local-" << l.ell << "," << l.measured << "," << (l.formula ? std::to_string(*l.formula) : "")
          << ",,," << (l.formula ? (*l.formula == l.measured ? "true" : "false") : "") << "\n";
    json["results"].push_back(ordered_json::parse(c.to_json()));
  }
  return cfg.format == "csv" ? csv.str() : json.dump(2) + "\n";
}

std::string cmd_lattice_verify(const RunConfig& cfg) {
  const auto qs = resolve_qs(cfg);
  const int g = single_g(cfg);
  LatticeKind kind;
  try {
    kind = parse_kind(cfg.kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.F < 1) throw ConfigError("--F must be >= 1");
  const auto shift = cfg.shift.empty() ? std::vector<std::int64_t>(g, 0) : parse_list(cfg.shift);
  if (static_cast<int>(shift.size()) != g) throw ConfigError("--shift needs g entries");

  const auto volume = cfg.mc_samples > 0 ? volume_Vg(g, cfg.mc_samples, cfg.seed, cfg.workers)
                                         : reference_volume(g, cfg.seed, cfg.workers);
  progress(cfg, "lattice counts over " + std::to_string(qs.size()) + " fields");
  std::optional<double> c;
  if (cfg.c >= 0) c = cfg.c;
  const auto v = verify_prop_lattice(kind, qs, g, cfg.F, shift, volume.value, c, cfg.workers);

  std::ostringstream csv;
  csv << header(cfg) << "# volume=" << volume.value << " std_error=" << volume.std_error
      << " exact=" << (volume.exact ? "true" : "false") << " c_empirical=" << v.c_empirical << " q_range=" << v.q_min
      << ":" << v.q_max << "\n";
  auto json = envelope(cfg);
  json["volume"] = volume.value;
  json["volume_std_error"] = volume.std_error;
  json["c_empirical"] = v.c_empirical;

  if (cfg.envelope) {
    std::vector<std::int64_t> counts;
    csv << "q,ordinary_count,L,R,contained,pre_asymptotic,ratio\n";
    for (auto q : qs) {
      const auto n = ordinary_count(q, g, cfg.F, shift, cfg.workers);
      counts.push_back(n);
      const auto e = im_envelope(q, g, cfg.F, volume.value, v.c_empirical);
      csv << q << "," << n << "," << e.L << "," << e.R << "," << (e.contains(n) ? "true" : "false") << ","
          << (e.pre_asymptotic ? "true" : "false") << "," << e.ratio() << "\n";
      ordered_json row;
      row["q"] = std::to_string(q);
      row["ordinary_count"] = std::to_string(n);
      row["L"] = e.L;
      row["R"] = e.R;
      row["contained"] = e.contains(n);
      row["pre_asymptotic"] = e.pre_asymptotic;
      json["results"].push_back(row);
    }
    const auto q0 = measure_q0(qs, counts, g, cfg.F, volume.value, v.c_empirical);
    csv << "# q0=" << (q0 ? std::to_string(*q0) : "none") << "\n";
    json["q0"] = q0 ? ordered_json(std::to_string(*q0)) : ordered_json(nullptr);
  } else {
    csv << lattice_csv(v.reports);
    for (const auto& r : v.reports) {
      ordered_json row;
      row["q"] = std::to_string(r.q);
      row["kind"] = std::string(to_string(r.kind));
      row["count"] = std::to_string(r.count);
      row["prediction"] = r.prediction;
      row["residual"] = r.residual;
      row["c_empirical"] = r.c_empirical;
      row["pass"] = r.pass;
      json["results"].push_back(row);
    }
  }
  return cfg.format == "json" ? json.dump(2) + "\n" : csv.str();
}

int cmd_verify(const RunConfig& cfg, std::string& text) {
  auto qs = cfg.q.empty() && cfg.q_range.empty() ? std::vector<std::int64_t>{5, 7, 11} : resolve_qs(cfg);
  auto gs = cfg.g.empty() ? std::vector<int>{1, 2} : cfg.g;
  for (auto g : gs) require_supported_dimension(g);
  auto S = resolve_S(cfg, false);
  if (S.empty()) S = PrimeSet({2, 3, 5});
  progress(cfg, "verify over " + std::to_string(qs.size()) + " fields");
  std::vector<VerifyCheck> checks;
  try {
    checks = verify_suite(qs, gs, S, cfg.fault, cfg.workers);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::ostringstream csv;
  auto json = envelope(cfg);
  std::size_t failed = 0;
  csv << header(cfg) << "status,check,context,detail\n";
  for (const auto& c : checks) {
    failed += !c.pass;
    csv << (c.pass ? "PASS" : "FAIL") << "," << c.name << ",\"" << c.context << "\",\"" << c.detail << "\"\n";
    ordered_json e;
    e["check"] = c.name;
    e["context"] = c.context;
    e["pass"] = c.pass;
    e["detail"] = c.detail;
    json["results"].push_back(e);
  }
  csv << "# " << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  json["passed"] = checks.size() - failed;
  json["failed"] = failed;
  text = cfg.format == "json" ? json.dump(2) + "\n" : csv.str();
  return failed ? kExitFail : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Isogeny-class census of abelian varieties over finite fields"};
  app.require_subcommand(1);

  auto* enumerate = app.add_subcommand("enumerate", "enumerate isogeny classes and write the cache");
  auto* classify_cmd = app.add_subcommand("classify", "count S-cyclic classes");
  auto* limits = app.add_subcommand("limits", "single-prime cyclic fractions along a q ladder");
  auto* sigma_table = app.add_subcommand("sigma-table", "bounds for S(N) as N grows");
  auto* residue = app.add_subcommand("residue-count", "residue scans against their closed forms");
  auto* lattice = app.add_subcommand("lattice-verify", "lattice point counts against volume predictions");
  auto* verify = app.add_subcommand("verify", "cross-module checks");
  for (auto* cmd : {enumerate, classify_cmd, limits, sigma_table, residue, lattice, verify}) add_common(cmd, cfg);

  enumerate->add_flag("--records", cfg.records, "write every record instead of the manifest summary");
  limits->add_option("--class", cfg.q_class, "keep only q with q mod l equal to this");
  lattice->add_option("--kind", cfg.kind, "lambda | lambda-prime | lambda-double-prime");
  lattice->add_option("--F", cfg.F, "lattice spacing parameter F");
  lattice->add_option("--shift", cfg.shift, "shift vector m, comma separated");
  lattice->add_option("--c", cfg.c, "check against this constant instead of the empirical maximum");
  lattice->add_option("--mc-samples", cfg.mc_samples, "estimate the volume by Monte Carlo with this many samples");
  lattice->add_flag("--envelope", cfg.envelope, "report ordinary counts against the L/R envelope");
  verify->add_option("--inject-fault", cfg.fault, "perturb one reference value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  for (auto* cmd : app.get_subcommands()) cfg.command = cmd->get_name();
  if (cfg.workers <= 0) cfg.workers = std::max(1u, std::thread::hardware_concurrency());

  try {
    std::string text;
    int code = kExitOk;
    if (cfg.command == "enumerate") text = cmd_enumerate(cfg);
    else if (cfg.command == "classify") text = cmd_classify(cfg);
    else if (cfg.command == "limits") text = cmd_limits(cfg);
    else if (cfg.command == "sigma-table") text = cmd_sigma_table(cfg);
    else if (cfg.command == "residue-count") text = cmd_residue_count(cfg);
    else if (cfg.command == "lattice-verify") text = cmd_lattice_verify(cfg);
    else code = cmd_verify(cfg, text);

    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream os(cfg.out, std::ios::binary | std::ios::trunc);
      if (!os) throw ConfigError("cannot write " + cfg.out);
      os << text;
    }
    return code;
  } catch (const CapExceeded& e) {
    std::cerr << "weil-census: " << e.what() << "\n";
    return kExitCap;
  } catch (const ConfigError& e) {
    std::cerr << "weil-census: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedDimension& e) {
    std::cerr << "weil-census: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "weil-census: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "weil-census: " << e.what() << "\n";
    return kExitFail;
  }
}

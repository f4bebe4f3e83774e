#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "esf/esf.hpp"
#include "esf/verifier.hpp"

namespace {

constexpr int kExitBadArgs = 2;
constexpr int kExitUncertifiable = 3;
constexpr int kExitIo = 4;

struct Range {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

bool parse_range(const std::string& s, Range& out) {
  const auto pos = s.find("..");
  if (pos == std::string::npos) return false;
  try {
    out.lo = std::stoull(s.substr(0, pos));
    out.hi = std::stoull(s.substr(pos + 2));
  } catch (const std::exception&) {
    return false;
  }
  return out.lo <= out.hi;
}

int run_eval(std::uint64_t n, std::uint64_t k, std::uint64_t exact_cap) {
  if (n < 1 || k < 1 || k > n || n > exact_cap) {
    std::cerr << "eval: requires 1 <= k <= n <= " << exact_cap << "\n";
    return kExitBadArgs;
  }
  std::cout << esf::esf_single(esf::OddProgression::odd_reciprocals(n), k).str() << "\n";
  return 0;
}

int run_certify(std::uint64_t n, std::uint64_t k, const esf::VerifierConfig& cfg) {
  if (n < 2 || k < 1 || k > n) {
    std::cerr << "certify: requires n > 1 and 1 <= k <= n\n";
    return kExitBadArgs;
  }
  esf::Verifier verifier(cfg);
  try {
    const esf::Certificate c = verifier.certify(n, k);
    std::cout << esf::certificate_to_json(c) << "\n";
    std::string reason;
    if (!verifier.check_certificate(c, &reason)) {
      std::cerr << "certify: issued certificate failed recheck: " << reason << "\n";
      return 1;
    }
    return 0;
  } catch (const esf::UncertifiableError& e) {
    std::cerr << "certify: " << e.what() << "\n";
    return kExitUncertifiable;
  }
}

int run_sweep(const std::string& kind, std::uint64_t n_max, const Range& k_range,
              const Range& n_range, const std::string& output, const std::string& format,
              esf::VerifierConfig cfg) {
  namespace fs = std::filesystem;
  std::string ext = format == "json" ? "json" : format == "csv" ? "csv" : "txt";
  const fs::path out_path = output.empty() ? fs::path("esf_sweep_" + kind + "." + ext)
                                           : fs::path(output);
  if (cfg.sieve_cache.empty()) {
    fs::path dir = out_path.parent_path();
    cfg.sieve_cache = dir.empty() ? fs::path("esf_sieve.cache") : dir / "esf_sieve.cache";
  }
  esf::Verifier verifier(cfg);

  esf::SweepReport report;
  try {
    if (kind == "exact") {
      report = verifier.sweep_exact(n_max);
    } else if (kind == "window") {
      report = verifier.sweep_window(k_range.lo, k_range.hi, n_range.lo, n_range.hi);
    } else {
      report = verifier.verify_theorem(n_max);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::length_error& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return kExitBadArgs;
  }

  std::string body;
  if (format == "json")
    body = report.to_json();
  else if (format == "csv")
    body = report.to_csv();
  else
    body = report.to_text();
  std::ofstream out(out_path, std::ios::trunc);
  if (!out || !(out << body)) {
    std::cerr << "sweep: cannot write report to " << out_path << "\n";
    return kExitIo;
  }
  out.close();

  std::cout << "pairs=" << report.pairs << " failures=" << report.failures.size() << "\n";
  return report.success() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact evaluation and non-integrality certification of the elementary "
               "symmetric functions of 1, 1/3, ..., 1/(2n-1)"};
  app.require_subcommand(1);

  std::uint64_t n = 0, k = 0, n_max = 0;
  std::uint64_t sieve_limit = 30000;
  std::uint64_t exact_cap = 1000;
  unsigned threads = 0;
  std::string k_range_str, n_range_str, output, sieve_cache;
  std::string format = "json";
  std::string sweep_kind;

  auto* eval_cmd = app.add_subcommand("eval", "Print exact S_k(n) as num/den");
  eval_cmd->add_option("n", n)->required();
  eval_cmd->add_option("k", k)->required();
  eval_cmd->add_option("--exact-cap", exact_cap, "Largest n evaluated exactly (ceiling 5000)");

  auto* certify_cmd = app.add_subcommand("certify", "Emit a non-integrality certificate as JSON");
  certify_cmd->add_option("n", n)->required();
  certify_cmd->add_option("k", k)->required();
  certify_cmd->add_option("--sieve-limit", sieve_limit);
  certify_cmd->add_option("--exact-cap", exact_cap);
  certify_cmd->add_option("--sieve-cache", sieve_cache);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a verification sweep and write a report");
  sweep_cmd->add_option("kind", sweep_kind)->required()
      ->check(CLI::IsMember({"exact", "window", "theorem"}));
  sweep_cmd->add_option("--n-max", n_max, "Upper n for exact/theorem sweeps");
  sweep_cmd->add_option("--k", k_range_str, "k range a..b (window sweep)");
  sweep_cmd->add_option("--n", n_range_str, "n range a..b (window sweep)");
  sweep_cmd->add_option("--output", output, "Report path (default esf_sweep_<kind>.<ext>)");
  sweep_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv", "text"}));
  sweep_cmd->add_option("--sieve-limit", sieve_limit);
  sweep_cmd->add_option("--exact-cap", exact_cap);
  sweep_cmd->add_option("--sieve-cache", sieve_cache);
  sweep_cmd->add_option("--threads", threads, "Worker cap (default: machine parallelism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitBadArgs;
  }

  esf::VerifierConfig cfg;
  cfg.sieve_limit = sieve_limit;
  cfg.exact_cap = exact_cap;
  cfg.threads = threads;
  if (!sieve_cache.empty()) cfg.sieve_cache = sieve_cache;
  if (cfg.exact_cap > 5000) {
    std::cerr << "exact-cap ceiling is 5000\n";
    return kExitBadArgs;
  }

  try {
    if (eval_cmd->parsed()) return run_eval(n, k, exact_cap);
    if (certify_cmd->parsed()) return run_certify(n, k, cfg);
    if (sweep_cmd->parsed()) {
      Range kr, nr;
      if (sweep_kind == "window") {
        if (!parse_range(k_range_str, kr) || !parse_range(n_range_str, nr)) {
          std::cerr << "sweep window: --k and --n must be ranges a..b\n";
          return kExitBadArgs;
        }
      } else if (n_max == 0) {
        std::cerr << "sweep " << sweep_kind << ": --n-max is required\n";
        return kExitBadArgs;
      }
      return run_sweep(sweep_kind, n_max, kr, nr, output, format, cfg);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return kExitBadArgs;
}

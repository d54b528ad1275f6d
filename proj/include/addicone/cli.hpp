#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "addicone/numlab.hpp"
#include "addicone/report.hpp"
#include "addicone/verify.hpp"

namespace addicone {

namespace detail {

inline bool parse_class_pair(const std::string& s, int& a, int& b) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return false;
  try {
    std::size_t used = 0;
    a = std::stoi(s.substr(0, comma), &used);
    if (used != comma) return false;
    const std::string rest = s.substr(comma + 1);
    b = std::stoi(rest, &used);
    if (used != rest.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return a >= 0 && a <= 3 && b >= 0 && b <= 3;
}

/// Parses "(a1,b1;a2,b2;...)" as printed by DecouplingCode::str().
inline bool parse_code(std::string s, DecouplingCode& code) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
  s = s.substr(1, s.size() - 2);
  code.slots.clear();
  std::stringstream ss(s);
  std::string slot;
  while (std::getline(ss, slot, ';')) {
    int a = 0, b = 0;
    if (!parse_class_pair(slot, a, b)) return false;
    code.slots.emplace_back(a, b);
  }
  return !code.slots.empty() && code.consistent();
}

inline json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  json j;
  is >> j;
  return j;
}

/// Infers the auxiliary count from an alpha vector's length (3 + 4(2^n - 1)).
inline int alpha_arity(std::size_t dim) {
  for (int n = 0; n <= 12; ++n)
    if (AlphaSpace(n).dim() == dim) return n;
  return -1;
}

}  // namespace detail

/// Entry point shared by the binary and the tests. Args exclude the program
/// name. Exit codes: 0 success, 1 verification failure, 2 invalid target or
/// usage, 3 ray certification failure.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"additivity cone toolkit"};
  app.require_subcommand(1);

  std::string target, format = "json", out_dir, class_arg;
  int aux = 1;
  std::uint64_t seed = 0;
  CLI::App* report = app.add_subcommand("report", "emit a table artifact");
  report->add_option("target", target,
                     "zero-var | one-var:ALL | one-var:a,b | multi-var:n,(a1,b1;...) | "
                     "decouplings | esv-tables")
      ->required();
  report->add_option("--format", format, "json | markdown | csv")->capture_default_str();
  report->add_option("--out", out_dir, "output directory");
  report->add_option("--aux", aux, "auxiliary count for decouplings")->capture_default_str();
  report->add_option("--class", class_arg, "one-slot class as a,b");
  report->add_option("--seed", seed, "recorded in the manifest");

  std::string suite, channel_file, alpha_file, verify_out;
  int samples = 50;
  std::uint64_t verify_seed = 0;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "witnesses | certificates | numeric | coincidence | all")
      ->required();
  verify->add_option("--samples", samples, "sample count per direction")->capture_default_str();
  verify->add_option("--seed", verify_seed, "sampling seed")->capture_default_str();
  verify->add_option("--out", verify_out, "write the summary and manifest here");
  verify->add_option("--channel", channel_file, "channel JSON for extra numeric checks");
  verify->add_option("--alpha", alpha_file, "alpha JSON (rational coefficient list)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (report->parsed()) {
    RunManifest manifest;
    manifest.command = "report " + target;
    manifest.target = target;
    manifest.format = format;
    manifest.out_dir = out_dir;
    manifest.seed = seed;
    manifest.aux = aux;
    manifest.class_arg = class_arg;

    if (format != "json" && format != "markdown" && format != "csv") {
      err << "error: unknown format '" << format << "'\n";
      return 2;
    }

    Report rep;
    try {
      if (target == "zero-var") {
        rep = report_zero_var();
      } else if (target == "one-var" || target == "one-var:ALL" ||
                 target.rfind("one-var:", 0) == 0) {
        std::string cls = class_arg;
        if (target.rfind("one-var:", 0) == 0 && target != "one-var:ALL") {
          const std::string inline_cls = target.substr(8);
          if (!cls.empty() && cls != inline_cls) {
            err << "error: conflicting class selections\n";
            return 2;
          }
          cls = inline_cls;
        }
        if (cls.empty()) {
          rep = report_one_var_all();
        } else {
          int a = 0, b = 0;
          if (!detail::parse_class_pair(cls, a, b)) {
            err << "error: bad class '" << cls << "'\n";
            return 2;
          }
          rep = report_one_var({one_var_code(a, b)});
        }
      } else if (target.rfind("multi-var:", 0) == 0) {
        const std::string spec = target.substr(10);
        const auto comma = spec.find(',');
        DecouplingCode code;
        int n = -1;
        try {
          n = comma == std::string::npos ? -1 : std::stoi(spec.substr(0, comma));
        } catch (const std::exception&) {
          n = -1;
        }
        if (n < 1 || n > 6 || !detail::parse_code(spec.substr(comma + 1), code) ||
            code.n_aux() != n) {
          err << "error: bad multi-var target '" << target << "'\n";
          return 2;
        }
        rep = report_multi_var(code);
      } else if (target == "decouplings") {
        if (aux < 0 || aux > 4) {
          err << "error: --aux out of range\n";
          return 2;
        }
        rep = report_decouplings(aux);
      } else if (target == "esv-tables") {
        rep = report_esv_tables();
      } else {
        err << "error: unknown target '" << target << "'\n";
        return 2;
      }
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }

    const std::vector<std::string> written = write_report(rep, manifest, format);
    for (const auto& p : written) out << p << "\n";
    if (!rep.certified) {
      err << "error: ray certification failed for target '" << target << "'\n";
      return 3;
    }
    return 0;
  }

  // verify
  RunManifest manifest;
  manifest.command = "verify " + suite;
  manifest.target = suite;
  manifest.out_dir = verify_out;
  manifest.samples = samples;
  manifest.seed = verify_seed;
  manifest.channel_file = channel_file;
  manifest.alpha_file = alpha_file;

  std::vector<VerifySummary> summaries;
  try {
    if (suite == "witnesses") {
      summaries.push_back(verify_witnesses());
    } else if (suite == "certificates") {
      summaries.push_back(verify_certificates());
    } else if (suite == "numeric") {
      summaries.push_back(verify_numeric(samples, verify_seed));
    } else if (suite == "coincidence") {
      summaries.push_back(verify_coincidence());
    } else if (suite == "all") {
      summaries = verify_all(samples, verify_seed);
    } else {
      err << "error: unknown suite '" << suite << "'\n";
      return 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (!channel_file.empty()) {
    if (suite != "numeric" && suite != "all") {
      err << "error: --channel only applies to the numeric suite\n";
      return 2;
    }
    VerifySummary extra;
    extra.suite = "inputs";
    try {
      manifest.input_hashes.emplace_back(channel_file, hash_file(channel_file));
      const IsometryChannel ch = channel_from_json(detail::read_json_file(channel_file));
      CheckResult valid{"channel-valid:" + channel_file};
      if (!ch.valid(1e-10)) {
        valid.passed = false;
        valid.detail = "isometry columns are not orthonormal (tolerance 1e-10)";
      }
      extra.checks.push_back(std::move(valid));

      RatVec alpha{Rational(1), Rational(-1), Rational(0)};  // default: H(B) - H(E)
      if (!alpha_file.empty()) {
        manifest.input_hashes.emplace_back(alpha_file, hash_file(alpha_file));
        alpha = ratvec_from_json(detail::read_json_file(alpha_file));
      }
      const int n_aux = detail::alpha_arity(alpha.size());
      CheckResult argmax{"argmax-reproduces:" + channel_file};
      if (n_aux < 0) {
        argmax.passed = false;
        argmax.detail = "alpha length is not 3 + 4(2^n - 1)";
      } else {
        OptimizerConfig cfg;
        cfg.seed = verify_seed + 1;
        const MaximizeResult r =
            maximize_formula(alpha, ch, std::vector<int>(static_cast<std::size_t>(n_aux), 0), cfg);
        const LinearEntropyFunctional f = alpha_to_formula(AlphaSpace(n_aux), alpha);
        const double replay = f.evaluate(entropy_vector_as(r.output, formula_context(n_aux)));
        if (std::fabs(replay - r.value) > 1e-9) {
          argmax.passed = false;
          argmax.detail = "re-evaluated argmax does not reproduce the value (tolerance 1e-9)";
          argmax.counterexample = {{"value", r.value}, {"replayed", replay}};
        }
      }
      extra.checks.push_back(std::move(argmax));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
    summaries.push_back(std::move(extra));
  } else if (!alpha_file.empty()) {
    err << "error: --alpha requires --channel\n";
    return 2;
  }

  bool all_passed = true;
  json jsum;
  jsum["version"] = kVersion;
  jsum["command"] = manifest.command;
  jsum["samples"] = samples;
  jsum["seed"] = verify_seed;
  jsum["suites"] = json::array();
  for (const auto& s : summaries) {
    if (!s.passed()) all_passed = false;
    jsum["suites"].push_back(s.to_json());
  }
  jsum["passed"] = all_passed;
  if (!all_passed) {
    for (const auto& s : summaries)
      if (const CheckResult* f = s.first_failure()) {
        json jf;
        jf["suite"] = s.suite;
        jf["check"] = f->name;
        if (!f->detail.empty()) jf["detail"] = f->detail;
        if (!f->counterexample.is_null()) jf["counterexample"] = f->counterexample;
        jsum["first_failure"] = std::move(jf);
        break;
      }
  }
  out << jsum.dump(2) << "\n";

  if (!verify_out.empty()) {
    std::filesystem::create_directories(verify_out);
    const std::filesystem::path base = std::filesystem::path(verify_out) / ("verify-" + suite);
    write_atomic(base.string() + ".json", jsum.dump(2) + "\n");
    json mj = manifest.to_json();
    mj["outputs"] = {base.string() + ".json"};
    write_atomic(base.string() + ".manifest.json", mj.dump(2) + "\n");
  }
  return all_passed ? 0 : 1;
}

}  // namespace addicone

//
// Copyright 2026 The Puffercal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "cli.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "puffercal/calibrate.hpp"
#include "puffercal/errors.hpp"
#include "puffercal/ingest.hpp"
#include "puffercal/mechanism.hpp"
#include "puffercal/serde.hpp"
#include "puffercal/transport.hpp"
#include "puffercal/verify.hpp"
#include "puffercal/version.hpp"

namespace puffercal::cli {

namespace {

using nlohmann::json;

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Option values holding JSON are either inline text or a path to a file.
bool looks_inline(const std::string& s) {
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{' || c == '[';
  }
  return false;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read file: " + path);
  return buf.str();
}

std::string json_arg(const std::string& value) {
  return looks_inline(value) ? value : slurp(value);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw IoError("cannot write file: " + path);
}

struct GlobalOpts {
  std::uint64_t seed = 0;
  double tol = 1e-10;
  bool quiet = false;
};

// Every command carries a manifest with the fully resolved inputs, so the
// run can be replayed byte for byte.
json make_manifest(const std::string& subcommand,
                   const std::vector<std::string>& argv,
                   const GlobalOpts& opts, json inputs) {
  inputs["seed"] = opts.seed;
  inputs["tol"] = opts.tol;
  return json{{"tool", "puffercal"},
              {"version", kVersion},
              {"subcommand", subcommand},
              {"argv", argv},
              {"inputs", std::move(inputs)}};
}

// JSON results go to stdout with the manifest embedded, or to --out with the
// manifest in <out>.manifest.json next to it.
void emit_json(json artifact, const json& manifest, const std::string& out_path,
               std::ostream& out) {
  if (out_path.empty()) {
    artifact["manifest"] = manifest;
    out << artifact.dump(2) << "\n";
  } else {
    write_file(out_path, artifact.dump(2) + "\n");
    write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
  }
}

void emit_text(const std::string& artifact, const json& manifest,
               const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << artifact;
  } else {
    write_file(out_path, artifact);
    write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
  }
}

std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::vector<std::string>& specs, const char* what) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& spec : specs) {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const std::size_t comma = spec.find(',', start);
      const std::string item =
          spec.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start);
      if (!item.empty()) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw ValidationError(std::string(what) +
                                " must be col=val[,col=val...]: " + item);
        }
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

// Shared inputs for calibrate and sweep.
struct CalibrateArgs {
  std::string method;
  std::string pairs;
  std::vector<std::string> dists;
  std::string config;
  std::string background;
  std::string user;
  double p = -1.0;
  double q = -1.0;
  std::string out_path;
};

void add_calibrate_inputs(CLI::App& cmd, CalibrateArgs& args) {
  cmd.add_option("--method", args.method, "calibration method")->required();
  cmd.add_option("--pairs", args.pairs, "secret pairs (JSON inline or file)");
  cmd.add_option("--dist", args.dists,
                 "distribution (JSON inline or file, repeatable)");
  cmd.add_option("--config", args.config, "system config (JSON inline or file)");
  cmd.add_option("--background", args.background,
                 "background distribution (JSON inline or file)");
  cmd.add_option("--user", args.user, "user whose background to form");
  cmd.add_option("--p", args.p, "first Bernoulli parameter");
  cmd.add_option("--q", args.q, "second Bernoulli parameter");
  cmd.add_option("--out", args.out_path, "output file (stdout when absent)");
}

json inputs_json(const CalibrateArgs& args, double epsilon) {
  json j{{"method", args.method}, {"epsilon", epsilon}};
  if (!args.pairs.empty()) j["pairs"] = json_arg(args.pairs);
  if (!args.dists.empty()) {
    json d = json::array();
    for (const std::string& s : args.dists) d.push_back(json_arg(s));
    j["dists"] = d;
  }
  if (!args.config.empty()) j["config"] = json_arg(args.config);
  if (!args.background.empty()) j["background"] = json_arg(args.background);
  if (!args.user.empty()) j["user"] = args.user;
  if (args.p >= 0.0) j["p"] = args.p;
  if (args.q >= 0.0) j["q"] = args.q;
  return j;
}

std::vector<DiscreteDistribution> resolve_dists(const CalibrateArgs& args) {
  std::vector<DiscreteDistribution> dists;
  if (!args.dists.empty()) {
    for (const std::string& s : args.dists) {
      dists.push_back(serde::distribution_from_json(json_arg(s)));
    }
    return dists;
  }
  if (!args.pairs.empty()) {
    for (const SecretPair& pair :
         serde::secret_pairs_from_json(json_arg(args.pairs))) {
      if (const auto* da = std::get_if<DistAbsent>(&pair)) {
        dists.push_back(da->dist);
      } else {
        throw ValidationError(
            "this method takes distributions; give --dist or (P, absent) pairs");
      }
    }
    return dists;
  }
  throw ValidationError("this method needs --dist or --pairs");
}

DiscreteDistribution resolve_background(const CalibrateArgs& args) {
  if (!args.background.empty()) {
    return serde::distribution_from_json(json_arg(args.background));
  }
  if (!args.config.empty() && !args.user.empty()) {
    return background_sum(serde::config_from_json(json_arg(args.config)),
                          args.user);
  }
  throw ValidationError(
      "relaxed method needs --background or --config with --user");
}

CalibrationResult run_method(const CalibrateArgs& args, double epsilon,
                             double tol) {
  const auto method = method_from_name(args.method);
  if (!method.has_value()) {
    throw ValidationError("unknown method: " + args.method);
  }
  const PrivacyBudget eps(epsilon);
  switch (*method) {
    case CalibrationMethod::kSab: {
      std::vector<ValuePair> pairs;
      if (args.pairs.empty()) throw ValidationError("sab needs --pairs");
      for (const SecretPair& pair :
           serde::secret_pairs_from_json(json_arg(args.pairs))) {
        if (const auto* vp = std::get_if<ValuePair>(&pair)) {
          pairs.push_back(*vp);
        } else {
          throw ValidationError("sab pairs must carry {a, b}");
        }
      }
      return calibrate_sab(pairs, eps);
    }
    case CalibrationMethod::kSaPerp: {
      std::vector<ValueAbsent> pairs;
      if (args.pairs.empty()) throw ValidationError("saperp needs --pairs");
      for (const SecretPair& pair :
           serde::secret_pairs_from_json(json_arg(args.pairs))) {
        if (const auto* va = std::get_if<ValueAbsent>(&pair)) {
          pairs.push_back(*va);
        } else {
          throw ValidationError("saperp pairs must carry {a}");
        }
      }
      return calibrate_saperp(pairs, eps);
    }
    case CalibrationMethod::kSpPerpMax:
      return calibrate_spperp_max(resolve_dists(args), eps);
    case CalibrationMethod::kSpPerpMgf:
      return calibrate_spperp_mgf(resolve_dists(args), eps, tol);
    case CalibrationMethod::kSpPerpBernoulli:
      if (args.p < 0.0) throw ValidationError("spperp-bernoulli needs --p");
      return calibrate_spperp_bernoulli(args.p, eps);
    case CalibrationMethod::kSpqDelta: {
      std::vector<DistPair> pairs;
      if (args.pairs.empty()) throw ValidationError("spq-delta needs --pairs");
      for (const SecretPair& pair :
           serde::secret_pairs_from_json(json_arg(args.pairs))) {
        if (const auto* dp = std::get_if<DistPair>(&pair)) {
          pairs.push_back(*dp);
        } else {
          throw ValidationError("spq-delta pairs must carry {P, Q}");
        }
      }
      return calibrate_spq(pairs, eps);
    }
    case CalibrationMethod::kSpqBernoulli:
      return calibrate_spq_bernoulli(eps);
    case CalibrationMethod::kSpqBernoulliRelaxed: {
      if (args.p < 0.0 || args.q < 0.0) {
        throw ValidationError("spq-bernoulli-relaxed needs --p and --q");
      }
      const BinaryRelaxContext ctx(args.p, args.q, resolve_background(args));
      return calibrate_spq_bernoulli_relaxed(ctx, eps);
    }
    case CalibrationMethod::kKantorovichGeneric: {
      if (args.config.empty() || args.pairs.empty()) {
        throw ValidationError("generic needs --config and --pairs");
      }
      const SystemConfig config =
          serde::config_from_json(json_arg(args.config));
      return calibrate_generic(
          config, serde::secret_pairs_from_json(json_arg(args.pairs)), eps);
    }
  }
  throw ValidationError("unknown method: " + args.method);
}

int run_parsed(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  GlobalOpts global;
  CLI::App app{"Laplace-scale calibration for pufferfish privacy on summation queries"};
  app.name("puffercal");
  app.require_subcommand(1);
  app.add_option("--seed", global.seed, "seed for every random draw");
  app.add_option("--tol", global.tol, "root-finder tolerance on theta");
  app.add_flag("--quiet", global.quiet, "suppress progress notes");

  CalibrateArgs cal;
  double cal_epsilon = 0.0;
  CLI::App* calibrate_cmd =
      app.add_subcommand("calibrate", "compute the minimal Laplace scale");
  add_calibrate_inputs(*calibrate_cmd, cal);
  calibrate_cmd->add_option("--epsilon", cal_epsilon, "privacy budget")
      ->required();

  CalibrateArgs sweep;
  double eps_min = 0.0, eps_max = 0.0;
  unsigned steps = 0;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "calibrate over an epsilon grid, CSV out");
  add_calibrate_inputs(*sweep_cmd, sweep);
  sweep_cmd->add_option("--epsilon-min", eps_min, "smallest budget")->required();
  sweep_cmd->add_option("--epsilon-max", eps_max, "largest budget")->required();
  sweep_cmd->add_option("--steps", steps, "grid size")->required();

  std::string plan_p, plan_q, plan_out;
  CLI::App* plan_cmd =
      app.add_subcommand("plan", "Kantorovich optimal transport plan, CSV out");
  plan_cmd->add_option("--p", plan_p, "first distribution")->required();
  plan_cmd->add_option("--q", plan_q, "second distribution")->required();
  plan_cmd->add_option("--out", plan_out, "output file (stdout when absent)");

  std::string ver_config, ver_pair, ver_out;
  double ver_theta = 0.0, ver_epsilon = 0.0;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "check the pufferfish ratio bound exactly");
  verify_cmd->add_option("--config", ver_config, "system config")->required();
  verify_cmd->add_option("--pair", ver_pair, "secret pair")->required();
  verify_cmd->add_option("--theta", ver_theta, "Laplace scale")->required();
  verify_cmd->add_option("--epsilon", ver_epsilon, "privacy budget")->required();
  verify_cmd->add_option("--out", ver_out, "output file (stdout when absent)");

  std::string ing_csv, ing_target, ing_codes, ing_out, ing_codes_out;
  std::vector<std::string> ing_filters;
  CLI::App* ingest_cmd = app.add_subcommand(
      "ingest", "empirical conditional distribution from CSV data");
  ingest_cmd->add_option("--csv", ing_csv, "input CSV path")->required();
  ingest_cmd->add_option("--target", ing_target, "target column")->required();
  ingest_cmd->add_option("--filter", ing_filters, "col=val[,col=val...]");
  ingest_cmd->add_option("--codes", ing_codes, "codes file (JSON)");
  ingest_cmd->add_option("--out", ing_out, "output distribution file")
      ->required();
  ingest_cmd->add_option("--codes-out", ing_codes_out,
                         "write the resulting codec here");

  std::string smp_config, smp_values, smp_out;
  double smp_theta = 0.0;
  unsigned smp_count = 1;
  CLI::App* sample_cmd =
      app.add_subcommand("sample", "draw Laplace noise or noisy query answers");
  sample_cmd->add_option("--theta", smp_theta, "Laplace scale")->required();
  sample_cmd->add_option("--count", smp_count, "number of draws");
  sample_cmd->add_option("--config", smp_config, "system config");
  sample_cmd->add_option("--values", smp_values, "realized values id=v[,id=v...]");
  sample_cmd->add_option("--out", smp_out, "output file (stdout when absent)");

  try {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("puffercal");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", {{"kind", "invalid-input"}, {"message", e.what()}}}}
               .dump()
        << "\n";
    return 2;
  }

  if (app.got_subcommand(calibrate_cmd)) {
    const CalibrationResult result = run_method(cal, cal_epsilon, global.tol);
    emit_json(json::parse(serde::to_json(result, cal_epsilon)),
              make_manifest("calibrate", args, global, inputs_json(cal, cal_epsilon)),
              cal.out_path, out);
    return 0;
  }

  if (app.got_subcommand(sweep_cmd)) {
    if (steps == 0) throw ValidationError("--steps must be >= 1");
    if (!(eps_min > 0.0) || eps_max < eps_min) {
      throw ValidationError("need 0 < epsilon-min <= epsilon-max");
    }
    std::ostringstream csv;
    csv << "epsilon,theta\n";
    for (unsigned i = 0; i < steps; ++i) {
      const double epsilon =
          steps == 1 ? eps_min
                     : eps_min + (eps_max - eps_min) *
                                     static_cast<double>(i) /
                                     static_cast<double>(steps - 1);
      csv << format_double(epsilon) << ","
          << format_double(run_method(sweep, epsilon, global.tol).theta) << "\n";
    }
    json inputs = inputs_json(sweep, eps_min);
    inputs.erase("epsilon");
    inputs["epsilon_min"] = eps_min;
    inputs["epsilon_max"] = eps_max;
    inputs["steps"] = steps;
    emit_text(csv.str(), make_manifest("sweep", args, global, inputs),
              sweep.out_path, out);
    return 0;
  }

  if (app.got_subcommand(plan_cmd)) {
    const TransportPlan plan =
        kantorovich_plan(serde::distribution_from_json(json_arg(plan_p)),
                         serde::distribution_from_json(json_arg(plan_q)));
    std::ostringstream csv;
    csv << "x,x_prime,mass\n";
    for (const PlanEntry& e : plan.entries()) {
      csv << format_double(e.x) << "," << format_double(e.x_prime) << ","
          << format_double(e.mass) << "\n";
    }
    const json inputs{{"p", json_arg(plan_p)}, {"q", json_arg(plan_q)}};
    emit_text(csv.str(), make_manifest("plan", args, global, inputs), plan_out,
              out);
    return 0;
  }

  if (app.got_subcommand(verify_cmd)) {
    const SystemConfig config = serde::config_from_json(json_arg(ver_config));
    const SecretPair pair = serde::secret_pair_from_json(json_arg(ver_pair));
    const VerificationReport report =
        verify_pair(config, pair, ver_theta, PrivacyBudget(ver_epsilon));
    const json inputs{{"config", json_arg(ver_config)},
                      {"pair", json_arg(ver_pair)},
                      {"theta", ver_theta},
                      {"epsilon", ver_epsilon}};
    emit_json(json::parse(serde::to_json(report)),
              make_manifest("verify", args, global, inputs), ver_out, out);
    return report.satisfied ? 0 : 1;
  }

  if (app.got_subcommand(ingest_cmd)) {
    CategoryCodec codec =
        ing_codes.empty()
            ? CategoryCodec(ing_target)
            : serde::codec_from_json(json_arg(ing_codes));
    const ConditionalQuery query(ing_target,
                                 parse_key_values(ing_filters, "--filter"));
    const ExtractResult extracted = extract_conditional(ing_csv, query, codec);
    json inputs{{"csv", ing_csv},
                {"target", ing_target},
                {"filters", ing_filters}};
    if (!ing_codes.empty()) inputs["codes"] = json_arg(ing_codes);
    const json manifest = make_manifest("ingest", args, global, inputs);
    write_file(ing_out, serde::to_json(extracted.distribution, 2) + "\n");
    write_file(ing_out + ".manifest.json", manifest.dump(2) + "\n");
    if (!ing_codes_out.empty()) {
      write_file(ing_codes_out, serde::to_json(codec, 2) + "\n");
    }
    const json summary{{"out", ing_out},
                       {"rows_read", extracted.stats.rows_read},
                       {"rows_matched", extracted.stats.rows_matched},
                       {"rows_dropped_missing",
                        extracted.stats.rows_dropped_missing}};
    if (!global.quiet) out << summary.dump(2) << "\n";
    return 0;
  }

  if (app.got_subcommand(sample_cmd)) {
    const LaplaceNoise noise(smp_theta);
    double base = 0.0;
    if (!smp_values.empty()) {
      if (smp_config.empty()) {
        throw ValidationError("--values needs --config");
      }
      const SystemConfig config = serde::config_from_json(json_arg(smp_config));
      for (const auto& [id, text] : parse_key_values({smp_values}, "--values")) {
        double value = 0.0;
        try {
          value = std::stod(text);
        } catch (const std::exception&) {
          throw ValidationError("--values entry is not numeric: " + text);
        }
        if (!config.user(id).distribution.contains(value)) {
          throw ValidationError("realized value " + text +
                                " is outside the support of user " + id);
        }
        base += value;
      }
    }
    LaplaceSampler sampler(noise, global.seed);
    json samples = json::array();
    for (unsigned i = 0; i < smp_count; ++i) samples.push_back(base + sampler.next());
    json artifact{{"theta", smp_theta},
                  {"seed", global.seed},
                  {"samples", std::move(samples)}};
    json inputs{{"theta", smp_theta}, {"count", smp_count}};
    if (!smp_config.empty()) inputs["config"] = json_arg(smp_config);
    if (!smp_values.empty()) inputs["values"] = smp_values;
    emit_json(std::move(artifact), make_manifest("sample", args, global, inputs),
              smp_out, out);
    return 0;
  }

  return 2;  // unreachable: require_subcommand(1)
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    return run_parsed(args, out, err);
  } catch (const IoError& e) {
    err << json{{"error", {{"kind", "io"}, {"message", e.what()}}}}.dump()
        << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << json{{"error", {{"kind", "invalid-input"}, {"message", e.what()}}}}
               .dump()
        << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump()
        << "\n";
    return 2;
  }
}

}  // namespace puffercal::cli

// Command-line front end. Talks to the core exclusively through the C API in
// supercal.h: flags are folded into a JSON config and dispatched.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "supercal.h"

namespace {

int exit_code_for(sc_status status) {
  if (status == SC_OK) return 0;
  if (status == SC_ERR_BAD_CONFIG || status == SC_ERR_INVALID_ARGUMENT) return 2;
  return 3;
}

int run(const std::string& command, const std::string& config_json) {
  char* report = nullptr;
  const sc_status status = sc_run_command(command.c_str(), config_json.c_str(), &report);
  if (status != SC_OK) {
    std::cerr << sc_status_name(status) << ": " << sc_last_error_message() << "\n";
    return exit_code_for(status);
  }
  std::cout << report << "\n";
  sc_string_free(report);
  return 0;
}

std::string json_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

struct FamilyFlags {
  std::string family;
  int n = 0;
  double p = 0.0;
  double q = 0.0;
  double c = 0.0;
  bool has_q = false;
  bool has_c = false;
  bool zero_extend = false;

  void add_to(CLI::App* cmd, bool required = true) {
    auto* fam = cmd->add_option("--family", family, "family tag: sbb, dbb, ips, power");
    if (required) fam->required();
    cmd->add_option("--n", n, "spatial dimension")->required();
    cmd->add_option("--p", p, "diffusion exponent")->required();
    cmd->add_option("--q", q, "power-supersolution exponent")->each([this](const std::string&) {
      has_q = true;
    });
    cmd->add_option("--c", c, "family constant")->each([this](const std::string&) {
      has_c = true;
    });
    cmd->add_flag("--zero-extend", zero_extend, "extend by zero to t <= 0");
  }

  std::string to_json() const {
    std::ostringstream out;
    out << "{\"family\":" << quote(family) << ",\"n\":" << n << ",\"p\":" << json_number(p);
    if (has_q) out << ",\"q\":" << json_number(q);
    if (has_c) out << ",\"c\":" << json_number(c);
    out << ",\"zero_extend\":" << (zero_extend ? "true" : "false") << "}";
    return out.str();
  }
};

std::string read_file(const std::string& path, bool& ok) {
  std::ifstream in(path);
  if (!in.good()) {
    ok = false;
    return {};
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ok = true;
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the fast-diffusion parabolic p-Laplace equation"};
  app.require_subcommand(1);

  // exponents --n INT --p FLOAT
  int exp_n = 0;
  double exp_p = 0.0;
  auto* exponents = app.add_subcommand("exponents", "critical exponent table");
  exponents->add_option("--n", exp_n)->required();
  exponents->add_option("--p", exp_p)->required();

  // moser --n --p --s0 FLOAT [--cap INT]
  int moser_n = 0, moser_cap = 64;
  double moser_p = 0.0, moser_s0 = 0.0;
  auto* moser = app.add_subcommand("moser", "Moser iteration exponent ladder");
  moser->add_option("--n", moser_n)->required();
  moser->add_option("--p", moser_p)->required();
  moser->add_option("--s0", moser_s0)->required();
  moser->add_option("--cap", moser_cap);

  // eval --family ... --points FILE [--out FILE]
  FamilyFlags eval_family;
  std::string eval_points, eval_out;
  auto* eval = app.add_subcommand("eval", "evaluate a closed-form family on points");
  eval_family.add_to(eval);
  eval->add_option("--points", eval_points, "CSV of radius,t rows")->required();
  eval->add_option("--out", eval_out, "output CSV path");

  // config-driven commands
  std::string solve_cfg, obstacle_cfg, scan_cfg, harnack_cfg;
  app.add_subcommand("solve", "evolution solver")->add_option("--config", solve_cfg)->required();
  app.add_subcommand("obstacle", "obstacle problem")
      ->add_option("--config", obstacle_cfg)
      ->required();
  app.add_subcommand("scan", "integrability scans")->add_option("--config", scan_cfg)->required();
  app.add_subcommand("harnack", "Harnack probes")->add_option("--config", harnack_cfg)->required();

  // classify --family ... | --field FILE --sidecar FILE
  FamilyFlags cls_family;
  std::string cls_field, cls_sidecar, cls_config;
  auto* classify = app.add_subcommand("classify", "Barenblatt/monster dichotomy verdict");
  cls_family.add_to(classify, /*required=*/false);
  classify->add_option("--field", cls_field, "GridField CSV path");
  classify->add_option("--sidecar", cls_sidecar, "GridField JSON sidecar path");
  classify->add_option("--config", cls_config, "full JSON config (overrides flags)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (exponents->parsed())
    return run("exponents",
               "{\"n\":" + std::to_string(exp_n) + ",\"p\":" + json_number(exp_p) + "}");

  if (moser->parsed())
    return run("moser", "{\"n\":" + std::to_string(moser_n) + ",\"p\":" + json_number(moser_p) +
                            ",\"s0\":" + json_number(moser_s0) +
                            ",\"cap\":" + std::to_string(moser_cap) + "}");

  if (eval->parsed()) {
    std::string cfg = eval_family.to_json();
    cfg.pop_back();  // reopen the object
    cfg += ",\"points_file\":" + quote(eval_points);
    if (!eval_out.empty()) cfg += ",\"output\":" + quote(eval_out);
    cfg += "}";
    return run("eval", cfg);
  }

  for (const auto& [name, path] : {std::pair<std::string, std::string>{"solve", solve_cfg},
                                   {"obstacle", obstacle_cfg},
                                   {"scan", scan_cfg},
                                   {"harnack", harnack_cfg}}) {
    if (!app.get_subcommand(name)->parsed()) continue;
    bool ok = false;
    const std::string cfg = read_file(path, ok);
    if (!ok) {
      std::cerr << "cannot read config file " << path << "\n";
      return 2;
    }
    return run(name, cfg);
  }

  if (classify->parsed()) {
    if (!cls_config.empty()) {
      bool ok = false;
      const std::string cfg = read_file(cls_config, ok);
      if (!ok) {
        std::cerr << "cannot read config file " << cls_config << "\n";
        return 2;
      }
      return run("classify", cfg);
    }
    std::string source;
    if (!cls_field.empty()) {
      if (cls_sidecar.empty()) {
        std::cerr << "--field needs --sidecar\n";
        return 2;
      }
      source = "{\"kind\":\"field\",\"csv\":" + quote(cls_field) +
               ",\"sidecar\":" + quote(cls_sidecar) + "}";
    } else if (!cls_family.family.empty()) {
      source = "{\"kind\":\"family\",\"family\":" + cls_family.to_json() + "}";
    } else {
      std::cerr << "classify needs --family, --field, or --config\n";
      return 2;
    }
    return run("classify", "{\"medium\":{\"n\":" + std::to_string(cls_family.n) +
                               ",\"p\":" + json_number(cls_family.p) + "},\"source\":" + source +
                               "}");
  }

  return 2;
}

// Command-line front end over the pwsim C API.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "pwsim/pwsim.h"

namespace {

enum Exit { kOk = 0, kIo = 1, kConfig = 2, kNumeric = 3 };

int exit_code(pwsim_status s) {
  switch (s) {
    case PWSIM_OK: return kOk;
    case PWSIM_ERR_IO: return kIo;
    case PWSIM_ERR_INVALID_ARGUMENT:
    case PWSIM_ERR_CONFIG:
    case PWSIM_ERR_UNSTABLE: return kConfig;
    default: return kNumeric;
  }
}

int report(pwsim_status s) {
  std::fprintf(stderr, "pwsim: %s: %s\n", pwsim_status_name(s), pwsim_last_error());
  return exit_code(s);
}

struct Options {
  std::string config_path;
  std::string output_path;
  std::string format;
  std::string mode;
  std::string rho_output;
  bool quiet = false;
};

using Driver = pwsim_status (*)(const pwsim_config*, pwsim_result**);

int execute(const Options& opt, Driver driver, bool single) {
  pwsim_config* config = nullptr;
  pwsim_status s = opt.config_path.empty() ? pwsim_config_parse("{}", &config)
                                           : pwsim_config_load(opt.config_path.c_str(), &config);
  if (s != PWSIM_OK) return report(s);

  if (s == PWSIM_OK && !opt.mode.empty()) s = pwsim_config_set_mode(config, opt.mode.c_str());
  if (s == PWSIM_OK && !opt.format.empty()) s = pwsim_config_set_format(config, opt.format.c_str());
  if (s == PWSIM_OK && !opt.output_path.empty()) {
    s = pwsim_config_set_output_path(config, opt.output_path.c_str());
  }
  if (s != PWSIM_OK) {
    pwsim_config_free(config);
    return report(s);
  }

  pwsim_result* result = nullptr;
  s = driver(config, &result);
  if (s != PWSIM_OK) {
    pwsim_config_free(config);
    return report(s);
  }

  const char* format = pwsim_config_format(config);
  const char* path = pwsim_config_output_path(config);
  if (path) {
    s = pwsim_result_write(result, path, format);
  } else {
    char* text = nullptr;
    s = pwsim_result_format(result, format, &text);
    if (s == PWSIM_OK) {
      std::fputs(text, stdout);
      pwsim_string_free(text);
    }
  }

  if (s == PWSIM_OK && single && !opt.rho_output.empty()) {
    char* text = nullptr;
    s = pwsim_result_tomography_json(result, 0, &text);
    if (s == PWSIM_OK) {
      std::FILE* f = std::fopen(opt.rho_output.c_str(), "wb");
      if (!f) {
        std::fprintf(stderr, "pwsim: cannot open %s for writing\n", opt.rho_output.c_str());
        pwsim_string_free(text);
        pwsim_result_free(result);
        pwsim_config_free(config);
        return kIo;
      }
      std::fputs(text, f);
      std::fclose(f);
      pwsim_string_free(text);
    }
  }

  if (s == PWSIM_OK && !opt.quiet) {
    const size_t rows = pwsim_result_rows(result);
    size_t blank = 0;
    size_t off_form = 0;
    for (size_t i = 0; i < rows; ++i) {
      double x = 0.0;
      if (pwsim_result_value(result, i, "x", &x) != PWSIM_OK) ++blank;
      int w_form = 1;
      if (pwsim_result_w_form(result, i, &w_form) == PWSIM_OK && !w_form) ++off_form;
    }
    std::fprintf(stderr, "pwsim: %zu row(s), %zu outside the stability region\n", rows, blank);
    if (off_form > 0) {
      std::fprintf(stderr,
                   "pwsim: warning: %zu row(s) deviate from the W-mixture form beyond the "
                   "residual threshold\n",
                   off_form);
    }
  }

  const int code = s == PWSIM_OK ? kOk : report(s);
  pwsim_result_free(result);
  pwsim_config_free(config);
  return code;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--output", opt.output_path, "output file (default: stdout)");
  cmd->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--mode", opt.mode, "analytic or numeric")
      ->check(CLI::IsMember({"analytic", "numeric"}));
  cmd->add_flag("--quiet", opt.quiet, "suppress the summary on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polariton W-state entanglement simulator"};
  app.set_version_flag("--version", pwsim_version());
  app.require_subcommand(1);

  Options opt;
  CLI::App* run = app.add_subcommand("run", "evaluate a single parameter point");
  add_common(run, opt);
  run->add_option("--rho-output", opt.rho_output, "write the reconstructed density matrix as JSON");
  CLI::App* fig2 = app.add_subcommand("sweep-fig2", "X over the (delta, n_b) grid");
  add_common(fig2, opt);
  CLI::App* fig3 = app.add_subcommand("sweep-fig3", "pulsed X over the (intensity, temperature) grid");
  add_common(fig3, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (run->parsed()) return execute(opt, pwsim_run, true);
  if (fig2->parsed()) return execute(opt, pwsim_sweep_fig2, false);
  return execute(opt, pwsim_sweep_fig3, false);
}

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "pwsim/pwsim.h"

TEST_CASE("c api: analytic run") {
  pwsim_config* cfg = nullptr;
  REQUIRE(pwsim_config_parse(R"({"physics": {"delta": 0.4, "n_b": 0.5}})", &cfg) == PWSIM_OK);
  pwsim_result* res = nullptr;
  REQUIRE(pwsim_run(cfg, &res) == PWSIM_OK);
  CHECK(pwsim_result_rows(res) == 1);
  double x = 0.0;
  CHECK(pwsim_result_value(res, 0, "x", &x) == PWSIM_OK);
  CHECK(x == doctest::Approx(728.0 / 1097.0).epsilon(1e-14));
  CHECK(pwsim_result_value(res, 0, "nope", &x) == PWSIM_ERR_CONFIG);
  CHECK(pwsim_result_value(res, 3, "x", &x) == PWSIM_ERR_CONFIG);
  int w_form = 0;
  CHECK(pwsim_result_w_form(res, 0, &w_form) == PWSIM_OK);
  CHECK(w_form == 1);
  double re[16], im[16];
  REQUIRE(pwsim_result_rho(res, 0, re, im) == PWSIM_OK);
  CHECK(re[1] == doctest::Approx(0.25 * 728.0 / 1097.0).epsilon(1e-14));
  pwsim_result_free(res);
  pwsim_config_free(cfg);
}

TEST_CASE("c api: numeric run exposes rho") {
  pwsim_config* cfg = nullptr;
  REQUIRE(pwsim_config_parse(R"({"physics": {"delta": 0.4, "n_b": 0.0}})", &cfg) == PWSIM_OK);
  REQUIRE(pwsim_config_set_mode(cfg, "numeric") == PWSIM_OK);
  pwsim_result* res = nullptr;
  REQUIRE(pwsim_run(cfg, &res) == PWSIM_OK);
  double re[16], im[16];
  REQUIRE(pwsim_result_rho(res, 0, re, im) == PWSIM_OK);
  for (int k = 0; k < 16; ++k) {
    CHECK(re[k] == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(std::abs(im[k]) < 1e-10);
  }
  int w_form = 0;
  CHECK(pwsim_result_w_form(res, 0, &w_form) == PWSIM_OK);
  CHECK(w_form == 1);
  char* text = nullptr;
  REQUIRE(pwsim_result_tomography_json(res, 0, &text) == PWSIM_OK);
  CHECK(std::strstr(text, "\"rho_re\"") != nullptr);
  pwsim_string_free(text);
  pwsim_result_free(res);
  pwsim_config_free(cfg);
}

TEST_CASE("c api: error codes and messages") {
  pwsim_config* cfg = nullptr;
  CHECK(pwsim_config_parse(R"({"bogus": 1})", &cfg) == PWSIM_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::strstr(pwsim_last_error(), "bogus") != nullptr);
  CHECK(pwsim_config_parse(nullptr, &cfg) == PWSIM_ERR_INVALID_ARGUMENT);
  CHECK(pwsim_config_load("/nonexistent.json", &cfg) == PWSIM_ERR_CONFIG);

  REQUIRE(pwsim_config_parse(R"({"physics": {"delta": 0.5}})", &cfg) == PWSIM_OK);
  pwsim_result* res = nullptr;
  CHECK(pwsim_run(cfg, &res) == PWSIM_ERR_UNSTABLE);
  CHECK(res == nullptr);
  CHECK(pwsim_config_set_mode(cfg, "slow") == PWSIM_ERR_CONFIG);
  CHECK(pwsim_config_set_format(cfg, "xml") == PWSIM_ERR_CONFIG);
  pwsim_config_free(cfg);

  CHECK(std::string(pwsim_status_name(PWSIM_ERR_NUMERIC)) == "numeric failure");
  CHECK(pwsim_result_rows(nullptr) == 0);
}

TEST_CASE("c api: sweep formatting and file output") {
  pwsim_config* cfg = nullptr;
  REQUIRE(pwsim_config_parse(R"({"sweep": {"axes": [
      {"name": "delta", "start": 0.1, "stop": 0.5, "count": 3},
      {"name": "n_b", "start": 0, "stop": 1, "count": 2}]}})",
                             &cfg) == PWSIM_OK);
  CHECK(pwsim_config_output_path(cfg) == nullptr);
  CHECK(std::string(pwsim_config_format(cfg)) == "csv");
  pwsim_result* res = nullptr;
  REQUIRE(pwsim_sweep_fig2(cfg, &res) == PWSIM_OK);
  CHECK(pwsim_result_rows(res) == 6);
  double x = 0.0;
  CHECK(pwsim_result_value(res, 5, "x", &x) == PWSIM_ERR_UNDEFINED);
  double margin = 1.0;
  CHECK(pwsim_result_value(res, 5, "stability_margin", &margin) == PWSIM_OK);
  CHECK(margin <= 0.0);

  REQUIRE(pwsim_result_column_count() == 11);
  CHECK(std::string(pwsim_result_column_name(0)) == "delta");
  CHECK(pwsim_result_column_name(11) == nullptr);

  char* csv = nullptr;
  REQUIRE(pwsim_result_format(res, "csv", &csv) == PWSIM_OK);
  CHECK(std::strncmp(csv, "delta,n_b,intensity", 19) == 0);

  const auto path = std::filesystem::temp_directory_path() / "pwsim_capi.csv";
  REQUIRE(pwsim_result_write(res, path.string().c_str(), "csv") == PWSIM_OK);
  std::FILE* f = std::fopen(path.string().c_str(), "rb");
  REQUIRE(f);
  std::string disk;
  char buf[4096];
  for (size_t n; (n = std::fread(buf, 1, sizeof buf, f)) > 0;) disk.append(buf, n);
  std::fclose(f);
  CHECK(disk == csv);
  std::filesystem::remove(path);
  CHECK(pwsim_result_write(res, "/nonexistent-dir/x.csv", "csv") == PWSIM_ERR_IO);

  pwsim_string_free(csv);
  pwsim_result_free(res);
  pwsim_config_free(cfg);
}

TEST_CASE("c api: closed-form helpers") {
  pwsim_steady_moments m;
  REQUIRE(pwsim_steady_moments_eval(1.0, 1.0, 0.4, 0.0, &m) == PWSIM_OK);
  CHECK(m.n_ii == doctest::Approx(8.0 / 9.0));
  CHECK(m.n_is_im == doctest::Approx(5.0 / 9.0));
  double x = 0.0;
  CHECK(pwsim_entanglement_x(&m, &x) == PWSIM_OK);
  CHECK(x == doctest::Approx(1.0));
  CHECK(pwsim_steady_moments_eval(1.0, 1.0, 0.5, 0.0, &m) == PWSIM_ERR_UNSTABLE);

  pwsim_steady_moments zero{0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(pwsim_entanglement_x(&zero, &x) == PWSIM_ERR_UNDEFINED);

  double margin = 0.0;
  int stable = 0;
  CHECK(pwsim_stability_margin(1.0, 1.0, 0.4, &margin, &stable) == PWSIM_OK);
  CHECK(stable == 1);
  CHECK(margin == doctest::Approx(0.36));
}

#include "palab/palab.h"

#include <doctest.h>

#include <cmath>
#include <string>

namespace {

double h2(double p) { return p <= 0 || p >= 1 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

struct Config {
  palab_config* p = nullptr;
  Config() { REQUIRE(palab_config_new(&p) == PALAB_OK); }
  ~Config() { palab_config_free(p); }
};

struct State {
  palab_state* p = nullptr;
  ~State() { palab_state_free(p); }
};

}  // namespace

TEST_CASE("version and help") {
  CHECK(std::string(palab_version()).size() > 0);
  CHECK(std::string(palab_experiment_help()).find("distill-sweep") != std::string::npos);
}

TEST_CASE("config and run") {
  Config c;
  CHECK(palab_config_set(c.p, "experiment", "rates") == PALAB_OK);
  CHECK(palab_config_set(c.p, "theta", "1.0") == PALAB_OK);
  palab_report* r = nullptr;
  REQUIRE(palab_run(c.p, &r) == PALAB_OK);
  CHECK(palab_report_passed(r) == 1);
  CHECK(palab_report_exit_code(r) == 0);
  CHECK(palab_report_failure_count(r) == 0);
  CHECK(palab_report_failure(r, 0) == nullptr);
  CHECK(palab_report_wrote_file(r) == 0);
  CHECK(std::string(palab_report_text(r)).find("theta,rate_pa") != std::string::npos);
  palab_report_free(r);
}

TEST_CASE("JSON config") {
  Config c;
  CHECK(palab_config_load_json(c.p, R"({"experiment": "checker-fuzz", "trials": 5, "format": "json"})") == PALAB_OK);
  palab_report* r = nullptr;
  REQUIRE(palab_run(c.p, &r) == PALAB_OK);
  CHECK(std::string(palab_report_text(r)).find("\"schema_version\": 1") != std::string::npos);
  palab_report_free(r);
  CHECK(palab_config_load_json(c.p, "{not json") == PALAB_ERR_USAGE);
  CHECK(std::string(palab_last_error()).find("JSON") != std::string::npos);
}

TEST_CASE("errors map to status codes and exit codes") {
  Config c;
  CHECK(palab_config_set(c.p, "nope", "1") == PALAB_ERR_USAGE);
  CHECK(std::string(palab_last_error()).find("nope") != std::string::npos);
  CHECK(palab_exit_code(PALAB_ERR_USAGE) == 2);
  CHECK(palab_exit_code(PALAB_ERR_RESOURCE) == 3);
  CHECK(palab_exit_code(PALAB_ERR_VALIDATION) == 1);
  CHECK(palab_exit_code(PALAB_OK) == 0);

  CHECK(palab_config_set(c.p, "experiment", "distill-sweep") == PALAB_OK);
  CHECK(palab_config_set(c.p, "n", "12") == PALAB_OK);
  palab_report* r = nullptr;
  CHECK(palab_run(c.p, &r) == PALAB_ERR_RESOURCE);
  CHECK(r == nullptr);

  CHECK(palab_config_new(nullptr) == PALAB_ERR_NULL_ARGUMENT);
  CHECK(palab_run(nullptr, &r) == PALAB_ERR_NULL_ARGUMENT);
}

TEST_CASE("states through the C interface") {
  State psi;
  REQUIRE(palab_state_theta_attack(0.8, 1, &psi.p) == PALAB_OK);
  CHECK(palab_state_dimension(psi.p) == 16);
  double pa = 0, psd = 0;
  REQUIRE(palab_key_rates(psi.p, &pa, &psd) == PALAB_OK);
  const double expected = 1 - h2((1 + std::cos(0.8)) / 2);
  CHECK(std::abs(pa - expected) < 1e-9);
  CHECK(std::abs(psd - expected) < 1e-9);

  char* text = nullptr;
  REQUIRE(palab_state_to_json(psi.p, &text) == PALAB_OK);
  State back;
  CHECK(palab_state_from_json(text, &back.p) == PALAB_OK);
  palab_string_free(text);
  CHECK(palab_state_dimension(back.p) == 16);

  int eve = -1, orth = -1;
  REQUIRE(palab_diagnose(back.p, 1e-8, &eve, &orth) == PALAB_OK);
  CHECK(eve == 0);
  CHECK(orth == 0);

  double ps = 0, eps = 0;
  REQUIRE(palab_distill(psi.p, 2, 1, 3, &ps, &eps) == PALAB_OK);
  CHECK(ps > 0.0);
  CHECK(ps <= 1.0);
  CHECK(std::abs(eps - std::sqrt(1 - ps)) < 1e-12);
}

TEST_CASE("epsilon privacy of an open key") {
  State rho;
  REQUIRE(palab_state_theta_attack(std::acos(0.0), 0, &rho.p) == PALAB_OK);
  double eps = 0;
  REQUIRE(palab_epsilon_privacy(rho.p, &eps) == PALAB_OK);
  CHECK(std::abs(eps - 0.5) < 1e-9);
  State pure;
  CHECK(palab_state_from_json(R"({"rows": 2, "cols": 1, "data": [[1, 0], [1, 0]], "subsystems": [["A", 2]]})",
                              &pure.p) == PALAB_ERR_VALIDATION);
  CHECK(palab_state_from_json("[", &pure.p) == PALAB_ERR_VALIDATION);
  CHECK(palab_epsilon_privacy(nullptr, &eps) == PALAB_ERR_NULL_ARGUMENT);
}

#include "palab/palab.h"

#include "palab/distill.hpp"
#include "palab/experiment.hpp"
#include "palab/infotheory.hpp"
#include "palab/privstate.hpp"
#include "palab/serialize.hpp"

#include <cstring>
#include <new>
#include <optional>
#include <string>

struct palab_config {
  palab::ExperimentConfig value;
};

struct palab_report {
  palab::Report value;
};

struct palab_state {
  palab::MultipartiteState value;
};

namespace {

thread_local std::string last_error;

template <typename F>
palab_status guarded(F&& f) {
  try {
    f();
    return PALAB_OK;
  } catch (const palab::Error& e) {
    last_error = e.what();
    return static_cast<palab_status>(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return PALAB_ERR_VALIDATION;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PALAB_ERR_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PALAB_ERR_INTERNAL;
  }
}

palab_status null_argument() {
  last_error = "null argument";
  return PALAB_ERR_NULL_ARGUMENT;
}

}  // namespace

extern "C" {

const char* palab_last_error(void) { return last_error.c_str(); }

const char* palab_version(void) { return "0.1.0"; }

int palab_exit_code(palab_status status) {
  if (status == PALAB_OK) return 0;
  if (status == PALAB_ERR_NULL_ARGUMENT || status == PALAB_ERR_INTERNAL) return 1;
  return palab::exit_code_for(static_cast<palab::ErrorCode>(status));
}

const char* palab_experiment_help(void) {
  static const std::string text = palab::experiment_help();
  return text.c_str();
}

palab_status palab_config_new(palab_config** out) {
  if (!out) return null_argument();
  return guarded([&] { *out = new palab_config{}; });
}

palab_status palab_config_load_json(palab_config* config, const char* json_text) {
  if (!config || !json_text) return null_argument();
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw palab::UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    palab::apply_json(config->value, j);
  });
}

palab_status palab_config_set(palab_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return null_argument();
  return guarded([&] { palab::apply_setting(config->value, key, value); });
}

void palab_config_free(palab_config* config) { delete config; }

palab_status palab_run(const palab_config* config, palab_report** out) {
  if (!config || !out) return null_argument();
  return guarded([&] { *out = new palab_report{palab::run(config->value)}; });
}

const char* palab_report_text(const palab_report* report) {
  return report ? report->value.text.c_str() : "";
}

int palab_report_passed(const palab_report* report) { return report && report->value.passed ? 1 : 0; }

int palab_report_exit_code(const palab_report* report) { return report ? report->value.exit_code() : 1; }

int palab_report_wrote_file(const palab_report* report) {
  return report && report->value.wrote_file ? 1 : 0;
}

size_t palab_report_failure_count(const palab_report* report) {
  return report ? report->value.failures.size() : 0;
}

const char* palab_report_failure(const palab_report* report, size_t index) {
  if (!report || index >= report->value.failures.size()) return nullptr;
  return report->value.failures[index].c_str();
}

void palab_report_free(palab_report* report) { delete report; }

palab_status palab_state_from_json(const char* json_text, palab_state** out) {
  if (!json_text || !out) return null_argument();
  return guarded([&] {
    *out = new palab_state{palab::state_from_json(nlohmann::json::parse(json_text))};
  });
}

palab_status palab_state_to_json(const palab_state* state, char** out) {
  if (!state || !out) return null_argument();
  return guarded([&] {
    const std::string text = palab::to_json(state->value).dump();
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

palab_status palab_state_theta_attack(double theta, int purified, palab_state** out) {
  if (!out) return null_argument();
  return guarded([&] {
    auto s = palab::theta_attack(theta);
    *out = new palab_state{purified ? palab::purify_with_shield(s) : std::move(s)};
  });
}

size_t palab_state_dimension(const palab_state* state) { return state ? state->value.dimension() : 0; }

void palab_state_free(palab_state* state) { delete state; }

void palab_string_free(char* s) { delete[] s; }

palab_status palab_key_rates(const palab_state* psi_abse, double* rate_pa, double* rate_psd) {
  if (!psi_abse || !rate_pa || !rate_psd) return null_argument();
  return guarded([&] {
    const auto r = palab::key_rates(psi_abse->value);
    *rate_pa = r.pa;
    *rate_psd = r.psd;
  });
}

palab_status palab_diagnose(const palab_state* gamma, double tol, int* eve_marginal, int* orthogonality) {
  if (!gamma || !eve_marginal || !orthogonality) return null_argument();
  return guarded([&] {
    const auto d = palab::diagnose(gamma->value, tol);
    *eve_marginal = *d.eve_marginal_verdict ? 1 : 0;
    *orthogonality = *d.orthogonality_verdict ? 1 : 0;
  });
}

palab_status palab_epsilon_privacy(const palab_state* rho_abe, double* epsilon) {
  if (!rho_abe || !epsilon) return null_argument();
  return guarded([&] { *epsilon = palab::epsilon_privacy(rho_abe->value); });
}

palab_status palab_distill(const palab_state* psi_abse, unsigned n, unsigned m, uint64_t seed,
                           double* success_probability, double* privacy_epsilon) {
  if (!psi_abse || !success_probability || !privacy_epsilon) return null_argument();
  return guarded([&] {
    palab::Rng rng = palab::trial_rng(seed, 0);
    const auto o = palab::distill(psi_abse->value, n, m, rng);
    *success_probability = o.success_probability;
    *privacy_epsilon = o.privacy_epsilon;
  });
}

}  // extern "C"

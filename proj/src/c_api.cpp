#include "bellsim/bellsim_c.h"

#include <cstring>
#include <new>
#include <string>

#include "bellsim/analysis.hpp"
#include "bellsim/experiments.hpp"

namespace {

thread_local std::string g_last_error;

bellsim_status fail(bellsim_status code, const char* message) {
  g_last_error = message;
  return code;
}

// Runs `fn`, translating exceptions to status codes.
template <typename Fn>
bellsim_status guarded(Fn&& fn) {
  try {
    fn();
    return BELLSIM_OK;
  } catch (const bellsim::ConfigError& e) {
    return fail(BELLSIM_ERROR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BELLSIM_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BELLSIM_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BELLSIM_ERROR_RUNTIME, e.what());
  } catch (...) {
    return fail(BELLSIM_ERROR_INTERNAL, "unknown failure");
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bellsim_status require(bool ok, const char* what) {
  return ok ? BELLSIM_OK : fail(BELLSIM_ERROR_INVALID_ARGUMENT, what);
}

}  // namespace

struct bellsim_state {
  bellsim::PhotonicState state;
};

struct bellsim_circuit {
  bellsim::CircuitSpec spec;
};

struct bellsim_distribution {
  bellsim::OutcomeDistribution dist;
};

struct bellsim_density_matrix {
  bellsim::DensityMatrix rho;
};

struct bellsim_result {
  bellsim::ExperimentResult result;
};

extern "C" {

const char* bellsim_version(void) { return "1.0.0"; }

const char* bellsim_last_error(void) { return g_last_error.c_str(); }

void bellsim_string_free(char* s) { delete[] s; }

bellsim_status bellsim_state_named(const bellsim_circuit* circuit, const char* name,
                                   bellsim_state** out_state) {
  if (auto rc = require(circuit && name && out_state, "null argument")) return rc;
  return guarded([&] {
    *out_state = new bellsim_state{bellsim::named_state(name, circuit->spec.input_paths)};
  });
}

bellsim_status bellsim_state_norm(const bellsim_state* state, double* out_norm) {
  if (auto rc = require(state && out_norm, "null argument")) return rc;
  return guarded([&] { *out_norm = state->state.norm(); });
}

bellsim_status bellsim_state_json(const bellsim_state* state, char** out_json) {
  if (auto rc = require(state && out_json, "null argument")) return rc;
  return guarded([&] { *out_json = copy_string(bellsim::to_debug_json(state->state)); });
}

void bellsim_state_free(bellsim_state* state) { delete state; }

bellsim_status bellsim_circuit_create(const char* scheme, int parties, double gamma,
                                      bellsim_circuit** out_circuit) {
  if (auto rc = require(scheme && out_circuit, "null argument")) return rc;
  return guarded([&] {
    const std::string name(scheme);
    const bellsim::DelayModel delay = bellsim::DelayModel::from_gamma(gamma);
    bellsim::CircuitKind kind;
    if (name == "standard")
      kind = bellsim::CircuitKind::StandardBsm;
    else if (name == "symmetric")
      kind = bellsim::CircuitKind::SymmetricBsm;
    else if (name == "ghz")
      kind = bellsim::CircuitKind::Ghz;
    else
      throw std::invalid_argument("unknown scheme: " + name);
    *out_circuit = new bellsim_circuit{bellsim::make_circuit(kind, parties, delay)};
  });
}

bellsim_status bellsim_circuit_topology_json(const bellsim_circuit* circuit, char** out_json) {
  if (auto rc = require(circuit && out_json, "null argument")) return rc;
  return guarded([&] { *out_json = copy_string(circuit->spec.topology_json()); });
}

void bellsim_circuit_free(bellsim_circuit* circuit) { delete circuit; }

bellsim_status bellsim_circuit_run(const bellsim_circuit* circuit, const bellsim_state* input,
                                   bellsim_state** out_state) {
  if (auto rc = require(circuit && input && out_state, "null argument")) return rc;
  return guarded([&] {
    *out_state = new bellsim_state{bellsim::run_circuit(circuit->spec, input->state)};
  });
}

bellsim_status bellsim_measure(const bellsim_circuit* circuit, const bellsim_state* input,
                               bellsim_distribution** out_distribution) {
  if (auto rc = require(circuit && input && out_distribution, "null argument")) return rc;
  return guarded([&] {
    *out_distribution = new bellsim_distribution{
        bellsim::measure(bellsim::run_circuit(circuit->spec, input->state), circuit->spec)};
  });
}

bellsim_status bellsim_distribution_probability(const bellsim_distribution* distribution,
                                                const char* pattern, double* out_probability) {
  if (auto rc = require(distribution && pattern && out_probability, "null argument")) return rc;
  return guarded([&] {
    *out_probability = distribution->dist.probability_of(bellsim::pattern_from_name(pattern));
  });
}

bellsim_status bellsim_distribution_csv(const bellsim_distribution* distribution,
                                        char** out_csv) {
  if (auto rc = require(distribution && out_csv, "null argument")) return rc;
  return guarded([&] { *out_csv = copy_string(bellsim::distribution_csv(distribution->dist)); });
}

bellsim_status bellsim_distribution_json(const bellsim_distribution* distribution,
                                         char** out_json) {
  if (auto rc = require(distribution && out_json, "null argument")) return rc;
  return guarded(
      [&] { *out_json = copy_string(bellsim::distribution_json(distribution->dist)); });
}

void bellsim_distribution_free(bellsim_distribution* distribution) { delete distribution; }

bellsim_status bellsim_herald(const bellsim_circuit* circuit, const bellsim_state* input,
                              bellsim_density_matrix** out_rho, double* out_probability) {
  if (auto rc = require(circuit && input && out_rho && out_probability, "null argument"))
    return rc;
  return guarded([&] {
    const bellsim::HeraldResult herald = bellsim::heralded_state(
        bellsim::run_prep(circuit->spec, input->state), circuit->spec);
    *out_probability = herald.probability;
    *out_rho = herald.state ? new bellsim_density_matrix{*herald.state} : nullptr;
  });
}

bellsim_status bellsim_density_matrix_fidelity(const bellsim_density_matrix* rho,
                                               const char* target, double* out) {
  if (auto rc = require(rho && target && out, "null argument")) return rc;
  return guarded([&] {
    const std::string name(target);
    Eigen::VectorXcd ket;
    if (name == "ghz+" || name == "ghz-")
      ket = bellsim::ghz_vector(rho->rho.qubits(), name == "ghz+");
    else
      ket = bellsim::bell_vector(bellsim::bell_from_name(name));
    *out = bellsim::fidelity(rho->rho, ket);
  });
}

bellsim_status bellsim_density_matrix_concurrence(const bellsim_density_matrix* rho,
                                                  double* out) {
  if (auto rc = require(rho && out, "null argument")) return rc;
  return guarded([&] { *out = bellsim::concurrence(rho->rho); });
}

bellsim_status bellsim_density_matrix_json(const bellsim_density_matrix* rho, char** out_json) {
  if (auto rc = require(rho && out_json, "null argument")) return rc;
  return guarded([&] { *out_json = copy_string(rho->rho.to_json()); });
}

void bellsim_density_matrix_free(bellsim_density_matrix* rho) { delete rho; }

bellsim_status bellsim_run_experiment(const char* config_json, bellsim_result** out_result) {
  if (auto rc = require(config_json && out_result, "null argument")) return rc;
  return guarded(
      [&] { *out_result = new bellsim_result{bellsim::run_experiment(config_json)}; });
}

const char* bellsim_result_metrics_json(const bellsim_result* result) {
  return result ? result->result.metrics_json.c_str() : nullptr;
}

size_t bellsim_result_artifact_count(const bellsim_result* result) {
  return result ? result->result.artifacts.size() : 0;
}

const char* bellsim_result_artifact_name(const bellsim_result* result, size_t index) {
  if (!result || index >= result->result.artifacts.size()) return nullptr;
  return result->result.artifacts[index].name.c_str();
}

const char* bellsim_result_artifact_content(const bellsim_result* result, size_t index) {
  if (!result || index >= result->result.artifacts.size()) return nullptr;
  return result->result.artifacts[index].content.c_str();
}

void bellsim_result_free(bellsim_result* result) { delete result; }

}  // extern "C"

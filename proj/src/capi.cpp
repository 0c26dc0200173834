#include "supercal.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "supercal/runners.hpp"

using namespace supercal;
using nlohmann::json;

namespace {

thread_local std::string g_last_error;

sc_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return SC_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonIterable: return SC_ERR_NON_ITERABLE;
    case ErrorCode::CapExceeded: return SC_ERR_CAP_EXCEEDED;
    case ErrorCode::UndefinedPoint: return SC_ERR_UNDEFINED_POINT;
    case ErrorCode::DegenerateConstant: return SC_ERR_DEGENERATE_CONSTANT;
    case ErrorCode::NonpositiveFactor: return SC_ERR_NONPOSITIVE_FACTOR;
    case ErrorCode::QuadratureFailure: return SC_ERR_QUADRATURE_FAILURE;
    case ErrorCode::BracketFailure: return SC_ERR_BRACKET_FAILURE;
    case ErrorCode::StepTooLarge: return SC_ERR_STEP_TOO_LARGE;
    case ErrorCode::PicardDivergence: return SC_ERR_PICARD_DIVERGENCE;
    case ErrorCode::SingularDiffusivity: return SC_ERR_SINGULAR_DIFFUSIVITY;
    case ErrorCode::GridMismatch: return SC_ERR_GRID_MISMATCH;
    case ErrorCode::ProjectionStall: return SC_ERR_PROJECTION_STALL;
    case ErrorCode::PreconditionViolation: return SC_ERR_PRECONDITION;
    case ErrorCode::ContainmentViolation: return SC_ERR_CONTAINMENT;
    case ErrorCode::NotSolution: return SC_ERR_NOT_SOLUTION;
    case ErrorCode::NotSupersolution: return SC_ERR_NOT_SUPERSOLUTION;
    case ErrorCode::EmptyProbeList: return SC_ERR_EMPTY_PROBE_LIST;
    case ErrorCode::NonEvaluable: return SC_ERR_NON_EVALUABLE;
    case ErrorCode::InconsistentVerdicts: return SC_ERR_INCONSISTENT_VERDICTS;
    case ErrorCode::IoFailure: return SC_ERR_IO;
    case ErrorCode::BadConfig: return SC_ERR_BAD_CONFIG;
  }
  return SC_ERR_INTERNAL;
}

template <typename Fn>
sc_status guarded(Fn&& fn) {
  try {
    fn();
    return SC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("bad JSON: ") + e.what();
    return SC_ERR_BAD_CONFIG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SC_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_json(const char* text, const char* what) {
  if (text == nullptr) fail(ErrorCode::BadConfig, std::string(what) + " is null");
  return json::parse(text);
}

uint8_t tag_of(const ExtReal& x) {
  if (x.is_finite()) return 0;
  if (x.is_pos_inf()) return 1;
  return 2;
}

void pack(const ExtReal& x, double* value, uint8_t* tag) {
  *tag = tag_of(x);
  *value = x.is_finite() ? x.value() : 0.0;
}

}  // namespace

struct sc_family {
  SolutionFamily family;
};

struct sc_field {
  GridField field;
};

extern "C" {

const char* sc_status_name(sc_status status) {
  switch (status) {
    case SC_OK: return "SC_OK";
    case SC_ERR_INVALID_ARGUMENT: return "SC_ERR_INVALID_ARGUMENT";
    case SC_ERR_NON_ITERABLE: return "SC_ERR_NON_ITERABLE";
    case SC_ERR_CAP_EXCEEDED: return "SC_ERR_CAP_EXCEEDED";
    case SC_ERR_UNDEFINED_POINT: return "SC_ERR_UNDEFINED_POINT";
    case SC_ERR_DEGENERATE_CONSTANT: return "SC_ERR_DEGENERATE_CONSTANT";
    case SC_ERR_NONPOSITIVE_FACTOR: return "SC_ERR_NONPOSITIVE_FACTOR";
    case SC_ERR_QUADRATURE_FAILURE: return "SC_ERR_QUADRATURE_FAILURE";
    case SC_ERR_BRACKET_FAILURE: return "SC_ERR_BRACKET_FAILURE";
    case SC_ERR_STEP_TOO_LARGE: return "SC_ERR_STEP_TOO_LARGE";
    case SC_ERR_PICARD_DIVERGENCE: return "SC_ERR_PICARD_DIVERGENCE";
    case SC_ERR_SINGULAR_DIFFUSIVITY: return "SC_ERR_SINGULAR_DIFFUSIVITY";
    case SC_ERR_GRID_MISMATCH: return "SC_ERR_GRID_MISMATCH";
    case SC_ERR_PROJECTION_STALL: return "SC_ERR_PROJECTION_STALL";
    case SC_ERR_PRECONDITION: return "SC_ERR_PRECONDITION";
    case SC_ERR_CONTAINMENT: return "SC_ERR_CONTAINMENT";
    case SC_ERR_NOT_SOLUTION: return "SC_ERR_NOT_SOLUTION";
    case SC_ERR_NOT_SUPERSOLUTION: return "SC_ERR_NOT_SUPERSOLUTION";
    case SC_ERR_EMPTY_PROBE_LIST: return "SC_ERR_EMPTY_PROBE_LIST";
    case SC_ERR_NON_EVALUABLE: return "SC_ERR_NON_EVALUABLE";
    case SC_ERR_INCONSISTENT_VERDICTS: return "SC_ERR_INCONSISTENT_VERDICTS";
    case SC_ERR_IO: return "SC_ERR_IO";
    case SC_ERR_BAD_CONFIG: return "SC_ERR_BAD_CONFIG";
    case SC_ERR_INTERNAL: return "SC_ERR_INTERNAL";
  }
  return "SC_ERR_UNKNOWN";
}

const char* sc_last_error_message(void) { return g_last_error.c_str(); }

void sc_string_free(char* s) { std::free(s); }

sc_status sc_exponent_table_json(int n, double p, char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, ErrorCode::InvalidArgument, "out_json is null");
    *out_json = dup_string(run_exponents(json{{"n", n}, {"p", p}}).dump());
  });
}

sc_status sc_moser_trace_json(int n, double p, double s0, int cap, char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, ErrorCode::InvalidArgument, "out_json is null");
    *out_json =
        dup_string(run_moser(json{{"n", n}, {"p", p}, {"s0", s0}, {"cap", cap}}).dump());
  });
}

sc_status sc_family_create_json(const char* spec_json, sc_family** out_family) {
  return guarded([&] {
    require(out_family != nullptr, ErrorCode::InvalidArgument, "out_family is null");
    *out_family = new sc_family{family_from_json(parse_json(spec_json, "family spec"))};
  });
}

void sc_family_destroy(sc_family* family) { delete family; }

sc_status sc_family_evaluate(const sc_family* family, double radius, double t,
                             sc_eval_result* out) {
  return guarded([&] {
    require(family != nullptr && out != nullptr, ErrorCode::InvalidArgument, "null argument");
    const EvalResult r = family->family.evaluate(radius, t);
    pack(r.value, &out->value, &out->value_tag);
    pack(r.radial_gradient, &out->radial_gradient, &out->gradient_tag);
    pack(r.time_derivative, &out->time_derivative, &out->time_derivative_tag);
    pack(r.flux_divergence, &out->flux_divergence, &out->flux_divergence_tag);
    pack(r.residual, &out->residual, &out->residual_tag);
  });
}

sc_status sc_ips_constant(int n, double p, double* out) {
  return guarded([&] {
    require(out != nullptr, ErrorCode::InvalidArgument, "out is null");
    *out = ips_constant(Medium(n, p));
  });
}

sc_status sc_power_constant(int n, double p, double q, double* out) {
  return guarded([&] {
    require(out != nullptr, ErrorCode::InvalidArgument, "out is null");
    *out = power_constant(Medium(n, p), q);
  });
}

sc_status sc_normalize_mass_json(int n, double p, double target, char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, ErrorCode::InvalidArgument, "out_json is null");
    const NormalizedConstant norm = normalize_mass(Medium(n, p), target);
    *out_json = dup_string(json{{"c", norm.c},
                                {"time_samples", norm.report.time_samples},
                                {"masses", norm.report.masses},
                                {"max_relative_spread", norm.report.max_relative_spread}}
                               .dump());
  });
}

sc_status sc_pde_residual_fd(const sc_family* family, double radius, double t, double h,
                             double* out) {
  return guarded([&] {
    require(family != nullptr && out != nullptr, ErrorCode::InvalidArgument, "null argument");
    *out = pde_residual_fd(family->family, radius, t, h);
  });
}

sc_status sc_field_load_csv(const char* csv_path, const char* sidecar_path,
                            sc_field** out_field) {
  return guarded([&] {
    require(csv_path != nullptr && sidecar_path != nullptr && out_field != nullptr,
            ErrorCode::InvalidArgument, "null argument");
    *out_field = new sc_field{read_field_csv(csv_path, sidecar_path)};
  });
}

sc_status sc_field_save_csv(const sc_field* field, const char* csv_path,
                            const char* sidecar_path) {
  return guarded([&] {
    require(field != nullptr && csv_path != nullptr && sidecar_path != nullptr,
            ErrorCode::InvalidArgument, "null argument");
    write_field_csv(field->field, csv_path, sidecar_path);
  });
}

void sc_field_destroy(sc_field* field) { delete field; }

sc_status sc_run_command(const char* command, const char* config_json, char** out_report_json) {
  return guarded([&] {
    require(command != nullptr && out_report_json != nullptr, ErrorCode::InvalidArgument,
            "null argument");
    const json cfg =
        config_json == nullptr ? json::object() : parse_json(config_json, "config");
    *out_report_json = dup_string(run_command(command, cfg).dump());
  });
}

}  // extern "C"

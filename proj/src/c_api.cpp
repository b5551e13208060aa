#include "fdstat/fdstat.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "fdstat/base_function.hpp"
#include "fdstat/csv.hpp"
#include "fdstat/distributions.hpp"
#include "fdstat/error.hpp"
#include "fdstat/montecarlo.hpp"
#include "fdstat/ordered_sample.hpp"
#include "fdstat/parallel.hpp"
#include "fdstat/suites.hpp"
#include "fdstat/transform.hpp"

struct fds_sample {
  fdstat::OrderedSample value;
};

struct fds_basefn {
  fdstat::BaseFunction value;
};

namespace {

thread_local std::string last_error;

fds_status code_for(fdstat::ErrorKind kind) {
  using fdstat::ErrorKind;
  switch (kind) {
    case ErrorKind::Input: return FDS_ERR_INPUT;
    case ErrorKind::Size: return FDS_ERR_SIZE;
    case ErrorKind::Degeneracy: return FDS_ERR_DEGENERATE;
    case ErrorKind::Domain: return FDS_ERR_DOMAIN;
    case ErrorKind::Singularity: return FDS_ERR_SINGULAR;
    case ErrorKind::Parameter: return FDS_ERR_PARAMETER;
    case ErrorKind::Parse: return FDS_ERR_PARSE;
    case ErrorKind::Io: return FDS_ERR_IO;
  }
  return FDS_ERR_INTERNAL;
}

template <class Fn>
fds_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    last_error.clear();
    return FDS_OK;
  } catch (const fdstat::Error& e) {
    last_error = e.what();
    return code_for(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FDS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FDS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return FDS_ERR_INTERNAL;
  }
}

fds_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return FDS_ERR_NULL_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::span<const double> view(const double* p, std::size_t n) { return {p, n}; }

fdstat::TestConfig test_config(const fds_test_config* c) {
  fdstat::TestConfig out;
  out.n_block = c->n_block;
  out.permutations = c->permutations;
  out.alpha = c->alpha;
  out.seed = c->seed;
  return out;
}

}  // namespace

#define FDS_REQUIRE(ptr)                 \
  do {                                   \
    if ((ptr) == nullptr) return null_argument(#ptr); \
  } while (0)

extern "C" {

const char* fds_last_error(void) { return last_error.c_str(); }

const char* fds_status_name(fds_status status) {
  switch (status) {
    case FDS_OK: return "ok";
    case FDS_ERR_NULL_ARGUMENT: return "null_argument";
    case FDS_ERR_INPUT: return "input";
    case FDS_ERR_SIZE: return "size";
    case FDS_ERR_DEGENERATE: return "degeneracy";
    case FDS_ERR_DOMAIN: return "domain";
    case FDS_ERR_SINGULAR: return "singularity";
    case FDS_ERR_PARAMETER: return "parameter";
    case FDS_ERR_PARSE: return "parse";
    case FDS_ERR_IO: return "io";
    case FDS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* fds_version(void) { return FDSTAT_VERSION; }

void fds_string_free(char* s) { std::free(s); }
void fds_values_free(double* values) { std::free(values); }

void fds_set_workers(unsigned workers) { fdstat::set_worker_count(workers); }

fds_status fds_sample_create(const double* values, size_t n, fds_sample** out) {
  FDS_REQUIRE(values);
  FDS_REQUIRE(out);
  return guarded([&] { *out = new fds_sample{fdstat::OrderedSample::from_unsorted(view(values, n))}; });
}

void fds_sample_destroy(fds_sample* s) { delete s; }

size_t fds_sample_size(const fds_sample* s) { return s == nullptr ? 0 : s->value.size(); }

fds_status fds_sample_sorted(const fds_sample* s, double* out) {
  FDS_REQUIRE(s);
  FDS_REQUIRE(out);
  return guarded([&] { std::memcpy(out, s->value.values().data(), s->value.size() * sizeof(double)); });
}

fds_status fds_sample_moments(const fds_sample* s, double* mean, double* sd) {
  FDS_REQUIRE(s);
  return guarded([&] {
    if (mean != nullptr) *mean = s->value.mean();
    if (sd != nullptr) *sd = s->value.sd();
  });
}

fds_status fds_sample_range(const fds_sample* s, double* out) {
  FDS_REQUIRE(s);
  FDS_REQUIRE(out);
  return guarded([&] { *out = fdstat::sample_range(s->value); });
}

fds_status fds_sample_gini(const fds_sample* s, double* out) {
  FDS_REQUIRE(s);
  FDS_REQUIRE(out);
  return guarded([&] { *out = fdstat::gini_mean_difference(s->value); });
}

fds_status fds_sample_studentize(const fds_sample* s, double* out) {
  FDS_REQUIRE(s);
  FDS_REQUIRE(out);
  return guarded([&] {
    const auto p = fdstat::studentize(s->value);
    std::memcpy(out, p.lambdas.data(), p.lambdas.size() * sizeof(double));
  });
}

fds_status fds_basefn_preset(const char* name, size_t n, fds_basefn** out) {
  FDS_REQUIRE(name);
  FDS_REQUIRE(out);
  return guarded([&] { *out = new fds_basefn{fdstat::BaseFunction::preset(name, n)}; });
}

fds_status fds_basefn_from_json(const char* json, fds_basefn** out) {
  FDS_REQUIRE(json);
  FDS_REQUIRE(out);
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      fdstat::fail(fdstat::ErrorKind::Parse, e.what());
    }
    *out = new fds_basefn{fdstat::base_function_from_json(j)};
  });
}

fds_status fds_basefn_to_json(const fds_basefn* u, char** json_out) {
  FDS_REQUIRE(u);
  FDS_REQUIRE(json_out);
  return guarded([&] { *json_out = copy_string(fdstat::to_json(u->value).dump()); });
}

fds_status fds_basefn_root(const fds_basefn* u, fds_basefn** out) {
  FDS_REQUIRE(u);
  FDS_REQUIRE(out);
  return guarded([&] { *out = new fds_basefn{u->value.root_normalized()}; });
}

void fds_basefn_destroy(fds_basefn* u) { delete u; }

size_t fds_basefn_arity(const fds_basefn* u) { return u == nullptr ? 0 : u->value.arity(); }

double fds_basefn_degree(const fds_basefn* u) { return u == nullptr ? 0.0 : u->value.effective_degree(); }

const char* fds_basefn_label(const fds_basefn* u) { return u == nullptr ? "" : u->value.label().c_str(); }

fds_status fds_basefn_evaluate(const fds_basefn* u, const double* point, size_t n, double* out) {
  FDS_REQUIRE(u);
  FDS_REQUIRE(point);
  FDS_REQUIRE(out);
  return guarded([&] { *out = fdstat::evaluate(u->value, view(point, n)); });
}

fds_status fds_basefn_statistic(const fds_basefn* u, const fds_sample* s, double* out) {
  FDS_REQUIRE(u);
  FDS_REQUIRE(s);
  FDS_REQUIRE(out);
  return guarded([&] { *out = fdstat::statistic(u->value, s->value); });
}

fds_status fds_basefn_feasibility(const fds_basefn* u, size_t trials, uint64_t seed, char** json_out, int* passed) {
  FDS_REQUIRE(u);
  FDS_REQUIRE(json_out);
  return guarded([&] {
    const auto r = fdstat::check_feasibility(u->value, u->value.arity(), trials, seed);
    *json_out = copy_string(fdstat::to_json(r).dump());
    if (passed != nullptr) *passed = r.passed ? 1 : 0;
  });
}

fds_status fds_transform_forward(const fds_sample* s, double* t_out, double* w1, double* w2, int* has_ties) {
  FDS_REQUIRE(s);
  FDS_REQUIRE(t_out);
  return guarded([&] {
    const auto c = fdstat::forward(s->value);
    std::memcpy(t_out, c.t.data(), c.t.size() * sizeof(double));
    if (w1 != nullptr) *w1 = c.w1;
    if (w2 != nullptr) *w2 = c.w2;
    if (has_ties != nullptr) *has_ties = c.has_ties ? 1 : 0;
  });
}

fds_status fds_transform_inverse(const double* t, size_t n, double w1, double w2, double* x_out) {
  FDS_REQUIRE(t);
  FDS_REQUIRE(x_out);
  return guarded([&] {
    if (n < 3) fdstat::fail(fdstat::ErrorKind::Size, "the transform needs n >= 3");
    const auto c = fdstat::TransformCoords::from_t(std::vector<double>(t, t + n - 2), w1, w2);
    const auto x = fdstat::inverse(c, n);
    std::memcpy(x_out, x.values().data(), n * sizeof(double));
  });
}

fds_status fds_transform_jacobian(const double* t, size_t n, double w2, double* out) {
  FDS_REQUIRE(t);
  FDS_REQUIRE(out);
  return guarded([&] {
    if (n < 3) fdstat::fail(fdstat::ErrorKind::Size, "the transform needs n >= 3");
    if (!(w2 > 0.0)) fdstat::fail(fdstat::ErrorKind::Domain, "w2 must be > 0");
    const auto c = fdstat::TransformCoords::from_t(std::vector<double>(t, t + n - 2), 0.0, w2);
    *out = fdstat::jacobian_abs(c, n);
  });
}

fds_status fds_studentized_density(const double* t, size_t n, double* out) {
  FDS_REQUIRE(t);
  FDS_REQUIRE(out);
  return guarded([&] {
    if (n < 3) fdstat::fail(fdstat::ErrorKind::Size, "the transform needs n >= 3");
    *out = fdstat::studentized_density(view(t, n - 2), n);
  });
}

fds_status fds_region_contains(const double* t, size_t n, int* inside) {
  FDS_REQUIRE(t);
  FDS_REQUIRE(inside);
  return guarded([&] {
    if (n < 3) fdstat::fail(fdstat::ErrorKind::Size, "the transform needs n >= 3");
    *inside = fdstat::region_membership(view(t, n - 2), n) ? 1 : 0;
  });
}

fds_status fds_normalization_closed_form(size_t n, double* out) {
  FDS_REQUIRE(out);
  return guarded([&] { *out = fdstat::normalization_closed_form(n); });
}

void fds_suite_config_default(fds_suite_config* config) {
  if (config == nullptr) return;
  const fdstat::SuiteConfig d;
  config->n = 0;
  config->seed = d.seed;
  config->corpus = d.corpus;
  config->trials = d.trials;
}

fds_status fds_verify_suite(const char* name, const fds_suite_config* config, char** json_out, int* all_passed) {
  FDS_REQUIRE(name);
  FDS_REQUIRE(json_out);
  return guarded([&] {
    fdstat::SuiteConfig c;
    if (config != nullptr) {
      if (config->n != 0) c.n = config->n;
      c.seed = config->seed;
      c.corpus = config->corpus;
      c.trials = config->trials;
    }
    const auto reports = fdstat::run_suite(name, c);
    const nlohmann::json echo = {{"suite", name},
                                 {"n", c.n ? nlohmann::json(*c.n) : nlohmann::json(nullptr)},
                                 {"seed", c.seed},
                                 {"corpus", c.corpus},
                                 {"trials", c.trials}};
    nlohmann::json arr = nlohmann::json::array();
    bool ok = true;
    for (const auto& r : reports) {
      arr.push_back(fdstat::to_json(r));
      arr.back()["metadata"]["suite_config"] = echo;
      ok = ok && r.passed;
    }
    *json_out = copy_string(arr.dump(2));
    if (all_passed != nullptr) *all_passed = ok ? 1 : 0;
  });
}

void fds_test_config_default(fds_test_config* config) {
  if (config == nullptr) return;
  const fdstat::TestConfig d;
  config->n_block = d.n_block;
  config->permutations = d.permutations;
  config->alpha = d.alpha;
  config->seed = d.seed;
}

fds_status fds_independence_test_data(const double* data, size_t count, const fds_basefn* u,
                                      const fds_test_config* config, char** json_out, int* reject) {
  FDS_REQUIRE(data);
  FDS_REQUIRE(u);
  FDS_REQUIRE(config);
  FDS_REQUIRE(json_out);
  return guarded([&] {
    const auto r = fdstat::independence_test(view(data, count), u->value, test_config(config));
    *json_out = copy_string(fdstat::to_json(r).dump(2));
    if (reject != nullptr) *reject = r.reject ? 1 : 0;
  });
}

fds_status fds_independence_test_simulated(const char* distribution_json, size_t n_blocks, const fds_basefn* u,
                                           const fds_test_config* config, char** json_out, int* reject) {
  FDS_REQUIRE(distribution_json);
  FDS_REQUIRE(u);
  FDS_REQUIRE(config);
  FDS_REQUIRE(json_out);
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(distribution_json);
    } catch (const nlohmann::json::exception& e) {
      fdstat::fail(fdstat::ErrorKind::Parse, e.what());
    }
    const auto spec = fdstat::distribution_from_json(j);
    const auto r = fdstat::independence_test(spec, n_blocks, u->value, test_config(config));
    *json_out = copy_string(fdstat::to_json(r).dump(2));
    if (reject != nullptr) *reject = r.reject ? 1 : 0;
  });
}

fds_status fds_tstar_table(const fds_basefn* u, size_t reps, const double* levels, size_t level_count, uint64_t seed,
                           char** json_out) {
  FDS_REQUIRE(u);
  FDS_REQUIRE(levels);
  FDS_REQUIRE(json_out);
  return guarded([&] {
    const auto t = fdstat::tstar_table(u->value, u->value.arity(), reps, view(levels, level_count), seed);
    *json_out = copy_string(fdstat::to_json(t).dump(2));
  });
}

fds_status fds_interval_coverage(const fds_basefn* u, double quantile, size_t reps, uint64_t seed, double* coverage) {
  FDS_REQUIRE(u);
  FDS_REQUIRE(coverage);
  return guarded([&] { *coverage = fdstat::interval_coverage(u->value, u->value.arity(), quantile, reps, seed); });
}

fds_status fds_read_values_file(const char* path, double** values, size_t* count) {
  FDS_REQUIRE(path);
  FDS_REQUIRE(values);
  FDS_REQUIRE(count);
  return guarded([&] {
    const auto v = fdstat::read_values_file(path);
    auto* buf = static_cast<double*>(std::malloc(std::max<std::size_t>(1, v.size()) * sizeof(double)));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, v.data(), v.size() * sizeof(double));
    *values = buf;
    *count = v.size();
  });
}

}  // extern "C"

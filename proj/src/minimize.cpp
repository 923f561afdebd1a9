#include "minimize.hpp"

#include <cmath>
#include <limits>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

namespace germflow::detail {

namespace {

struct Context {
  const std::function<double(const Eigen::VectorXd&)>* objective;
  Eigen::VectorXd scratch;
};

double trampoline(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<Context*>(params);
  for (std::size_t i = 0; i < v->size; ++i) ctx->scratch[i] = gsl_vector_get(v, i);
  const double value = (*ctx->objective)(ctx->scratch);
  return std::isfinite(value) ? value : std::numeric_limits<double>::max();
}

}  // namespace

MinimizeResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                           const Eigen::VectorXd& x0, double step, std::size_t max_iterations,
                           double size_tol) {
  const std::size_t dim = static_cast<std::size_t>(x0.size());
  MinimizeResult result{x0, objective(x0), 0};
  if (dim == 0) return result;

  gsl_set_error_handler_off();
  Context ctx{&objective, Eigen::VectorXd(dim)};
  gsl_multimin_function fn{&trampoline, dim, &ctx};
  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* steps = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x, i, x0[i]);
    gsl_vector_set(steps, i, step);
  }
  gsl_multimin_fminimizer* s =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(s, &fn, x, steps);
  for (; result.iterations < max_iterations; ++result.iterations) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) break;
  }
  const gsl_vector* best = gsl_multimin_fminimizer_x(s);
  Eigen::VectorXd xb(dim);
  for (std::size_t i = 0; i < dim; ++i) xb[i] = gsl_vector_get(best, i);
  const double vb = objective(xb);
  if (vb < result.value) {
    result.x = xb;
    result.value = vb;
  }
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(steps);
  gsl_vector_free(x);
  return result;
}

}  // namespace germflow::detail

#include "medwit/minimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace medwit::minimize {

namespace {

void silence_gsl() {
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

struct VectorDeleter {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
using VectorPtr = std::unique_ptr<gsl_vector, VectorDeleter>;

VectorPtr to_gsl(const std::vector<double>& x) {
    VectorPtr v(gsl_vector_alloc(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) gsl_vector_set(v.get(), i, x[i]);
    return v;
}

std::vector<double> from_gsl(const gsl_vector* v) {
    std::vector<double> x(v->size);
    for (std::size_t i = 0; i < v->size; ++i) x[i] = gsl_vector_get(v, i);
    return x;
}

std::span<const double> view(const gsl_vector* v) { return {v->data, v->size}; }

double finite_or_huge(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::max() / 4; }

}  // namespace

Result nelder_mead(const Objective& f, std::vector<double> x0, double step, int max_iter, double size_tol) {
    silence_gsl();
    if (x0.empty()) {
        return {x0, f(x0), 0, true};
    }
    const std::size_t n = x0.size();
    gsl_multimin_function fn;
    fn.n = n;
    fn.params = const_cast<Objective*>(&f);
    fn.f = [](const gsl_vector* x, void* p) -> double {
        return finite_or_huge((*static_cast<const Objective*>(p))(view(x)));
    };

    auto start = to_gsl(x0);
    VectorPtr steps(gsl_vector_alloc(n));
    gsl_vector_set_all(steps.get(), step);

    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), gsl_multimin_fminimizer_free);
    gsl_multimin_fminimizer_set(s.get(), &fn, start.get(), steps.get());

    Result r;
    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
        if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), size_tol) == GSL_SUCCESS) {
            r.converged = true;
            break;
        }
    }
    r.x = from_gsl(gsl_multimin_fminimizer_x(s.get()));
    r.value = gsl_multimin_fminimizer_minimum(s.get());
    return r;
}

Result bfgs(const ObjectiveWithGradient& fdf, std::vector<double> x0, int max_iter, double grad_tol,
            double initial_step, double stop_value) {
    silence_gsl();
    const std::size_t n = x0.size();
    if (n == 0) {
        std::vector<double> g;
        return {x0, fdf(x0, g), 0, true};
    }
    gsl_multimin_function_fdf fn;
    fn.n = n;
    fn.params = const_cast<ObjectiveWithGradient*>(&fdf);
    fn.f = [](const gsl_vector* x, void* p) -> double {
        std::vector<double> g(x->size);
        return finite_or_huge((*static_cast<const ObjectiveWithGradient*>(p))(view(x), g));
    };
    fn.df = [](const gsl_vector* x, void* p, gsl_vector* g) {
        (*static_cast<const ObjectiveWithGradient*>(p))(view(x), std::span<double>(g->data, g->size));
    };
    fn.fdf = [](const gsl_vector* x, void* p, double* f, gsl_vector* g) {
        *f = finite_or_huge(
            (*static_cast<const ObjectiveWithGradient*>(p))(view(x), std::span<double>(g->data, g->size)));
    };

    auto start = to_gsl(x0);
    std::unique_ptr<gsl_multimin_fdfminimizer, decltype(&gsl_multimin_fdfminimizer_free)> s(
        gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n), gsl_multimin_fdfminimizer_free);
    gsl_multimin_fdfminimizer_set(s.get(), &fn, start.get(), initial_step, 0.1);

    Result r;
    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
        const int status = gsl_multimin_fdfminimizer_iterate(s.get());
        if (status == GSL_ENOPROG) {
            r.converged = true;
            break;
        }
        if (status != GSL_SUCCESS) break;
        if (gsl_multimin_fdfminimizer_minimum(s.get()) <= stop_value) break;
        if (gsl_multimin_test_gradient(gsl_multimin_fdfminimizer_gradient(s.get()), grad_tol) == GSL_SUCCESS) {
            r.converged = true;
            break;
        }
    }
    r.x = from_gsl(gsl_multimin_fdfminimizer_x(s.get()));
    r.value = gsl_multimin_fdfminimizer_minimum(s.get());
    return r;
}

}  // namespace medwit::minimize

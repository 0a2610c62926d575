#include "hgr/kernels.hpp"

#include <cstdlib>
#include <string>

namespace hgr::kernels {

namespace {

struct Table {
  void (*matvec_bias)(const double*, const double*, const double*, double*,
                      std::size_t, std::size_t);
  void (*matvec_t_acc)(const double*, const double*, double*, std::size_t,
                       std::size_t);
  void (*outer_acc)(double*, const double*, const double*, std::size_t,
                    std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*relu)(const double*, double*, std::size_t);
  void (*relu_backward)(const double*, double*, std::size_t);
  void (*adam_update)(double*, const double*, double*, double*, std::size_t,
                      double, double, double, double, double, double);
  void (*lerp)(double*, const double*, double, std::size_t);
};

constexpr Table kScalarTable{
    ref::matvec_bias, ref::matvec_t_acc, ref::outer_acc,    ref::dot,
    ref::axpy,        ref::relu,         ref::relu_backward, ref::adam_update,
    ref::lerp};

#if defined(HGR_HAVE_AVX2_KERNELS)
constexpr Table kAvx2Table{
    avx2::matvec_bias, avx2::matvec_t_acc, avx2::outer_acc,
    avx2::dot,         avx2::axpy,         avx2::relu,
    avx2::relu_backward, avx2::adam_update, avx2::lerp};
#endif

struct State {
  Backend backend;
  const Table* table;
};

Backend pick_initial_backend() {
  const char* env = std::getenv("HGR_KERNELS");
  if (env != nullptr) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && cpu_has_avx2()) return Backend::avx2;
    // "auto" or anything unrecognized falls through to detection.
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

State& state() {
  static State s = [] {
    State init{};
    init.backend = pick_initial_backend();
#if defined(HGR_HAVE_AVX2_KERNELS)
    init.table = init.backend == Backend::avx2 ? &kAvx2Table : &kScalarTable;
#else
    init.backend = Backend::scalar;
    init.table = &kScalarTable;
#endif
    return init;
  }();
  return s;
}

} // namespace

bool cpu_has_avx2() {
#if defined(HGR_HAVE_AVX2_KERNELS)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return state().backend; }

bool set_backend(Backend b) {
  State& s = state();
  if (b == Backend::avx2) {
#if defined(HGR_HAVE_AVX2_KERNELS)
    if (cpu_has_avx2()) {
      s.backend = Backend::avx2;
      s.table = &kAvx2Table;
      return true;
    }
#endif
    return false;
  }
  s.backend = Backend::scalar;
  s.table = &kScalarTable;
  return true;
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void matvec_bias(const double* W, const double* x, const double* b, double* y,
                 std::size_t rows, std::size_t cols) {
  state().table->matvec_bias(W, x, b, y, rows, cols);
}

void matvec_t_acc(const double* W, const double* u, double* dx,
                  std::size_t rows, std::size_t cols) {
  state().table->matvec_t_acc(W, u, dx, rows, cols);
}

void outer_acc(double* dW, const double* u, const double* x, std::size_t rows,
               std::size_t cols) {
  state().table->outer_acc(dW, u, x, rows, cols);
}

double dot(const double* a, const double* b, std::size_t n) {
  return state().table->dot(a, b, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  state().table->axpy(a, x, y, n);
}

void relu(const double* x, double* y, std::size_t n) {
  state().table->relu(x, y, n);
}

void relu_backward(const double* pre, double* g, std::size_t n) {
  state().table->relu_backward(pre, g, n);
}

void adam_update(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double b1, double b2, double eps,
                 double bc1, double bc2) {
  state().table->adam_update(p, g, m, v, n, lr, b1, b2, eps, bc1, bc2);
}

void lerp(double* t, const double* s, double coeff, std::size_t n) {
  state().table->lerp(t, s, coeff, n);
}

} // namespace hgr::kernels

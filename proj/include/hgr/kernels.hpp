#pragma once

#include <cstddef>

// Dense math kernels behind the network code. Every operation has a scalar
// reference implementation and, on x86-64, an AVX2+FMA variant. The active
// variant is chosen once at startup from CPUID (overridable via set_backend
// or the HGR_KERNELS env var) and dispatched through function pointers.
//
// Matrices are row-major with `rows` contiguous runs of `cols` doubles.

namespace hgr::kernels {

enum class Backend { scalar, avx2 };

// Backend chosen by the dispatcher (after env override, if any).
Backend active_backend();

// Force a backend. Returns false (and leaves the dispatch table untouched)
// when the CPU cannot run it. Not thread-safe; call before spawning work.
bool set_backend(Backend b);

bool cpu_has_avx2();
const char* backend_name(Backend b);

// y[r] = dot(W[r,:], x) + b[r]
void matvec_bias(const double* W, const double* x, const double* b, double* y,
                 std::size_t rows, std::size_t cols);
// dx[c] += sum_r u[r] * W[r,c]   (W^T u, accumulated)
void matvec_t_acc(const double* W, const double* u, double* dx,
                  std::size_t rows, std::size_t cols);
// dW[r,c] += u[r] * x[c]
void outer_acc(double* dW, const double* u, const double* x,
               std::size_t rows, std::size_t cols);
double dot(const double* a, const double* b, std::size_t n);
// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);
// y[i] = max(0, x[i])
void relu(const double* x, double* y, std::size_t n);
// g[i] = pre[i] > 0 ? g[i] : 0
void relu_backward(const double* pre, double* g, std::size_t n);
// In-place Adam update with bias correction factors bc1 = 1/(1-b1^t),
// bc2 = 1/(1-b2^t) precomputed by the caller.
void adam_update(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double b1, double b2, double eps,
                 double bc1, double bc2);
// t[i] = coeff * t[i] + (1 - coeff) * s[i]
void lerp(double* t, const double* s, double coeff, std::size_t n);

// Reference (scalar) entry points, always available; used by the
// equivalence tests and as the fallback backend.
namespace ref {
void matvec_bias(const double* W, const double* x, const double* b, double* y,
                 std::size_t rows, std::size_t cols);
void matvec_t_acc(const double* W, const double* u, double* dx,
                  std::size_t rows, std::size_t cols);
void outer_acc(double* dW, const double* u, const double* x,
               std::size_t rows, std::size_t cols);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void relu(const double* x, double* y, std::size_t n);
void relu_backward(const double* pre, double* g, std::size_t n);
void adam_update(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double b1, double b2, double eps,
                 double bc1, double bc2);
void lerp(double* t, const double* s, double coeff, std::size_t n);
} // namespace ref

#if defined(__x86_64__) || defined(_M_X64)
#define HGR_HAVE_AVX2_KERNELS 1
// AVX2+FMA variants. Calling these on a CPU without AVX2 is undefined;
// check cpu_has_avx2() first.
namespace avx2 {
void matvec_bias(const double* W, const double* x, const double* b, double* y,
                 std::size_t rows, std::size_t cols);
void matvec_t_acc(const double* W, const double* u, double* dx,
                  std::size_t rows, std::size_t cols);
void outer_acc(double* dW, const double* u, const double* x,
               std::size_t rows, std::size_t cols);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void relu(const double* x, double* y, std::size_t n);
void relu_backward(const double* pre, double* g, std::size_t n);
void adam_update(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double b1, double b2, double eps,
                 double bc1, double bc2);
void lerp(double* t, const double* s, double coeff, std::size_t n);
} // namespace avx2
#endif

} // namespace hgr::kernels

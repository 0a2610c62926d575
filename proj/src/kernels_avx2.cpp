#include "hgr/kernels.hpp"

#if defined(HGR_HAVE_AVX2_KERNELS)

#include <cmath>
#include <immintrin.h>

// Each function carries its own target attribute so the rest of the binary
// stays plain x86-64 and runtime dispatch can fall back safely.
#define HGR_AVX2 __attribute__((target("avx2,fma")))

namespace hgr::kernels::avx2 {

namespace {

HGR_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

HGR_AVX2 inline double dot_row(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

} // namespace

HGR_AVX2 void matvec_bias(const double* W, const double* x, const double* b,
                          double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r)
    y[r] = dot_row(W + r * cols, x, cols) + b[r];
}

HGR_AVX2 void matvec_t_acc(const double* W, const double* u, double* dx,
                           std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const __m256d ur = _mm256_set1_pd(u[r]);
    const double* w = W + r * cols;
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      __m256d d = _mm256_loadu_pd(dx + c);
      d = _mm256_fmadd_pd(ur, _mm256_loadu_pd(w + c), d);
      _mm256_storeu_pd(dx + c, d);
    }
    for (; c < cols; ++c) dx[c] += u[r] * w[c];
  }
}

HGR_AVX2 void outer_acc(double* dW, const double* u, const double* x,
                        std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const __m256d ur = _mm256_set1_pd(u[r]);
    double* w = dW + r * cols;
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      __m256d d = _mm256_loadu_pd(w + c);
      d = _mm256_fmadd_pd(ur, _mm256_loadu_pd(x + c), d);
      _mm256_storeu_pd(w + c, d);
    }
    for (; c < cols; ++c) w[c] += u[r] * x[c];
  }
}

HGR_AVX2 double dot(const double* a, const double* b, std::size_t n) {
  return dot_row(a, b, n);
}

HGR_AVX2 void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

HGR_AVX2 void relu(const double* x, double* y, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

HGR_AVX2 void relu_backward(const double* pre, double* g, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(pre + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(g + i, _mm256_and_pd(_mm256_loadu_pd(g + i), mask));
  }
  for (; i < n; ++i)
    if (!(pre[i] > 0.0)) g[i] = 0.0;
}

HGR_AVX2 void adam_update(double* p, const double* g, double* m, double* v,
                          std::size_t n, double lr, double b1, double b2,
                          double eps, double bc1, double bc2) {
  const __m256d b1v = _mm256_set1_pd(b1);
  const __m256d b2v = _mm256_set1_pd(b2);
  const __m256d omb1 = _mm256_set1_pd(1.0 - b1);
  const __m256d omb2 = _mm256_set1_pd(1.0 - b2);
  const __m256d lrv = _mm256_set1_pd(lr);
  const __m256d epsv = _mm256_set1_pd(eps);
  const __m256d bc1v = _mm256_set1_pd(bc1);
  const __m256d bc2v = _mm256_set1_pd(bc2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    __m256d mv = _mm256_loadu_pd(m + i);
    __m256d vv = _mm256_loadu_pd(v + i);
    mv = _mm256_fmadd_pd(b1v, mv, _mm256_mul_pd(omb1, gv));
    vv = _mm256_fmadd_pd(b2v, vv, _mm256_mul_pd(omb2, _mm256_mul_pd(gv, gv)));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_mul_pd(mv, bc1v);
    const __m256d vhat = _mm256_mul_pd(vv, bc2v);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), epsv);
    __m256d pv = _mm256_loadu_pd(p + i);
    pv = _mm256_sub_pd(pv, _mm256_div_pd(_mm256_mul_pd(lrv, mhat), denom));
    _mm256_storeu_pd(p + i, pv);
  }
  for (; i < n; ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    const double mhat = m[i] * bc1;
    const double vhat = v[i] * bc2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

HGR_AVX2 void lerp(double* t, const double* s, double coeff, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(coeff);
  const __m256d omc = _mm256_set1_pd(1.0 - coeff);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d tv = _mm256_mul_pd(cv, _mm256_loadu_pd(t + i));
    const __m256d sv = _mm256_mul_pd(omc, _mm256_loadu_pd(s + i));
    _mm256_storeu_pd(t + i, _mm256_add_pd(tv, sv));
  }
  for (; i < n; ++i) t[i] = coeff * t[i] + (1.0 - coeff) * s[i];
}

} // namespace hgr::kernels::avx2

#endif // HGR_HAVE_AVX2_KERNELS

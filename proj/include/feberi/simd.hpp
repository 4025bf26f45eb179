// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Array kernels for the split-operator inner loops: scalar reference
// implementations plus AVX2 variants selected at runtime. The two backends
// are equivalence-tested against each other; the scalar path is the
// semantic definition.

#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace feberi::simd {

enum class Backend { scalar, avx2 };

/// Backend currently in use. Defaults to the best supported one; the
/// environment variable FEBERI_SIMD=scalar|avx2 overrides at first use.
Backend active_backend();

/// Forces a backend (primarily for equivalence tests). Throws
/// std::invalid_argument if the requested backend is unsupported on this CPU.
void set_backend(Backend b);

std::string backend_name(Backend b);

/// a[i] *= b[i] — pointwise complex multiply (kinetic phase application).
void cmul_inplace(std::complex<double>* a, const std::complex<double>* b,
                  std::size_t n);

/// a[i] *= s — uniform complex scale.
void cscale_inplace(std::complex<double>* a, std::complex<double> s,
                    std::size_t n);

/// Symmetric unitary 2×2 rotation applied pointwise to a pair of fields:
///   (f1, f2) ← (u11·f1 + u12·f2,  u12·f1 + u22·f2).
void rotate2_inplace(std::complex<double>* f1, std::complex<double>* f2,
                     const std::complex<double>* u11,
                     const std::complex<double>* u12,
                     const std::complex<double>* u22, std::size_t n);

/// Σ_i |a[i]|².
double norm_sq(const std::complex<double>* a, std::size_t n);

/// ⟨a|b⟩ = Σ_i conj(a[i])·b[i].
std::complex<double> inner_product(const std::complex<double>* a,
                                   const std::complex<double>* b,
                                   std::size_t n);

namespace detail {

struct Ops {
    void (*cmul)(std::complex<double>*, const std::complex<double>*, std::size_t);
    void (*cscale)(std::complex<double>*, std::complex<double>, std::size_t);
    void (*rotate2)(std::complex<double>*, std::complex<double>*,
                    const std::complex<double>*, const std::complex<double>*,
                    const std::complex<double>*, std::size_t);
    double (*norm_sq)(const std::complex<double>*, std::size_t);
    std::complex<double> (*inner)(const std::complex<double>*,
                                  const std::complex<double>*, std::size_t);
};

extern const Ops scalar_ops;
extern const Ops avx2_ops;     // valid only if avx2_compiled_in()
bool avx2_compiled_in();
bool avx2_supported_at_runtime();

} // namespace detail

} // namespace feberi::simd

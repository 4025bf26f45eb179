// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Thin wrapper over FFTW3: cached in-place 1-D complex transforms (optionally
// batched over several contiguous fields), a process-wide planner lock, and a
// 64-byte-aligned buffer type compatible with new-array execution.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <string>
#include <vector>

namespace feberi::fft {

/// Minimal 64-byte aligned allocator so the same FFTW plan can be executed
/// on any of our buffers (new-array execution requires matching alignment).
template <class T> struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <class U> AlignedAllocator(const AlignedAllocator<U>&) {}
    T* allocate(std::size_t n) {
        void* p = std::aligned_alloc(64, ((n * sizeof(T) + 63) / 64) * 64);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) { std::free(p); }
    template <class U> bool operator==(const AlignedAllocator<U>&) const { return true; }
};

using cvector = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

/// Executes a cached in-place transform of length n over `howmany` contiguous
/// fields starting at data (field f occupies data[f*n .. f*n+n)).
/// sign = -1: forward (e^{-i...}), sign = +1: backward (e^{+i...}).
/// Transforms are unnormalized, exactly as FFTW computes them.
void transform(std::complex<double>* data, std::size_t n, int howmany, int sign);

/// Convenience single-field helpers.
inline void forward(cvector& a) { transform(a.data(), a.size(), 1, -1); }
inline void backward(cvector& a) { transform(a.data(), a.size(), 1, +1); }

/// Backward transform scaled by 1/n (round-trips forward()).
void backward_normalized(cvector& a);

/// Loads planner wisdom from a file. Measured plans are otherwise free to
/// differ between processes (timing noise), which perturbs results at the
/// rounding level; importing the wisdom of a previous run pins the planner
/// decisions and makes re-runs bitwise identical. Returns false when the
/// file is absent or unreadable (not an error: the first run seeds it).
bool import_wisdom(const std::string& path);

/// Saves the wisdom accumulated by this process (parent directories must
/// exist). Returns false on I/O failure.
bool export_wisdom(const std::string& path);

} // namespace feberi::fft

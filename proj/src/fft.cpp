// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include "feberi/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace feberi::fft {

namespace {

// FFTW's planner is not thread-safe; executing existing plans is. Plans are
// cached per (n, howmany, sign) for the life of the process. Planning uses
// FFTW_MEASURE for the sizes that dominate runtime and a scratch buffer, so
// new-array execution on any 64-byte-aligned buffer is valid.
std::mutex planner_mutex;
std::map<std::tuple<std::size_t, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(std::size_t n, int howmany, int sign) {
    const auto key = std::make_tuple(n, howmany, sign);
    std::lock_guard<std::mutex> lock(planner_mutex);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;

    cvector scratch(n * static_cast<std::size_t>(howmany));
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    const int ni = static_cast<int>(n);
    const unsigned flags = (n >= 4096 ? FFTW_MEASURE : FFTW_ESTIMATE);
    fftw_plan plan = fftw_plan_many_dft(
        1, &ni, howmany, p, nullptr, 1, ni, p, nullptr, 1, ni,
        sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, flags);
    if (!plan) throw std::runtime_error("fft: planning failed");
    plan_cache.emplace(key, plan);
    return plan;
}

} // namespace

void transform(std::complex<double>* data, std::size_t n, int howmany, int sign) {
    if (n == 0) return;
    if (reinterpret_cast<std::uintptr_t>(data) % 64 != 0)
        throw std::invalid_argument("fft: buffer must be 64-byte aligned");
    fftw_plan plan = get_plan(n, howmany, sign);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
}

void backward_normalized(cvector& a) {
    transform(a.data(), a.size(), 1, +1);
    const double s = 1.0 / static_cast<double>(a.size());
    for (auto& v : a) v *= s;
}

bool import_wisdom(const std::string& path) {
    std::lock_guard<std::mutex> lock(planner_mutex);
    return fftw_import_wisdom_from_filename(path.c_str()) == 1;
}

bool export_wisdom(const std::string& path) {
    std::lock_guard<std::mutex> lock(planner_mutex);
    return fftw_export_wisdom_to_filename(path.c_str()) == 1;
}

} // namespace feberi::fft

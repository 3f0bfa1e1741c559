#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "cfgf/errors.hpp"

// Thin deterministic wrapper over FFTW's complex-to-real backward transform.
// Plans are FFTW_ESTIMATE (no runtime measurement, so the instruction
// sequence — and therefore floating-point rounding — is reproducible),
// cached per shape, and executed on caller buffers via the new-array
// interface. Buffers come from fftw_malloc so alignment matches the plan.

namespace cfgf {

template <typename T>
struct FftwDeleter {
    void operator()(T* p) const { fftw_free(p); }
};

template <typename T>
using fftw_buffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <typename T>
fftw_buffer<T> fftw_alloc_buffer(std::size_t count) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (!p) throw Error("fftw_malloc failed");
    return fftw_buffer<T>(p);
}

class FftPlanCache {
public:
    static FftPlanCache& instance() {
        static FftPlanCache cache;
        return cache;
    }

    // Backward c2r transform: out[x] = sum_k in[k] e^{+i k.x}, unnormalized.
    // `dims` are the logical (real-side) extents; `in` uses the half-complex
    // layout with last extent dims.back()/2 + 1. `in` is clobbered.
    void execute_c2r(const std::vector<int>& dims, std::complex<double>* in,
                     double* out) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = plans_.find(dims);
            if (it == plans_.end()) {
                std::size_t real_count = 1, cplx_count = 1;
                for (std::size_t i = 0; i < dims.size(); ++i) {
                    real_count *= static_cast<std::size_t>(dims[i]);
                    cplx_count *= static_cast<std::size_t>(
                        i + 1 == dims.size() ? dims[i] / 2 + 1 : dims[i]);
                }
                auto tmp_in = fftw_alloc_buffer<std::complex<double>>(cplx_count);
                auto tmp_out = fftw_alloc_buffer<double>(real_count);
                plan = fftw_plan_dft_c2r(static_cast<int>(dims.size()), dims.data(),
                                         reinterpret_cast<fftw_complex*>(tmp_in.get()),
                                         tmp_out.get(), FFTW_ESTIMATE);
                if (!plan) throw Error("fftw_plan_dft_c2r failed");
                plans_.emplace(dims, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in), out);
    }

    // Forward r2c transform: out[k] = sum_x in[x] e^{-i k.x}, unnormalized.
    // Same layout conventions as execute_c2r; `in` is preserved (out-of-place
    // forward transforms do not clobber their input).
    void execute_r2c(const std::vector<int>& dims, double* in,
                     std::complex<double>* out) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = r2c_plans_.find(dims);
            if (it == r2c_plans_.end()) {
                std::size_t real_count = 1, cplx_count = 1;
                for (std::size_t i = 0; i < dims.size(); ++i) {
                    real_count *= static_cast<std::size_t>(dims[i]);
                    cplx_count *= static_cast<std::size_t>(
                        i + 1 == dims.size() ? dims[i] / 2 + 1 : dims[i]);
                }
                auto tmp_in = fftw_alloc_buffer<double>(real_count);
                auto tmp_out = fftw_alloc_buffer<std::complex<double>>(cplx_count);
                plan = fftw_plan_dft_r2c(static_cast<int>(dims.size()), dims.data(),
                                         tmp_in.get(),
                                         reinterpret_cast<fftw_complex*>(tmp_out.get()),
                                         FFTW_ESTIMATE);
                if (!plan) throw Error("fftw_plan_dft_r2c failed");
                r2c_plans_.emplace(dims, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft_r2c(plan, in, reinterpret_cast<fftw_complex*>(out));
    }

    FftPlanCache(const FftPlanCache&) = delete;
    FftPlanCache& operator=(const FftPlanCache&) = delete;

private:
    FftPlanCache() = default;
    ~FftPlanCache() {
        for (auto& [dims, plan] : plans_) fftw_destroy_plan(plan);
        for (auto& [dims, plan] : r2c_plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::vector<int>, fftw_plan> plans_;
    std::map<std::vector<int>, fftw_plan> r2c_plans_;
};

}  // namespace cfgf

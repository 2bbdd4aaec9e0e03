#include "virasoro/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace vir::fft {
namespace {

// FFTW's planner is not thread-safe; plans are created once per size under a
// lock and then executed through the thread-safe new-array interface.
struct PlanPair {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.r2c);
            fftw_destroy_plan(p.c2r);
        }
    }

    const PlanPair& get(std::size_t n) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;

        const int ni = static_cast<int>(n);
        double* real = fftw_alloc_real(n);
        fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        PlanPair p;
        p.r2c = fftw_plan_dft_r2c_1d(ni, real, cplx, flags);
        p.c2r = fftw_plan_dft_c2r_1d(ni, cplx, real, flags);
        fftw_free(cplx);
        fftw_free(real);
        if (p.r2c == nullptr || p.c2r == nullptr) throw std::runtime_error("fftw planning failed");
        return plans_.emplace(n, p).first->second;
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

Spectrum forward(std::span<const double> values) {
    const std::size_t n = values.size();
    const PlanPair& p = cache().get(n);
    std::vector<double> in(values.begin(), values.end());
    Spectrum out(n / 2 + 1);
    fftw_execute_dft_r2c(p.r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> inverse(const Spectrum& coeffs, std::size_t n) {
    if (coeffs.size() != n / 2 + 1) throw std::invalid_argument("fft::inverse: spectrum length mismatch");
    const PlanPair& p = cache().get(n);
    Spectrum in = coeffs;  // c2r overwrites its input
    std::vector<double> out(n);
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
    const double scale = 1.0 / static_cast<double>(n);
    std::transform(out.begin(), out.end(), out.begin(), [scale](double v) { return v * scale; });
    return out;
}

}  // namespace vir::fft

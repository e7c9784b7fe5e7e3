#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace stable_lab::fft {
namespace {

enum class Kind { r2c, c2r, c2c_backward };

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> allocate(std::size_t count) {
    return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1))));
}

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(Kind kind, std::size_t n) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(kind, n);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const int size = static_cast<int>(n);
        fftw_plan plan = nullptr;
        switch (kind) {
            case Kind::r2c: {
                auto in = allocate<double>(n);
                auto out = allocate<fftw_complex>(n / 2 + 1);
                plan = fftw_plan_dft_r2c_1d(size, in.get(), out.get(), FFTW_ESTIMATE);
                break;
            }
            case Kind::c2r: {
                auto in = allocate<fftw_complex>(n / 2 + 1);
                auto out = allocate<double>(n);
                plan = fftw_plan_dft_c2r_1d(size, in.get(), out.get(), FFTW_ESTIMATE);
                break;
            }
            case Kind::c2c_backward: {
                auto in = allocate<fftw_complex>(n);
                auto out = allocate<fftw_complex>(n);
                plan = fftw_plan_dft_1d(size, in.get(), out.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
                break;
            }
        }
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<Kind, std::size_t>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

}  // namespace

std::vector<Complex> forward_real(std::span<const double> in, std::size_t n) {
    auto buf = allocate<double>(n);
    std::fill(buf.get(), buf.get() + n, 0.0);
    std::copy_n(in.begin(), std::min(in.size(), n), buf.get());
    auto out = allocate<fftw_complex>(n / 2 + 1);
    fftw_execute_dft_r2c(cache().get(Kind::r2c, n), buf.get(), out.get());
    std::vector<Complex> result(n / 2 + 1);
    for (std::size_t k = 0; k < result.size(); ++k) result[k] = {out[k][0], out[k][1]};
    return result;
}

std::vector<double> inverse_real(std::span<const Complex> spectrum, std::size_t n) {
    auto in = allocate<fftw_complex>(n / 2 + 1);
    for (std::size_t k = 0; k < n / 2 + 1; ++k) {
        in[k][0] = spectrum[k].real();
        in[k][1] = spectrum[k].imag();
    }
    auto out = allocate<double>(n);
    // c2r destroys its input; `in` is a private copy.
    fftw_execute_dft_c2r(cache().get(Kind::c2r, n), in.get(), out.get());
    return std::vector<double>(out.get(), out.get() + n);
}

std::vector<Complex> backward_complex(std::span<const Complex> input) {
    const std::size_t n = input.size();
    auto in = allocate<fftw_complex>(n);
    for (std::size_t k = 0; k < n; ++k) {
        in[k][0] = input[k].real();
        in[k][1] = input[k].imag();
    }
    auto out = allocate<fftw_complex>(n);
    fftw_execute_dft(cache().get(Kind::c2c_backward, n), in.get(), out.get());
    std::vector<Complex> result(n);
    for (std::size_t k = 0; k < n; ++k) result[k] = {out[k][0], out[k][1]};
    return result;
}

}  // namespace stable_lab::fft

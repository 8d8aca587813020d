#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace modlab::detail {
namespace {

// Planner calls into FFTW are not thread-safe; executing an existing plan on
// new arrays is. Plans are built once per shape and kept for the process.
class PlanCache {
public:
    fftw_plan get(std::size_t n0, std::size_t n1, int sign) {
        const auto key = std::make_tuple(n0, n1, sign);
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        const std::size_t total = n1 == 0 ? n0 : n0 * n1;
        std::vector<std::complex<double>> scratch(total);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = n1 == 0
            ? fftw_plan_dft_1d(static_cast<int>(n0), buf, buf, sign, flags)
            : fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), buf, buf, sign, flags);
        if (plan == nullptr) throw std::runtime_error("fftw planner failed");
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

void run(std::span<std::complex<double>> data, std::size_t n0, std::size_t n1, int sign) {
    if (data.empty()) return;
    fftw_plan plan = cache().get(n0, n1, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void fft_forward(std::span<std::complex<double>> data) { run(data, data.size(), 0, FFTW_FORWARD); }
void fft_backward(std::span<std::complex<double>> data) { run(data, data.size(), 0, FFTW_BACKWARD); }

void fft2_forward(std::span<std::complex<double>> data, std::size_t n0, std::size_t n1) {
    run(data, n0, n1, FFTW_FORWARD);
}
void fft2_backward(std::span<std::complex<double>> data, std::size_t n0, std::size_t n1) {
    run(data, n0, n1, FFTW_BACKWARD);
}

}  // namespace modlab::detail

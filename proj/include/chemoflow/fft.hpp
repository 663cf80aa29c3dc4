#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "chemoflow/grid.hpp"

namespace chemoflow::detail {

// In-place complex transform plans for one (dim, N) pair. Planning is
// serialized through a global mutex; execution via the new-array interface
// is thread-safe.
class FftPlan {
public:
    FftPlan(int dim, int points) {
        std::vector<int> shape(static_cast<std::size_t>(dim), points);
        std::size_t total = 1;
        for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(points);
        auto* scratch = fftw_alloc_complex(total);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward_ = fftw_plan_dft(dim, shape.data(), scratch, scratch, FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft(dim, shape.data(), scratch, scratch, FFTW_BACKWARD, flags);
        fftw_free(scratch);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    void forward(std::vector<Complex>& data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(forward_, p, p);
    }
    void backward(std::vector<Complex>& data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(backward_, p, p);
    }

private:
    fftw_plan forward_{};
    fftw_plan backward_{};
};

inline std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

inline const FftPlan& plan_for(const Grid& g) {
    static std::map<std::pair<int, int>, std::unique_ptr<FftPlan>> cache;
    std::lock_guard lock(plan_mutex());
    auto& slot = cache[{g.dim, g.points}];
    if (!slot) slot = std::make_unique<FftPlan>(g.dim, g.points);
    return *slot;
}

}  // namespace chemoflow::detail

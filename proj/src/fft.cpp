#include "afc/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace afc::fft {
namespace {

struct AlignedBuffer {
    explicit AlignedBuffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (!data) throw std::bad_alloc();
    }
    ~AlignedBuffer() { fftw_free(data); }
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;

    fftw_complex* data;
};

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    // In-place plan usable with fftw_execute_dft on any fftw_malloc'd array.
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        AlignedBuffer scratch(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch.data, scratch.data,
                                          sign, FFTW_ESTIMATE);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

std::vector<cplx> transform(std::span<const cplx> x, int sign) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    fftw_plan plan = cache().get(n, sign);
    AlignedBuffer buf(n);
    auto* c = reinterpret_cast<cplx*>(buf.data);
    std::copy(x.begin(), x.end(), c);
    fftw_execute_dft(plan, buf.data, buf.data);
    return std::vector<cplx>(c, c + n);
}

} // namespace

std::vector<cplx> forward(std::span<const cplx> x) { return transform(x, FFTW_FORWARD); }
std::vector<cplx> backward(std::span<const cplx> x) { return transform(x, FFTW_BACKWARD); }

} // namespace afc::fft

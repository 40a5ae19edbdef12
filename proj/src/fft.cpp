#include "fdss/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace fdss::fft {
namespace {

struct PlanKey {
    int size;
    int sign;
    bool in_place;
    bool operator<(const PlanKey& o) const {
        return std::tie(size, sign, in_place) < std::tie(o.size, o.sign, o.in_place);
    }
};

// Owns every plan. The FFTW planner is not thread-safe, so creation is
// serialized; fftw_execute_dft on an existing plan may run concurrently.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(const PlanKey& key) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* a = fftw_alloc_complex(static_cast<std::size_t>(key.size));
        auto* b = key.in_place ? a : fftw_alloc_complex(static_cast<std::size_t>(key.size));
        fftw_plan plan = fftw_plan_dft_1d(key.size, a, b, key.sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (b != a) fftw_free(b);
        fftw_free(a);
        if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

fftw_plan plan_for(int size, int sign, bool in_place) {
    // Per-thread memo avoids taking the cache lock in hot loops.
    thread_local std::map<PlanKey, fftw_plan> local;
    const PlanKey key{size, sign, in_place};
    if (auto it = local.find(key); it != local.end()) return it->second;
    fftw_plan plan = cache().get(key);
    local.emplace(key, plan);
    return plan;
}

void execute(std::span<const cplx> in, std::span<cplx> out, int sign) {
    if (in.size() != out.size()) throw std::invalid_argument("fft: input and output lengths differ");
    if (in.empty()) return;
    const bool in_place = static_cast<const void*>(in.data()) == static_cast<const void*>(out.data());
    fftw_plan plan = plan_for(static_cast<int>(in.size()), sign, in_place);
    // c2c out-of-place plans preserve their input.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plan, src, dst);
}

}  // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) { execute(in, out, FFTW_FORWARD); }
void inverse(std::span<const cplx> in, std::span<cplx> out) { execute(in, out, FFTW_BACKWARD); }

}  // namespace fdss::fft

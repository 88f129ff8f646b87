#include "fft.hpp"

#include "indexing.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace weylab::detail {

namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, unsigned, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& kv : plans) fftw_destroy_plan(kv.second);
    }

    fftw_plan get(std::complex<double>* data, int D, int n, unsigned mask, int sign) {
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(D, n, mask, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        std::vector<fftw_iodim> dims, howmany;
        for (int a = 0; a < D; ++a) {
            const int stride = static_cast<int>(ipow(static_cast<std::size_t>(n), D - 1 - a));
            fftw_iodim io{n, stride, stride};
            if (mask & (1u << a))
                dims.push_back(io);
            else
                howmany.push_back(io);
        }
        auto* buf = reinterpret_cast<fftw_complex*>(data);
        // FFTW_ESTIMATE leaves the arrays untouched during planning.
        fftw_plan plan = fftw_plan_guru_dft(static_cast<int>(dims.size()), dims.data(), static_cast<int>(howmany.size()),
                                            howmany.data(), buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fftw planning failed");
        plans.emplace(key, plan);
        return plan;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

} // namespace

void centered_dft(std::complex<double>* data, int D, int n, unsigned axis_mask, int sign) {
    if (axis_mask == 0) return;
    const std::size_t total = ipow(static_cast<std::size_t>(n), D);
    int selected = 0;
    for (int a = 0; a < D; ++a)
        if (axis_mask & (1u << a)) ++selected;
    // (-1)^{n/2} per transformed axis from the centered index shift.
    const bool global_flip = ((n / 2) % 2 == 1) && (selected % 2 == 1);

    auto parity = [&](std::size_t flat) {
        int par = 0;
        for (int a = D - 1; a >= 0; --a) {
            const std::size_t digit = flat % static_cast<std::size_t>(n);
            flat /= static_cast<std::size_t>(n);
            if (axis_mask & (1u << a)) par ^= static_cast<int>(digit & 1u);
        }
        return par;
    };

    for (std::size_t i = 0; i < total; ++i)
        if (parity(i)) data[i] = -data[i];

    fftw_plan plan = cache().get(data, D, n, axis_mask, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, buf, buf);

    for (std::size_t i = 0; i < total; ++i)
        if (parity(i) ^ static_cast<int>(global_flip)) data[i] = -data[i];
}

} // namespace weylab::detail

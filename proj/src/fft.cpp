#include "vbesov/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace vbesov::fft {
namespace {

using Key = std::tuple<int, int, int>;

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan plan_for(const GridSpec& spec, int sign) {
    static std::map<Key, fftw_plan> cache;
    std::lock_guard lock(plan_mutex());
    Key key{spec.dimension, spec.points, sign};
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<cplx> a(spec.total()), b(spec.total());
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = spec.dimension == 1
                      ? fftw_plan_dft_1d(spec.points, in, out, sign, flags)
                      : fftw_plan_dft_2d(spec.points, spec.points, in, out, sign, flags);
    cache.emplace(key, p);
    return p;
}

void execute(const GridSpec& spec, const cplx* in, cplx* out, int sign) {
    fftw_plan p = plan_for(spec, sign);
    if (in == out) {
        std::vector<cplx> tmp(in, in + spec.total());
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                         reinterpret_cast<fftw_complex*>(out));
        return;
    }
    // fftw_execute_dft does not modify the input for out-of-place complex plans.
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void forward(const GridSpec& spec, const cplx* in, cplx* out) { execute(spec, in, out, FFTW_FORWARD); }
void backward(const GridSpec& spec, const cplx* in, cplx* out) { execute(spec, in, out, FFTW_BACKWARD); }

}  // namespace vbesov::fft

#pragma once

#include "vbesov/grid.hpp"

namespace vbesov::fft {

// Unnormalised DFT over the whole grid (1-D or 2-D).  Plans are cached per
// (dimension, N, direction); execution is safe to call from several threads.
void forward(const GridSpec& spec, const cplx* in, cplx* out);
void backward(const GridSpec& spec, const cplx* in, cplx* out);

}  // namespace vbesov::fft

#pragma once

#include <span>

#include "fdss/types.hpp"

namespace fdss::fft {

// Unnormalized transforms backed by FFTW. Forward uses exp(-j...), inverse
// exp(+j...); callers apply their own scaling. Plans are cached per size and
// shared, and execution is safe from concurrent threads. `in` and `out` may
// alias but must have equal length.
void forward(std::span<const cplx> in, std::span<cplx> out);
void inverse(std::span<const cplx> in, std::span<cplx> out);

}  // namespace fdss::fft

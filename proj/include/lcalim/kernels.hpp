#pragma once

// Data-parallel kernels. Each OpenMP kernel has a serial reference with the
// same signature; results are merged by index, so both return bit-identical
// output for any thread count.

#include <functional>
#include <span>
#include <vector>

#include "lcalim/verify.hpp"

namespace lcalim {

/// Worker count: the OpenMP default, capped by the LCALIM_THREADS environment
/// variable when it holds a positive integer. 1 without OpenMP.
int worker_count();

/// One row per (n, chi), grid-major: exact row FT, limit FT, and |difference|.
std::vector<FtRow> ft_table(const TriangularArraySpec& spec, const LimitLaw& law,
                            std::span<const std::int64_t> grid, std::span<const Character> chars);
std::vector<FtRow> ft_table_serial(const TriangularArraySpec& spec, const LimitLaw& law,
                                   std::span<const std::int64_t> grid,
                                   std::span<const Character> chars);

/// fn(m, out) writes `width` values for replicate m; the kernel returns the
/// per-column means over m = 0..M-1, summed in replicate order.
using ReplicateFn = std::function<void(std::int64_t m, std::span<Complex> out)>;
std::vector<Complex> replicate_means(std::int64_t M, std::size_t width, const ReplicateFn& fn);
std::vector<Complex> replicate_means_serial(std::int64_t M, std::size_t width,
                                            const ReplicateFn& fn);

}  // namespace lcalim

#include "lcalim/kernels.hpp"

#include <cstdlib>
#include <exception>
#include <string>

#ifdef LCALIM_HAVE_OPENMP
#include <omp.h>
#endif

namespace lcalim {

namespace {

FtRow ft_cell(const TriangularArraySpec& spec, const LimitLaw& law, std::int64_t n,
              const Character& chi) {
  FtRow row;
  row.n = n;
  row.chi = chi;
  row.exact = row_ft_exact(spec, n, chi);
  row.limit = limit_law_ft(law, chi);
  row.abs_err = std::abs(row.exact - row.limit);
  return row;
}

// Runs body(i) for i in [0, count) on the worker pool and rethrows the first
// exception raised by any iteration.
template <class Body>
void parallel_for(std::int64_t count, Body&& body) {
  std::exception_ptr failure;
#ifdef LCALIM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#ifdef LCALIM_HAVE_OPENMP
#pragma omp critical(lcalim_kernel_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

int worker_count() {
#ifdef LCALIM_HAVE_OPENMP
  int workers = omp_get_max_threads();
  if (const char* env = std::getenv("LCALIM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0 && cap < workers) workers = static_cast<int>(cap);
  }
  return workers;
#else
  return 1;
#endif
}

std::vector<FtRow> ft_table(const TriangularArraySpec& spec, const LimitLaw& law,
                            std::span<const std::int64_t> grid, std::span<const Character> chars) {
  const auto width = static_cast<std::int64_t>(chars.size());
  std::vector<FtRow> rows(grid.size() * chars.size());
  parallel_for(static_cast<std::int64_t>(rows.size()), [&](std::int64_t i) {
    rows[i] = ft_cell(spec, law, grid[i / width], chars[i % width]);
  });
  return rows;
}

std::vector<FtRow> ft_table_serial(const TriangularArraySpec& spec, const LimitLaw& law,
                                   std::span<const std::int64_t> grid,
                                   std::span<const Character> chars) {
  std::vector<FtRow> rows;
  rows.reserve(grid.size() * chars.size());
  for (auto n : grid)
    for (const auto& chi : chars) rows.push_back(ft_cell(spec, law, n, chi));
  return rows;
}

namespace {

std::vector<Complex> column_means(std::span<const Complex> buffer, std::int64_t M,
                                  std::size_t width) {
  std::vector<Complex> sums(width, Complex{0.0, 0.0});
  for (std::int64_t m = 0; m < M; ++m)
    for (std::size_t c = 0; c < width; ++c) sums[c] += buffer[m * width + c];
  for (auto& s : sums) s /= static_cast<double>(M);
  return sums;
}

}  // namespace

std::vector<Complex> replicate_means(std::int64_t M, std::size_t width, const ReplicateFn& fn) {
  std::vector<Complex> buffer(static_cast<std::size_t>(M) * width);
  parallel_for(M, [&](std::int64_t m) {
    fn(m, std::span<Complex>(buffer).subspan(static_cast<std::size_t>(m) * width, width));
  });
  return column_means(buffer, M, width);
}

std::vector<Complex> replicate_means_serial(std::int64_t M, std::size_t width,
                                            const ReplicateFn& fn) {
  std::vector<Complex> buffer(static_cast<std::size_t>(M) * width);
  for (std::int64_t m = 0; m < M; ++m)
    fn(m, std::span<Complex>(buffer).subspan(static_cast<std::size_t>(m) * width, width));
  return column_means(buffer, M, width);
}

}  // namespace lcalim

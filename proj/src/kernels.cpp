#include "gheat/kernels.hpp"

#include "gheat/error.hpp"

#include <cstddef>

namespace gheat {

namespace {

void step_serial(const double* u, double* out, std::ptrdiff_t n, double sigma2, double r) {
    for (std::ptrdiff_t i = 1; i < n - 1; ++i) {
        out[i] = u[i] + r * g_operator(u[i + 1] - 2.0 * u[i] + u[i - 1], sigma2);
    }
}

void step_parallel(const double* u, double* out, std::ptrdiff_t n, double sigma2, double r) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 1; i < n - 1; ++i) {
        out[i] = u[i] + r * g_operator(u[i + 1] - 2.0 * u[i] + u[i - 1], sigma2);
    }
}

}  // namespace

void gheat_step(std::span<const double> u, std::span<double> out, double sigma2, double r, Exec exec) {
    if (u.size() != out.size() || u.size() < 3) {
        throw Error(ErrorCode::InvalidGrid, "stencil needs matching buffers of at least 3 nodes");
    }
    const auto n = static_cast<std::ptrdiff_t>(u.size());
    out[0] = u[0];
    out[n - 1] = u[n - 1];
    if (exec == Exec::Serial) {
        step_serial(u.data(), out.data(), n, sigma2, r);
    } else {
        step_parallel(u.data(), out.data(), n, sigma2, r);
    }
}

}  // namespace gheat

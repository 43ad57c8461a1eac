#include "mips/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace mips {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

SpectralWorkspace::SpectralWorkspace(int dim, int n, double length)
    : dim_(dim), n_(n), length_(length) {
    require(dim == 1 || dim == 2, "SpectralWorkspace: dim must be 1 or 2");
    require(is_power_of_two(n) && n >= 4, "SpectralWorkspace: n must be a power of two >= 4");
    require(length > 0.0, "SpectralWorkspace: length must be positive");

    const int half = n / 2 + 1;
    if (dim == 1) {
        real_size_ = static_cast<std::size_t>(n);
        spec_size_ = static_cast<std::size_t>(half);
    } else {
        real_size_ = static_cast<std::size_t>(n) * n;
        spec_size_ = static_cast<std::size_t>(n) * half;
    }

    buf_real_ = fftw_alloc_real(real_size_);
    fftw_complex* cbuf = fftw_alloc_complex(spec_size_);
    buf_cplx_ = cbuf;
    require(buf_real_ != nullptr && cbuf != nullptr, "SpectralWorkspace: allocation failed");

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (dim == 1) {
            plan_fwd_ = fftw_plan_dft_r2c_1d(n, buf_real_, cbuf, FFTW_ESTIMATE);
            plan_inv_ = fftw_plan_dft_c2r_1d(n, cbuf, buf_real_, FFTW_ESTIMATE);
        } else {
            plan_fwd_ = fftw_plan_dft_r2c_2d(n, n, buf_real_, cbuf, FFTW_ESTIMATE);
            plan_inv_ = fftw_plan_dft_c2r_2d(n, n, cbuf, buf_real_, FFTW_ESTIMATE);
        }
    }
    require(plan_fwd_ != nullptr && plan_inv_ != nullptr, "SpectralWorkspace: planning failed");

    xi_sq_.resize(spec_size_);
    k_axis_[0].resize(spec_size_);
    k_axis_[1].assign(spec_size_, 0);
    const double base = kTwoPi / length;
    if (dim == 1) {
        for (int k = 0; k < half; ++k) {
            const double xi = base * k;
            xi_sq_[k] = xi * xi;
            k_axis_[0][k] = k;
        }
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const int ki = (i <= n / 2) ? i : i - n;
            for (int j = 0; j < half; ++j, ++idx) {
                const double xi0 = base * ki;
                const double xi1 = base * j;
                xi_sq_[idx] = xi0 * xi0 + xi1 * xi1;
                k_axis_[0][idx] = ki;
                k_axis_[1][idx] = j;
            }
        }
    }
}

SpectralWorkspace::~SpectralWorkspace() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(buf_real_);
    fftw_free(static_cast<fftw_complex*>(buf_cplx_));
}

void SpectralWorkspace::forward(const double* in, std::complex<double>* out) {
    for (std::size_t i = 0; i < real_size_; ++i) buf_real_[i] = in[i];
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const fftw_complex* cbuf = static_cast<fftw_complex*>(buf_cplx_);
    for (std::size_t i = 0; i < spec_size_; ++i)
        out[i] = std::complex<double>(cbuf[i][0], cbuf[i][1]);
}

void SpectralWorkspace::inverse_unnormalized(const std::complex<double>* in, double* out) {
    fftw_complex* cbuf = static_cast<fftw_complex*>(buf_cplx_);
    for (std::size_t i = 0; i < spec_size_; ++i) {
        cbuf[i][0] = in[i].real();
        cbuf[i][1] = in[i].imag();
    }
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    for (std::size_t i = 0; i < real_size_; ++i) out[i] = buf_real_[i];
}

void SpectralWorkspace::inverse(const std::complex<double>* in, double* out) {
    inverse_unnormalized(in, out);
    const double scale = 1.0 / static_cast<double>(real_size_);
    for (std::size_t i = 0; i < real_size_; ++i) out[i] *= scale;
}

void SpectralWorkspace::apply_stable_multiplier(std::complex<double>* spec, double t,
                                                double alpha) const {
    const double half_alpha = 0.5 * alpha;
    for (std::size_t i = 0; i < spec_size_; ++i) {
        if (xi_sq_[i] == 0.0) continue;
        spec[i] *= std::exp(-t * std::pow(xi_sq_[i], half_alpha));
    }
}

void SpectralWorkspace::dealias(std::complex<double>* spec) const {
    const int cut = n_ / 3;
    for (std::size_t i = 0; i < spec_size_; ++i) {
        if (std::abs(k_axis_[0][i]) > cut || std::abs(k_axis_[1][i]) > cut)
            spec[i] = 0.0;
    }
}

void SpectralWorkspace::apply_derivative(std::complex<double>* spec, int axis) const {
    require(axis >= 0 && axis < dim_, "apply_derivative: axis out of range");
    const double base = kTwoPi / length_;
    for (std::size_t i = 0; i < spec_size_; ++i) {
        const double xi = base * k_axis_[axis][i];
        spec[i] *= std::complex<double>(0.0, xi);
    }
}

} // namespace mips

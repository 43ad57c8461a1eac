#pragma once

#include <complex>
#include <vector>

#include "mips/grid.hpp"

namespace mips {

// Real-to-complex FFT workspace for periodic fields on [0,L)^d, d = 1 or 2.
// Plans are created with FFTW_ESTIMATE so repeated runs use identical
// algorithms; plan creation is serialized behind a global mutex because the
// FFTW planner is not thread safe.
class SpectralWorkspace {
  public:
    SpectralWorkspace(int dim, int n, double length);
    ~SpectralWorkspace();

    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    int dim() const { return dim_; }
    int n() const { return n_; }
    double length() const { return length_; }
    // Number of retained complex modes in the r2c layout.
    std::size_t spectrum_size() const { return spec_size_; }
    std::size_t real_size() const { return real_size_; }

    // Forward transform (no normalization, FFTW convention).
    void forward(const double* in, std::complex<double>* out);
    // Inverse transform, divides by n^d so inverse(forward(f)) == f up to
    // rounding.
    void inverse(const std::complex<double>* in, double* out);
    // Inverse transform without the 1/n^d factor, for spectra assembled
    // analytically.
    void inverse_unnormalized(const std::complex<double>* in, double* out);

    // |xi|^2 for each retained mode, xi = 2*pi*k/L with signed k.
    const std::vector<double>& xi_squared() const { return xi_sq_; }
    // Signed frequency index along each axis for each retained mode.
    const std::vector<int>& k_axis(int axis) const { return k_axis_[axis]; }

    // Multiplies spec by exp(-t*|xi|^alpha) in place.  Mode zero is fixed
    // (|xi| = 0), so total mass is untouched.
    void apply_stable_multiplier(std::complex<double>* spec, double t, double alpha) const;

    // Zeroes every mode with |k_axis| > n/3 along any axis (2/3 rule).
    void dealias(std::complex<double>* spec) const;

    // Multiplies spec by i*xi_axis in place (spectral partial derivative).
    void apply_derivative(std::complex<double>* spec, int axis) const;

  private:
    int dim_;
    int n_;
    double length_;
    std::size_t real_size_;
    std::size_t spec_size_;
    std::vector<double> xi_sq_;
    std::vector<int> k_axis_[2];
    void* plan_fwd_;
    void* plan_inv_;
    double* buf_real_;
    void* buf_cplx_;
};

} // namespace mips

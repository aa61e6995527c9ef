// Sampled intervalley coupling Delta(d) along a shuttling path.
//
// Units: positions in nm, couplings in ueV.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salz/tls.hpp"

namespace salz {

enum class Interpolation { piecewise_linear, monotone_cubic };

std::string to_string(Interpolation i);

class Landscape {
public:
    /// positions strictly increasing, at least two samples, finite couplings.
    /// Throws std::invalid_argument otherwise.
    ///
    /// The monotone cubic acts on Re and Im of Delta / u, with u the phase of
    /// the first nonzero sample, so that a global phase factor commutes with
    /// interpolation.
    Landscape(std::vector<double> positions, std::vector<cplx> couplings,
              Interpolation interpolation = Interpolation::monotone_cubic);

    const std::vector<double>& positions() const noexcept { return positions_; }
    const std::vector<cplx>& couplings() const noexcept { return couplings_; }
    Interpolation interpolation() const noexcept { return interpolation_; }
    double d_start() const noexcept { return positions_.front(); }
    double d_end() const noexcept { return positions_.back(); }
    double extent() const noexcept { return d_end() - d_start(); }

    /// Interpolated Delta(d); throws std::out_of_range outside [d_start, d_end].
    cplx coupling(double d) const;
    /// dDelta/dd of the interpolant.
    cplx derivative(double d) const;
    /// Valley splitting |Delta(d)|.
    double splitting(double d) const;
    /// d arg(Delta)/dd = Im(conj(Delta) Delta') / |Delta|^2; infinite at zeros.
    double phase_rate(double d) const;

    /// Nearest-branch unwrapped arg(Delta) at the samples.
    std::vector<double> unwrapped_phase() const;
    /// True when adjacent samples differ in phase by more than pi/2.
    bool phase_undersampled() const;

    /// Same landscape multiplied by exp(i phase).
    Landscape with_global_phase(double phase) const;
    Landscape with_interpolation(Interpolation interpolation) const;

    bool operator==(const Landscape& o) const {
        return positions_ == o.positions_ && couplings_ == o.couplings_ && interpolation_ == o.interpolation_;
    }

private:
    std::size_t segment(double d) const;
    void build_slopes();

    std::vector<double> positions_;
    std::vector<cplx> couplings_;
    Interpolation interpolation_;
    // Hermite knot derivatives, monotone cubic only.
    std::vector<cplx> slopes_;
};

struct SynthParams {
    std::uint64_t seed{0};
    int n_modes{32};
    double corr_length{10.0};    // nm
    double mean_coupling{1.0};   // RMS |Delta|, ueV
    double extent{200.0};        // nm
    int samples_per_corr{20};

    bool operator==(const SynthParams&) const = default;
};

/// Delta(d) = sum_k c_k exp(i k_k d) with complex Gaussian c_k of RMS
/// mean_coupling / sqrt(n_modes) and Gaussian wavenumbers of width
/// 1 / corr_length, drawn from mt19937_64(seed). Normal deviates use a
/// Box-Muller transform on the raw engine output, so the result is the same
/// on every conforming platform.
Landscape synth_landscape(const SynthParams& params);

/// Landscape CSV: header `d_nm,re_delta_ueV,im_delta_ueV`.
inline constexpr const char* kLandscapeCsvHeader = "d_nm,re_delta_ueV,im_delta_ueV";

std::string landscape_to_csv(const Landscape& land);
/// Throws ParseError with the 1-based line number of the first bad line.
Landscape landscape_from_csv(const std::string& text, Interpolation interpolation = Interpolation::monotone_cubic);

}  // namespace salz

// Interpolation, synthesis and CSV ingestion of coupling landscapes.

#include "salz/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "salz/errors.hpp"
#include "salz/io.hpp"

namespace salz {

std::string to_string(Interpolation i) {
    return i == Interpolation::piecewise_linear ? "piecewise-linear" : "monotone-cubic";
}

Landscape::Landscape(std::vector<double> positions, std::vector<cplx> couplings, Interpolation interpolation)
    : positions_(std::move(positions)), couplings_(std::move(couplings)), interpolation_(interpolation) {
    if (positions_.size() < 2) throw std::invalid_argument("Landscape: need at least two samples");
    if (positions_.size() != couplings_.size())
        throw std::invalid_argument("Landscape: positions and couplings differ in length");
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        if (!std::isfinite(positions_[i])) throw std::invalid_argument("Landscape: non-finite position");
        if (!std::isfinite(couplings_[i].real()) || !std::isfinite(couplings_[i].imag()))
            throw std::invalid_argument("Landscape: non-finite coupling");
        if (i > 0 && !(positions_[i] > positions_[i - 1]))
            throw std::invalid_argument("Landscape: positions must be strictly increasing");
    }
    build_slopes();
}

namespace {

// Shape-preserving endpoint derivative (three-point, clipped).
double edge_slope(double h0, double h1, double m0, double m1) {
    double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (std::signbit(d) != std::signbit(m0) || d == 0.0 || m0 == 0.0) return 0.0;
    if (std::signbit(m0) != std::signbit(m1) && std::abs(d) > 3.0 * std::abs(m0)) d = 3.0 * m0;
    return d;
}

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), del(n - 1), m(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        del[k] = (y[k + 1] - y[k]) / h[k];
    }
    if (n == 2) return {del[0], del[0]};
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (del[k - 1] * del[k] <= 0.0) continue;
        const double w1 = 2.0 * h[k] + h[k - 1], w2 = h[k] + 2.0 * h[k - 1];
        m[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
    }
    m[0] = edge_slope(h[0], h[1], del[0], del[1]);
    m[n - 1] = edge_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    return m;
}

}  // namespace

void Landscape::build_slopes() {
    if (interpolation_ != Interpolation::monotone_cubic) return;
    cplx ref{1.0, 0.0};
    for (const cplx& c : couplings_)
        if (c != cplx{}) {
            ref = c / std::abs(c);
            break;
        }
    std::vector<double> re(couplings_.size()), im(couplings_.size());
    for (std::size_t i = 0; i < couplings_.size(); ++i) {
        const cplx c = couplings_[i] * std::conj(ref);
        re[i] = c.real();
        im[i] = c.imag();
    }
    const auto sr = pchip_slopes(positions_, re), si = pchip_slopes(positions_, im);
    slopes_.resize(couplings_.size());
    for (std::size_t i = 0; i < couplings_.size(); ++i) slopes_[i] = ref * cplx{sr[i], si[i]};
}

std::size_t Landscape::segment(double d) const {
    if (!(d >= d_start() && d <= d_end())) throw std::out_of_range("Landscape: position outside the sampled range");
    const auto it = std::upper_bound(positions_.begin(), positions_.end(), d);
    const auto idx = static_cast<std::size_t>(it - positions_.begin());
    return std::min(idx == 0 ? 0 : idx - 1, positions_.size() - 2);
}

cplx Landscape::coupling(double d) const {
    const std::size_t k = segment(d);
    const double h = positions_[k + 1] - positions_[k];
    const double s = (d - positions_[k]) / h;
    const cplx y0 = couplings_[k], y1 = couplings_[k + 1];
    if (interpolation_ == Interpolation::piecewise_linear) return y0 + s * (y1 - y0);
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const cplx m0 = slopes_[k], m1 = slopes_[k + 1];
    return h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
}

cplx Landscape::derivative(double d) const {
    const std::size_t k = segment(d);
    const double h = positions_[k + 1] - positions_[k];
    const double s = (d - positions_[k]) / h;
    const cplx y0 = couplings_[k], y1 = couplings_[k + 1];
    if (interpolation_ == Interpolation::piecewise_linear) return (y1 - y0) / h;
    const double s2 = s * s;
    const cplx m0 = slopes_[k], m1 = slopes_[k + 1];
    return ((6 * s2 - 6 * s) * (y0 - y1)) / h + (3 * s2 - 4 * s + 1) * m0 + (3 * s2 - 2 * s) * m1;
}

double Landscape::splitting(double d) const { return std::abs(coupling(d)); }

double Landscape::phase_rate(double d) const {
    const cplx c = coupling(d);
    const double m2 = std::norm(c);
    if (m2 == 0.0) return std::numeric_limits<double>::infinity();
    return (std::conj(c) * derivative(d)).imag() / m2;
}

std::vector<double> Landscape::unwrapped_phase() const {
    std::vector<double> out(couplings_.size());
    out[0] = std::arg(couplings_[0]);
    for (std::size_t i = 1; i < couplings_.size(); ++i) {
        // Nearest branch: the step is the principal argument of the ratio.
        const cplx a = couplings_[i - 1], b = couplings_[i];
        const double step = (a == cplx{} || b == cplx{}) ? 0.0 : std::arg(b * std::conj(a));
        out[i] = out[i - 1] + step;
    }
    return out;
}

bool Landscape::phase_undersampled() const {
    for (std::size_t i = 1; i < couplings_.size(); ++i) {
        const cplx a = couplings_[i - 1], b = couplings_[i];
        if (a == cplx{} || b == cplx{}) continue;
        if (std::abs(std::arg(b * std::conj(a))) > std::numbers::pi / 2) return true;
    }
    return false;
}

Landscape Landscape::with_global_phase(double phase) const {
    const cplx rot = std::polar(1.0, phase);
    std::vector<cplx> c(couplings_);
    for (auto& v : c) v *= rot;
    return Landscape(positions_, std::move(c), interpolation_);
}

Landscape Landscape::with_interpolation(Interpolation interpolation) const {
    return Landscape(positions_, couplings_, interpolation);
}

namespace {

class Normal {
public:
    explicit Normal(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        // 53-bit uniforms; u1 in (0, 1] keeps the log finite.
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace

Landscape synth_landscape(const SynthParams& sp) {
    if (sp.n_modes < 1) throw std::invalid_argument("synth_landscape: n_modes must be >= 1");
    if (!(sp.extent > 0.0) || !(sp.corr_length > 0.0) || !(sp.mean_coupling > 0.0) || sp.samples_per_corr < 1)
        throw std::invalid_argument("synth_landscape: extent, corr_length, mean_coupling and sampling must be positive");

    Normal normal(sp.seed);
    const double amp = sp.mean_coupling / std::sqrt(2.0 * sp.n_modes);
    std::vector<double> k(sp.n_modes);
    std::vector<cplx> c(sp.n_modes);
    for (int j = 0; j < sp.n_modes; ++j) {
        k[j] = normal() / sp.corr_length;
        const double re = normal(), im = normal();
        c[j] = {amp * re, amp * im};
    }

    const double spacing = sp.corr_length / sp.samples_per_corr;
    const auto n = static_cast<std::size_t>(std::ceil(sp.extent / spacing)) + 1;
    std::vector<double> pos(n);
    std::vector<cplx> delta(n);
    for (std::size_t i = 0; i < n; ++i) {
        pos[i] = i + 1 == n ? sp.extent : sp.extent * static_cast<double>(i) / static_cast<double>(n - 1);
        cplx sum{};
        for (int j = 0; j < sp.n_modes; ++j) sum += c[j] * std::polar(1.0, k[j] * pos[i]);
        delta[i] = sum;
    }
    return Landscape(std::move(pos), std::move(delta));
}

std::string landscape_to_csv(const Landscape& land) {
    std::string out = std::string(kLandscapeCsvHeader) + "\n";
    for (std::size_t i = 0; i < land.positions().size(); ++i) {
        out += format_double(land.positions()[i]);
        out += ',';
        out += format_double(land.couplings()[i].real());
        out += ',';
        out += format_double(land.couplings()[i].imag());
        out += '\n';
    }
    return out;
}

Landscape landscape_from_csv(const std::string& text, Interpolation interpolation) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> pos;
    std::vector<cplx> delta;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!header) {
            if (line != kLandscapeCsvHeader)
                throw ParseError(std::string("expected header '") + kLandscapeCsvHeader + "'", lineno);
            header = true;
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw ParseError("expected 3 fields, got " + std::to_string(fields.size()), lineno);
        const auto d = parse_double(fields[0]), re = parse_double(fields[1]), im = parse_double(fields[2]);
        if (!d || !re || !im) throw ParseError("malformed number", lineno);
        if (!pos.empty() && !(*d > pos.back())) throw ParseError("positions must be strictly increasing", lineno);
        pos.push_back(*d);
        delta.emplace_back(*re, *im);
    }
    if (!header) throw ParseError("empty landscape file", lineno ? 1 : 0);
    if (pos.size() < 2) throw ParseError("need at least two samples", lineno);
    try {
        return Landscape(std::move(pos), std::move(delta), interpolation);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
}

}  // namespace salz

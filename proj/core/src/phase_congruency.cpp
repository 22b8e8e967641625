#include "phase_congruency.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "dseqmark/error.hpp"

namespace dseqmark::detail {

namespace {

using cplx = std::complex<double>;
constexpr double kEpsilon = 1e-4;

// The FFTW planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Fft2d {
 public:
  Fft2d(int rows, int cols) : rows_(rows), cols_(cols), buffer_(static_cast<std::size_t>(rows) * cols) {
    std::lock_guard lock(planner_mutex());
    auto* data = reinterpret_cast<fftw_complex*>(buffer_.data());
    forward_ = fftw_plan_dft_2d(rows, cols, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_2d(rows, cols, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!forward_ || !inverse_) throw Error(ErrorCode::Internal, "FFTW planning failed");
  }
  ~Fft2d() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  std::vector<cplx>& buffer() noexcept { return buffer_; }
  void forward() { fftw_execute(forward_); }
  /// Normalized inverse.
  void inverse() {
    fftw_execute(inverse_);
    const double scale = 1.0 / static_cast<double>(buffer_.size());
    for (auto& v : buffer_) v *= scale;
  }

 private:
  int rows_;
  int cols_;
  std::vector<cplx> buffer_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

PhaseCongruencyResult compute_phase_congruency(const GrayImage& img, const PhaseCongruencyParams& params) {
  const int w = img.width();
  const int h = img.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  // Mirror padding makes the periodic extension continuous, so the image
  // border does not show up as a step.
  const int cols = 2 * w;
  const int rows = 2 * h;
  const std::size_t padded = static_cast<std::size_t>(rows) * cols;

  Fft2d fft(rows, cols);
  auto& buf = fft.buffer();
  for (int y = 0; y < rows; ++y) {
    const int sy = y < h ? y : rows - 1 - y;
    for (int x = 0; x < cols; ++x) {
      const int sx = x < w ? x : cols - 1 - x;
      buf[static_cast<std::size_t>(y) * cols + x] = cplx(img.at(sx, sy), 0.0);
    }
  }
  fft.forward();
  const std::vector<cplx> spectrum = buf;

  // Frequency grid in cycles/pixel, theta measured with y pointing up.
  std::vector<double> radius(padded);
  std::vector<double> sin_theta(padded);
  std::vector<double> cos_theta(padded);
  for (int y = 0; y < rows; ++y) {
    const double fy = (y < (rows + 1) / 2 ? y : y - rows) / static_cast<double>(rows);
    for (int x = 0; x < cols; ++x) {
      const double fx = (x < (cols + 1) / 2 ? x : x - cols) / static_cast<double>(cols);
      const std::size_t i = static_cast<std::size_t>(y) * cols + x;
      radius[i] = std::hypot(fx, fy);
      const double theta = std::atan2(-fy, fx);
      sin_theta[i] = std::sin(theta);
      cos_theta[i] = std::cos(theta);
    }
  }
  radius[0] = 1.0;  // avoid log(0); the DC term is zeroed below

  const int nscale = params.scales;
  const int norient = params.orientations;
  std::vector<std::vector<double>> log_gabor(static_cast<std::size_t>(nscale), std::vector<double>(padded));
  const double log_sigma_sq = 2.0 * std::pow(std::log(params.sigma_on_f), 2);
  for (int s = 0; s < nscale; ++s) {
    const double wavelength = params.min_wavelength * std::pow(params.mult, s);
    const double fo = 1.0 / wavelength;
    auto& lg = log_gabor[static_cast<std::size_t>(s)];
    for (std::size_t i = 0; i < padded; ++i) {
      const double lowpass = 1.0 / (1.0 + std::pow(radius[i] / 0.45, 30));
      lg[i] = std::exp(-std::pow(std::log(radius[i] / fo), 2) / log_sigma_sq) * lowpass;
    }
    lg[0] = 0.0;
  }

  std::vector<double> covx2(n, 0.0);
  std::vector<double> covy2(n, 0.0);
  std::vector<double> covxy(n, 0.0);

  std::vector<double> spread(padded);
  std::vector<std::vector<cplx>> responses(static_cast<std::size_t>(nscale), std::vector<cplx>(n));
  std::vector<double> sum_an(n);
  std::vector<double> max_an(n);
  std::vector<double> an0(n);

  for (int o = 0; o < norient; ++o) {
    const double angle = o * std::numbers::pi / norient;
    const double ca = std::cos(angle);
    const double sa = std::sin(angle);
    for (std::size_t i = 0; i < padded; ++i) {
      const double ds = sin_theta[i] * ca - cos_theta[i] * sa;
      const double dc = cos_theta[i] * ca + sin_theta[i] * sa;
      const double dtheta = std::min(std::abs(std::atan2(ds, dc)) * norient / 2.0, std::numbers::pi);
      spread[i] = (std::cos(dtheta) + 1.0) / 2.0;
    }

    std::fill(sum_an.begin(), sum_an.end(), 0.0);
    std::fill(max_an.begin(), max_an.end(), 0.0);
    for (int s = 0; s < nscale; ++s) {
      const auto& lg = log_gabor[static_cast<std::size_t>(s)];
      for (std::size_t i = 0; i < padded; ++i) buf[i] = spectrum[i] * (lg[i] * spread[i]);
      fft.inverse();
      auto& eo = responses[static_cast<std::size_t>(s)];
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          eo[i] = buf[static_cast<std::size_t>(y) * cols + x];
          const double an = std::abs(eo[i]);
          sum_an[i] += an;
          max_an[i] = s == 0 ? an : std::max(max_an[i], an);
          if (s == 0) an0[i] = an;
        }
      }
    }

    // Noise amplitude from the smallest scale's Rayleigh-distributed median.
    const double tau = median_of(an0) / std::sqrt(std::log(4.0));
    const double inv_mult = 1.0 / params.mult;
    const double total_tau = tau * (1.0 - std::pow(inv_mult, nscale)) / (1.0 - inv_mult);
    const double noise_mean = total_tau * std::sqrt(std::numbers::pi / 2.0);
    const double noise_sigma = total_tau * std::sqrt((4.0 - std::numbers::pi) / 2.0);
    const double threshold = noise_mean + params.noise_k * noise_sigma;

    for (std::size_t i = 0; i < n; ++i) {
      double sum_e = 0.0;
      double sum_o = 0.0;
      for (int s = 0; s < nscale; ++s) {
        sum_e += responses[static_cast<std::size_t>(s)][i].real();
        sum_o += responses[static_cast<std::size_t>(s)][i].imag();
      }
      const double x_energy = std::hypot(sum_e, sum_o) + kEpsilon;
      const double mean_e = sum_e / x_energy;
      const double mean_o = sum_o / x_energy;
      double energy = 0.0;
      for (int s = 0; s < nscale; ++s) {
        const double e = responses[static_cast<std::size_t>(s)][i].real();
        const double od = responses[static_cast<std::size_t>(s)][i].imag();
        energy += e * mean_e + od * mean_o - std::abs(e * mean_o - od * mean_e);
      }
      energy = std::max(energy - threshold, 0.0);
      const double width = (sum_an[i] / (max_an[i] + kEpsilon) - 1.0) / (nscale - 1);
      const double weight = 1.0 / (1.0 + std::exp((params.cutoff - width) * params.gain));
      const double pc = weight * energy / (sum_an[i] + kEpsilon);
      const double px = pc * ca;
      const double py = pc * sa;
      covx2[i] += px * px;
      covy2[i] += py * py;
      covxy[i] += px * py;
    }
  }

  PhaseCongruencyResult result;
  result.moment.resize(n);
  result.orientation.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = covx2[i] / (norient / 2.0);
    const double b = covy2[i] / (norient / 2.0);
    const double c = 4.0 * covxy[i] / norient;
    const double denom = std::sqrt(c * c + (a - b) * (a - b)) + 1e-12;
    result.moment[i] = (a + b + denom) / 2.0;
    result.orientation[i] = std::atan2(c, a - b) / 2.0;
  }
  return result;
}

}  // namespace dseqmark::detail

namespace dseqmark {

std::vector<double> phase_congruency_moment(const GrayImage& img, const PhaseCongruencyParams& params) {
  return detail::compute_phase_congruency(img, params).moment;
}

}  // namespace dseqmark

#pragma once

#include <vector>

#include "dseqmark/features.hpp"

namespace dseqmark::detail {

struct PhaseCongruencyResult {
  std::vector<double> moment;       // maximum moment of phase congruency covariance
  std::vector<double> orientation;  // feature normal, radians, x right / y up
};

PhaseCongruencyResult compute_phase_congruency(const GrayImage& img, const PhaseCongruencyParams& params);

}  // namespace dseqmark::detail

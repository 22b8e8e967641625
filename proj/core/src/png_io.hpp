#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "dseqmark/imaging.hpp"

namespace dseqmark::detail {

GrayImage decode_png(std::span<const std::uint8_t> bytes);
std::string encode_png(const GrayImage& img);

}  // namespace dseqmark::detail

#pragma once

#include "CLI11.hpp"

namespace dseqmark::cli {

/// Adds embed, extract, attack, sweep, evaluate, presence and features.
void register_commands(CLI::App& app);

}  // namespace dseqmark::cli

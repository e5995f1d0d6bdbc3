#pragma once

#include <cstdint>
#include <string>

#include "gphl/marginal.hpp"
#include "gphl/wavefunction.hpp"

namespace gphl {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary wavefunction container: 4-byte magic "GPHL"; version, N, d and
// points_per_axis as little-endian u32; box_length and time as little-endian
// f64; then the amplitudes as little-endian interleaved complex64 pairs
// (float re, float im) in the state's row-major particle-then-axis order.
void save_checkpoint(const std::string& path, const WaveFunction& psi);
WaveFunction load_checkpoint(const std::string& path);

// CSV export of a marginal kernel, one row per flattened entry: index, re, im.
// A nonempty comment is written first as a "# ..." line (the runner stamps the
// config hash there).
void export_marginal_csv(const std::string& path, const MarginalKernel& gamma,
                         const std::string& comment = "");

}  // namespace gphl

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "collarwave/types.hpp"

namespace collarwave {

// Block-structured binary log, unpacked 16-bit mode only.
//
// Header block (1024 bytes):
//   [0..2)    tag "MD"
//   [2..4)    u16 LE packet length, always 1020
//   [4..8)    u32 LE nominal sample rate in millihertz
//   [8..40)   device id, NUL-padded ASCII
//   [40..1024) zero padding
//
// Data block (512 bytes, tag "AX"):
//   [0..2)    tag "AX"
//   [2..4)    u16 LE packet length, always 508
//   [4..12)   i64 LE block timestamp in ms (time of the first sample)
//   [12..14)  u16 LE sample count n, 1..80
//   [14..14+6n) n little-endian i16 triplets (x, y, z), 1/256 g per unit
//   [..510)   zero padding
//   [510..512) u16 LE checksum; the 16-bit word-wise LE sum of the whole
//              block must be zero mod 2^16
//
// Per-sample timestamps are interpolated uniformly across the block at the
// nominal rate: t_i = block_t + round(i * 1000 / rate_hz).

inline constexpr std::size_t kCwaHeaderSize = 1024;
inline constexpr std::size_t kCwaBlockSize = 512;
inline constexpr std::size_t kCwaMaxSamplesPerBlock = 80;
inline constexpr double kCwaGPerUnit = 1.0 / 256.0;

struct CwaParseResult {
  RawRecording recording;
  // One entry per skipped/ignored block (checksum mismatch, bad tag, ...).
  std::vector<std::string> warnings;
};

// Throws Error(malformed_header) on a bad header, Error(empty_recording)
// if no data block decodes. Corrupt data blocks are skipped with a warning.
CwaParseResult parse_cwa(std::span<const std::uint8_t> bytes);

// Fixture writer. Packs samples into blocks of up to 80; accelerations are
// quantized to 1/256 g (max error one half-step, 1/512 g). Timestamps
// round-trip exactly when the recording lies on the uniform grid implied by
// its nominal rate, which holds for everything this writer is fed in tests.
std::vector<std::uint8_t> write_cwa(const RawRecording& rec);

}  // namespace collarwave

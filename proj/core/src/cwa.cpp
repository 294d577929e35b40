#include "collarwave/cwa.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "collarwave/error.hpp"

namespace collarwave {

namespace {

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::int64_t read_i64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return static_cast<std::int64_t>(v);
}

void write_u16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v & 0xff);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}

void write_u32(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>((v >> (8 * i)) & 0xff);
}

void write_i64(std::uint8_t* p, std::int64_t v) {
  auto u = static_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>((u >> (8 * i)) & 0xff);
}

// 16-bit word-wise LE sum over a whole block.
std::uint16_t block_word_sum(const std::uint8_t* p) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i < kCwaBlockSize; i += 2) sum += read_u16(p + i);
  return static_cast<std::uint16_t>(sum & 0xffff);
}

std::int64_t sample_offset_ms(std::size_t index, double rate_hz) {
  return static_cast<std::int64_t>(std::llround(static_cast<double>(index) * 1000.0 / rate_hz));
}

}  // namespace

CwaParseResult parse_cwa(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kCwaHeaderSize || bytes[0] != 'M' || bytes[1] != 'D') {
    throw Error(errc::malformed_header, "missing MD header block");
  }
  if (read_u16(bytes.data() + 2) != 1020) {
    throw Error(errc::malformed_header, "bad header packet length");
  }
  const std::uint32_t rate_mhz = read_u32(bytes.data() + 4);
  if (rate_mhz == 0) {
    throw Error(errc::malformed_header, "zero nominal rate");
  }

  CwaParseResult out;
  out.recording.nominal_rate_hz = rate_mhz / 1000.0;
  const std::uint8_t* id = bytes.data() + 8;
  std::size_t id_len = 0;
  while (id_len < 32 && id[id_len] != 0) ++id_len;
  out.recording.device_id.assign(reinterpret_cast<const char*>(id), id_len);

  const double rate = out.recording.nominal_rate_hz;
  std::size_t offset = kCwaHeaderSize;
  std::size_t block_no = 0;
  while (offset < bytes.size()) {
    ++block_no;
    if (bytes.size() - offset < kCwaBlockSize) {
      out.warnings.push_back("block " + std::to_string(block_no) + ": truncated, ignored");
      break;
    }
    const std::uint8_t* b = bytes.data() + offset;
    offset += kCwaBlockSize;

    if (b[0] != 'A' || b[1] != 'X' || read_u16(b + 2) != 508) {
      out.warnings.push_back("block " + std::to_string(block_no) + ": bad tag, skipped");
      continue;
    }
    if (block_word_sum(b) != 0) {
      out.warnings.push_back("block " + std::to_string(block_no) + ": checksum mismatch, skipped");
      continue;
    }
    const std::uint16_t count = read_u16(b + 12);
    if (count == 0 || count > kCwaMaxSamplesPerBlock) {
      out.warnings.push_back("block " + std::to_string(block_no) + ": bad sample count, skipped");
      continue;
    }
    const std::int64_t block_t = read_i64(b + 4);
    for (std::uint16_t i = 0; i < count; ++i) {
      const std::uint8_t* q = b + 14 + 6 * i;
      Sample s;
      s.t_ms = block_t + sample_offset_ms(i, rate);
      s.x_g = static_cast<std::int16_t>(read_u16(q + 0)) * kCwaGPerUnit;
      s.y_g = static_cast<std::int16_t>(read_u16(q + 2)) * kCwaGPerUnit;
      s.z_g = static_cast<std::int16_t>(read_u16(q + 4)) * kCwaGPerUnit;
      out.recording.samples.push_back(s);
    }
  }

  if (out.recording.samples.empty()) {
    throw Error(errc::empty_recording, "no samples decoded");
  }
  validate_recording(out.recording);
  return out;
}

std::vector<std::uint8_t> write_cwa(const RawRecording& rec) {
  validate_recording(rec);
  const std::size_t n_blocks = (rec.samples.size() + kCwaMaxSamplesPerBlock - 1) / kCwaMaxSamplesPerBlock;
  std::vector<std::uint8_t> bytes(kCwaHeaderSize + n_blocks * kCwaBlockSize, 0);

  bytes[0] = 'M';
  bytes[1] = 'D';
  write_u16(bytes.data() + 2, 1020);
  write_u32(bytes.data() + 4,
            static_cast<std::uint32_t>(std::llround(rec.nominal_rate_hz * 1000.0)));
  const std::size_t id_len = std::min<std::size_t>(rec.device_id.size(), 31);
  std::memcpy(bytes.data() + 8, rec.device_id.data(), id_len);

  for (std::size_t blk = 0; blk < n_blocks; ++blk) {
    std::uint8_t* b = bytes.data() + kCwaHeaderSize + blk * kCwaBlockSize;
    const std::size_t first = blk * kCwaMaxSamplesPerBlock;
    const std::size_t count = std::min(kCwaMaxSamplesPerBlock, rec.samples.size() - first);

    b[0] = 'A';
    b[1] = 'X';
    write_u16(b + 2, 508);
    write_i64(b + 4, rec.samples[first].t_ms);
    write_u16(b + 12, static_cast<std::uint16_t>(count));
    for (std::size_t i = 0; i < count; ++i) {
      const Sample& s = rec.samples[first + i];
      std::uint8_t* q = b + 14 + 6 * i;
      auto quantize = [](double g) {
        long v = std::lround(g / kCwaGPerUnit);
        v = std::clamp(v, -32768L, 32767L);
        return static_cast<std::uint16_t>(static_cast<std::int16_t>(v));
      };
      write_u16(q + 0, quantize(s.x_g));
      write_u16(q + 2, quantize(s.y_g));
      write_u16(q + 4, quantize(s.z_g));
    }
    const std::uint16_t sum = block_word_sum(b);
    write_u16(b + 510, static_cast<std::uint16_t>((0x10000u - sum) & 0xffffu));
  }
  return bytes;
}

}  // namespace collarwave

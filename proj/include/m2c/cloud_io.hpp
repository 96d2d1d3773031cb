#ifndef M2C_CLOUD_IO_HPP
#define M2C_CLOUD_IO_HPP

#include <iosfwd>
#include <string>

#include "m2c/cloud.hpp"

namespace m2c {

// Canonical binary cloud file, little-endian, no padding:
//   magic "PCL3DSES" (8) | version u16 = 1 | taxonomy u8 | flags u8 |
//   point count u64 | reserved (12) | columnar blocks in column order:
//   x f64*n, y f64*n, z f64*n, r u8*n, g u8*n, b u8*n,
//   intensity f32*n, real label u8*n, pseudo label u8*n.
inline constexpr char kCloudMagic[8] = {'P', 'C', 'L', '3', 'D', 'S', 'E', 'S'};
inline constexpr std::uint16_t kCloudVersion = 1;
inline constexpr std::size_t kCloudHeaderSize = 32;

// Throws BadMagic, BadVersion, TruncatedFile, IntensityOutOfRange,
// LabelOutOfRange.
LabeledCloud read_cloud(std::istream& source);
LabeledCloud read_cloud_file(const std::string& path);

void write_cloud(const LabeledCloud& cloud, std::ostream& sink);
void write_cloud_file(const LabeledCloud& cloud, const std::string& path);

// Debug interchange: one point per line, nine whitespace-separated
// fields in column order. UNLABELED is written as 255.
LabeledCloud read_cloud_ascii(std::istream& source, TaxonomyId taxonomy);
void write_cloud_ascii(const LabeledCloud& cloud, std::ostream& sink);

} // namespace m2c

#endif

#ifndef WFSET_IO_HPP
#define WFSET_IO_HPP

#include <string>
#include <vector>

#include "wfset/seminorms.hpp"
#include "wfset/transform.hpp"
#include "wfset/wavefront.hpp"

namespace wfset {

/// Writes to `path.tmp` and renames, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

/// RFC 4180 field: quoted when it holds a comma, quote or line break.
std::string csv_escape(const std::string& field);

/// Rows (x..., re, im).
std::string samples_csv(const ComplexVec& samples, const SampleGrid& grid);
/// Rows (k..., re, im) with signed frequency indices.
std::string spectrum_csv(const Spectrum& s);
/// Rows (j, l, re, im): space node index and frequency column.
std::string table_csv(const StftGrid& t);
/// Rows (cone_id, weight_id, q, R, partial, annulus, slope).
std::string seminorm_csv(const std::vector<ConeSeminormResult>& results);

/// Array of complex doubles: "WFSB", u32 version, u32 ndims, u64 sizes[ndims],
/// then (re, im) pairs, all little-endian.
struct BinaryArray {
  std::vector<std::uint64_t> sizes;
  std::vector<Complex> values;
};
std::string encode_binary(const BinaryArray& a);
BinaryArray decode_binary(const std::string& bytes);
BinaryArray to_binary(const Spectrum& s);
BinaryArray to_binary(const StftGrid& t);

/// Polar rose per point and k: one wedge per cone, red singular, green
/// regular, gray indeterminate. Panels use the WF_FL detector.
std::string svg_rose(const WavefrontReport& report);

}  // namespace wfset

#endif  // WFSET_IO_HPP

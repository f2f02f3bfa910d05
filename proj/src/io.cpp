#include "wfset/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wfset/error.hpp"

namespace wfset {

namespace {

std::ostringstream number_stream() {
  std::ostringstream os;
  os.precision(17);
  return os;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(const std::string& in, std::size_t& pos, int bytes) {
  if (pos + bytes > in.size()) throw Error(ErrorKind::Io, "binary array: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += bytes;
  return v;
}

const char* verdict_color(Verdict v) {
  switch (v) {
    case Verdict::Singular:
      return "#d62728";
    case Verdict::Regular:
      return "#2ca02c";
    case Verdict::Indeterminate:
      break;
  }
  return "#999999";
}

}  // namespace

void write_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error(ErrorKind::Io, "write failed for " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::Io, "cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string samples_csv(const ComplexVec& samples, const SampleGrid& grid) {
  auto os = number_stream();
  os << (grid.dim == 1 ? "x" : "x1,x2") << ",re,im\r\n";
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const Point x = grid.node(i);
    for (Eigen::Index k = 0; k < x.size(); ++k) os << x[k] << ',';
    os << samples[i].real() << ',' << samples[i].imag() << "\r\n";
  }
  return os.str();
}

std::string spectrum_csv(const Spectrum& s) {
  auto os = number_stream();
  const int n = s.grid.n;
  os << (s.grid.dim == 1 ? "k" : "k1,k2") << ",re,im\r\n";
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.grid.dim == 1)
      os << signed_index(i, n);
    else
      os << signed_index(i / n, n) << ',' << signed_index(i % n, n);
    os << ',' << s.values[i].real() << ',' << s.values[i].imag() << "\r\n";
  }
  return os.str();
}

std::string table_csv(const StftGrid& t) {
  auto os = number_stream();
  os << "j,l,re,im\r\n";
  for (Eigen::Index r = 0; r < t.values.rows(); ++r)
    for (Eigen::Index l = 0; l < t.values.cols(); ++l) {
      std::ostringstream j;
      const auto& node = t.nodes[static_cast<std::size_t>(r)];
      for (Eigen::Index k = 0; k < node.size(); ++k) j << (k ? ";" : "") << node[k];
      os << csv_escape(j.str()) << ',' << l << ',' << t.values(r, l).real() << ',' << t.values(r, l).imag() << "\r\n";
    }
  return os.str();
}

std::string seminorm_csv(const std::vector<ConeSeminormResult>& results) {
  auto os = number_stream();
  os << "cone_id,weight_id,q,R,partial,annulus,slope\r\n";
  for (const auto& r : results)
    for (std::size_t i = 0; i < r.value_at_radius.size(); ++i) {
      os << csv_escape(r.cone_id) << ',' << csv_escape(r.weight_id) << ',';
      if (std::isinf(r.q)) os << "inf"; else os << r.q;
      os << ',' << r.value_at_radius[i].first << ',' << r.value_at_radius[i].second << ',' << i << ',';
      if (std::isfinite(r.tail_slope)) os << r.tail_slope;
      os << "\r\n";
    }
  return os.str();
}

std::string encode_binary(const BinaryArray& a) {
  std::uint64_t count = 1;
  for (auto s : a.sizes) count *= s;
  if (count != a.values.size()) throw Error(ErrorKind::InvalidArgument, "binary array: sizes do not match values");
  std::string out = "WFSB";
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(a.sizes.size()));
  for (auto s : a.sizes) put_u64(out, s);
  for (const Complex& z : a.values) {
    put_u64(out, std::bit_cast<std::uint64_t>(z.real()));
    put_u64(out, std::bit_cast<std::uint64_t>(z.imag()));
  }
  return out;
}

BinaryArray decode_binary(const std::string& bytes) {
  if (bytes.size() < 12 || bytes.compare(0, 4, "WFSB") != 0) throw Error(ErrorKind::Io, "binary array: bad magic");
  std::size_t pos = 4;
  const auto version = get_le(bytes, pos, 4);
  if (version != 1) throw Error(ErrorKind::Io, "binary array: unsupported version " + std::to_string(version));
  const auto nd = get_le(bytes, pos, 4);
  if (nd > 8) throw Error(ErrorKind::Io, "binary array: too many dimensions");
  BinaryArray a;
  std::uint64_t count = 1;
  for (std::uint64_t i = 0; i < nd; ++i) {
    a.sizes.push_back(get_le(bytes, pos, 8));
    count *= a.sizes.back();
  }
  if (bytes.size() - pos != count * 16) throw Error(ErrorKind::Io, "binary array: payload size mismatch");
  a.values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double re = std::bit_cast<double>(get_le(bytes, pos, 8));
    const double im = std::bit_cast<double>(get_le(bytes, pos, 8));
    a.values.emplace_back(re, im);
  }
  return a;
}

BinaryArray to_binary(const Spectrum& s) {
  BinaryArray a;
  a.sizes.assign(s.grid.dim, static_cast<std::uint64_t>(s.grid.n));
  a.values.assign(s.values.data(), s.values.data() + s.values.size());
  return a;
}

BinaryArray to_binary(const StftGrid& t) {
  BinaryArray a;
  a.sizes = {static_cast<std::uint64_t>(t.values.rows()), static_cast<std::uint64_t>(t.values.cols())};
  for (Eigen::Index r = 0; r < t.values.rows(); ++r)
    for (Eigen::Index c = 0; c < t.values.cols(); ++c) a.values.push_back(t.values(r, c));
  return a;
}

std::string svg_rose(const WavefrontReport& report) {
  const auto& ks = report.params.k_grid;
  const auto& cones = report.params.cover.cones();
  const int cols = static_cast<int>(ks.size());
  const int rows = static_cast<int>(report.points.size());
  const double cell = 160.0, rad = 60.0;
  std::ostringstream os;
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << cols * cell << "\" height=\""
     << rows * cell + 30 << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<text x=\"8\" y=\"18\">" << report.atom << " (WF_FL; red singular, green regular, gray indeterminate)</text>\n";
  const double width = cones.size() > 2 ? kPi / static_cast<double>(cones.size()) : 0.5 * kPi;
  for (int p = 0; p < rows; ++p)
    for (int k = 0; k < cols; ++k) {
      const double cx = k * cell + cell / 2, cy = 30 + p * cell + cell / 2 + 6;
      os << "<g>\n<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << rad
         << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
      for (std::size_t c = 0; c < cones.size(); ++c) {
        const Cell* found = report.find(p, static_cast<int>(c), Detector::WF_FL, ks[k]);
        const Verdict v = found ? found->verdict : Verdict::Indeterminate;
        const Point& ax = cones[c].axis();
        const double th = std::atan2(ax.size() > 1 ? ax[1] : 0.0, ax[0]);
        const double t0 = th - width, t1 = th + width;
        // SVG y grows downward.
        os << "<path d=\"M " << cx << ' ' << cy << " L " << cx + rad * std::cos(t0) << ' ' << cy - rad * std::sin(t0)
           << " A " << rad << ' ' << rad << " 0 0 0 " << cx + rad * std::cos(t1) << ' ' << cy - rad * std::sin(t1)
           << " Z\" fill=\"" << verdict_color(v) << "\" fill-opacity=\"0.8\" stroke=\"white\"/>\n";
      }
      std::ostringstream x0;
      x0.precision(4);
      for (Eigen::Index i = 0; i < report.points[p].size(); ++i) x0 << (i ? ", " : "") << report.points[p][i];
      os << "<text x=\"" << cx - rad << "\" y=\"" << cy + rad + 14 << "\">x0=(" << x0.str() << ") k=" << ks[k]
         << "</text>\n</g>\n";
    }
  os << "</svg>\n";
  return os.str();
}

}  // namespace wfset

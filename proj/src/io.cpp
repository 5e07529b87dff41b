#include "airsweep/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace airsweep {

std::string g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  if (is.bad()) throw std::runtime_error("read failed: " + path);
  return os.str();
}

std::string field_pgm_bytes(const Field& f, double* counts_per_unit) {
  const int rows = f.geom.rows();
  const int cols = f.geom.cols();
  double vmax = 0.0;
  for (double x : f.v) vmax = std::max(vmax, x);
  const double scale = vmax > 0 ? 255.0 / vmax : 0.0;
  if (counts_per_unit) *counts_per_unit = scale;

  std::string out;
  char header[64];
  std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", cols, rows);
  out = header;
  out.reserve(out.size() + f.size());
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const long px = std::lround(std::max(f.at(i, j), 0.0) * scale);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::min(px, 255L))));
    }
  }
  return out;
}

void write_heatmap(const std::string& path, const Field& f) {
  double scale = 0.0;
  write_text_file(path, field_pgm_bytes(f, &scale));

  double vmax = 0.0;
  for (double x : f.v) vmax = std::max(vmax, x);
  std::ostringstream os;
  os << "format = P5 8-bit graymap, row 0 = y 0, column 0 = x 0\n";
  os << "cols = " << f.geom.cols() << '\n';
  os << "rows = " << f.geom.rows() << '\n';
  os << "cell_m = " << g12(f.geom.cell) << '\n';
  os << "height_m = " << g12(f.geom.height) << '\n';
  os << "timestamp_s = " << g12(f.timestamp) << '\n';
  os << "max_value_pfu_per_m3 = " << g12(vmax) << '\n';
  os << "pixel_per_unit = " << g12(vmax > 0 ? 255.0 / vmax : 0.0) << '\n';
  write_text_file(path + ".txt", os.str());
}

}  // namespace airsweep

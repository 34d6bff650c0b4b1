#include "dgpe/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace dgpe {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
  out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b;
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  if (!in) throw Error("snapshot: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_snapshot(std::ostream& out, const ComplexField& f) {
  const Grid3D& g = f.grid();
  out.write(kSnapshotMagic, 4);
  for (std::size_t n : g.dims()) put_u64(out, n);
  for (double l : g.half_lengths()) put_f64(out, l);
  for (const cplx& v : f.values()) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  if (!out) throw Error("snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& path, const ComplexField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("snapshot: cannot open " + path.string() + " for writing");
  write_snapshot(out, f);
}

ComplexField read_snapshot(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kSnapshotMagic, 4) != 0) throw Error("snapshot: bad magic");
  Dims3 dims;
  for (auto& n : dims) n = get_u64(in);
  Vec3 lengths;
  for (auto& l : lengths) l = get_f64(in);
  const Grid3D grid(dims, lengths);
  ComplexField f(grid);
  for (cplx& v : f.data()) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    v = cplx(re, im);
  }
  return f;
}

ComplexField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("snapshot: cannot open " + path.string());
  return read_snapshot(in);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw Error("csv: header and column counts differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw Error("csv: ragged columns");
  }
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      out << (j ? "," : "") << format_double(columns[j][i]);
    }
    out << '\n';
  }
  if (!out) throw Error("csv: write failed");
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("csv: cannot open " + path.string() + " for writing");
  write_csv(out, header, columns);
}

}  // namespace dgpe

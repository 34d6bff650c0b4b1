#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dgpe/spectral.hpp"

namespace dgpe {

// Field snapshot layout, all little-endian:
//   "GPE1" | 3 x uint64 dims | 3 x float64 box half-lengths |
//   n1 n2 n3 x (float64 re, float64 im), x1 fastest.
inline constexpr char kSnapshotMagic[4] = {'G', 'P', 'E', '1'};

void write_snapshot(std::ostream& out, const ComplexField& f);
void write_snapshot(const std::filesystem::path& path, const ComplexField& f);
ComplexField read_snapshot(std::istream& in);
ComplexField read_snapshot(const std::filesystem::path& path);

/// Column-oriented CSV: header row, ',' separator, 17 significant digits, LF.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

std::string format_double(double v);

}  // namespace dgpe

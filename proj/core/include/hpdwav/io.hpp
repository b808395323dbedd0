#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hpdwav/spectral.hpp"

namespace hpdwav {

/// Malformed or inconsistent file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid as stored on disk. `hpd` selects the "hpd" kind; otherwise the
/// cells are only required to be Hermitian.
struct GridFile {
  int n1 = 0, n2 = 0, d = 0;
  Rect domain;
  bool hpd = true;
  // Row-major over (k1, k2), one d x d matrix per cell.
  std::vector<ComplexMatrix> cells;

  static GridFile from(const HpdGrid& g);
  static GridFile from(const HermitianGrid& g);
  HpdGrid to_hpd() const;
  HermitianGrid to_hermitian() const;
};

/// One JSON header line followed by little-endian float64 (re, im) pairs
/// over (k1, k2, row, col).
void write_grid(std::ostream& out, const GridFile& g);
GridFile read_grid(std::istream& in);

void save_grid(const std::string& path, const GridFile& g);
GridFile load_grid(const std::string& path);

/// Decompositions over natural dyadic pyramids: a JSON header line, the
/// coarsest midpoint as a 1 x 1 grid record, then raw coefficients for
/// scales 1..J as Hermitian grid records.
void write_decomposition(std::ostream& out, const WaveletDecomposition& decomp);
WaveletDecomposition read_decomposition(std::istream& in);

void save_decomposition(const std::string& path, const WaveletDecomposition& decomp);
WaveletDecomposition load_decomposition(const std::string& path);

/// Reads the first bytes of a file and reports whether it is a decomposition.
bool is_decomposition_file(const std::string& path);

/// One row per time point, comma separated, d columns. A non-numeric first
/// line is treated as a header.
MultivariateSeries read_series_csv(std::istream& in);
MultivariateSeries load_series_csv(const std::string& path);
void write_series_csv(std::ostream& out, const MultivariateSeries& s);

}  // namespace hpdwav

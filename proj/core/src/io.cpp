#include "hpdwav/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hpdwav {

namespace {

static_assert(std::endian::native == std::endian::little, "GridFile payloads assume a little-endian host");

constexpr const char* kGridMagic = "HPDG1";
constexpr const char* kDecompMagic = "HPDW1";
constexpr double kHermitianTolerance = 1e-9;

using nlohmann::json;

json read_header(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(std::string("missing ") + what + " header");
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed ") + what + " header: " + e.what());
  }
}

template <class T>
T field(const json& h, const char* key) {
  if (!h.contains(key)) throw FormatError(std::string("header lacks field '") + key + "'");
  try {
    return h.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("header field '") + key + "' has the wrong type");
  }
}

Rect read_domain(const json& h) {
  const auto v = field<std::vector<double>>(h, "domain");
  if (v.size() != 4) throw FormatError("domain must have four entries");
  Rect r{v[0], v[1], v[2], v[3]};
  if (!r.valid()) throw FormatError("domain is empty");
  return r;
}

json domain_json(const Rect& r) { return json::array({r.x0, r.x1, r.y0, r.y1}); }

void check_cell(const ComplexMatrix& m, bool hpd) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!(hermitian_defect(m) <= kHermitianTolerance * scale)) throw FormatError("stored matrix is not Hermitian");
  if (hpd) {
    try {
      HpdMatrix check(m);
      (void)check;
    } catch (const NotPositiveDefinite&) {
      throw FormatError("stored matrix is not positive definite");
    }
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path);
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

}  // namespace

GridFile GridFile::from(const HpdGrid& g) {
  GridFile f;
  f.n1 = g.n1();
  f.n2 = g.n2();
  f.d = grid_dim(g);
  f.domain = g.domain();
  f.hpd = true;
  f.cells.reserve(g.size());
  for (const auto& c : g.cells()) f.cells.push_back(c.matrix());
  return f;
}

GridFile GridFile::from(const HermitianGrid& g) {
  GridFile f;
  f.n1 = g.n1();
  f.n2 = g.n2();
  f.d = grid_dim(g);
  f.domain = g.domain();
  f.hpd = false;
  f.cells.reserve(g.size());
  for (const auto& c : g.cells()) f.cells.push_back(c.matrix());
  return f;
}

HpdGrid GridFile::to_hpd() const {
  HpdGrid g(n1, n2, domain);
  for (std::size_t i = 0; i < cells.size(); ++i) g.cells()[i] = HpdMatrix(cells[i]);
  return g;
}

HermitianGrid GridFile::to_hermitian() const {
  HermitianGrid g(n1, n2, domain);
  for (std::size_t i = 0; i < cells.size(); ++i) g.cells()[i] = HermitianMatrix(cells[i]);
  return g;
}

void write_grid(std::ostream& out, const GridFile& g) {
  if (g.cells.size() != static_cast<std::size_t>(g.n1) * static_cast<std::size_t>(g.n2)) {
    throw std::invalid_argument("cell count does not match the grid shape");
  }
  json h;
  h["magic"] = kGridMagic;
  h["n1"] = g.n1;
  h["n2"] = g.n2;
  h["d"] = g.d;
  h["domain"] = domain_json(g.domain);
  h["kind"] = g.hpd ? "hpd" : "herm";
  out << h.dump() << '\n';
  std::vector<double> buf(static_cast<std::size_t>(g.d) * g.d * 2);
  for (const auto& m : g.cells) {
    if (m.rows() != g.d || m.cols() != g.d) throw std::invalid_argument("cell has the wrong dimension");
    std::size_t p = 0;
    for (int r = 0; r < g.d; ++r) {
      for (int c = 0; c < g.d; ++c) {
        buf[p++] = m(r, c).real();
        buf[p++] = m(r, c).imag();
      }
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("write failed");
}

GridFile read_grid(std::istream& in) {
  const json h = read_header(in, "grid");
  if (field<std::string>(h, "magic") != kGridMagic) throw FormatError("not a grid file (bad magic)");
  GridFile g;
  g.n1 = field<int>(h, "n1");
  g.n2 = field<int>(h, "n2");
  g.d = field<int>(h, "d");
  if (g.n1 <= 0 || g.n2 <= 0 || g.d <= 0) throw FormatError("grid dimensions must be positive");
  g.domain = read_domain(h);
  const auto kind = field<std::string>(h, "kind");
  if (kind != "hpd" && kind != "herm") throw FormatError("kind must be \"hpd\" or \"herm\"");
  g.hpd = kind == "hpd";

  const std::size_t per_cell = static_cast<std::size_t>(g.d) * g.d * 2;
  std::vector<double> buf(per_cell);
  g.cells.reserve(static_cast<std::size_t>(g.n1) * g.n2);
  for (long long i = 0; i < static_cast<long long>(g.n1) * g.n2; ++i) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(per_cell * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(per_cell * sizeof(double))) {
      throw FormatError("payload is shorter than n1*n2*d*d*16 bytes");
    }
    ComplexMatrix m(g.d, g.d);
    std::size_t p = 0;
    for (int r = 0; r < g.d; ++r) {
      for (int c = 0; c < g.d; ++c, p += 2) m(r, c) = Complex(buf[p], buf[p + 1]);
    }
    check_cell(m, g.hpd);
    g.cells.push_back(std::move(m));
  }
  return g;
}

void save_grid(const std::string& path, const GridFile& g) {
  auto f = open_out(path);
  write_grid(f, g);
}

GridFile load_grid(const std::string& path) {
  auto f = open_in(path);
  GridFile g = read_grid(f);
  if (f.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after grid payload");
  return g;
}

void write_decomposition(std::ostream& out, const WaveletDecomposition& decomp) {
  const auto& pyr = decomp.pyramid;
  if (!pyr.is_dyadic()) throw std::invalid_argument("only natural dyadic pyramids can be saved");
  json h;
  h["magic"] = kDecompMagic;
  h["order"] = json::array({decomp.order.n1, decomp.order.n2});
  h["j1"] = pyr.j1();
  h["j2"] = pyr.j2();
  h["d"] = decomp.dim();
  h["domain"] = domain_json(pyr.domain());
  out << h.dump() << '\n';
  HpdGrid top(1, 1, pyr.domain());
  top(0, 0) = decomp.coarsest;
  write_grid(out, GridFile::from(top));
  for (int j = 1; j <= decomp.max_scale(); ++j) write_grid(out, GridFile::from(decomp.coeffs[static_cast<std::size_t>(j)]));
}

WaveletDecomposition read_decomposition(std::istream& in) {
  const json h = read_header(in, "decomposition");
  if (field<std::string>(h, "magic") != kDecompMagic) throw FormatError("not a decomposition file (bad magic)");
  const auto order = field<std::vector<int>>(h, "order");
  if (order.size() != 2) throw FormatError("order must have two entries");
  const int j1 = field<int>(h, "j1");
  const int j2 = field<int>(h, "j2");
  const int d = field<int>(h, "d");
  if (j1 < 0 || j2 < 0 || j1 > 20 || j2 > 20) throw FormatError("scale counts out of range");
  WaveletDecomposition out;
  out.order = Order{order[0], order[1]};
  try {
    validate_order(out.order);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  out.pyramid = natural_dyadic_pyramid(j1, j2, read_domain(h));

  const GridFile top = read_grid(in);
  if (top.n1 != 1 || top.n2 != 1 || top.d != d || !top.hpd) throw FormatError("bad coarsest-midpoint record");
  out.coarsest = HpdMatrix(top.cells[0]);
  out.coeffs.resize(static_cast<std::size_t>(out.max_scale() + 1));
  for (int j = 1; j <= out.max_scale(); ++j) {
    GridFile g = read_grid(in);
    if (g.n1 != out.pyramid.n1(j) || g.n2 != out.pyramid.n2(j) || g.d != d || g.hpd) {
      throw FormatError("coefficient record " + std::to_string(j) + " has the wrong shape");
    }
    g.domain = out.pyramid.domain();
    out.coeffs[static_cast<std::size_t>(j)] = g.to_hermitian();
  }
  return with_whitened(out);
}

void save_decomposition(const std::string& path, const WaveletDecomposition& decomp) {
  auto f = open_out(path);
  write_decomposition(f, decomp);
}

WaveletDecomposition load_decomposition(const std::string& path) {
  auto f = open_in(path);
  return read_decomposition(f);
}

bool is_decomposition_file(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  std::getline(f, line);
  return line.find(std::string("\"") + kDecompMagic + "\"") != std::string::npos;
}

MultivariateSeries read_series_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    bool numeric = true;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      if (b == std::string::npos) {
        numeric = false;
        break;
      }
      const char* first = cell.data() + b;
      const char* last = cell.data() + e + 1;
      if (*first == '+') ++first;
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows.empty() && lineno == 1) continue;  // header
      throw FormatError("non-numeric value on line " + std::to_string(lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError("line " + std::to_string(lineno) + " has " + std::to_string(row.size()) + " columns, expected " +
                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("series file has no data rows");
  MultivariateSeries s;
  s.samples.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t c = 0; c < rows[t].size(); ++c) {
      s.samples(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) = rows[t][c];
    }
  }
  return s;
}

MultivariateSeries load_series_csv(const std::string& path) {
  auto f = open_in(path);
  return read_series_csv(f);
}

void write_series_csv(std::ostream& out, const MultivariateSeries& s) {
  char buf[32];
  for (int t = 0; t < s.length(); ++t) {
    for (int c = 0; c < s.channels(); ++c) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), s.samples(t, c));
      (void)ec;
      if (c > 0) out << ',';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace hpdwav

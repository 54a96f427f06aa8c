#include "latsar/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace latsar {

Lattice Lattice::create(int nrows, int ncols) {
  if (nrows < 1 || ncols < 1) {
    throw std::invalid_argument("lattice dimensions must be positive, got " +
                                std::to_string(nrows) + "x" + std::to_string(ncols));
  }
  return Lattice{nrows, ncols, nrows * ncols};
}

int NeighborhoodTemplate::position(const Offset& o) const {
  for (int j = 0; j < m; ++j) {
    if (offsets[j] == o) return j;
  }
  return -1;
}

bool template_size_supported(int m) {
  if (m < 8) return false;
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m + 1))));
  return side * side == m + 1 && side % 2 == 1;
}

NeighborhoodTemplate neighbor_template(int m) {
  if (!template_size_supported(m)) {
    throw std::invalid_argument("unsupported neighborhood size m=" + std::to_string(m) +
                                "; m+1 must be an odd perfect square (supported: 8, 24, 48, "
                                "80, ...)");
  }
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m + 1))));
  const int ring = (side - 1) / 2;

  std::vector<Offset> offsets;
  offsets.reserve(m);
  for (int dr = -ring; dr <= ring; ++dr) {
    for (int dc = -ring; dc <= ring; ++dc) {
      if (dr != 0 || dc != 0) offsets.push_back({dr, dc});
    }
  }
  std::sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
    const int da = a.drow * a.drow + a.dcol * a.dcol;
    const int db = b.drow * b.drow + b.dcol * b.dcol;
    if (da != db) return da < db;
    if (a.drow != b.drow) return a.drow < b.drow;
    return a.dcol < b.dcol;
  });
  return NeighborhoodTemplate{m, std::move(offsets), ring};
}

bool is_interior(const Lattice& lattice, int site, int ring) {
  const auto [row, col] = lattice.row_col(site);
  return row >= ring && row < lattice.nrows - ring && col >= ring &&
         col < lattice.ncols - ring;
}

std::vector<int> interior_sites(const Lattice& lattice, int ring) {
  if (ring < 0) throw std::invalid_argument("ring must be nonnegative");
  if (2 * ring >= std::min(lattice.nrows, lattice.ncols)) {
    throw std::invalid_argument("ring " + std::to_string(ring) + " leaves no interior on a " +
                                std::to_string(lattice.nrows) + "x" +
                                std::to_string(lattice.ncols) + " lattice");
  }
  std::vector<int> sites;
  sites.reserve(static_cast<std::size_t>(lattice.nrows - 2 * ring) *
                static_cast<std::size_t>(lattice.ncols - 2 * ring));
  for (int row = ring; row < lattice.nrows - ring; ++row) {
    for (int col = ring; col < lattice.ncols - ring; ++col) {
      sites.push_back(lattice.site(row, col));
    }
  }
  return sites;
}

std::vector<int> window_indices(const Lattice& lattice, int site,
                                const NeighborhoodTemplate& tmpl) {
  const auto [row, col] = lattice.row_col(site);
  std::vector<int> indices;
  indices.reserve(tmpl.offsets.size());
  for (const Offset& o : tmpl.offsets) {
    const int r = row + o.drow;
    const int c = col + o.dcol;
    if (!lattice.contains(r, c)) {
      throw std::out_of_range("neighborhood window of site " + std::to_string(site) +
                              " crosses the lattice border");
    }
    indices.push_back(lattice.site(r, c));
  }
  return indices;
}

}  // namespace latsar

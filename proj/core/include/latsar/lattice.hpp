#pragma once

#include <utility>
#include <vector>

namespace latsar {

/// A regular nrows x ncols grid. Sites are indexed row-major:
/// site = row * ncols + col, for row in [0, nrows) and col in [0, ncols).
struct Lattice {
  int nrows = 0;
  int ncols = 0;
  int n = 0;

  static Lattice create(int nrows, int ncols);

  int site(int row, int col) const { return row * ncols + col; }
  std::pair<int, int> row_col(int site) const { return {site / ncols, site % ncols}; }
  bool contains(int row, int col) const {
    return row >= 0 && row < nrows && col >= 0 && col < ncols;
  }
};

/// Relative displacement on the grid.
struct Offset {
  int drow = 0;
  int dcol = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Ordered set of m relative neighbor offsets around a site, (0,0) excluded.
/// The order is canonical: Euclidean distance ascending, ties broken by
/// (drow, dcol) ascending. `ring` is the Chebyshev radius of the window.
struct NeighborhoodTemplate {
  int m = 0;
  std::vector<Offset> offsets;
  int ring = 0;

  /// Position of an offset in the template, or -1 if absent.
  int position(const Offset& o) const;
};

/// Full square window of size (2r+1)^2 - 1 around the center, canonical
/// order. Requires m + 1 to be a perfect square with odd side and m >= 8
/// (supported sizes: 8, 24, 48, 80, ...).
NeighborhoodTemplate neighbor_template(int m);

/// True when m is one of the supported template sizes.
bool template_size_supported(int m);

/// Sites whose full (2*ring+1)^2 window lies inside the grid, ascending.
/// Requires 2*ring < min(nrows, ncols).
std::vector<int> interior_sites(const Lattice& lattice, int ring);

bool is_interior(const Lattice& lattice, int site, int ring);

/// Absolute site indices of the template window around `site`, in template
/// order. Throws std::out_of_range when the window crosses the border.
std::vector<int> window_indices(const Lattice& lattice, int site,
                                const NeighborhoodTemplate& tmpl);

}  // namespace latsar

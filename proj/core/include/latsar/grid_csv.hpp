#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "latsar/simulate.hpp"

namespace latsar {

/// Round-trip decimal rendering ("%.17g"); every file we emit uses it so
/// reruns are byte-identical.
std::string format_double(double v);

using KvPairs = std::vector<std::pair<std::string, std::string>>;

/// `# key = value` comment lines, one per pair.
void write_comment_header(std::ostream& out, const KvPairs& pairs);

/// Plain `key = value` records (fit summaries, resolved configs).
void write_kv_file(const std::string& path, const KvPairs& pairs);

/// Grid CSV: optional `#` comment lines, a `row,col,y,x1,...,xk` header, then
/// exactly nrows*ncols records covering every cell once. Grid dimensions are
/// inferred from the coordinates. Malformed input throws ParseError carrying
/// the line number.
SarDataset read_grid_csv(std::istream& in, const std::string& name = "<stream>");
SarDataset read_grid_csv(const std::string& path);

void write_grid_csv(std::ostream& out, const SarDataset& dataset, const KvPairs& header = {});
void write_grid_csv(const std::string& path, const SarDataset& dataset,
                    const KvPairs& header = {});

/// Generating truth as written next to simulated data: scheme name, strength,
/// and the weight vector as one `drow,dcol,w` record per offset.
struct TruthRecord {
  std::string scheme;  // "queen" | "rook" | "ese" | "vector"
  double c = 0.0;
  std::vector<Offset> offsets;
  Eigen::VectorXd w;
};

TruthRecord truth_from_scheme(const WeightScheme& scheme);

/// Weight vector over `tmpl` matching the truth offsets (missing offsets are
/// zero; a truth offset outside the template is a constraint error).
Eigen::VectorXd truth_on_template(const TruthRecord& truth, const NeighborhoodTemplate& tmpl);

void write_truth_csv(const std::string& path, const TruthRecord& truth,
                     const KvPairs& header = {});
TruthRecord read_truth_csv(const std::string& path);

}  // namespace latsar

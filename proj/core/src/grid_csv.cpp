#include "latsar/grid_csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "latsar/errors.hpp"

namespace latsar {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& raw, const std::string& what,
                    const std::string& name, long line_no) {
  const std::string text = trim(raw);
  double value = 0.0;
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(name + ": expected a decimal " + what + ", got \"" + raw + "\"",
                     line_no);
  }
  return value;
}

int parse_int(const std::string& raw, const std::string& what, const std::string& name,
              long line_no) {
  const std::string text = trim(raw);
  int value = 0;
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(name + ": expected an integer " + what + ", got \"" + raw + "\"",
                     line_no);
  }
  return value;
}

bool is_comment(const std::string& line) {
  const std::string t = trim(line);
  return !t.empty() && t[0] == '#';
}

/// Reads the next non-comment, non-blank line. Returns false at end of input.
bool next_record(std::istream& in, std::string& line, long& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || is_comment(line)) continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    return true;
  }
  return false;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericalError("failed to format a number");
  return std::string(buf, ptr);
}

void write_comment_header(std::ostream& out, const KvPairs& pairs) {
  for (const auto& [key, value] : pairs) {
    out << "# " << key << " = " << value << "\n";
  }
}

void write_kv_file(const std::string& path, const KvPairs& pairs) {
  std::ofstream out = open_for_write(path);
  for (const auto& [key, value] : pairs) {
    out << key << " = " << value << "\n";
  }
  if (!out) throw ParseError("failed while writing " + path);
}

SarDataset read_grid_csv(std::istream& in, const std::string& name) {
  long line_no = 0;
  std::string line;
  if (!next_record(in, line, line_no)) {
    throw ParseError(name + ": empty input, expected a header line", line_no);
  }

  const std::vector<std::string> header = split(line, ',');
  if (header.size() < 4 || trim(header[0]) != "row" || trim(header[1]) != "col" ||
      trim(header[2]) != "y") {
    throw ParseError(name + ": header must be row,col,y,x1,...,xk", line_no);
  }
  const int k = static_cast<int>(header.size()) - 3;
  for (int j = 0; j < k; ++j) {
    if (trim(header[3 + j]) != "x" + std::to_string(j + 1)) {
      throw ParseError(name + ": header must be row,col,y,x1,...,xk", line_no);
    }
  }

  struct Record {
    int row;
    int col;
    long line_no;
    double y;
    std::vector<double> x;
  };
  std::vector<Record> records;
  int max_row = 0;
  int max_col = 0;
  while (next_record(in, line, line_no)) {
    const std::vector<std::string> fields = split(line, ',');
    if (static_cast<int>(fields.size()) != 3 + k) {
      throw ParseError(name + ": expected " + std::to_string(3 + k) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    Record rec;
    rec.row = parse_int(fields[0], "row", name, line_no);
    rec.col = parse_int(fields[1], "col", name, line_no);
    rec.line_no = line_no;
    if (rec.row < 0 || rec.col < 0) {
      throw ParseError(name + ": row/col coordinates must be non-negative", line_no);
    }
    rec.y = parse_double(fields[2], "value for y", name, line_no);
    rec.x.resize(k);
    for (int j = 0; j < k; ++j) {
      rec.x[j] = parse_double(fields[3 + j], "value for x" + std::to_string(j + 1), name,
                              line_no);
    }
    max_row = std::max(max_row, rec.row);
    max_col = std::max(max_col, rec.col);
    records.push_back(std::move(rec));
  }
  if (records.empty()) {
    throw ParseError(name + ": no data records after the header", line_no);
  }

  const int nrows = max_row + 1;
  const int ncols = max_col + 1;
  const long expected = static_cast<long>(nrows) * ncols;
  if (static_cast<long>(records.size()) != expected) {
    throw ParseError(name + ": grid is " + std::to_string(nrows) + "x" +
                     std::to_string(ncols) + " but the file has " +
                     std::to_string(records.size()) + " records instead of " +
                     std::to_string(expected));
  }

  SarDataset dataset;
  dataset.lattice = Lattice::create(nrows, ncols);
  dataset.y.resize(expected);
  dataset.x.resize(expected, k);
  std::vector<long> seen_at(static_cast<std::size_t>(expected), -1);
  for (const Record& rec : records) {
    const int site = dataset.lattice.site(rec.row, rec.col);
    if (seen_at[site] >= 0) {
      throw ParseError(name + ": duplicate cell (" + std::to_string(rec.row) + "," +
                           std::to_string(rec.col) + "), first seen on line " +
                           std::to_string(seen_at[site]),
                       rec.line_no);
    }
    seen_at[site] = rec.line_no;
    dataset.y[site] = rec.y;
    for (int j = 0; j < k; ++j) dataset.x(site, j) = rec.x[j];
  }
  return dataset;
}

SarDataset read_grid_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path + " for reading");
  return read_grid_csv(in, path);
}

void write_grid_csv(std::ostream& out, const SarDataset& dataset, const KvPairs& header) {
  write_comment_header(out, header);
  out << "row,col,y";
  for (int j = 0; j < dataset.k(); ++j) out << ",x" << (j + 1);
  out << "\n";
  for (int site = 0; site < dataset.n(); ++site) {
    const auto [row, col] = dataset.lattice.row_col(site);
    out << row << "," << col << "," << format_double(dataset.y[site]);
    for (int j = 0; j < dataset.k(); ++j) out << "," << format_double(dataset.x(site, j));
    out << "\n";
  }
}

void write_grid_csv(const std::string& path, const SarDataset& dataset,
                    const KvPairs& header) {
  std::ofstream out = open_for_write(path);
  write_grid_csv(out, dataset, header);
  if (!out) throw ParseError("failed while writing " + path);
}

TruthRecord truth_from_scheme(const WeightScheme& scheme) {
  TruthRecord truth;
  if (scheme.kind == SchemeKind::FromVector) {
    truth.scheme = "vector";
    truth.c = scheme.w.lpNorm<1>();
    std::vector<double> kept;
    for (int j = 0; j < scheme.w.size(); ++j) {
      if (scheme.w[j] != 0.0) {
        truth.offsets.push_back(scheme.tmpl.offsets[j]);
        kept.push_back(scheme.w[j]);
      }
    }
    truth.w = Eigen::Map<const Eigen::VectorXd>(kept.data(), static_cast<long>(kept.size()));
    return truth;
  }
  switch (scheme.kind) {
    case SchemeKind::Queen:
      truth.scheme = "queen";
      break;
    case SchemeKind::Rook:
      truth.scheme = "rook";
      break;
    default:
      truth.scheme = "ese";
      break;
  }
  truth.c = scheme.c;
  truth.offsets = scheme_offsets(scheme.kind);
  const double share = scheme.c / static_cast<double>(truth.offsets.size());
  truth.w = Eigen::VectorXd::Constant(static_cast<long>(truth.offsets.size()), share);
  return truth;
}

Eigen::VectorXd truth_on_template(const TruthRecord& truth, const NeighborhoodTemplate& tmpl) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(tmpl.m);
  for (std::size_t i = 0; i < truth.offsets.size(); ++i) {
    const int pos = tmpl.position(truth.offsets[i]);
    if (pos < 0) {
      throw ConstraintError("truth offset (" + std::to_string(truth.offsets[i].drow) + "," +
                            std::to_string(truth.offsets[i].dcol) +
                            ") lies outside the m=" + std::to_string(tmpl.m) + " template");
    }
    out[pos] = truth.w[static_cast<long>(i)];
  }
  return out;
}

void write_truth_csv(const std::string& path, const TruthRecord& truth,
                     const KvPairs& header) {
  std::ofstream out = open_for_write(path);
  write_comment_header(out, header);
  out << "scheme," << truth.scheme << "\n";
  out << "c," << format_double(truth.c) << "\n";
  out << "drow,dcol,w\n";
  for (std::size_t i = 0; i < truth.offsets.size(); ++i) {
    out << truth.offsets[i].drow << "," << truth.offsets[i].dcol << ","
        << format_double(truth.w[static_cast<long>(i)]) << "\n";
  }
  if (!out) throw ParseError("failed while writing " + path);
}

TruthRecord read_truth_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path + " for reading");

  long line_no = 0;
  std::string line;
  TruthRecord truth;

  if (!next_record(in, line, line_no)) {
    throw ParseError(path + ": empty truth file", line_no);
  }
  std::vector<std::string> fields = split(line, ',');
  if (fields.size() != 2 || trim(fields[0]) != "scheme") {
    throw ParseError(path + ": expected scheme,<name>", line_no);
  }
  truth.scheme = trim(fields[1]);
  if (truth.scheme != "queen" && truth.scheme != "rook" && truth.scheme != "ese" &&
      truth.scheme != "vector") {
    throw ParseError(path + ": unknown scheme \"" + truth.scheme + "\"", line_no);
  }

  if (!next_record(in, line, line_no)) {
    throw ParseError(path + ": missing c record", line_no);
  }
  fields = split(line, ',');
  if (fields.size() != 2 || trim(fields[0]) != "c") {
    throw ParseError(path + ": expected c,<value>", line_no);
  }
  truth.c = parse_double(fields[1], "value for c", path, line_no);

  if (!next_record(in, line, line_no) || trim(line) != "drow,dcol,w") {
    throw ParseError(path + ": expected the drow,dcol,w header", line_no);
  }

  std::vector<double> weights;
  while (next_record(in, line, line_no)) {
    fields = split(line, ',');
    if (fields.size() != 3) {
      throw ParseError(path + ": expected 3 fields per weight record", line_no);
    }
    Offset o;
    o.drow = parse_int(fields[0], "drow", path, line_no);
    o.dcol = parse_int(fields[1], "dcol", path, line_no);
    truth.offsets.push_back(o);
    weights.push_back(parse_double(fields[2], "weight", path, line_no));
  }
  truth.w = Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                              static_cast<long>(weights.size()));
  return truth;
}

}  // namespace latsar

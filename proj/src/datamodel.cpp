#include "dsc/datamodel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dsc {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

template <typename T>
bool parse_number(std::string_view cell, T& out) {
  const std::string text = trim(cell);
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

DataMatrix load_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  bool has_labels = false;
  std::vector<std::vector<double>> rows;
  Labels labels;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (text.find("has_labels=true") != std::string::npos) has_labels = true;
      if (text.find("has_labels=false") != std::string::npos) has_labels = false;
      continue;
    }
    const auto cells = split_commas(text);
    if (rows.empty()) {
      width = cells.size();
      if (has_labels && width < 2) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": labelled rows need at least two columns");
      }
    } else if (cells.size() != width) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(width) + " columns, found " +
                               std::to_string(cells.size()));
    }
    const std::size_t n_values = has_labels ? width - 1 : width;
    std::vector<double> values(n_values);
    for (std::size_t c = 0; c < n_values; ++c) {
      if (!parse_number(cells[c], values[c])) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": column " +
                                 std::to_string(c + 1) + ": not a number: '" +
                                 std::string(cells[c]) + "'");
      }
    }
    if (has_labels) {
      int label = 0;
      if (!parse_number(cells.back(), label)) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": label is not an integer: '" + std::string(cells.back()) +
                                 "'");
      }
      labels.push_back(label);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": no data rows");

  DataMatrix data;
  data.D.resize(static_cast<Index>(rows.front().size()), static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < rows[j].size(); ++i) {
      data.D(static_cast<Index>(i), static_cast<Index>(j)) = rows[j][i];
    }
  }
  require_finite(data.D, path.string());
  if (has_labels) data.labels = std::move(labels);
  data.source = path.string();
  return data;
}

// Reads one whitespace-delimited PGM header token, skipping '#' comments.
std::string pgm_token(std::istream& in, const fs::path& path) {
  std::string token;
  char ch = 0;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string ignored;
      std::getline(in, ignored);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(ch);
  }
  if (token.empty()) throw std::runtime_error(path.string() + ": truncated PGM header");
  return token;
}

struct PgmImage {
  long width = 0;
  long height = 0;
  std::vector<double> pixels;  // row-major, scaled to [0, 1]
};

PgmImage read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string magic = pgm_token(in, path);
  if (magic != "P2" && magic != "P5") {
    throw std::runtime_error(path.string() + ": unsupported PGM magic '" + magic + "'");
  }
  PgmImage img;
  long maxval = 0;
  try {
    img.width = std::stol(pgm_token(in, path));
    img.height = std::stol(pgm_token(in, path));
    maxval = std::stol(pgm_token(in, path));
  } catch (const std::logic_error&) {
    throw std::runtime_error(path.string() + ": malformed PGM header");
  }
  if (img.width < 1 || img.height < 1) throw std::runtime_error(path.string() + ": bad dimensions");
  if (maxval < 1 || maxval > 65535) {
    throw std::runtime_error(path.string() + ": unsupported PGM maxval " + std::to_string(maxval));
  }
  const std::size_t count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  img.pixels.resize(count);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (magic == "P2") {
    for (std::size_t k = 0; k < count; ++k) {
      long v = -1;
      if (!(in >> v) || v < 0 || v > maxval) {
        throw std::runtime_error(path.string() + ": bad pixel value at index " + std::to_string(k));
      }
      img.pixels[k] = static_cast<double>(v) * scale;
    }
  } else {
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * bytes_per);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw std::runtime_error(path.string() + ": truncated pixel data");
    }
    for (std::size_t k = 0; k < count; ++k) {
      const unsigned v = bytes_per == 2 ? (unsigned{raw[2 * k]} << 8) | raw[2 * k + 1] : raw[k];
      if (v > static_cast<unsigned>(maxval)) {
        throw std::runtime_error(path.string() + ": pixel exceeds maxval at index " +
                                 std::to_string(k));
      }
      img.pixels[k] = static_cast<double>(v) * scale;
    }
  }
  return img;
}

std::string label_prefix(const fs::path& file) {
  const std::string stem = file.stem().string();
  const auto pos = stem.find('_');
  if (pos != std::string::npos && pos > 0) return stem.substr(0, pos);
  return file.parent_path().filename().string();
}

DataMatrix load_pgm_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") files.push_back(entry.path());
  }
  if (files.empty()) throw std::runtime_error(dir.string() + ": no PGM files");
  std::sort(files.begin(), files.end());

  std::set<std::string> prefixes;
  for (const auto& f : files) prefixes.insert(label_prefix(f));
  std::map<std::string, int> label_of;
  for (const auto& p : prefixes) label_of.emplace(p, static_cast<int>(label_of.size()));

  DataMatrix data;
  Labels labels;
  for (std::size_t j = 0; j < files.size(); ++j) {
    const PgmImage img = read_pgm(files[j]);
    if (j == 0) {
      data.D.resize(static_cast<Index>(img.pixels.size()), static_cast<Index>(files.size()));
    } else if (static_cast<Index>(img.pixels.size()) != data.D.rows()) {
      throw std::runtime_error(files[j].string() + ": image size differs from " + files[0].string());
    }
    data.D.col(static_cast<Index>(j)) =
        Eigen::Map<const Vector>(img.pixels.data(), static_cast<Index>(img.pixels.size()));
    labels.push_back(label_of.at(label_prefix(files[j])));
  }
  data.labels = std::move(labels);
  data.source = dir.string();
  return data;
}

}  // namespace

RankPolicy RankPolicy::parse(const std::string& text) {
  if (text == "exact") return exact();
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "fixed") {
    long r = 0;
    if (!parse_number(arg, r) || r < 1) throw std::invalid_argument("bad rank policy: " + text);
    return fixed(r);
  }
  if (kind == "energy") {
    double t = 0.0;
    if (!parse_number(arg, t) || !(t > 0.0 && t <= 1.0)) {
      throw std::invalid_argument("bad rank policy: " + text);
    }
    return energy(t);
  }
  throw std::invalid_argument("unknown rank policy '" + text + "' (exact | fixed:<r> | energy:<t>)");
}

std::string RankPolicy::to_string() const {
  switch (kind) {
    case Kind::Exact: return "exact";
    case Kind::Fixed: return "fixed:" + std::to_string(rank);
    case Kind::Energy: return "energy:" + format_double(threshold);
  }
  return {};
}

DataMatrix normalize_columns(const DataMatrix& data) {
  require_finite(data.D, "normalize_columns");
  DataMatrix out = data;
  for (Index j = 0; j < out.D.cols(); ++j) {
    const double norm = out.D.col(j).norm();
    if (norm == 0.0) {
      throw std::invalid_argument("normalize_columns: column " + std::to_string(j) + " is all zero");
    }
    out.D.col(j) /= norm;
  }
  return out;
}

ProjectedData project_to_span(const DataMatrix& data, const RankPolicy& policy) {
  const Index max_rank = std::min(data.D.rows(), data.D.cols());
  if (policy.kind == RankPolicy::Kind::Fixed && (policy.rank < 1 || policy.rank > max_rank)) {
    throw std::invalid_argument("project_to_span: fixed rank " + std::to_string(policy.rank) +
                                " outside [1, " + std::to_string(max_rank) + "]");
  }
  SvdResult svd = thin_svd(data.D, max_rank);
  const Vector energy = svd.s.array().square();
  const double total = energy.sum();

  Index r = 0;
  switch (policy.kind) {
    case RankPolicy::Kind::Exact:
      r = numerical_rank(svd.s);
      break;
    case RankPolicy::Kind::Fixed:
      r = policy.rank;
      break;
    case RankPolicy::Kind::Energy: {
      const Index numeric = numerical_rank(svd.s);
      double acc = 0.0;
      while (r < numeric && acc < policy.threshold * total) acc += energy(r++);
      break;
    }
  }
  if (r < 1) throw std::invalid_argument("project_to_span: data has rank 0");

  ProjectedData out;
  out.Q = svd.U.leftCols(r);
  out.X = out.Q.transpose() * data.D;
  out.rank = r;
  out.energy_captured = total > 0.0 ? energy.head(r).sum() / total : 0.0;
  out.singular_values = std::move(svd.s);
  return out;
}

DataMatrix load_matrix(const fs::path& path, InputFormat format) {
  if (!fs::exists(path)) throw std::runtime_error("no such file or directory: " + path.string());
  return format == InputFormat::Csv ? load_csv(path) : load_pgm_dir(path);
}

void write_matrix(const fs::path& path, const DataMatrix& data,
                  const std::vector<std::string>& header) {
  if (data.labels && static_cast<Index>(data.labels->size()) != data.D.cols()) {
    throw std::invalid_argument("write_matrix: label count does not match point count");
  }
  std::ofstream out = open_for_write(path);
  out << "# has_labels=" << (data.labels ? "true" : "false") << '\n';
  for (const auto& h : header) out << "# " << h << '\n';
  for (Index j = 0; j < data.D.cols(); ++j) {
    for (Index i = 0; i < data.D.rows(); ++i) {
      if (i) out << ',';
      out << format_double(data.D(i, j));
    }
    if (data.labels) out << ',' << (*data.labels)[static_cast<std::size_t>(j)];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_labels(const fs::path& path, const Labels& labels, const std::vector<std::string>& header) {
  std::ofstream out = open_for_write(path);
  for (const auto& h : header) out << "# " << h << '\n';
  out << "label\n";
  for (int l : labels) out << l << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Labels read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Labels labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#' || text == "label") continue;
    int v = 0;
    if (!parse_number(text, v)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad label '" + text + "'");
    }
    labels.push_back(v);
  }
  return labels;
}

int count_classes(const Labels& labels) {
  return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size());
}

}  // namespace dsc

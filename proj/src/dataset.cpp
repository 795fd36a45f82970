#include "lfqa/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace lfqa {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void check_field(const std::string& s, const char* what) {
  if (s.find(',') != std::string::npos || s.find('\n') != std::string::npos)
    fail(Err::IoError, std::string(what) + " may not contain commas or newlines: " + s);
}

double parse_double(const std::string& s, const std::string& context) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    fail(Err::IoError, context + ": bad number '" + s + "'");
  return v;
}

constexpr int kMetaColumns = 5;  // item, scene, distortion, level, score

}  // namespace

void save_features_csv(const std::string& path, const LabeledDataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::IoError, path + ": cannot write");
  out << "item,scene,distortion,level,score";
  for (const std::string& n : ds.layout.names) {
    check_field(n, "feature name");
    out << "," << n;
  }
  out << "\n";
  for (const DatasetRow& row : ds.rows) {
    check_field(row.item, "item id");
    check_field(row.scene, "scene id");
    check_field(row.distortion, "distortion tag");
    if (row.features.size() != ds.layout.dim())
      fail(Err::LayoutMismatch, row.item + ": feature length differs from the layout");
    out << row.item << "," << row.scene << "," << row.distortion << "," << row.level << ",";
    if (row.score) out << fmt17(*row.score);
    for (double v : row.features) out << "," << fmt17(v);
    out << "\n";
  }
  if (!out) fail(Err::IoError, path + ": write failed");
}

LabeledDataset load_features_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoError, path + ": cannot open");

  std::string line;
  if (!std::getline(in, line)) fail(Err::IoError, path + ": empty file");
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < kMetaColumns || header[0] != "item" || header[1] != "scene" ||
      header[2] != "distortion" || header[3] != "level" || header[4] != "score")
    fail(Err::IoError, path + ": expected header item,scene,distortion,level,score,...");

  LabeledDataset ds;
  ds.layout.names.assign(header.begin() + kMetaColumns, header.end());

  std::unordered_set<std::string> seen;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size())
      fail(Err::IoError, path + ":" + std::to_string(line_no) + ": wrong column count");
    DatasetRow row;
    row.item = f[0];
    row.scene = f[1];
    row.distortion = f[2];
    row.level = static_cast<int>(parse_double(f[3], path + ":" + std::to_string(line_no)));
    if (!f[4].empty()) row.score = parse_double(f[4], path + ":" + std::to_string(line_no));
    row.features.reserve(ds.layout.dim());
    for (size_t i = kMetaColumns; i < f.size(); ++i)
      row.features.push_back(parse_double(f[i], path + ":" + std::to_string(line_no)));
    if (!seen.insert(row.item).second)
      fail(Err::IoError, path + ": duplicate item id " + row.item);
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

LabeledDataset filter_distortions(const LabeledDataset& ds, const std::vector<std::string>& keep) {
  if (keep.empty()) return ds;
  std::unordered_set<std::string> set(keep.begin(), keep.end());
  LabeledDataset out;
  out.layout = ds.layout;
  out.polarity = ds.polarity;
  for (const DatasetRow& r : ds.rows)
    if (set.count(r.distortion)) out.rows.push_back(r);
  return out;
}

}  // namespace lfqa

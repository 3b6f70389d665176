/*
 * Copyright 2026 The grroor Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "grroor/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

namespace grroor::io {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') &&
      s.back() == s.front()) {
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) ++i;
      out += s[i];
    }
    return out;
  }
  return s;
}

// Splits on commas outside quotes. Quotes are kept on the fields.
std::vector<std::string> split_fields(std::string_view line, char sep = ',') {
  std::vector<std::string> fields;
  std::string current;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote != 0) {
      current += c;
      if (c == '\\' && i + 1 < line.size()) {
        current += line[++i];
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      current += c;
    } else if (c == sep) {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + text.size() && std::isfinite(out);
}

[[noreturn]] void fail(ErrorCode code, const std::string& source, long line,
                       const std::string& what) {
  throw Error(code, source + ":" + std::to_string(line) + ": " + what);
}

std::string quote_name(const std::string& name) {
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

enum class AttrKind { Numeric, Nominal };

struct Attribute {
  std::string name;
  AttrKind kind = AttrKind::Numeric;
  std::vector<std::string> values;  // nominal symbols in declaration order
  bool is_label = false;
  long line = 0;
};

// Parses "@attribute <name> <type>" (keyword already stripped).
Attribute parse_attribute(const std::string& rest, const std::string& source,
                          long line) {
  Attribute attr;
  attr.line = line;
  std::string body = trim(rest);
  std::size_t name_end = 0;
  if (!body.empty() && (body[0] == '\'' || body[0] == '"')) {
    const char q = body[0];
    name_end = 1;
    while (name_end < body.size() && body[name_end] != q) {
      if (body[name_end] == '\\') ++name_end;
      ++name_end;
    }
    if (name_end >= body.size()) {
      fail(ErrorCode::ParseError, source, line, "unterminated attribute name");
    }
    ++name_end;
  } else {
    while (name_end < body.size() &&
           !std::isspace(static_cast<unsigned char>(body[name_end])) &&
           body[name_end] != '{') {
      ++name_end;
    }
  }
  attr.name = unquote(body.substr(0, name_end));
  const std::string type = trim(body.substr(name_end));
  if (attr.name.empty() || type.empty()) {
    fail(ErrorCode::ParseError, source, line, "malformed @attribute");
  }
  if (type.front() == '{') {
    if (type.back() != '}') {
      fail(ErrorCode::ParseError, source, line, "unterminated nominal list");
    }
    attr.kind = AttrKind::Nominal;
    for (auto& v : split_fields(type.substr(1, type.size() - 2))) {
      attr.values.push_back(unquote(v));
    }
    return attr;
  }
  const std::string t = lower(type);
  if (t == "numeric" || t == "real" || t == "integer") {
    attr.kind = AttrKind::Numeric;
    return attr;
  }
  fail(ErrorCode::UnknownAttributeType, source, line,
       "attribute '" + attr.name + "' has unsupported type " + type);
}

// Value of a nominal symbol: the number itself for a {0,1} declaration,
// otherwise the declaration index.
bool nominal_value(const Attribute& attr, const std::string& symbol,
                   double& out) {
  for (std::size_t i = 0; i < attr.values.size(); ++i) {
    if (attr.values[i] == symbol) {
      double numeric = 0.0;
      out = parse_double(symbol, numeric) ? numeric : double(i);
      return true;
    }
  }
  return false;
}

void check_attribute(const Attribute& attr, const std::string& source) {
  if (attr.kind != AttrKind::Nominal) return;
  if (attr.values.size() != 2) {
    fail(ErrorCode::UnknownAttributeType, source, attr.line,
         "nominal attribute '" + attr.name + "' is not binary");
  }
  if (attr.is_label) {
    std::set<std::string> symbols(attr.values.begin(), attr.values.end());
    if (symbols != std::set<std::string>{"0", "1"}) {
      fail(ErrorCode::UnknownAttributeType, source, attr.line,
           "label '" + attr.name + "' must be declared {0,1}");
    }
  }
}

double convert_value(const Attribute& attr, const std::string& raw,
                     const std::string& source, long line) {
  const std::string text = unquote(raw);
  if (text == "?") {
    fail(ErrorCode::MissingValue, source, line,
         "missing value for '" + attr.name + "'");
  }
  double value = 0.0;
  if (attr.kind == AttrKind::Nominal) {
    if (!nominal_value(attr, text, value)) {
      fail(ErrorCode::UnknownAttributeType, source, line,
           "value '" + text + "' not declared for '" + attr.name + "'");
    }
  } else if (!parse_double(text, value)) {
    fail(ErrorCode::ParseError, source, line,
         "non-numeric value '" + text + "' for '" + attr.name + "'");
  }
  if (attr.is_label && value != 0.0 && value != 1.0) {
    fail(ErrorCode::UnknownAttributeType, source, line,
         "label '" + attr.name + "' has non-binary value " + text);
  }
  return value;
}

double default_value(const Attribute& attr) {
  if (attr.kind == AttrKind::Nominal) {
    double v = 0.0;
    nominal_value(attr, attr.values.front(), v);
    return v;
  }
  return 0.0;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json hyperparams_json(const std::vector<std::pair<std::string, double>>& hp) {
  json out = json::object();
  for (const auto& [k, v] : hp) out[k] = round_real(v);
  return out;
}

std::vector<std::pair<std::string, double>> hyperparams_from(const json& j) {
  std::vector<std::pair<std::string, double>> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.emplace_back(it.key(), it.value().get<double>());
  }
  return out;
}

}  // namespace

void Dataset::validate() const {
  require(y01.rows() == x.cols(), ErrorCode::ShapeMismatch,
          "dataset: feature and label instance counts differ");
  require(y_pm.rows() == y01.rows() && y_pm.cols() == y01.cols(),
          ErrorCode::ShapeMismatch, "dataset: label encodings differ in shape");
  require((y01.array() == 0.0 || y01.array() == 1.0).all(),
          ErrorCode::InvalidArgument, "dataset: labels must be 0/1");
  require((y_pm.array() == 2.0 * y01.array() - 1.0).all(),
          ErrorCode::InvalidArgument, "dataset: y_pm != 2 y01 - 1");
  require(static_cast<Index>(feature_names.size()) == x.rows() &&
              static_cast<Index>(label_names.size()) == y01.cols(),
          ErrorCode::ShapeMismatch, "dataset: name count mismatch");
  std::set<std::string> names(feature_names.begin(), feature_names.end());
  names.insert(label_names.begin(), label_names.end());
  require(names.size() == feature_names.size() + label_names.size(),
          ErrorCode::InvalidArgument, "dataset: duplicate attribute names");
  if (split) {
    std::vector<Index> all = split->train;
    all.insert(all.end(), split->test.begin(), split->test.end());
    std::sort(all.begin(), all.end());
    std::vector<Index> expected(static_cast<std::size_t>(n()));
    std::iota(expected.begin(), expected.end(), Index{0});
    require(all == expected, ErrorCode::InvalidArgument,
            "dataset: split does not partition the instances");
  }
}

std::vector<std::string> read_label_xml(const fs::path& path) {
  const std::string text = read_file(path);
  static const std::regex label_tag(
      R"re(<\s*label\b[^>]*\bname\s*=\s*("([^"]*)"|'([^']*)'))re");
  std::vector<std::string> names;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), label_tag);
       it != std::sregex_iterator(); ++it) {
    std::string name = (*it)[2].matched ? (*it)[2].str() : (*it)[3].str();
    static const std::pair<const char*, const char*> kEntities[] = {
        {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&apos;", "'"},
        {"&amp;", "&"}};
    for (const auto& [from, to] : kEntities) {
      for (std::size_t pos = name.find(from); pos != std::string::npos;
           pos = name.find(from, pos + 1)) {
        name.replace(pos, std::string_view(from).size(), to);
      }
    }
    names.push_back(std::move(name));
  }
  require(!names.empty(), ErrorCode::ParseError,
          path.string() + ": no <label name=...> entries");
  return names;
}

Dataset parse_arff(std::istream& in, const LabelSpec& labels,
                   const std::string& source) {
  std::vector<Attribute> attrs;
  std::vector<std::vector<double>> rows;
  bool in_data = false;
  std::string line;
  long lineno = 0;

  auto finish_header = [&]() {
    require(!attrs.empty(), ErrorCode::ParseError,
            source + ": no attributes declared");
    std::set<std::string> wanted(labels.names.begin(), labels.names.end());
    if (!labels.names.empty()) {
      for (auto& a : attrs) a.is_label = wanted.count(a.name) > 0;
      for (const auto& name : labels.names) {
        const bool found = std::any_of(attrs.begin(), attrs.end(),
                                       [&](const Attribute& a) { return a.name == name; });
        if (!found) {
          fail(ErrorCode::ParseError, source, lineno,
               "label '" + name + "' is not an attribute");
        }
      }
    } else {
      const auto count = static_cast<std::size_t>(labels.trailing_count);
      if (count == 0 || count >= attrs.size()) {
        fail(ErrorCode::ParseError, source, lineno,
             "label count must be between 1 and the attribute count - 1");
      }
      for (std::size_t i = attrs.size() - count; i < attrs.size(); ++i) {
        attrs[i].is_label = true;
      }
    }
    for (const auto& a : attrs) check_attribute(a, source);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    if (!in_data) {
      if (t[0] != '@') {
        fail(ErrorCode::ParseError, source, lineno, "expected a header line");
      }
      const auto space = t.find_first_of(" \t");
      const std::string keyword = lower(t.substr(0, space));
      const std::string rest = space == std::string::npos ? "" : t.substr(space);
      if (keyword == "@relation") {
        continue;
      } else if (keyword == "@attribute") {
        attrs.push_back(parse_attribute(rest, source, lineno));
      } else if (keyword == "@data") {
        finish_header();
        in_data = true;
      } else {
        fail(ErrorCode::ParseError, source, lineno,
             "unknown header keyword " + keyword);
      }
      continue;
    }

    std::vector<double> row(attrs.size());
    if (t.front() == '{') {
      if (t.back() != '}') {
        fail(ErrorCode::ParseError, source, lineno, "unterminated sparse row");
      }
      for (std::size_t a = 0; a < attrs.size(); ++a) row[a] = default_value(attrs[a]);
      const std::string body = trim(t.substr(1, t.size() - 2));
      if (!body.empty()) {
        for (const auto& entry : split_fields(body)) {
          const auto sep = entry.find_first_of(" \t");
          double idx_value = 0.0;
          if (sep == std::string::npos ||
              !parse_double(entry.substr(0, sep), idx_value) || idx_value < 0 ||
              idx_value >= double(attrs.size()) ||
              idx_value != std::floor(idx_value)) {
            fail(ErrorCode::ParseError, source, lineno,
                 "bad sparse entry '" + entry + "'");
          }
          const auto idx = static_cast<std::size_t>(idx_value);
          row[idx] = convert_value(attrs[idx], trim(entry.substr(sep)), source, lineno);
        }
      }
    } else {
      const auto fields = split_fields(t);
      if (fields.size() != attrs.size()) {
        fail(ErrorCode::ParseError, source, lineno,
             "expected " + std::to_string(attrs.size()) + " values, got " +
                 std::to_string(fields.size()));
      }
      for (std::size_t a = 0; a < attrs.size(); ++a) {
        row[a] = convert_value(attrs[a], fields[a], source, lineno);
      }
    }
    rows.push_back(std::move(row));
  }
  require(in_data, ErrorCode::ParseError, source + ": missing @data section");

  Dataset data;
  std::vector<std::size_t> feature_cols;
  std::vector<std::size_t> label_cols;
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    if (attrs[a].is_label) {
      label_cols.push_back(a);
      data.label_names.push_back(attrs[a].name);
    } else {
      feature_cols.push_back(a);
      data.feature_names.push_back(attrs[a].name);
    }
  }
  require(!feature_cols.empty(), ErrorCode::ParseError,
          source + ": no feature attributes");
  const auto n = static_cast<Index>(rows.size());
  data.x.resize(static_cast<Index>(feature_cols.size()), n);
  data.y01.resize(n, static_cast<Index>(label_cols.size()));
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      data.x(static_cast<Index>(f), i) = row[feature_cols[f]];
    }
    for (std::size_t l = 0; l < label_cols.size(); ++l) {
      data.y01(i, static_cast<Index>(l)) = row[label_cols[l]];
    }
  }
  data.y_pm = (2.0 * data.y01.array() - 1.0).matrix();
  data.validate();
  return data;
}

Dataset load_arff(const fs::path& path, const LabelSpec& labels) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot open " + path.string());
  return parse_arff(in, labels, path.string());
}

void write_arff(const Dataset& data, const fs::path& path,
                const std::string& relation) {
  std::ostringstream out;
  out << "@relation " << quote_name(relation) << "\n\n";
  for (const auto& name : data.feature_names) {
    out << "@attribute " << quote_name(name) << " numeric\n";
  }
  for (const auto& name : data.label_names) {
    out << "@attribute " << quote_name(name) << " {0,1}\n";
  }
  out << "\n@data\n";
  char buf[64];
  for (Index i = 0; i < data.n(); ++i) {
    for (Index f = 0; f < data.d(); ++f) {
      std::snprintf(buf, sizeof buf, "%.17g", data.x(f, i));
      out << buf << ',';
    }
    for (Index l = 0; l < data.k(); ++l) {
      out << (data.y01(i, l) == 1.0 ? '1' : '0')
          << (l + 1 < data.k() ? "," : "");
    }
    out << '\n';
  }
  write_text(path, out.str());
}

void write_label_xml(const Dataset& data, const fs::path& path) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"
      << "<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n";
  for (const auto& name : data.label_names) {
    std::string escaped;
    for (char c : name) {
      switch (c) {
        case '&': escaped += "&amp;"; break;
        case '<': escaped += "&lt;"; break;
        case '>': escaped += "&gt;"; break;
        case '"': escaped += "&quot;"; break;
        default: escaped += c;
      }
    }
    out << "  <label name=\"" << escaped << "\"></label>\n";
  }
  out << "</labels>\n";
  write_text(path, out.str());
}

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv_table(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot open " + path.string());
  CsvTable table;
  std::string line;
  long lineno = 0;
  const std::string source = path.string();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (table.header.empty()) {
      for (auto& f : fields) table.header.push_back(unquote(f));
      continue;
    }
    if (fields.size() != table.header.size()) {
      fail(ErrorCode::ParseError, source, lineno,
           "expected " + std::to_string(table.header.size()) + " columns, got " +
               std::to_string(fields.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string cell = unquote(fields[c]);
      if (cell == "?" || cell.empty()) {
        fail(ErrorCode::MissingValue, source, lineno,
             "missing value in column " + std::to_string(c + 1) + " (" +
                 table.header[c] + ")");
      }
      if (!parse_double(cell, row[c])) {
        fail(ErrorCode::ParseError, source, lineno,
             "row " + std::to_string(table.rows.size() + 1) + ", column " +
                 std::to_string(c + 1) + " (" + table.header[c] +
                 "): non-numeric '" + cell + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  require(!table.header.empty(), ErrorCode::ParseError,
          source + ": missing header row");
  return table;
}

}  // namespace

Dataset load_csv(const fs::path& features_path, const fs::path& labels_path) {
  const CsvTable features = read_csv_table(features_path);
  const CsvTable labels = read_csv_table(labels_path);
  require(features.rows.size() == labels.rows.size(), ErrorCode::ParseError,
          "feature and label CSVs have different row counts");
  const auto n = static_cast<Index>(features.rows.size());
  const auto d = static_cast<Index>(features.header.size());
  const auto k = static_cast<Index>(labels.header.size());
  Dataset data;
  data.feature_names = features.header;
  data.label_names = labels.header;
  data.x.resize(d, n);
  data.y01.resize(n, k);
  for (Index i = 0; i < n; ++i) {
    for (Index f = 0; f < d; ++f) {
      data.x(f, i) = features.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)];
    }
    for (Index l = 0; l < k; ++l) {
      const double v = labels.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
      if (v != 0.0 && v != 1.0) {
        fail(ErrorCode::UnknownAttributeType, labels_path.string(), long(i) + 2,
             "label '" + labels.header[static_cast<std::size_t>(l)] +
                 "' has non-binary value " + format_real(v));
      }
      data.y01(i, l) = v;
    }
  }
  data.y_pm = (2.0 * data.y01.array() - 1.0).matrix();
  data.validate();
  return data;
}

Dataset concatenate(const Dataset& train, const Dataset& test) {
  require(train.feature_names == test.feature_names &&
              train.label_names == test.label_names,
          ErrorCode::ShapeMismatch,
          "train and test files declare different attributes");
  Dataset out;
  out.feature_names = train.feature_names;
  out.label_names = train.label_names;
  out.x.resize(train.d(), train.n() + test.n());
  out.x << train.x, test.x;
  out.y01.resize(train.n() + test.n(), train.k());
  out.y01 << train.y01, test.y01;
  out.y_pm = (2.0 * out.y01.array() - 1.0).matrix();
  Split split;
  for (Index i = 0; i < train.n(); ++i) split.train.push_back(i);
  for (Index i = 0; i < test.n(); ++i) split.test.push_back(train.n() + i);
  out.split = std::move(split);
  out.validate();
  return out;
}

Split random_split(Index n, double train_ratio, std::uint64_t seed) {
  require(train_ratio > 0.0 && train_ratio < 1.0, ErrorCode::InvalidArgument,
          "random split ratio must be in (0, 1)");
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  // Fisher-Yates with an explicit engine draw, stable across standard
  // library implementations (std::shuffle is not).
  std::mt19937_64 rng(seed);
  for (std::size_t i = perm.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(perm[i - 1], perm[j]);
  }
  const auto n_train = static_cast<std::size_t>(
      std::clamp<double>(std::round(train_ratio * double(n)), 1.0, double(n - 1)));
  Split split;
  split.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Dataset select_instances(const Dataset& data, const std::vector<Index>& rows) {
  Dataset out;
  out.feature_names = data.feature_names;
  out.label_names = data.label_names;
  const auto n = static_cast<Index>(rows.size());
  out.x.resize(data.d(), n);
  out.y01.resize(n, data.k());
  for (Index i = 0; i < n; ++i) {
    const Index r = rows[static_cast<std::size_t>(i)];
    require(r >= 0 && r < data.n(), ErrorCode::InvalidArgument,
            "select_instances: index out of range");
    out.x.col(i) = data.x.col(r);
    out.y01.row(i) = data.y01.row(r);
  }
  out.y_pm = (2.0 * out.y01.array() - 1.0).matrix();
  return out;
}

Standardization standardize(Dataset& data, const std::vector<Index>* fit_rows) {
  Standardization st;
  st.mean.resize(data.d());
  st.stddev.resize(data.d());
  for (Index f = 0; f < data.d(); ++f) {
    double mean = 0.0;
    double sq = 0.0;
    if (fit_rows != nullptr && !fit_rows->empty()) {
      for (Index i : *fit_rows) mean += data.x(f, i);
      mean /= double(fit_rows->size());
      for (Index i : *fit_rows) sq += (data.x(f, i) - mean) * (data.x(f, i) - mean);
      sq /= double(fit_rows->size());
    } else {
      mean = data.x.row(f).mean();
      sq = (data.x.row(f).array() - mean).square().mean();
    }
    const double sd = std::sqrt(sq);
    st.mean(f) = mean;
    auto row = data.x.row(f);
    if (sd <= 1e-12 * (1.0 + std::abs(mean))) {
      st.stddev(f) = 0.0;
      row.setZero();
    } else {
      st.stddev(f) = sd;
      row = (row.array() - mean) / sd;
    }
  }
  return st;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

double round_real(double value) {
  return std::strtod(format_real(value).c_str(), nullptr);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  out.flush();
  require(out.good(), ErrorCode::IoError, "write failed for " + path.string());
}

void write_ranking(const RankingFile& ranking, const fs::path& path) {
  json j;
  j["schema_version"] = 1;
  j["converged"] = ranking.converged;
  j["iterations"] = ranking.iterations;
  j["hyperparams"] = hyperparams_json(ranking.hyperparams);
  json features = json::array();
  for (std::size_t r = 0; r < ranking.order.size(); ++r) {
    const Index idx = ranking.order[r];
    json entry;
    entry["rank"] = r + 1;
    entry["index"] = idx;
    entry["name"] = static_cast<std::size_t>(idx) < ranking.names.size()
                        ? ranking.names[static_cast<std::size_t>(idx)]
                        : std::to_string(idx);
    entry["score"] = round_real(ranking.scores(idx));
    features.push_back(std::move(entry));
  }
  j["features"] = std::move(features);
  json trace = json::array();
  for (double v : ranking.objective_trace) trace.push_back(round_real(v));
  j["objective_trace"] = std::move(trace);
  j["warnings"] = ranking.warnings;
  write_text(path, j.dump(2) + "\n");
}

RankingFile read_ranking(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  RankingFile r;
  try {
    r.converged = j.at("converged").get<bool>();
    r.iterations = j.at("iterations").get<int>();
    r.hyperparams = hyperparams_from(j.at("hyperparams"));
    const auto& features = j.at("features");
    const auto d = static_cast<Index>(features.size());
    r.scores = Vector::Zero(d);
    r.names.assign(static_cast<std::size_t>(d), "");
    for (const auto& f : features) {
      const auto idx = f.at("index").get<Index>();
      require(idx >= 0 && idx < d, ErrorCode::ParseError,
              path.string() + ": feature index out of range");
      r.order.push_back(idx);
      r.names[static_cast<std::size_t>(idx)] = f.at("name").get<std::string>();
      r.scores(idx) = f.at("score").get<double>();
    }
    r.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return r;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> kNames = {
      "hamming_loss", "coverage",     "average_precision", "macro_f1",
      "micro_f1",     "ranking_loss", "redundancy"};
  return kNames;
}

std::optional<double> metric_value(const EvaluationRow& row,
                                   const std::string& name) {
  if (name == "hamming_loss") return row.hamming_loss;
  if (name == "coverage") return row.coverage;
  if (name == "average_precision") return row.average_precision;
  if (name == "macro_f1") return row.macro_f1;
  if (name == "micro_f1") return row.micro_f1;
  if (name == "ranking_loss") return row.ranking_loss;
  if (name == "redundancy") return row.redundancy;
  throw Error(ErrorCode::InvalidArgument, "unknown metric " + name);
}

bool lower_is_better(const std::string& metric) {
  return metric != "average_precision" && metric != "macro_f1" &&
         metric != "micro_f1";
}

std::string report_to_string(const EvaluationReport& report,
                             ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["schema_version"] = report.schema_version;
    j["method"] = report.method;
    j["dataset"] = report.dataset;
    j["seed"] = report.seed;
    j["standardized"] = report.standardized;
    j["hyperparams"] = hyperparams_json(report.hyperparams);
    json rows = json::array();
    for (const auto& r : report.rows) {
      json row;
      row["subset_size"] = r.subset_size;
      for (const auto& name : metric_names()) {
        const auto v = metric_value(r, name);
        row[name] = v ? json(round_real(*v)) : json(nullptr);
      }
      row["coverage_skipped"] = r.coverage_skipped;
      row["ranking_loss_skipped"] = r.ranking_loss_skipped;
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "# schema_version=" << report.schema_version << "\n"
      << "# method=" << report.method << "\n"
      << "# dataset=" << report.dataset << "\n"
      << "# seed=" << report.seed << "\n"
      << "# standardized=" << (report.standardized ? "on" : "off") << "\n";
  for (const auto& [k, v] : report.hyperparams) {
    out << "# hp." << k << "=" << format_real(v) << "\n";
  }
  out << "subset_size";
  for (const auto& name : metric_names()) out << "," << name;
  out << ",coverage_skipped,ranking_loss_skipped\n";
  for (const auto& r : report.rows) {
    out << r.subset_size;
    for (const auto& name : metric_names()) {
      const auto v = metric_value(r, name);
      out << "," << (v ? format_real(*v) : "");
    }
    out << "," << r.coverage_skipped << "," << r.ranking_loss_skipped << "\n";
  }
  return out.str();
}

void write_report(const EvaluationReport& report, const fs::path& path,
                  ReportFormat format) {
  write_text(path, report_to_string(report, format));
}

namespace {

EvaluationReport read_report_csv(const fs::path& path) {
  std::istringstream in(read_file(path));
  EvaluationReport report;
  report.hyperparams.clear();
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "schema_version") report.schema_version = std::stoi(value);
      else if (key == "method") report.method = value;
      else if (key == "dataset") report.dataset = value;
      else if (key == "seed") report.seed = std::stoull(value);
      else if (key == "standardized") report.standardized = value == "on";
      else if (key.rfind("hp.", 0) == 0) {
        report.hyperparams.emplace_back(key.substr(3), std::stod(value));
      }
      continue;
    }
    const auto fields = split_fields(line);
    if (header.empty()) {
      header = fields;
      continue;
    }
    require(fields.size() == header.size(), ErrorCode::ParseError,
            path.string() + ": ragged report row");
    EvaluationRow row;
    for (std::size_t c = 0; c < header.size(); ++c) {
      const std::string& h = header[c];
      const std::string& f = fields[c];
      if (h == "subset_size") row.subset_size = std::stol(f);
      else if (h == "coverage_skipped") row.coverage_skipped = std::stol(f);
      else if (h == "ranking_loss_skipped") row.ranking_loss_skipped = std::stol(f);
      else if (h == "redundancy") {
        if (!f.empty()) row.redundancy = std::stod(f);
      } else if (h == "hamming_loss") row.hamming_loss = std::stod(f);
      else if (h == "coverage") row.coverage = std::stod(f);
      else if (h == "average_precision") row.average_precision = std::stod(f);
      else if (h == "macro_f1") row.macro_f1 = std::stod(f);
      else if (h == "micro_f1") row.micro_f1 = std::stod(f);
      else if (h == "ranking_loss") row.ranking_loss = std::stod(f);
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace

EvaluationReport read_report(const fs::path& path) {
  if (lower(path.extension().string()) == ".csv") {
    try {
      return read_report_csv(path);
    } catch (const std::logic_error& e) {
      throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
  }
  EvaluationReport report;
  try {
    const json j = json::parse(read_file(path));
    report.schema_version = j.at("schema_version").get<int>();
    report.method = j.at("method").get<std::string>();
    report.dataset = j.at("dataset").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.standardized = j.at("standardized").get<bool>();
    report.hyperparams = hyperparams_from(j.at("hyperparams"));
    for (const auto& r : j.at("rows")) {
      EvaluationRow row;
      row.subset_size = r.at("subset_size").get<Index>();
      row.hamming_loss = r.at("hamming_loss").get<double>();
      row.coverage = r.at("coverage").get<double>();
      row.average_precision = r.at("average_precision").get<double>();
      row.macro_f1 = r.at("macro_f1").get<double>();
      row.micro_f1 = r.at("micro_f1").get<double>();
      row.ranking_loss = r.at("ranking_loss").get<double>();
      if (!r.at("redundancy").is_null()) {
        row.redundancy = r.at("redundancy").get<double>();
      }
      row.coverage_skipped = r.value("coverage_skipped", Index{0});
      row.ranking_loss_skipped = r.value("ranking_loss_skipped", Index{0});
      report.rows.push_back(row);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return report;
}

}  // namespace grroor::io

#include "copycat/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "copycat/error.hpp"
#include "copycat/random.hpp"

namespace copycat {

namespace {

bool parse_double(std::string_view text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out, std::chars_format::general);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    const std::string_view piece = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    std::string_view cell = trim(piece);
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
    fields.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void validate_schema(const Schema& schema) {
  std::set<std::string> names;
  for (const auto& spec : schema) {
    if (!names.insert(spec.name).second) throw Error("duplicate feature name '" + spec.name + "'");
    if (spec.kind == FeatureKind::nominal) {
      if (spec.categories.empty()) throw Error("nominal feature '" + spec.name + "' has no categories");
      std::set<std::string> cats(spec.categories.begin(), spec.categories.end());
      if (cats.size() != spec.categories.size())
        throw Error("nominal feature '" + spec.name + "' has duplicate categories");
    }
  }
}

std::vector<std::string> feature_names(const Schema& schema) {
  std::vector<std::string> names;
  names.reserve(schema.size());
  for (const auto& s : schema) names.push_back(s.name);
  return names;
}

void LabeledDataset::validate() const {
  if (labels.empty()) throw Error("dataset is empty");
  if (features.rows() != labels.size())
    throw Error("feature rows (" + std::to_string(features.rows()) + ") != labels (" +
                std::to_string(labels.size()) + ")");
  if (!schema.empty() && schema.size() != features.cols())
    throw Error("schema has " + std::to_string(schema.size()) + " features, matrix has " +
                std::to_string(features.cols()));
  if (class_count < 2) throw Error("class_count must be >= 2");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= class_count)
      throw Error("label " + std::to_string(labels[i]) + " at row " + std::to_string(i) + " out of range");
  }
  for (std::size_t r = 0; r < features.rows(); ++r)
    for (std::size_t c = 0; c < features.cols(); ++c)
      if (!std::isfinite(features(r, c)))
        throw Error("non-finite value at row " + std::to_string(r) + ", column " + std::to_string(c));
  validate_schema(schema);
}

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& rows) const {
  LabeledDataset out;
  out.features = Matrix(rows.size(), dim());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = features.row(rows[i]);
    std::copy(src.begin(), src.end(), out.features.row(i).begin());
    out.labels.push_back(labels[rows[i]]);
  }
  out.schema = schema;
  out.class_count = class_count;
  out.class_names = class_names;
  return out;
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(class_count), 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

LabeledDataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  return load_csv(path, CsvOptions{label_column, std::nullopt, std::nullopt});
}

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open CSV file: " + path.string());

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_line(line);
      break;
    }
  }
  if (header.empty()) throw Error(path.string() + ": missing header row");

  const auto label_it = std::find(header.begin(), header.end(), options.label_column);
  if (label_it == header.end())
    throw Error(path.string() + ": label column '" + options.label_column + "' not found in header");
  const std::size_t label_idx = static_cast<std::size_t>(label_it - header.begin());

  std::vector<std::vector<std::string>> cells;  // per feature column
  std::vector<std::string> label_cells;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_idx) feature_cols.push_back(c);
  cells.resize(feature_cols.size());

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != header.size())
      throw Error(path.string() + ": row " + std::to_string(row) + " (line " + std::to_string(line_no) +
                  ") has " + std::to_string(fields.size()) + " fields, expected " +
                  std::to_string(header.size()));
    for (std::size_t j = 0; j < feature_cols.size(); ++j) cells[j].push_back(std::move(fields[feature_cols[j]]));
    label_cells.push_back(std::move(fields[label_idx]));
    ++row;
  }
  if (row == 0) throw Error(path.string() + ": no data rows");

  const std::size_t d = feature_cols.size();
  if (options.schema_hint && options.schema_hint->size() != d)
    throw Error(path.string() + ": schema hint has " + std::to_string(options.schema_hint->size()) +
                " features, file has " + std::to_string(d));

  LabeledDataset data;
  data.features = Matrix(row, d);
  for (std::size_t j = 0; j < d; ++j) {
    const std::string& name = header[feature_cols[j]];
    FeatureSpec spec;
    if (options.schema_hint) {
      spec = (*options.schema_hint)[j];
      if (spec.name != name)
        throw Error(path.string() + ": column " + std::to_string(feature_cols[j]) + " is '" + name +
                    "', schema hint expects '" + spec.name + "'");
    } else {
      bool all_numeric = true;
      double tmp = 0.0;
      for (const auto& cell : cells[j]) {
        if (!parse_double(cell, tmp)) {
          all_numeric = false;
          break;
        }
      }
      spec.name = name;
      spec.kind = all_numeric ? FeatureKind::numeric : FeatureKind::nominal;
      if (!all_numeric) {
        for (const auto& cell : cells[j])
          if (std::find(spec.categories.begin(), spec.categories.end(), cell) == spec.categories.end())
            spec.categories.push_back(cell);
      }
    }

    if (spec.kind == FeatureKind::numeric) {
      for (std::size_t r = 0; r < row; ++r) {
        double v = 0.0;
        if (!parse_double(cells[j][r], v))
          throw Error(path.string() + ": row " + std::to_string(r) + ", column '" + name +
                      "': cannot parse '" + cells[j][r] + "' as a number");
        data.features(r, j) = v;
      }
    } else {
      std::vector<double> encoded;
      try {
        encoded = encode_nominals(cells[j], spec);
      } catch (const Error& e) {
        throw Error(path.string() + ", column '" + name + "': " + e.what());
      }
      for (std::size_t r = 0; r < row; ++r) data.features(r, j) = encoded[r];
    }
    data.schema.push_back(std::move(spec));
  }

  if (options.class_names) {
    data.class_names = *options.class_names;
  }
  std::unordered_map<std::string, int> class_index;
  for (std::size_t k = 0; k < data.class_names.size(); ++k) class_index[data.class_names[k]] = static_cast<int>(k);
  for (std::size_t r = 0; r < row; ++r) {
    auto it = class_index.find(label_cells[r]);
    if (it == class_index.end()) {
      if (options.class_names)
        throw Error(path.string() + ": row " + std::to_string(r) + " has unknown class '" + label_cells[r] + "'");
      it = class_index.emplace(label_cells[r], static_cast<int>(data.class_names.size())).first;
      data.class_names.push_back(label_cells[r]);
    }
    data.labels.push_back(it->second);
  }
  data.class_count = std::max<int>(2, static_cast<int>(data.class_names.size()));
  validate_schema(data.schema);
  return data;
}

void write_csv(const std::filesystem::path& path, const LabeledDataset& data, const std::string& label_column,
               bool decode) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write CSV file: " + path.string());
  for (std::size_t j = 0; j < data.dim(); ++j) {
    out << (j < data.schema.size() ? data.schema[j].name : "f" + std::to_string(j)) << ',';
  }
  out << label_column << '\n';
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t j = 0; j < data.dim(); ++j) {
      const double v = data.features(r, j);
      const bool nominal = decode && j < data.schema.size() && data.schema[j].kind == FeatureKind::nominal;
      const auto idx = static_cast<std::size_t>(v);
      if (nominal && v >= 0 && static_cast<double>(idx) == v && idx < data.schema[j].categories.size()) {
        out << data.schema[j].categories[idx];
      } else {
        out << format_number(v);
      }
      out << ',';
    }
    const auto label = static_cast<std::size_t>(data.labels[r]);
    if (label < data.class_names.size()) {
      out << data.class_names[label];
    } else {
      out << data.labels[r];
    }
    out << '\n';
  }
}

std::vector<double> encode_nominals(const std::vector<std::string>& raw, const FeatureSpec& spec) {
  if (spec.kind != FeatureKind::nominal) throw Error("feature '" + spec.name + "' is not nominal");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < spec.categories.size(); ++k) index.emplace(spec.categories[k], k);
  std::vector<double> out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto it = index.find(raw[i]);
    if (it == index.end())
      throw Error("unseen category '" + raw[i] + "' at row " + std::to_string(i) + " of feature '" + spec.name + "'");
    out.push_back(static_cast<double>(it->second));
  }
  return out;
}

std::vector<std::string> decode_nominals(const std::vector<double>& encoded, const FeatureSpec& spec) {
  std::vector<std::string> out;
  out.reserve(encoded.size());
  for (double v : encoded) {
    const auto idx = static_cast<std::size_t>(v);
    if (v < 0 || static_cast<double>(idx) != v || idx >= spec.categories.size())
      throw Error("value " + format_number(v) + " is not a category index of '" + spec.name + "'");
    out.push_back(spec.categories[idx]);
  }
  return out;
}

std::vector<double> Standardizer::transform(std::span<const double> x) const {
  if (x.size() != dim())
    throw Error("standardizer expects " + std::to_string(dim()) + " features, got " + std::to_string(x.size()));
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - means[j]) / stds[j];
  return out;
}

nlohmann::json Standardizer::to_json() const { return {{"means", means}, {"stds", stds}}; }

Standardizer Standardizer::from_json(const nlohmann::json& j) {
  Standardizer s;
  s.means = j.at("means").get<std::vector<double>>();
  s.stds = j.at("stds").get<std::vector<double>>();
  if (s.means.size() != s.stds.size()) throw Error("standardizer means/stds length mismatch");
  s.constant_columns.assign(s.dim(), false);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (!(s.stds[i] > 0.0) || !std::isfinite(s.stds[i])) throw Error("standardizer std must be positive");
  }
  return s;
}

Standardizer fit_standardizer(const LabeledDataset& data) {
  const std::size_t m = data.features.rows();
  const std::size_t d = data.features.cols();
  if (m == 0) throw Error("cannot fit standardizer on an empty dataset");
  Standardizer s;
  s.means.assign(d, 0.0);
  s.stds.assign(d, 1.0);
  s.constant_columns.assign(d, false);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m; ++r) sum += data.features(r, j);
    const double mean = sum / static_cast<double>(m);
    double sq = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double dev = data.features(r, j) - mean;
      sq += dev * dev;
    }
    const double sd = std::sqrt(sq / static_cast<double>(m));
    s.means[j] = mean;
    if (sd > 0.0) {
      s.stds[j] = sd;
    } else {
      s.constant_columns[j] = true;
      const std::string name = j < data.schema.size() ? data.schema[j].name : std::to_string(j);
      std::clog << "warning: feature '" << name << "' is constant; using std 1\n";
    }
  }
  return s;
}

LabeledDataset apply_standardizer(const LabeledDataset& data, const Standardizer& s) {
  if (data.dim() != s.dim())
    throw Error("standardizer dimension " + std::to_string(s.dim()) + " != dataset dimension " +
                std::to_string(data.dim()));
  LabeledDataset out = data;
  for (std::size_t r = 0; r < out.size(); ++r) {
    auto row = out.features.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - s.means[j]) / s.stds[j];
  }
  return out;
}

LabeledDataset invert_standardizer(const LabeledDataset& data, const Standardizer& s) {
  if (data.dim() != s.dim())
    throw Error("standardizer dimension " + std::to_string(s.dim()) + " != dataset dimension " +
                std::to_string(data.dim()));
  LabeledDataset out = data;
  for (std::size_t r = 0; r < out.size(); ++r) {
    auto row = out.features.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = row[j] * s.stds[j] + s.means[j];
  }
  return out;
}

std::size_t stratified_train_count(std::size_t count, double train_fraction) {
  const auto n = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(count) + 0.5));
  return std::clamp<std::size_t>(n, 1, count - 1);
}

std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& data, const SplitConfig& cfg) {
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
    throw Error("train_fraction must lie in (0, 1)");
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(data.class_count));
  for (std::size_t r = 0; r < data.size(); ++r) by_class[static_cast<std::size_t>(data.labels[r])].push_back(r);

  Rng rng(cfg.seed);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& rows = by_class[c];
    if (rows.empty()) continue;
    if (rows.size() < 2)
      throw Error("class " + std::to_string(c) + " has " + std::to_string(rows.size()) +
                  " row(s); stratified split needs at least 2");
    rng.shuffle(rows);
    const std::size_t n_train = stratified_train_count(rows.size(), cfg.train_fraction);
    train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_rows.insert(test_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {data.subset(train_rows), data.subset(test_rows)};
}

}  // namespace copycat

#include "sll/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "sll/errors.hpp"

namespace sll {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_double(const std::string& text, std::size_t line_no, const std::string& column) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ", column " + column +
                     ": cannot parse '" + text + "' as a number");
  }
  return value;
}

int parse_int(const std::string& text, std::size_t line_no, const std::string& column) {
  int value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ", column " + column +
                     ": cannot parse '" + text + "' as an integer");
  }
  return value;
}

struct Header {
  std::vector<std::size_t> feature_cols;
  std::vector<std::size_t> prob_cols;  // index c lives at prob_cols[c]
  std::ptrdiff_t label_col = -1;
  std::ptrdiff_t confidence_col = -1;
  std::size_t column_count = 0;
};

Header parse_header(const std::string& line, const std::string& path) {
  const std::vector<std::string> names = split_csv_line(line);
  Header header;
  header.column_count = names.size();
  std::vector<std::pair<int, std::size_t>> prob_positions;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& name = names[i];
    if (name.rfind("f_", 0) == 0) {
      header.feature_cols.push_back(i);
    } else if (name == "label") {
      if (header.label_col >= 0) throw SchemaError(path + ": duplicate label column");
      header.label_col = static_cast<std::ptrdiff_t>(i);
    } else if (name == "confidence") {
      if (header.confidence_col >= 0) throw SchemaError(path + ": duplicate confidence column");
      header.confidence_col = static_cast<std::ptrdiff_t>(i);
    } else if (name.rfind("p_", 0) == 0) {
      int index = 0;
      const char* begin = name.data() + 2;
      const char* end = name.data() + name.size();
      auto res = std::from_chars(begin, end, index);
      if (res.ec != std::errc{} || res.ptr != end || index < 0) {
        throw SchemaError(path + ": malformed probability column '" + name + "'");
      }
      prob_positions.emplace_back(index, i);
    } else {
      throw SchemaError(path + ": unrecognized column '" + name +
                        "' (expected f_*, label, confidence or p_<class>)");
    }
  }
  std::sort(prob_positions.begin(), prob_positions.end());
  for (std::size_t c = 0; c < prob_positions.size(); ++c) {
    if (prob_positions[c].first != static_cast<int>(c)) {
      throw SchemaError(path + ": probability columns must be exactly p_0..p_{k-1}");
    }
    header.prob_cols.push_back(prob_positions[c].second);
  }
  if (header.feature_cols.empty()) {
    throw SchemaError(path + ": no feature columns (prefix f_) found");
  }
  return header;
}

struct RawTable {
  Header header;
  std::vector<std::vector<std::string>> rows;
};

RawTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  RawTable table;
  table.header = parse_header(line, path);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != table.header.column_count) {
      throw ParseError(path + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(table.header.column_count));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.rows.empty()) throw ParseError(path + ": no data rows");
  return table;
}

Matrix extract_features(const RawTable& table) {
  const auto& cols = table.header.feature_cols;
  Matrix features(table.rows.size(), cols.size(), 0.0);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      features(i, j) = parse_double(table.rows[i][cols[j]], i + 2, "f_" + std::to_string(j));
    }
  }
  return features;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::variant<HardDataset, SoftDataset> load_dataset(const std::string& path) {
  RawTable table = read_table(path);
  const Header& header = table.header;
  const bool has_label = header.label_col >= 0;
  const bool has_probs = !header.prob_cols.empty();
  if (header.confidence_col >= 0) {
    throw SchemaError(path + ": confidence columns belong to convert-confidence input, not "
                      "datasets");
  }
  if (has_label == has_probs) {
    throw SchemaError(path + ": need exactly one of a label column or p_* columns");
  }

  Matrix features = extract_features(table);

  if (has_label) {
    std::vector<int> labels(table.rows.size());
    int max_label = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      labels[i] =
          parse_int(table.rows[i][static_cast<std::size_t>(header.label_col)], i + 2, "label");
      if (labels[i] < 0) {
        throw ParseError(path + ": negative label on line " + std::to_string(i + 2));
      }
      max_label = std::max(max_label, labels[i]);
    }
    const std::size_t class_count = static_cast<std::size_t>(max_label) + 1;
    return HardDataset(std::move(features), std::move(labels), class_count);
  }

  const std::size_t k = header.prob_cols.size();
  if (k < 2) throw SchemaError(path + ": soft labels need at least two probability columns");
  std::vector<ClassDistribution> labels;
  labels.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    std::vector<double> probs(k);
    for (std::size_t c = 0; c < k; ++c) {
      probs[c] = parse_double(table.rows[i][header.prob_cols[c]], i + 2,
                              "p_" + std::to_string(c));
    }
    labels.push_back(ClassDistribution(std::move(probs)));
  }
  return SoftDataset(std::move(features), std::move(labels));
}

HardDataset load_hard_dataset(const std::string& path) {
  auto loaded = load_dataset(path);
  if (auto* hard = std::get_if<HardDataset>(&loaded)) return std::move(*hard);
  throw SchemaError(path + ": expected a hard-labelled dataset (label column)");
}

SoftDataset load_soft_dataset(const std::string& path) {
  auto loaded = load_dataset(path);
  if (auto* soft = std::get_if<SoftDataset>(&loaded)) return std::move(*soft);
  throw SchemaError(path + ": expected a soft-labelled dataset (p_* columns)");
}

void write_hard_csv(const std::string& path, const HardDataset& data) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  const std::size_t d = data.features.cols();
  for (std::size_t j = 0; j < d; ++j) out << "f_" << j << ',';
  out << "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) out << format_double(data.features(i, j)) << ',';
    out << data.labels[i] << '\n';
  }
}

void write_soft_csv(const std::string& path, const SoftDataset& data) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  const std::size_t d = data.features.cols();
  const std::size_t k = data.class_count;
  for (std::size_t j = 0; j < d; ++j) out << "f_" << j << ',';
  for (std::size_t c = 0; c < k; ++c) {
    out << "p_" << c << (c + 1 < k ? ',' : '\n');
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) out << format_double(data.features(i, j)) << ',';
    for (std::size_t c = 0; c < k; ++c) {
      out << format_double(data.labels[i][c]) << (c + 1 < k ? ',' : '\n');
    }
  }
}

ConfidenceData load_confidence_csv(const std::string& path) {
  RawTable table = read_table(path);
  const Header& header = table.header;
  if (header.label_col < 0 || header.confidence_col < 0) {
    throw SchemaError(path + ": confidence conversion needs both label and confidence columns");
  }
  if (!header.prob_cols.empty()) {
    throw SchemaError(path + ": file already carries soft labels");
  }
  ConfidenceData data;
  data.features = extract_features(table);
  data.labels.resize(table.rows.size());
  data.confidences.resize(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    data.labels[i] =
        parse_int(table.rows[i][static_cast<std::size_t>(header.label_col)], i + 2, "label");
    data.confidences[i] = parse_int(
        table.rows[i][static_cast<std::size_t>(header.confidence_col)], i + 2, "confidence");
  }
  return data;
}

SoftDataset convert_confidence(const ConfidenceData& data) {
  std::vector<ClassDistribution> labels;
  labels.reserve(data.labels.size());
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    labels.push_back(confidence_to_soft(data.labels[i], data.confidences[i]));
  }
  return SoftDataset(data.features, std::move(labels));
}

}  // namespace sll

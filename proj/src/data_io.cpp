// Copyright 2026 The FairGNN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairgnn/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fairgnn/error.hpp"
#include "fairgnn/log.hpp"
#include "fairgnn/random.hpp"
#include "internal/json_convert.hpp"

namespace fairgnn {
namespace {

using nlohmann::json;

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  for (std::string& f : fields) {
    const auto first = f.find_first_not_of(" \t");
    const auto last = f.find_last_not_of(" \t");
    f = first == std::string::npos ? std::string() : f.substr(first, last - first + 1);
  }
  return fields;
}

std::string Where(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line);
}

double ParseDouble(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    Fail(ErrorKind::kIo, where + ": cannot parse number '" + text + "'");
  }
  return value;
}

long long ParseInteger(const std::string& text, const std::string& where) {
  long long value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    Fail(ErrorKind::kIo, where + ": cannot parse integer '" + text + "'");
  }
  return value;
}

Observation ParseBinary(const std::string& text, const std::string& where, const char* what) {
  if (text.empty()) return std::nullopt;
  if (text == "0") return 0;
  if (text == "1") return 1;
  Fail(ErrorKind::kSchema, where + ": " + what + " must be 0, 1 or empty, got '" + text + "'");
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Calls emit(i, j) for each pair i < j of `members` independently with
// probability p, using geometric skips over the pair sequence.
template <typename Emit>
void SamplePairsWithin(const std::vector<std::size_t>& members, double p, Rng& rng, Emit emit) {
  const std::size_t m = members.size();
  if (m < 2 || p <= 0.0) return;
  const double log_q = std::log1p(-std::min(p, 1.0));
  std::size_t row = 0;
  std::size_t col = 0;  // next candidate is (row, row + 1 + col)
  for (;;) {
    std::size_t skip = 0;
    if (p < 1.0) {
      const double r = rng.Uniform();
      const double jump = std::floor(std::log1p(-r) / log_q);
      if (jump >= static_cast<double>(m) * static_cast<double>(m)) return;
      skip = static_cast<std::size_t>(jump);
    }
    col += skip;
    while (row < m - 1 && col >= m - 1 - row) {
      col -= m - 1 - row;
      ++row;
    }
    if (row >= m - 1) return;
    emit(members[row], members[row + 1 + col]);
    ++col;
  }
}

template <typename Emit>
void SamplePairsAcross(const std::vector<std::size_t>& left, const std::vector<std::size_t>& right,
                       double p, Rng& rng, Emit emit) {
  if (left.empty() || right.empty() || p <= 0.0) return;
  const double log_q = std::log1p(-std::min(p, 1.0));
  const std::size_t total = left.size() * right.size();
  std::size_t k = 0;
  for (;;) {
    if (p < 1.0) {
      const double r = rng.Uniform();
      const double skip = std::floor(std::log1p(-r) / log_q);
      if (skip >= static_cast<double>(total - k)) return;
      k += static_cast<std::size_t>(skip);
    }
    if (k >= total) return;
    emit(left[k / right.size()], right[k % right.size()]);
    ++k;
  }
}

json SplitsJson(const Splits& splits) {
  json j;
  j["train"] = splits.train;
  j["val"] = splits.val;
  j["test"] = splits.test;
  j["seed"] = splits.seed;
  return j;
}

json ResultJson(const ExperimentResult& result) {
  static const char* kNames[] = {"bacc", "auc", "f1", "delta_sp", "delta_eo"};
  json j;
  j["method"] = result.method;
  json seeds = json::array();
  for (const MetricsReport& r : result.per_seed) seeds.push_back(internal::MetricsJson(r));
  j["per_seed"] = std::move(seeds);
  const auto summary = result.Summarize();
  json s;
  for (std::size_t k = 0; k < summary.size(); ++k) {
    s[kNames[k]] = {{"mean", internal::PercentageJson(summary[k].mean)},
                    {"std", internal::PercentageJson(summary[k].std)},
                    {"defined", summary[k].defined}};
  }
  j["summary"] = std::move(s);
  return j;
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path);
  out << contents;
  if (!out) Fail(ErrorKind::kIo, "failed writing " + path);
}

Dataset LoadDataset(const std::string& nodes_path, const std::string& edges_path,
                    std::size_t* dropped_self_edges) {
  std::ifstream nodes(nodes_path);
  if (!nodes) Fail(ErrorKind::kIo, "cannot open nodes file " + nodes_path);
  std::string line;
  if (!std::getline(nodes, line)) Fail(ErrorKind::kIo, Where(nodes_path, 1) + ": missing header");
  const auto header = SplitCsv(line);
  if (header.size() < 3 || header.front() != "id" || header[header.size() - 2] != "label" ||
      header.back() != "sensitive") {
    Fail(ErrorKind::kIo, Where(nodes_path, 1) + ": header must be id,feat_0..,label,sensitive");
  }
  const std::size_t d = header.size() - 3;

  std::unordered_map<long long, std::size_t> index_of;
  std::vector<std::vector<double>> rows;
  std::vector<Observation> labels;
  std::vector<Observation> sensitive;
  std::size_t line_no = 1;
  while (std::getline(nodes, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::string where = Where(nodes_path, line_no);
    const auto fields = SplitCsv(line);
    if (fields.size() != header.size()) {
      Fail(ErrorKind::kIo, where + ": expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    const long long id = ParseInteger(fields[0], where);
    if (!index_of.emplace(id, rows.size()).second) {
      Fail(ErrorKind::kIo, where + ": duplicate node id " + fields[0]);
    }
    std::vector<double> feats(d);
    for (std::size_t k = 0; k < d; ++k) {
      feats[k] = ParseDouble(fields[1 + k], where);
      if (!std::isfinite(feats[k])) Fail(ErrorKind::kSchema, where + ": non-finite feature");
    }
    rows.push_back(std::move(feats));
    labels.push_back(ParseBinary(fields[1 + d], where, "label"));
    sensitive.push_back(ParseBinary(fields[2 + d], where, "sensitive"));
  }

  const std::size_t n = rows.size();
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }

  std::ifstream edges(edges_path);
  if (!edges) Fail(ErrorKind::kIo, "cannot open edges file " + edges_path);
  if (!std::getline(edges, line)) Fail(ErrorKind::kIo, Where(edges_path, 1) + ": missing header");
  const auto edge_header = SplitCsv(line);
  if (edge_header.size() != 2 || edge_header[0] != "src" || edge_header[1] != "dst") {
    Fail(ErrorKind::kIo, Where(edges_path, 1) + ": header must be src,dst");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  line_no = 1;
  std::size_t self_edges = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::string where = Where(edges_path, line_no);
    const auto fields = SplitCsv(line);
    if (fields.size() != 2) Fail(ErrorKind::kIo, where + ": expected src,dst");
    auto lookup = [&](const std::string& f) {
      auto it = index_of.find(ParseInteger(f, where));
      if (it == index_of.end()) Fail(ErrorKind::kIo, where + ": unknown node id " + f);
      return it->second;
    };
    const std::size_t u = lookup(fields[0]);
    const std::size_t v = lookup(fields[1]);
    if (u == v) {
      Warn(where + ": self-edge " + fields[0] + "," + fields[1] + " dropped");
      ++self_edges;
      continue;
    }
    pairs.emplace_back(u, v);
  }
  if (dropped_self_edges) *dropped_self_edges = self_edges;
  return Dataset(std::move(x), AdjacencyFromEdges(n, pairs), std::move(labels), std::move(sensitive));
}

void SaveDataset(const Dataset& dataset, const std::string& nodes_path,
                 const std::string& edges_path) {
  std::ostringstream nodes;
  nodes << "id";
  for (std::size_t k = 0; k < dataset.num_features(); ++k) nodes << ",feat_" << k;
  nodes << ",label,sensitive\n";
  const Matrix& x = dataset.features();
  for (std::size_t i = 0; i < dataset.num_nodes(); ++i) {
    nodes << i;
    for (Eigen::Index k = 0; k < x.cols(); ++k) nodes << ',' << FormatDouble(x(static_cast<Eigen::Index>(i), k));
    const Observation& y = dataset.labels()[i];
    const Observation& s = dataset.sensitive()[i];
    nodes << ',' << (y ? std::to_string(*y) : "") << ',' << (s ? std::to_string(*s) : "") << '\n';
  }
  WriteFile(nodes_path, nodes.str());

  std::ostringstream edges;
  edges << "src,dst\n";
  const SparseMatrix& a = dataset.adjacency();
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.col() > r && it.value() != 0.0) edges << r << ',' << it.col() << '\n';
    }
  }
  WriteFile(edges_path, edges.str());
}

void ValidateSyntheticConfig(const SyntheticConfig& c) {
  if (c.n < 4) Fail(ErrorKind::kConfig, "synthetic n must be at least 4");
  if (c.feature_dim < 1) Fail(ErrorKind::kConfig, "feature_dim must be positive");
  auto open_unit = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) Fail(ErrorKind::kConfig, std::string(name) + " must lie in (0, 1)");
  };
  open_unit(c.label_balance, "label_balance");
  open_unit(c.group_balance, "group_balance");
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) Fail(ErrorKind::kConfig, std::string(name) + " must lie in [0, 1]");
  };
  unit(c.intra_edge_prob, "intra_edge_prob");
  unit(c.inter_edge_prob, "inter_edge_prob");
  if (!(c.label_attr_correlation >= -1.0 && c.label_attr_correlation <= 1.0)) {
    Fail(ErrorKind::kConfig, "label_attr_correlation must lie in [-1, 1]");
  }
  if (!std::isfinite(c.label_shift) || !std::isfinite(c.attr_shift)) {
    Fail(ErrorKind::kConfig, "feature shifts must be finite");
  }
  const double b = c.label_balance;
  const double g = c.group_balance;
  const double scale = std::sqrt(b * (1 - b) * g * (1 - g));
  // p11 = b g + rho * scale must stay within [max(0, b + g - 1), min(b, g)].
  const double rho_max = (std::min(b, g) - b * g) / scale;
  const double rho_min = (std::max(0.0, b + g - 1.0) - b * g) / scale;
  if (c.label_attr_correlation > rho_max + 1e-12 || c.label_attr_correlation < rho_min - 1e-12) {
    std::ostringstream os;
    os << "label_attr_correlation " << c.label_attr_correlation
       << " is infeasible for these balances; it must lie in [" << rho_min << ", " << rho_max << "]";
    Fail(ErrorKind::kConfig, os.str());
  }
}

SyntheticConfig ParseSyntheticConfig(const std::string& text) {
  SyntheticConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto first = s.find_first_not_of(" \t\r\"");
      const auto last = s.find_last_not_of(" \t\r\"");
      return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      Fail(ErrorKind::kConfig, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string where = "config line " + std::to_string(line_no);
    auto as_double = [&] { return ParseDouble(value, where); };
    auto as_count = [&] {
      const long long v = ParseInteger(value, where);
      if (v < 0) Fail(ErrorKind::kConfig, where + ": " + key + " must be non-negative");
      return static_cast<std::size_t>(v);
    };
    if (key == "n") c.n = as_count();
    else if (key == "label_balance") c.label_balance = as_double();
    else if (key == "group_balance") c.group_balance = as_double();
    else if (key == "label_attr_correlation") c.label_attr_correlation = as_double();
    else if (key == "intra_edge_prob") c.intra_edge_prob = as_double();
    else if (key == "inter_edge_prob") c.inter_edge_prob = as_double();
    else if (key == "feature_dim") c.feature_dim = as_count();
    else if (key == "label_shift") c.label_shift = as_double();
    else if (key == "attr_shift") c.attr_shift = as_double();
    else if (key == "seed") c.seed = as_count();
    else Fail(ErrorKind::kConfig, where + ": unknown key '" + key + "'");
  }
  ValidateSyntheticConfig(c);
  return c;
}

SyntheticConfig LoadSyntheticConfig(const std::string& path) { return ParseSyntheticConfig(ReadFile(path)); }

std::string SyntheticConfigToText(const SyntheticConfig& c) {
  std::ostringstream os;
  os << "n = " << c.n << '\n'
     << "label_balance = " << FormatDouble(c.label_balance) << '\n'
     << "group_balance = " << FormatDouble(c.group_balance) << '\n'
     << "label_attr_correlation = " << FormatDouble(c.label_attr_correlation) << '\n'
     << "intra_edge_prob = " << FormatDouble(c.intra_edge_prob) << '\n'
     << "inter_edge_prob = " << FormatDouble(c.inter_edge_prob) << '\n'
     << "feature_dim = " << c.feature_dim << '\n'
     << "label_shift = " << FormatDouble(c.label_shift) << '\n'
     << "attr_shift = " << FormatDouble(c.attr_shift) << '\n'
     << "seed = " << c.seed << '\n';
  return os.str();
}

Dataset GenerateSynthetic(const SyntheticConfig& c) {
  ValidateSyntheticConfig(c);
  Rng rng(c.seed);
  const double b = c.label_balance;
  const double g = c.group_balance;
  const double p11 = std::clamp(b * g + c.label_attr_correlation * std::sqrt(b * (1 - b) * g * (1 - g)),
                                std::max(0.0, b + g - 1.0), std::min(b, g));
  const double p10 = b - p11;  // y = 1, s = 0
  const double p01 = g - p11;  // y = 0, s = 1

  std::vector<Observation> labels(c.n);
  std::vector<Observation> sensitive(c.n);
  for (std::size_t i = 0; i < c.n; ++i) {
    const double u = rng.Uniform();
    int y = 0;
    int s = 0;
    if (u < p11) {
      y = 1, s = 1;
    } else if (u < p11 + p10) {
      y = 1;
    } else if (u < p11 + p10 + p01) {
      s = 1;
    }
    labels[i] = y;
    sensitive[i] = s;
  }

  const std::size_t label_dims = (c.feature_dim + 1) / 2;
  Matrix x(static_cast<Eigen::Index>(c.n), static_cast<Eigen::Index>(c.feature_dim));
  for (std::size_t i = 0; i < c.n; ++i) {
    const double ysign = 2.0 * *labels[i] - 1.0;
    const double ssign = 2.0 * *sensitive[i] - 1.0;
    for (std::size_t k = 0; k < c.feature_dim; ++k) {
      const double mean = k < label_dims ? c.label_shift * ysign : c.attr_shift * ssign;
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = mean + rng.Normal();
    }
  }

  std::vector<std::size_t> group0;
  std::vector<std::size_t> group1;
  for (std::size_t i = 0; i < c.n; ++i) (*sensitive[i] == 1 ? group1 : group0).push_back(i);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  auto emit = [&edges](std::size_t u, std::size_t v) { edges.emplace_back(u, v); };
  SamplePairsWithin(group0, c.intra_edge_prob, rng, emit);
  SamplePairsWithin(group1, c.intra_edge_prob, rng, emit);
  SamplePairsAcross(group0, group1, c.inter_edge_prob, rng, emit);

  return Dataset(std::move(x), AdjacencyFromEdges(c.n, edges), std::move(labels), std::move(sensitive));
}

std::string SplitsToJson(const Splits& splits) { return SplitsJson(splits).dump() + "\n"; }

Splits SplitsFromJson(const std::string& text) {
  try {
    const json j = json::parse(text);
    Splits s;
    s.train = j.at("train").get<IndexSet>();
    s.val = j.at("val").get<IndexSet>();
    s.test = j.at("test").get<IndexSet>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
  } catch (const json::exception& e) {
    Fail(ErrorKind::kIo, std::string("malformed splits JSON: ") + e.what());
  }
}

void SaveSplits(const Splits& splits, const std::string& path) { WriteFile(path, SplitsToJson(splits)); }

Splits LoadSplits(const std::string& path) { return SplitsFromJson(ReadFile(path)); }

std::array<MetricSummary, 5> ExperimentResult::Summarize() const {
  std::array<MetricSummary, 5> out;
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::vector<double> values;
    for (const MetricsReport& r : per_seed) {
      const Percentage* fields[] = {&r.bacc, &r.auc, &r.f1, &r.delta_sp, &r.delta_eo};
      if (*fields[k]) values.push_back(**fields[k]);
    }
    out[k].defined = values.size();
    if (values.empty()) continue;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    if (values.size() > 1) {
      for (double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(values.size() - 1);
    }
    out[k].mean = mean;
    out[k].std = std::sqrt(var);
  }
  return out;
}

std::string FormatMeanStd(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f (%.2f)", mean, std);
  return buf;
}

void WriteResults(const std::vector<ExperimentResult>& results, const std::string& path,
                  ResultFormat format) {
  if (format == ResultFormat::kJson) {
    json arr = json::array();
    for (const ExperimentResult& r : results) arr.push_back(ResultJson(r));
    WriteFile(path, arr.dump(2) + "\n");
    return;
  }
  std::ostringstream os;
  os << "method," << kMetricsCsvHeader << '\n';
  for (const ExperimentResult& r : results) {
    os << r.method;
    for (const MetricSummary& m : r.Summarize()) {
      os << ',' << (m.mean ? FormatMeanStd(*m.mean, *m.std) : std::string("NA"));
    }
    os << '\n';
  }
  WriteFile(path, os.str());
}

void WriteResult(const ExperimentResult& result, const std::string& path, ResultFormat format) {
  WriteResults({result}, path, format);
}

std::vector<ExperimentResult> ReadResultsJson(const std::string& path) {
  try {
    const json arr = json::parse(ReadFile(path));
    std::vector<ExperimentResult> out;
    for (const json& j : arr) {
      ExperimentResult r;
      r.method = j.at("method").get<std::string>();
      for (const json& m : j.at("per_seed")) r.per_seed.push_back(internal::MetricsFrom(m));
      out.push_back(std::move(r));
    }
    return out;
  } catch (const json::exception& e) {
    Fail(ErrorKind::kIo, path + ": malformed result JSON: " + e.what());
  }
}

}  // namespace fairgnn

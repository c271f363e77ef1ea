#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "scalebench/error.hpp"

namespace scalebench::icl {

struct EmbeddingRecord {
  std::string id;
  std::vector<double> vector;
  std::string transcript;
  std::string audio_ref;
  int sample_rate = 16000;
  double duration_s = 0.0;

  friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

struct Neighbor {
  std::string id;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct RetrievalResult {
  std::vector<Neighbor> neighbors;
};

// Mean over the sequence axis of a T x D frame matrix.
inline std::vector<double> time_average(const std::vector<std::vector<double>>& frames) {
  if (frames.empty()) fail(ErrorKind::EmptySequence, "cannot average zero frames");
  std::vector<double> mean(frames.front().size(), 0.0);
  for (const auto& row : frames) {
    if (row.size() != mean.size()) fail(ErrorKind::DimensionError, "ragged frame matrix");
    for (std::size_t d = 0; d < row.size(); ++d) mean[d] += row[d];
  }
  for (double& v : mean) v /= static_cast<double>(frames.size());
  return mean;
}

// Fixed-dimension utterance embeddings. Written once, then read concurrently.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dimension) : dimension_(dimension) {
    if (dimension == 0) fail(ErrorKind::DimensionError, "store dimension must be positive");
  }

  void add(EmbeddingRecord rec) {
    if (rec.vector.size() != dimension_) {
      fail(ErrorKind::DimensionError, "record '" + rec.id + "' has dimension " +
                                          std::to_string(rec.vector.size()) + ", store expects " +
                                          std::to_string(dimension_));
    }
    if (!(rec.duration_s > 0.0)) fail(ErrorKind::DomainError, "record '" + rec.id + "' needs positive duration");
    if (index_.count(rec.id)) fail(ErrorKind::SchemaError, "duplicate record id '" + rec.id + "'");
    index_[rec.id] = records_.size();
    records_.push_back(std::move(rec));
  }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return records_.size(); }
  const std::vector<EmbeddingRecord>& records() const noexcept { return records_; }

  const EmbeddingRecord& get(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) fail(ErrorKind::SchemaError, "no record with id '" + id + "'");
    return records_[it->second];
  }

 private:
  std::size_t dimension_;
  std::vector<EmbeddingRecord> records_;
  std::map<std::string, std::size_t> index_;
};

// Exact k nearest neighbors by Euclidean distance; ties go to the smaller id.
inline RetrievalResult knn(const EmbeddingStore& store, const std::vector<double>& query, std::size_t k) {
  if (store.size() == 0) fail(ErrorKind::EmptyStore, "embedding store is empty");
  if (query.size() != store.dimension()) {
    fail(ErrorKind::DimensionError, "query has dimension " + std::to_string(query.size()) +
                                        ", store expects " + std::to_string(store.dimension()));
  }
  if (k < 1) fail(ErrorKind::DomainError, "k must be at least 1");

  struct Cand {
    double d2;
    const EmbeddingRecord* rec;
  };
  std::vector<Cand> cands;
  cands.reserve(store.size());
  for (const auto& rec : store.records()) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < query.size(); ++i) {
      const double diff = rec.vector[i] - query[i];
      d2 += diff * diff;
    }
    cands.push_back({d2, &rec});
  }
  const std::size_t take = std::min(k, cands.size());
  auto less = [](const Cand& a, const Cand& b) {
    return a.d2 != b.d2 ? a.d2 < b.d2 : a.rec->id < b.rec->id;
  };
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(take), cands.end(), less);
  RetrievalResult out;
  for (std::size_t i = 0; i < take; ++i) out.neighbors.push_back({cands[i].rec->id, std::sqrt(cands[i].d2)});
  return out;
}

// Text format: first line is the dimension; then one record per line:
//   id <space> v1 v2 ... vD <TAB> transcript <TAB> audio path <TAB> rate <TAB> duration
inline EmbeddingStore parse_store(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::SchemaError, "store file is empty");
  std::size_t dim = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> dim) || dim == 0) fail(ErrorKind::SchemaError, "line 1: expected a positive dimension");
  }
  EmbeddingStore store(dim);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (fields.size() != 5) fail(ErrorKind::SchemaError, where + "expected 5 tab-separated fields");
    EmbeddingRecord rec;
    std::istringstream head(fields[0]);
    if (!(head >> rec.id)) fail(ErrorKind::SchemaError, where + "missing id");
    double v;
    while (head >> v) rec.vector.push_back(v);
    if (!head.eof()) fail(ErrorKind::SchemaError, where + "malformed vector component");
    rec.transcript = fields[1];
    rec.audio_ref = fields[2];
    try {
      rec.sample_rate = std::stoi(fields[3]);
      rec.duration_s = std::stod(fields[4]);
    } catch (const std::exception&) {
      fail(ErrorKind::SchemaError, where + "malformed sample rate or duration");
    }
    try {
      store.add(std::move(rec));
    } catch (const Error& e) {
      fail(e.kind(), where + e.what());
    }
  }
  return store;
}

inline EmbeddingStore load_store(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open store '" + path + "'");
  return parse_store(in);
}

inline void write_store(std::ostream& out, const EmbeddingStore& store) {
  out << store.dimension() << '\n';
  out.precision(17);
  for (const auto& r : store.records()) {
    out << r.id;
    for (double v : r.vector) out << ' ' << v;
    out << '\t' << r.transcript << '\t' << r.audio_ref << '\t' << r.sample_rate << '\t' << r.duration_s << '\n';
  }
}

}  // namespace scalebench::icl

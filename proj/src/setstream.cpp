// Copyright 2026 The Authors.
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

#include "maxcov/setstream.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "maxcov/errors.hpp"

namespace maxcov {

std::string_view to_string(StreamKind kind) {
  switch (kind) {
    case StreamKind::plain:
      return "plain";
    case StreamKind::budgeted:
      return "budgeted";
    case StreamKind::grouped:
      return "grouped";
  }
  return "unknown";
}

struct SetStream::Cursor::Shared {
  std::shared_ptr<const std::vector<SetRecord>> records;
  StreamKind kind = StreamKind::plain;
  std::uint64_t universe_size = 0;
  ElementFilter keep;  // empty for unfiltered streams
  mutable std::atomic<std::size_t> passes{0};
};

SetStream::Cursor::Cursor(std::shared_ptr<const Shared> shared) : shared_(std::move(shared)) {}

const SetRecord* SetStream::Cursor::next() {
  const auto& records = *shared_->records;
  if (started_) ++position_;
  started_ = true;
  if (position_ >= records.size()) {
    position_ = records.size();
    if (!finished_) {
      finished_ = true;
      shared_->passes.fetch_add(1, std::memory_order_relaxed);
    }
    return nullptr;
  }
  const SetRecord& rec = records[position_];
  if (!shared_->keep) return &rec;
  scratch_.set_id = rec.set_id;
  scratch_.cost = rec.cost;
  scratch_.group = rec.group;
  scratch_.elements.clear();
  for (ElementId e : rec.elements) {
    if (shared_->keep(e)) scratch_.elements.push_back(e);
  }
  return &scratch_;
}

const SetRecord& SetStream::Cursor::original() const {
  const auto& records = *shared_->records;
  if (!started_ || position_ >= records.size()) {
    throw std::out_of_range("cursor is not positioned on a record");
  }
  return records[position_];
}

SetStream::SetStream() : SetStream(std::vector<SetRecord>{}) {}

SetStream::SetStream(std::vector<SetRecord> records, StreamKind kind,
                     std::optional<std::uint64_t> universe_size) {
  std::unordered_set<SetId> ids;
  std::uint64_t max_plus_one = 0;
  for (const auto& rec : records) {
    if (!ids.insert(rec.set_id).second) {
      throw FormatError("duplicate set id " + std::to_string(rec.set_id));
    }
    std::unordered_set<ElementId> seen;
    for (ElementId e : rec.elements) {
      if (!seen.insert(e).second) {
        throw FormatError("duplicate element " + std::to_string(e) + " in set " +
                          std::to_string(rec.set_id));
      }
      max_plus_one = std::max(max_plus_one, e + 1);
    }
  }
  if (universe_size && *universe_size < max_plus_one) {
    throw FormatError("element " + std::to_string(max_plus_one - 1) +
                      " outside declared universe n=" + std::to_string(*universe_size));
  }
  auto shared = std::make_shared<Cursor::Shared>();
  shared->records = std::make_shared<const std::vector<SetRecord>>(std::move(records));
  shared->kind = kind;
  shared->universe_size = universe_size.value_or(max_plus_one);
  shared_ = std::move(shared);
}

SetStream::Cursor SetStream::replay() const { return Cursor(shared_); }

std::size_t SetStream::passes_consumed() const {
  return shared_->passes.load(std::memory_order_relaxed);
}
std::size_t SetStream::total_sets() const { return shared_->records->size(); }
std::uint64_t SetStream::universe_size() const { return shared_->universe_size; }
StreamKind SetStream::kind() const { return shared_->kind; }

SetStream SetStream::fork() const {
  auto shared = std::make_shared<Cursor::Shared>();
  shared->records = shared_->records;
  shared->kind = shared_->kind;
  shared->universe_size = shared_->universe_size;
  shared->keep = shared_->keep;
  SetStream out;
  out.shared_ = std::move(shared);
  return out;
}

SetStream SetStream::filtered(ElementFilter keep) const {
  auto shared = std::make_shared<Cursor::Shared>();
  shared->records = shared_->records;
  shared->kind = shared_->kind;
  shared->universe_size = shared_->universe_size;
  if (shared_->keep) {
    shared->keep = [outer = shared_->keep, inner = std::move(keep)](ElementId e) {
      return outer(e) && inner(e);
    };
  } else {
    shared->keep = std::move(keep);
  }
  SetStream out;
  out.shared_ = std::move(shared);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_uint(std::string_view tok, std::size_t line_no, const char* what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line_no, std::string("expected non-negative integer ") + what + ", got '" +
                                  std::string(tok) + "'");
  }
  return value;
}

double parse_cost(std::string_view tok, std::size_t line_no) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    throw ParseError(line_no, "expected cost, got '" + std::string(tok) + "'");
  }
  if (value < 0) throw FormatError("line " + std::to_string(line_no) + ": negative cost");
  return value;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    start = end + 1;
  }
}

bool is_blank_or_comment(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_cost(double cost) {
  std::ostringstream out;
  out.precision(17);
  out << cost;
  return out.str();
}

}  // namespace

SetStream parse_set_stream(std::string_view text, StreamKind kind) {
  std::vector<SetRecord> records;
  std::optional<std::uint64_t> header_m;
  std::optional<std::uint64_t> header_n;
  bool seen_content = false;

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_blank_or_comment(line)) return;
    auto tokens = split_ws(line);
    if (tokens.front() == "!header") {
      if (seen_content) throw ParseError(line_no, "header must be the first line");
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto tok = tokens[i];
        if (tok.starts_with("m=")) {
          header_m = parse_uint(tok.substr(2), line_no, "m");
        } else if (tok.starts_with("n=")) {
          header_n = parse_uint(tok.substr(2), line_no, "n");
        } else {
          throw ParseError(line_no, "unknown header field '" + std::string(tok) + "'");
        }
      }
      seen_content = true;
      return;
    }
    seen_content = true;

    SetRecord rec;
    rec.set_id = parse_uint(tokens[0], line_no, "set id");
    std::size_t first_elem = 1;
    if (kind == StreamKind::budgeted) {
      if (tokens.size() < 2) throw ParseError(line_no, "missing cost");
      rec.cost = parse_cost(tokens[1], line_no);
      first_elem = 2;
    } else if (kind == StreamKind::grouped) {
      if (tokens.size() < 2) throw ParseError(line_no, "missing group id");
      rec.group = parse_uint(tokens[1], line_no, "group id");
      first_elem = 2;
    }
    std::unordered_set<ElementId> seen;
    for (std::size_t i = first_elem; i < tokens.size(); ++i) {
      ElementId e = parse_uint(tokens[i], line_no, "element");
      if (!seen.insert(e).second) {
        throw ParseError(line_no, "duplicate element " + std::to_string(e) + " in record");
      }
      rec.elements.push_back(e);
    }
    records.push_back(std::move(rec));
  });

  if (header_m && *header_m != records.size()) {
    throw FormatError("header declares m=" + std::to_string(*header_m) + " but stream has " +
                      std::to_string(records.size()) + " records");
  }
  return SetStream(std::move(records), kind, header_n);
}

StreamKind stream_kind_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".bset") return StreamKind::budgeted;
  if (ext == ".gset") return StreamKind::grouped;
  return StreamKind::plain;
}

SetStream read_set_stream_file(const std::filesystem::path& path) {
  return parse_set_stream(read_file(path), stream_kind_for_path(path));
}

std::string format_set_stream(std::span<const SetRecord> records, StreamKind kind,
                              std::optional<std::uint64_t> universe_size) {
  std::string out;
  if (universe_size) {
    out += "!header m=" + std::to_string(records.size()) + " n=" + std::to_string(*universe_size) +
           "\n";
  }
  for (const auto& rec : records) {
    out += std::to_string(rec.set_id);
    if (kind == StreamKind::budgeted) out += " " + format_cost(rec.cost);
    if (kind == StreamKind::grouped) out += " " + std::to_string(rec.group);
    for (ElementId e : rec.elements) out += " " + std::to_string(e);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t Hypergraph::rank() const {
  std::size_t r = 0;
  for (const auto& e : edges) r = std::max(r, e.nodes.size());
  return r;
}

Hypergraph Hypergraph::from_edges(std::vector<Hyperedge> edges) {
  Hypergraph g;
  std::vector<NodeId> nodes;
  for (auto& e : edges) {
    std::sort(e.nodes.begin(), e.nodes.end());
    nodes.insert(nodes.end(), e.nodes.begin(), e.nodes.end());
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  g.nodes = std::move(nodes);
  g.edges = std::move(edges);
  return g;
}

std::vector<EdgeUpdate> parse_graph_stream(std::string_view text) {
  std::vector<EdgeUpdate> updates;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_blank_or_comment(line)) return;
    auto tokens = split_ws(line);
    EdgeUpdate up;
    if (tokens[0] == "+") {
      up.sign = EdgeUpdate::Sign::insert;
    } else if (tokens[0] == "-") {
      up.sign = EdgeUpdate::Sign::remove;
    } else {
      throw ParseError(line_no, "update must start with '+' or '-'");
    }
    if (tokens.size() < 3) throw ParseError(line_no, "an edge needs at least two nodes");
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      NodeId v = parse_uint(tokens[i], line_no, "node");
      if (std::find(up.nodes.begin(), up.nodes.end(), v) != up.nodes.end()) {
        throw ParseError(line_no, "repeated node " + std::to_string(v) + " in edge");
      }
      up.nodes.push_back(v);
    }
    updates.push_back(std::move(up));
  });
  return updates;
}

std::vector<EdgeUpdate> read_graph_stream_file(const std::filesystem::path& path) {
  return parse_graph_stream(read_file(path));
}

std::string format_graph_stream(std::span<const EdgeUpdate> updates) {
  std::string out;
  for (const auto& up : updates) {
    out += up.sign == EdgeUpdate::Sign::insert ? "+" : "-";
    for (NodeId v : up.nodes) out += " " + std::to_string(v);
    out += "\n";
  }
  return out;
}

Hypergraph materialize_graph(std::span<const EdgeUpdate> updates) {
  // Multiset of live edges keyed by sorted node list, keeping first-insert order.
  std::map<std::vector<NodeId>, std::vector<std::size_t>> live;
  std::vector<std::vector<NodeId>> inserted;
  std::vector<bool> alive;
  for (std::size_t i = 0; i < updates.size(); ++i) {
    auto key = updates[i].nodes;
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end()) {
      throw FormatError("update " + std::to_string(i + 1) + " repeats a node");
    }
    if (updates[i].sign == EdgeUpdate::Sign::insert) {
      live[key].push_back(inserted.size());
      inserted.push_back(std::move(key));
      alive.push_back(true);
    } else {
      auto it = live.find(key);
      if (it == live.end() || it->second.empty()) {
        throw StreamConsistencyError("update " + std::to_string(i + 1) +
                                     " deletes an edge that is not live");
      }
      alive[it->second.back()] = false;
      it->second.pop_back();
    }
  }
  std::vector<Hyperedge> edges;
  for (std::size_t i = 0; i < inserted.size(); ++i) {
    if (alive[i]) edges.push_back(Hyperedge{std::move(inserted[i]), 1.0});
  }
  return Hypergraph::from_edges(std::move(edges));
}

}  // namespace maxcov

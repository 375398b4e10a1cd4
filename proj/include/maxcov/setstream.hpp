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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maxcov {

using ElementId = std::uint64_t;
using SetId = std::uint64_t;
using NodeId = std::uint64_t;

enum class StreamKind { plain, budgeted, grouped };

std::string_view to_string(StreamKind kind);

struct SetRecord {
  SetId set_id = 0;
  std::vector<ElementId> elements;
  double cost = 0.0;      // budgeted streams
  std::size_t group = 0;  // grouped streams

  bool operator==(const SetRecord&) const = default;
};

// Abstract space accounting. One slot holds one element ID, one set/node ID or
// one sketch register. Every counter is a high-water mark.
struct SpaceLedger {
  std::size_t element_slots = 0;
  std::size_t set_id_slots = 0;
  std::size_t sketch_registers = 0;
  std::size_t passes = 0;

  void observe_elements(std::size_t current) { element_slots = std::max(element_slots, current); }
  void observe_set_ids(std::size_t current) { set_id_slots = std::max(set_id_slots, current); }
  void observe_registers(std::size_t current) {
    sketch_registers = std::max(sketch_registers, current);
  }
  void observe_passes(std::size_t current) { passes = std::max(passes, current); }

  std::size_t byte_estimate(std::size_t word_bytes = sizeof(std::uint64_t)) const {
    return (element_slots + set_id_slots + sketch_registers) * word_bytes;
  }

  bool operator==(const SpaceLedger&) const = default;
};

// A replayable, pass-counting sequence of set records.
//
// Algorithms only see records through a Cursor, one at a time and in order.
// Copies share the record buffer and the pass counter; fork() and filtered()
// produce a new stream object with its own counter.
class SetStream {
 public:
  using ElementFilter = std::function<bool(ElementId)>;

  class Cursor {
   public:
    // Next record in arrival order, or nullptr once the pass is complete.
    // Reaching the end for the first time counts one pass on the stream.
    const SetRecord* next();

    // The unfiltered record at the current position. Equal to the last record
    // returned by next() unless the stream is a filtered view.
    const SetRecord& original() const;

   private:
    friend class SetStream;
    struct Shared;
    explicit Cursor(std::shared_ptr<const Shared> shared);

    std::shared_ptr<const Shared> shared_;
    std::size_t position_ = 0;
    bool started_ = false;
    bool finished_ = false;
    SetRecord scratch_;
  };

  SetStream();
  // Validates distinct elements per record and unique set IDs (FormatError).
  // universe_size defaults to 1 + max element.
  explicit SetStream(std::vector<SetRecord> records, StreamKind kind = StreamKind::plain,
                     std::optional<std::uint64_t> universe_size = std::nullopt);

  Cursor replay() const;

  std::size_t passes_consumed() const;
  std::size_t total_sets() const;
  std::uint64_t universe_size() const;
  StreamKind kind() const;

  // Same records, fresh pass counter.
  SetStream fork() const;
  // View whose records keep only elements accepted by `keep`. Set IDs, costs and
  // groups are preserved; records that become empty are still delivered.
  SetStream filtered(ElementFilter keep) const;

 private:
  std::shared_ptr<const Cursor::Shared> shared_;
};

// Parses the set-stream text format. `kind` selects the per-line layout:
// plain `<id> <elem>...`, budgeted `<id> <cost> <elem>...`, grouped `<id> <group> <elem>...`.
SetStream parse_set_stream(std::string_view text, StreamKind kind = StreamKind::plain);
// Picks the layout from the extension (.bset budgeted, .gset grouped, anything else plain).
SetStream read_set_stream_file(const std::filesystem::path& path);
StreamKind stream_kind_for_path(const std::filesystem::path& path);

std::string format_set_stream(std::span<const SetRecord> records, StreamKind kind,
                              std::optional<std::uint64_t> universe_size = std::nullopt);

// ---------------------------------------------------------------------------
// Dynamic (hyper)graph streams.

struct EdgeUpdate {
  enum class Sign { insert, remove };
  Sign sign = Sign::insert;
  std::vector<NodeId> nodes;

  bool operator==(const EdgeUpdate&) const = default;
};

struct Hyperedge {
  std::vector<NodeId> nodes;  // sorted, distinct
  double weight = 1.0;

  bool operator==(const Hyperedge&) const = default;
};

struct Hypergraph {
  std::vector<NodeId> nodes;  // sorted, distinct
  std::vector<Hyperedge> edges;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t rank() const;
  // Builds a graph whose node set is exactly the nodes touched by `edges`.
  static Hypergraph from_edges(std::vector<Hyperedge> edges);

  bool operator==(const Hypergraph&) const = default;
};

std::vector<EdgeUpdate> parse_graph_stream(std::string_view text);
std::vector<EdgeUpdate> read_graph_stream_file(const std::filesystem::path& path);
std::string format_graph_stream(std::span<const EdgeUpdate> updates);

// Live edges are inserts minus matching deletes (as a multiset of node sets).
Hypergraph materialize_graph(std::span<const EdgeUpdate> updates);

}  // namespace maxcov

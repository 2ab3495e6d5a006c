#pragma once

#include "prism/dataset.hpp"
#include "prism/protocol.hpp"
#include "prism/server.hpp"
#include "prism/transcript.hpp"

namespace prism {

struct SimOptions {
  std::array<TamperSpec, 3> tamper{};  // per server, for the adversarial harness
  unsigned threads = 1;
};

// Runs one query with every role in-process: m owners, three servers and the
// announcer exchange the same frames the networked mode puts on TCP, with
// every message recorded in the transcript. Dispatches to the bucketized
// driver when the spec asks for it.
QueryResult run_query(const QuerySpec& spec, const ParamsSet& views,
                      const std::vector<OwnerInputs>& owners, Transcript* transcript = nullptr,
                      const SimOptions& opts = {});

// Top-down level-by-level PSI over the bucket tree, pruning subtrees whose
// parent bucket is not common; the leaf level runs the requested operation
// restricted to the surviving cells.
QueryResult run_bucketized_query(const QuerySpec& spec, const ParamsSet& views,
                                 const std::vector<OwnerInputs>& owners,
                                 Transcript* transcript = nullptr, const SimOptions& opts = {});

}  // namespace prism

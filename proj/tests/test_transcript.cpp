#include <doctest.h>

#include "test_support.hpp"

using namespace prism;
using namespace prism::testsupport;

namespace {

Transcript run_with_transcript(Op op, std::uint32_t attrs, bool verify, bool reveal,
                               std::size_t* rounds_out = nullptr) {
  PlainInstance inst = random_instance(808, 3, 12, attrs ? attrs : 0, 40);
  PublicParams p = generate_params(3, 12, instance_domain_max(inst) + 1, 809);
  ParamsSet views = views_from(p);
  auto owners = owner_inputs_from(inst, views.owner_view, 810);
  QuerySpec spec;
  spec.op = op;
  spec.num_agg_attrs = attrs;
  spec.verify = verify;
  spec.reveal_max_identity = reveal;
  spec.seed = 18;
  Transcript tr;
  QueryResult res = run_query(spec, views, owners, &tr);
  if (rounds_out) *rounds_out = res.rounds;
  return tr;
}

}  // namespace

TEST_CASE("round counts match the protocol schedule") {
  struct Case {
    Op op;
    std::uint32_t attrs;
    bool verify;
    bool reveal;
    std::size_t rounds;
  };
  for (const Case& c : {Case{Op::psi, 0, false, false, 1},
                        Case{Op::psi, 0, true, false, 1},
                        Case{Op::psu, 0, false, false, 1},
                        Case{Op::count, 0, false, false, 1},
                        Case{Op::sum, 1, false, false, 2},
                        Case{Op::avg, 1, false, false, 2},
                        Case{Op::max, 1, false, false, 2},
                        Case{Op::max, 1, false, true, 3},
                        Case{Op::median, 1, false, false, 2}}) {
    std::size_t rounds = 0;
    Transcript tr = run_with_transcript(c.op, c.attrs, c.verify, c.reveal, &rounds);
    CHECK(tr.owner_server_rounds() == c.rounds);
    CHECK(rounds == c.rounds);
  }
}

TEST_CASE("no transcript ever contains a server-to-server edge") {
  for (Op op : {Op::psi, Op::psu, Op::count, Op::sum, Op::avg, Op::max, Op::median}) {
    std::uint32_t attrs = (op == Op::sum || op == Op::avg || op == Op::max || op == Op::median) ? 1 : 0;
    Transcript tr = run_with_transcript(op, attrs, false, op == Op::max);
    CHECK_FALSE(tr.has_server_server_edge());
    CHECK(tr.announcer_talks_only_to_servers());
  }
}

TEST_CASE("the announcer participates only in max and median rounds") {
  for (Op op : {Op::psi, Op::psu, Op::count, Op::sum, Op::avg}) {
    std::uint32_t attrs = (op == Op::sum || op == Op::avg) ? 1 : 0;
    Transcript tr = run_with_transcript(op, attrs, false, false);
    for (const auto& e : tr.entries) {
      CHECK(e.from != Actor::announcer);
      CHECK(e.to != Actor::announcer);
    }
  }
  Transcript tr = run_with_transcript(Op::max, 1, false, true);
  bool announcer_seen = false;
  for (const auto& e : tr.entries)
    announcer_seen |= e.from == Actor::announcer || e.to == Actor::announcer;
  CHECK(announcer_seen);
}

TEST_CASE("preload uploads are marked and excluded from round counting") {
  Transcript tr = run_with_transcript(Op::psi, 0, false, false);
  bool any_preload = false;
  for (const auto& e : tr.entries) {
    if (e.preload) {
      any_preload = true;
      CHECK(e.type == MsgType::store_shares);
    }
  }
  CHECK(any_preload);
}

#include <doctest.h>

#include "prism/server.hpp"
#include "test_support.hpp"

using namespace prism;
using namespace prism::testsupport;

TEST_CASE("z shares encode the common cells and interpolate back") {
  PublicParams p = golden_params();
  RoleView owner = view_for(p, Role::owner);
  std::vector<std::uint8_t> common{1, 0, 0};  // from fop (1,5,4)
  auto z = make_z_shares(common, owner, 17);
  const u64 q = p.shamir_p;
  for (std::size_t i = 0; i < common.size(); ++i) {
    std::vector<ShamirShare> sh{{1, z[0][i], q}, {2, z[1][i], q}, {3, z[2][i], q}};
    CHECK(lagrange_interpolate(sh, 0) == (common[i] ? 1 : 0));
  }
}

TEST_CASE("server sum vectors interpolate to the selected aggregates") {
  PublicParams p = golden_params();
  ParamsSet views = views_from(p);
  auto owners = owner_inputs_from(hospitals(), views.owner_view, 3);

  std::array<ServerEngine, 3> servers{ServerEngine(views.server_views[0]),
                                      ServerEngine(views.server_views[1]),
                                      ServerEngine(views.server_views[2])};
  const u64 qid = 21;
  for (const auto& in : owners)
    for (int s = 0; s < 3; ++s)
      servers[s].store_shares(qid, in.bundle.owner_index, in.bundle.per_server[s]);

  std::vector<std::uint8_t> common{1, 0, 0};
  auto z = make_z_shares(common, views.owner_view, 18);
  for (int s = 0; s < 3; ++s) servers[s].store_z(qid, z[s]);

  auto r1 = servers[0].sum_eval(qid);
  auto r2 = servers[1].sum_eval(qid);
  auto r3 = servers[2].sum_eval(qid);
  // columns: age, cost, tuple count
  REQUIRE(r1.size() == 3);
  std::vector<u64> cost = sum_finalize(r1[1], r2[1], r3[1], views.owner_view);
  std::vector<u64> count = sum_finalize(r1[2], r2[2], r3[2], views.owner_view);
  CHECK(cost == std::vector<u64>{1400, 0, 0});  // z annihilates non-common cells
  CHECK(count == std::vector<u64>{5, 0, 0});
}

TEST_CASE("sum query end to end: cancer costs total 1400") {
  PublicParams p = golden_params();
  ParamsSet views = views_from(p);
  auto owners = owner_inputs_from(hospitals(), views.owner_view, 5);
  QuerySpec spec;
  spec.op = Op::sum;
  spec.num_agg_attrs = 2;
  spec.seed = 11;
  Transcript tr;
  QueryResult res = run_query(spec, views, owners, &tr);
  REQUIRE(res.aggregates.size() == 1);
  CHECK(res.aggregates[0].cell == 0);
  CHECK(res.aggregates[0].values == std::vector<u64>{18, 1400});  // ages 4+6+8+8+4, costs
  CHECK(res.rounds == 2);
}

TEST_CASE("avg query end to end: cancer cost average 1400/5 = 280") {
  PublicParams p = golden_params();
  ParamsSet views = views_from(p);
  auto owners = owner_inputs_from(hospitals(), views.owner_view, 6);
  QuerySpec spec;
  spec.op = Op::avg;
  spec.num_agg_attrs = 2;
  spec.seed = 12;
  QueryResult res = run_query(spec, views, owners);
  REQUIRE(res.aggregates.size() == 1);
  CHECK(res.aggregates[0].values[1] == 1400);
  CHECK(res.aggregates[0].counts[1] == 5);
  CHECK(res.aggregates[0].values[1] / res.aggregates[0].counts[1] == 280);
}

TEST_CASE("single owner with z=1 receives its own payload back") {
  PublicParams p = golden_params();
  ParamsSet views = views_from(p);
  PlainInstance inst;
  inst.domain_size = 3;
  inst.num_attrs = 1;
  inst.owners = {{{1, {77}}}, {{1, {23}}}, {{1, {5}}}};
  auto owners = owner_inputs_from(inst, views.owner_view, 7);
  QuerySpec spec;
  spec.op = Op::sum;
  spec.num_agg_attrs = 1;
  spec.seed = 13;
  QueryResult res = run_query(spec, views, owners);
  REQUIRE(res.aggregates.size() == 1);
  CHECK(res.aggregates[0].cell == 1);
  CHECK(res.aggregates[0].values == std::vector<u64>{105});
}

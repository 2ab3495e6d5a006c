#include <doctest.h>

#include "test_support.hpp"

using namespace prism;
using namespace prism::testsupport;

TEST_CASE("oracle reproduces the worked hospital answers") {
  PlainInstance inst = hospitals();

  QuerySpec spec;
  spec.op = Op::psi;
  CHECK(oracle_eval(inst, spec).member_cells == std::vector<u64>{0});

  spec.op = Op::psu;
  CHECK(oracle_eval(inst, spec).member_cells == std::vector<u64>{0, 1, 2});

  spec.op = Op::count;
  CHECK(oracle_eval(inst, spec).count == 1);

  spec.op = Op::sum;
  spec.num_agg_attrs = 2;
  auto sum = oracle_eval(inst, spec);
  REQUIRE(sum.aggregates.size() == 1);
  CHECK(sum.aggregates[0].values[1] == 1400);

  spec.op = Op::avg;
  auto avg = oracle_eval(inst, spec);
  CHECK(avg.aggregates[0].values[1] == 1400);
  CHECK(avg.aggregates[0].counts[1] == 5);

  spec.op = Op::max;
  auto mx = oracle_eval(inst, spec);
  CHECK(mx.aggregates[0].values[0] == 8);                       // age
  CHECK(mx.aggregates[0].holders[0] == std::vector<u64>{1, 2});  // hospitals 2,3

  spec.op = Op::median;
  auto med = oracle_eval(inst, spec);
  CHECK(med.aggregates[0].values[1] == 300);  // cost sums 300,100,1000
}

TEST_CASE("an empty owner forces an empty intersection but not union") {
  PlainInstance inst;
  inst.domain_size = 4;
  inst.num_attrs = 0;
  inst.owners = {{{0, {}}, {2, {}}}, {}};
  QuerySpec spec;
  spec.op = Op::psi;
  CHECK(oracle_eval(inst, spec).member_cells.empty());
  spec.op = Op::psu;
  CHECK(oracle_eval(inst, spec).member_cells == std::vector<u64>{0, 2});
}

TEST_CASE("protocol equals oracle across ops on a quick random sweep") {
  for (u64 k = 0; k < 12; ++k) {
    for (Op op : {Op::psi, Op::psu, Op::count, Op::sum, Op::avg, Op::max, Op::median}) {
      bool aggregate = op == Op::sum || op == Op::avg || op == Op::max || op == Op::median;
      u64 seed = derive_seed(0x5eed, k * 10 + static_cast<u64>(op));
      u64 m = 2 + k % 5, b = 4 + (k * 11) % 61;
      PlainInstance inst = random_instance(seed, m, b, aggregate ? 1 : 0, 60);
      PublicParams p = generate_params(m, b, instance_domain_max(inst) + 1, derive_seed(seed, 1));
      ParamsSet views = views_from(p);
      auto owners = owner_inputs_from(inst, views.owner_view, derive_seed(seed, 2));
      QuerySpec spec;
      spec.op = op;
      spec.num_agg_attrs = aggregate ? 1 : 0;
      spec.reveal_max_identity = op == Op::max;
      spec.seed = seed;
      QueryResult got = run_query(spec, views, owners);
      OracleResult want = oracle_eval(inst, spec);

      CHECK(got.member_cells == want.member_cells);
      if (op == Op::count) CHECK(got.count == want.count);
      REQUIRE(got.aggregates.size() == want.aggregates.size());
      for (std::size_t i = 0; i < want.aggregates.size(); ++i) {
        CHECK(got.aggregates[i].cell == want.aggregates[i].cell);
        CHECK(got.aggregates[i].values == want.aggregates[i].values);
        if (op == Op::avg) CHECK(got.aggregates[i].counts == want.aggregates[i].counts);
        if (op == Op::max) CHECK(got.aggregates[i].holders == want.aggregates[i].holders);
      }
    }
  }
}

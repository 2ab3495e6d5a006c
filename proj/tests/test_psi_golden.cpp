#include <doctest.h>

#include "prism/server.hpp"
#include "test_support.hpp"

using namespace prism;
using namespace prism::testsupport;

namespace {

// Share tables 4-6: presence shares of the three hospitals, negatives
// canonicalized mod 5.
ServerShareSet hospital_shares(int owner, int server) {
  static const long long share1[3][3] = {{4, 2, 3}, {3, 4, 3}, {2, 3, 4}};
  static const long long share2[3][3] = {{-3, -2, -2}, {-2, -3, -3}, {-1, -3, -3}};
  ServerShareSet s;
  for (int i = 0; i < 3; ++i)
    s.presence.push_back(canonical(server == 1 ? share1[owner][i] : share2[owner][i], 5));
  return s;
}

}  // namespace

TEST_CASE("worked PSI instance: exact server outputs and owner vector") {
  PublicParams p = golden_params();
  ServerEngine s1(view_for(p, Role::server1));
  ServerEngine s2(view_for(p, Role::server2));
  const u64 qid = 7;
  for (int j = 0; j < 3; ++j) {
    s1.store_shares(qid, j + 1, hospital_shares(j, 1));
    s2.store_shares(qid, j + 1, hospital_shares(j, 2));
  }
  std::vector<u64> out1 = s1.psi_eval(qid);
  std::vector<u64> out2 = s2.psi_eval(qid);
  CHECK(out1 == std::vector<u64>{27, 27, 81});
  CHECK(out2 == std::vector<u64>{9, 1, 1});

  RoleView owner = view_for(p, Role::owner);
  PsiResult res = psi_finalize(out1, out2, owner);
  CHECK(res.fop == std::vector<u64>{1, 5, 4});
  CHECK(res.common == std::vector<std::uint8_t>{1, 0, 0});  // cancer only
}

TEST_CASE("psi_finalize validates lengths") {
  PublicParams p = golden_params();
  RoleView owner = view_for(p, Role::owner);
  std::vector<u64> a{1, 2}, b{1, 2, 3};
  CHECK_THROWS_AS(psi_finalize(a, b, owner), protocol_error);
}

TEST_CASE("all-zero shares with a zero m-share give g^0 = 1 everywhere") {
  RoleView view = view_for(golden_params(), Role::server1);
  view.m = 2;
  view.m_share = 0;
  ServerEngine s1(std::move(view));
  const u64 qid = 1;
  ServerShareSet zero;
  zero.presence = {0, 0, 0};
  s1.store_shares(qid, 1, zero);
  s1.store_shares(qid, 2, zero);
  CHECK(s1.psi_eval(qid) == std::vector<u64>{1, 1, 1});
}

TEST_CASE("PSI through the full driver returns the common disease") {
  PublicParams p = golden_params();
  ParamsSet views = views_from(p);
  auto owners = owner_inputs_from(hospitals(), views.owner_view, 99);
  QuerySpec spec;
  spec.op = Op::psi;
  spec.seed = 4;
  Transcript tr;
  QueryResult res = run_query(spec, views, owners, &tr);
  CHECK(res.member_cells == std::vector<u64>{0});
  CHECK(res.rounds == 1);
}

TEST_CASE("end-to-end PSI equals the plaintext intersection on random instances") {
  for (u64 seed = 0; seed < 25; ++seed) {
    u64 m = 2 + seed % 5;
    u64 b = 4 + (seed * 7) % 61;
    PlainInstance inst = random_instance(derive_seed(seed, 1), m, b, 0, 1);
    PublicParams p = generate_params(m, b, 10, derive_seed(seed, 2));
    ParamsSet views = views_from(p);
    auto owners = owner_inputs_from(inst, views.owner_view, derive_seed(seed, 3));
    QuerySpec spec;
    spec.op = Op::psi;
    spec.seed = seed;
    QueryResult res = run_query(spec, views, owners);
    OracleResult want = oracle_eval(inst, spec);
    CHECK(res.member_cells == want.member_cells);
  }
}

TEST_CASE("per-cell server work is input independent") {
  PublicParams p = generate_params(3, 64, 10, 77);
  ParamsSet views = views_from(p);
  ServerEngine s1(views.server_views[0]);
  const u64 qid = 3;

  // all-zero tables
  for (u64 j = 1; j <= 3; ++j) {
    ServerShareSet s;
    s.presence.assign(64, 0);
    s1.store_shares(qid, j, s);
  }
  opcount::mul_mod_calls = 0;
  s1.psi_eval(qid);
  u64 zero_cost = opcount::mul_mod_calls;

  // random tables
  SplitMix64 rng(5);
  for (u64 j = 1; j <= 3; ++j) {
    ServerShareSet s;
    for (int i = 0; i < 64; ++i) s.presence.push_back(rng.uniform(p.group.delta));
    s1.store_shares(qid + 1, j, s);
  }
  opcount::mul_mod_calls = 0;
  s1.psi_eval(qid + 1);
  CHECK(opcount::mul_mod_calls == zero_cost);
}

#include "prism/params.hpp"

#include <filesystem>

#include "prism/fieldfile.hpp"
#include "prism/sharing.hpp"

namespace prism {

namespace {
constexpr const char* kParamsMagic = "PRISMPAR";
}

void validate_group(const GroupParams& gp, u64 m) {
  if (!is_prime(gp.delta)) throw parameter_error("delta must be prime");
  if (!is_prime(gp.eta)) throw parameter_error("eta must be prime");
  if (gp.delta <= m) throw parameter_error("delta must exceed the owner count");
  if ((gp.eta - 1) % gp.delta != 0) throw parameter_error("delta must divide eta-1");
  if (gp.eta_prime % gp.eta != 0 || gp.eta_prime / gp.eta < 2)
    throw parameter_error("eta' must be alpha*eta with alpha >= 2");
  if (gp.eta_prime >= kMaxModulus) throw parameter_error("eta' exceeds the 61-bit modulus cap");
  if (mod_pow(gp.g, gp.delta, gp.eta) != 1) throw parameter_error("g^delta != 1 mod eta");
  if (gp.g <= 1) throw parameter_error("g must generate a nontrivial subgroup");
  // delta prime: order of g divides delta, so order is exactly delta unless g = 1
}

std::string role_name(Role r) {
  switch (r) {
    case Role::owner: return "owner";
    case Role::server1: return "server1";
    case Role::server2: return "server2";
    case Role::server3: return "server3";
    case Role::announcer: return "announcer";
  }
  throw parameter_error("unknown role");
}

Role role_from_name(const std::string& name) {
  for (Role r : {Role::owner, Role::server1, Role::server2, Role::server3, Role::announcer})
    if (role_name(r) == name) return r;
  throw parameter_error("unknown role '" + name + "'");
}

u64 eval_f(const std::vector<u64>& coeffs, u64 x) {
  u128 acc = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    acc = acc * x + coeffs[k];
    if (acc >= kMaxModulus)
      throw parameter_error("F(x) exceeds the 61-bit range; lower the max aggregate value");
  }
  return static_cast<u64>(acc);
}

u64 max_noise_bound(const std::vector<u64>& coeffs, u64 m, u64 M) {
  u64 gap = eval_f(coeffs, M + 1) - eval_f(coeffs, M) - 1;
  u128 pow = 1;
  for (u64 i = 0; i < m; ++i) {
    pow *= M;
    if (pow >= kMaxModulus) return gap;  // M^m saturates past any gap we can store
  }
  return std::min<u64>(static_cast<u64>(pow), gap);
}

PublicParams generate_params(u64 m, u64 b, u64 domain_max, u64 seed) {
  if (m < 2) throw parameter_error("generate_params: need at least 2 owners");
  if (b < 1) throw parameter_error("generate_params: domain size must be >= 1");
  PublicParams p;
  p.m = m;
  p.b = b;
  p.domain_max = domain_max;
  p.seed = seed;
  SplitMix64 rng(derive_seed(seed, 0x70726d73));

  // delta > m; floor of 113 keeps the detection bound of the tamper checks
  // comfortably above the acceptance threshold even for tiny deployments
  p.group.delta = next_prime(std::max<u64>(m + 1, 113));
  for (u64 k = 2;; k += 2) {
    u64 candidate = k * p.group.delta + 1;
    if (is_prime(candidate)) {
      p.group.eta = candidate;
      break;
    }
  }
  u64 alpha = 2 + rng.uniform(998);
  p.group.eta_prime = alpha * p.group.eta;
  p.group.g = find_subgroup_generator(p.group.eta, p.group.delta, rng.next());
  validate_group(p.group, m);

  p.f_coeffs.resize(m + 2);
  for (auto& c : p.f_coeffs) c = 1 + rng.uniform(100);
  p.max_modulus = next_prime(2 * eval_f(p.f_coeffs, domain_max + 1) + 1);

  p.shamir_p = (1ull << 61) - 1;  // Mersenne prime
  if (domain_max > 0) {
    u128 need = static_cast<u128>(m) * domain_max * domain_max;
    if (need >= p.shamir_p)
      throw parameter_error("aggregate range too large for the Shamir field");
  }

  p.pf_i = gen_permutation(rng.next(), b);
  p.pf_db1 = gen_permutation(rng.next(), b);
  p.pf_db2 = gen_permutation(rng.next(), b);
  p.pf_s1 = compose(p.pf_i, p.pf_db1.inverse());
  p.pf_s2 = compose(p.pf_i, p.pf_db2.inverse());
  p.pf_shared = gen_permutation(rng.next(), m);
  p.prg_seed = rng.next();

  auto shares = additive_share(m % p.group.delta, p.group.delta, 2, rng);
  p.m_shares = {shares[0].value, shares[1].value};
  validate_params(p);
  return p;
}

void validate_params(const PublicParams& p) {
  validate_group(p.group, p.m);
  if (p.f_coeffs.size() != p.m + 2) throw parameter_error("F must have degree m+1");
  for (u64 c : p.f_coeffs)
    if (c == 0) throw parameter_error("F coefficients must be positive");
  if (p.max_modulus <= 2 * eval_f(p.f_coeffs, p.domain_max + 1) || !is_prime(p.max_modulus))
    throw parameter_error("max_modulus must be a prime > 2*F(domain_max+1)");
  if (!is_prime(p.shamir_p)) throw parameter_error("shamir_p must be prime");
  for (const Permutation* pf : {&p.pf_i, &p.pf_s1, &p.pf_s2, &p.pf_db1, &p.pf_db2})
    if (pf->size() != p.b || !pf->is_valid()) throw parameter_error("bad domain permutation");
  if (p.pf_shared.size() != p.m || !p.pf_shared.is_valid())
    throw parameter_error("bad shared permutation");
  if (compose(p.pf_s1, p.pf_db1).map != p.pf_i.map ||
      compose(p.pf_s2, p.pf_db2).map != p.pf_i.map)
    throw parameter_error("permutation quadruple does not compose to pf_i");
  if (add_mod(p.m_shares[0], p.m_shares[1], p.group.delta) != p.m % p.group.delta)
    throw parameter_error("m shares do not reconstruct to m");
}

RoleView view_for(const PublicParams& p, Role role) {
  RoleView v;
  v.role = role;
  v.delta = p.group.delta;
  switch (role) {
    case Role::owner:
      v.m = p.m;
      v.b = p.b;
      v.eta = p.group.eta;
      v.f_coeffs = p.f_coeffs;
      v.pf_db1 = p.pf_db1;
      v.pf_db2 = p.pf_db2;
      v.pf_shared = p.pf_shared;
      v.shamir_p = p.shamir_p;
      v.max_modulus = p.max_modulus;
      v.domain_max = p.domain_max;
      break;
    case Role::server1:
    case Role::server2:
    case Role::server3:
      v.server_index = static_cast<std::uint32_t>(role);
      v.m = p.m;
      v.b = p.b;
      v.g = p.group.g;
      v.eta_prime = p.group.eta_prime;
      v.prg_seed = p.prg_seed;
      v.pf_s1 = p.pf_s1;
      v.pf_s2 = p.pf_s2;
      v.pf_shared = p.pf_shared;
      v.shamir_p = p.shamir_p;
      if (role != Role::server3) v.m_share = p.m_shares[v.server_index - 1];
      break;
    case Role::announcer:
      v.max_modulus = p.max_modulus;
      break;
  }
  return v;
}

std::string params_file_name(Role r) { return "params." + role_name(r); }

void save_view(const RoleView& v, const std::string& path) {
  FieldFile f;
  f.set("role", static_cast<u64>(v.role));
  f.set("server_index", v.server_index);
  f.set("m", v.m);
  f.set("b", v.b);
  f.set("delta", v.delta);
  auto put_opt = [&](const char* name, const std::optional<u64>& o) {
    if (o) f.set(name, *o);
  };
  put_opt("eta", v.eta);
  put_opt("eta_prime", v.eta_prime);
  put_opt("g", v.g);
  put_opt("prg_seed", v.prg_seed);
  put_opt("shamir_p", v.shamir_p);
  put_opt("max_modulus", v.max_modulus);
  put_opt("domain_max", v.domain_max);
  put_opt("m_share", v.m_share);
  if (v.f_coeffs) f.set("f_coeffs", *v.f_coeffs);
  auto put_pf = [&](const char* name, const std::optional<Permutation>& o) {
    if (o) f.set(name, o->map);
  };
  put_pf("pf_db1", v.pf_db1);
  put_pf("pf_db2", v.pf_db2);
  put_pf("pf_s1", v.pf_s1);
  put_pf("pf_s2", v.pf_s2);
  put_pf("pf_shared", v.pf_shared);
  f.save(path, kParamsMagic);
}

RoleView load_view(const std::string& path) {
  FieldFile f = FieldFile::load(path, kParamsMagic);
  RoleView v;
  v.role = static_cast<Role>(f.get_scalar("role"));
  v.server_index = static_cast<std::uint32_t>(f.get_scalar("server_index"));
  v.m = f.get_scalar("m");
  v.b = f.get_scalar("b");
  v.delta = f.get_scalar("delta");
  auto opt = [&](const char* name) -> std::optional<u64> {
    if (f.has(name)) return f.get_scalar(name);
    return std::nullopt;
  };
  v.eta = opt("eta");
  v.eta_prime = opt("eta_prime");
  v.g = opt("g");
  v.prg_seed = opt("prg_seed");
  v.shamir_p = opt("shamir_p");
  v.max_modulus = opt("max_modulus");
  v.domain_max = opt("domain_max");
  v.m_share = opt("m_share");
  if (f.has("f_coeffs")) v.f_coeffs = f.get_vector("f_coeffs");
  auto opt_pf = [&](const char* name) -> std::optional<Permutation> {
    if (!f.has(name)) return std::nullopt;
    Permutation p;
    p.map = f.get_vector(name);
    return p;
  };
  v.pf_db1 = opt_pf("pf_db1");
  v.pf_db2 = opt_pf("pf_db2");
  v.pf_s1 = opt_pf("pf_s1");
  v.pf_s2 = opt_pf("pf_s2");
  v.pf_shared = opt_pf("pf_shared");
  return v;
}

void write_param_files(const PublicParams& p, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (Role r : {Role::owner, Role::server1, Role::server2, Role::server3, Role::announcer})
    save_view(view_for(p, r), (std::filesystem::path(dir) / params_file_name(r)).string());
}

ParamsSet views_from(const PublicParams& p) {
  ParamsSet s;
  s.owner_view = view_for(p, Role::owner);
  s.server_views = {view_for(p, Role::server1), view_for(p, Role::server2),
                    view_for(p, Role::server3)};
  s.announcer_view = view_for(p, Role::announcer);
  return s;
}

ParamsSet load_param_files(const std::string& dir) {
  auto path = [&](Role r) {
    return (std::filesystem::path(dir) / params_file_name(r)).string();
  };
  ParamsSet s;
  s.owner_view = load_view(path(Role::owner));
  s.server_views = {load_view(path(Role::server1)), load_view(path(Role::server2)),
                    load_view(path(Role::server3))};
  s.announcer_view = load_view(path(Role::announcer));
  return s;
}

}  // namespace prism

// prism command line: parameter setup, CSV ingestion, query execution in
// simulated or networked mode, role servers, and the PSI scaling benchmark.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "prism/bench.hpp"
#include "prism/csv.hpp"
#include "prism/net.hpp"
#include "prism/sim.hpp"

namespace {

using namespace prism;

std::string default_params_dir() {
  const char* env = std::getenv("PRISM_PARAMS_DIR");
  return env ? env : "prism_params";
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <typename T>
std::vector<T> split_numbers(const std::string& text) {
  std::vector<T> out;
  for (const auto& tok : split_csv_list(text)) out.push_back(static_cast<T>(std::stoull(tok)));
  return out;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int cmd_setup(u64 owners, u64 domain_size, u64 max_value, u64 seed, const std::string& dir) {
  PublicParams params = generate_params(owners, domain_size, max_value, seed);
  write_param_files(params, dir);
  std::cout << "wrote parameter files for " << owners << " owners, domain " << domain_size
            << " under " << dir << "\n";
  return 0;
}

struct IngestArgs {
  std::string csv;
  std::string set_attrs;
  std::string agg_attrs;
  std::vector<std::string> domain_decls;
  std::uint32_t owner = 0;
  std::uint32_t scale = 0;
  u64 seed = 1;
  std::string params_dir;
  std::string data_dir = ".";
};

int cmd_ingest(const IngestArgs& args) {
  IngestSpec spec;
  spec.csv_path = args.csv;
  spec.set_attrs = split_csv_list(args.set_attrs);
  spec.agg_attrs = split_csv_list(args.agg_attrs);
  spec.decimal_scale = args.scale;
  for (const auto& attr : spec.set_attrs) {
    bool found = false;
    for (const auto& decl : args.domain_decls) {
      auto eq = decl.find('=');
      if (eq == std::string::npos)
        throw ingest_error("domain declaration must look like ATTR=1..100 or ATTR=@file");
      if (decl.substr(0, eq) != attr) continue;
      spec.domains.push_back({attr, parse_domain_values(decl.substr(eq + 1))});
      found = true;
      break;
    }
    if (!found) throw ingest_error("no --domain declaration for set attribute " + attr);
  }

  RoleView owner_view = load_view(
      (std::filesystem::path(args.params_dir) / params_file_name(Role::owner)).string());
  OwnerData data = ingest_csv(spec, args.owner);
  if (data.table.size() != owner_view.b)
    throw ingest_error("declared domain size " + std::to_string(data.table.size()) +
                       " does not match the parameter files (" + std::to_string(owner_view.b) +
                       ")");
  if (owner_view.domain_max) {
    for (const auto& col : data.table.payload_sum)
      for (u64 v : col)
        if (v > *owner_view.domain_max)
          throw ingest_error("aggregate value " + std::to_string(v) +
                             " exceeds the configured --max-value; re-run setup");
  }
  OwnerInputs inputs = make_owner_inputs(std::move(data), owner_view,
                                         derive_seed(args.seed, args.owner));
  std::filesystem::create_directories(args.data_dir);
  save_owner_data(inputs.data,
                  (std::filesystem::path(args.data_dir) / data_file_name(args.owner)).string());
  save_bundle(inputs.bundle, inputs.data.attr_names, args.data_dir);
  std::cout << "owner " << args.owner << ": ingested " << inputs.data.table.size()
            << " domain cells, " << inputs.data.attr_names.size() << " aggregate column(s)\n";
  return 0;
}

struct QueryArgs {
  std::string op = "psi";
  std::string agg_attrs;
  bool verify = false;
  bool reveal_identity = false;
  u64 bucketize = 0;
  std::string mode = "sim";
  u64 seed = 1;
  std::uint32_t owner = 1;  // net mode: which owner this process is
  std::string servers;      // net mode: s1,s2,s3 endpoints
  double timeout = 30.0;
  bool timings = false;
  std::string params_dir;
  std::string data_dir = ".";
  std::string out;
};

QuerySpec build_spec(const QueryArgs& args, const std::vector<std::string>& attr_names) {
  QuerySpec spec;
  spec.op = op_from_name(args.op);
  spec.verify = args.verify;
  spec.reveal_max_identity = args.reveal_identity;
  spec.seed = args.seed;
  if (args.bucketize > 0) spec.bucket_fanout = args.bucketize;
  auto requested = split_csv_list(args.agg_attrs);
  // aggregate columns are taken in ingestion order
  for (std::size_t i = 0; i < requested.size(); ++i) {
    if (i >= attr_names.size() || attr_names[i] != requested[i])
      throw parameter_error("aggregate attributes must match the ingested order (" +
                            (attr_names.empty() ? std::string("none ingested")
                                                : attr_names[i < attr_names.size() ? i : 0]) +
                            " expected)");
  }
  spec.num_agg_attrs = static_cast<std::uint32_t>(requested.size());
  spec.validate();
  return spec;
}

int emit_result(const QueryResult& res, const std::vector<std::string>& labels,
                const QueryArgs& args) {
  write_output(result_to_json(res, labels, args.timings), args.out);
  if (res.verification.checked && !res.verification.passed) {
    std::cerr << "tamper alarm: verification failed at " << res.verification.failing_cells.size()
              << " cell(s)\n";
    return 3;
  }
  return 0;
}

int cmd_query(const QueryArgs& args) {
  if (args.mode == "sim") {
    ParamsSet views = load_param_files(args.params_dir);
    auto owners = load_owner_inputs(views.owner_view.m, args.data_dir);
    QuerySpec spec = build_spec(args, owners[0].data.attr_names);
    QueryResult res = run_query(spec, views, owners);
    return emit_result(res, owners[0].data.labels, args);
  }
  if (args.mode != "net") throw parameter_error("--mode must be sim or net");

  RoleView owner_view = load_view(
      (std::filesystem::path(args.params_dir) / params_file_name(Role::owner)).string());
  OwnerInputs own;
  own.data = load_owner_data(
      (std::filesystem::path(args.data_dir) / data_file_name(args.owner)).string());
  own.bundle = load_bundle(args.owner, own.data.attr_names, args.data_dir);
  QuerySpec spec = build_spec(args, own.data.attr_names);

  auto eps = split_csv_list(args.servers);
  if (eps.size() != 3) throw parameter_error("--servers needs three host:port endpoints");
  NetEndpoints net;
  for (int s = 0; s < 3; ++s) net.servers[s] = parse_endpoint(eps[s]);
  QueryResult res = run_owner_agent(spec, owner_view, own, net, args.timeout);
  return emit_result(res, own.data.labels, args);
}

struct ServeArgs {
  std::string role;
  std::uint16_t port = 0;
  std::string announcer;
  std::string params_dir;
  std::string tamper;
  u64 tamper_seed = 0;
};

int cmd_serve(const ServeArgs& args) {
  Role role = role_from_name(args.role);
  RoleView view =
      load_view((std::filesystem::path(args.params_dir) / params_file_name(role)).string());
  ServeOptions opts;
  opts.port = args.port;
  opts.on_listen = [&](std::uint16_t port) {
    std::cout << "LISTENING " << port << std::endl;  // parsed by callers
  };
  if (role == Role::announcer) {
    AnnouncerNode node(view);
    serve_announcer(node, opts);
    return 0;
  }
  if (!args.announcer.empty()) opts.announcer = parse_endpoint(args.announcer);
  ServerNode node(view);
  if (!args.tamper.empty())
    node.engine().set_tamper({tamper_from_name(args.tamper), args.tamper_seed});
  serve_server(node, opts);
  return 0;
}

struct BenchArgs {
  std::string domain_sizes = "100000,200000";
  std::string owners = "4";
  std::string threads = "1";
  u64 seed = 1;
  double fill = 0.5;
  std::string out;
};

int cmd_bench(const BenchArgs& args) {
  auto points = run_bench(split_numbers<u64>(args.domain_sizes), split_numbers<u64>(args.owners),
                          split_numbers<unsigned>(args.threads), args.seed, args.fill);
  write_output(bench_csv(points), args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prism: private set computation over outsourced secret shares"};
  app.require_subcommand(1);

  u64 owners = 3, domain_size = 8, max_value = 1000, setup_seed = 1;
  std::string setup_dir = default_params_dir();
  auto* setup = app.add_subcommand("setup", "generate and distribute role parameter files");
  setup->add_option("--owners", owners, "number of data owners")->required();
  setup->add_option("--domain-size", domain_size, "set-attribute domain size")->required();
  setup->add_option("--max-value", max_value, "largest aggregate value max/median must encode");
  setup->add_option("--seed", setup_seed, "generation seed");
  setup->add_option("--params-dir", setup_dir, "output directory");

  IngestArgs ing;
  ing.params_dir = default_params_dir();
  auto* ingest = app.add_subcommand("ingest", "load one owner's CSV and outsource shares");
  ingest->add_option("--owner", ing.owner, "owner index (1-based)")->required();
  ingest->add_option("--csv", ing.csv, "input CSV with a header row")->required();
  ingest->add_option("--set-attr", ing.set_attrs, "set attribute name(s), comma separated")
      ->required();
  ingest->add_option("--agg-attrs", ing.agg_attrs, "aggregate attribute names, comma separated");
  ingest->add_option("--domain", ing.domain_decls,
                     "domain per set attribute: ATTR=lo..hi, ATTR=a,b,c or ATTR=@file");
  ingest->add_option("--scale-decimals", ing.scale, "scale aggregates by 10^k at ingestion");
  ingest->add_option("--seed", ing.seed, "share-generation seed");
  ingest->add_option("--params-dir", ing.params_dir, "parameter file directory");
  ingest->add_option("--data-dir", ing.data_dir, "output directory for data and share bundles");

  QueryArgs q;
  q.params_dir = default_params_dir();
  auto* query = app.add_subcommand("query", "run a query over the outsourced shares");
  query->add_option("--op", q.op, "psi|psu|count|sum|avg|max|median")->required();
  query->add_option("--agg-attrs", q.agg_attrs, "aggregate attributes (ingestion order)");
  query->add_flag("--verify", q.verify, "check the servers' PSI answers");
  query->add_flag("--reveal-identity", q.reveal_identity, "max only: expose the holder set");
  query->add_option("--bucketize", q.bucketize, "bucket-tree fanout (psi and aggregates)");
  query->add_option("--mode", q.mode, "sim (in-process) or net");
  query->add_option("--seed", q.seed, "query seed");
  query->add_option("--owner", q.owner, "net mode: this owner's index");
  query->add_option("--servers", q.servers, "net mode: three host:port endpoints");
  query->add_option("--timeout", q.timeout, "net mode: per-round timeout seconds");
  query->add_flag("--timings", q.timings, "append wall-clock timings to the JSON");
  query->add_option("--params-dir", q.params_dir, "parameter file directory");
  query->add_option("--data-dir", q.data_dir, "data/bundle directory");
  query->add_option("--out", q.out, "write the result JSON here instead of stdout");

  ServeArgs srv;
  srv.params_dir = default_params_dir();
  auto* serve = app.add_subcommand("serve", "run one role as a network service");
  serve->add_option("--role", srv.role, "server1|server2|server3|announcer")->required();
  serve->add_option("--port", srv.port, "listen port (0 picks one)");
  serve->add_option("--announcer", srv.announcer, "announcer host:port (server roles)");
  serve->add_option("--params-dir", srv.params_dir, "parameter file directory");
  serve->add_option("--tamper", srv.tamper,
                    "misbehave: drop_cell|replay_cell|forge_cell|skip_all");
  serve->add_option("--tamper-seed", srv.tamper_seed, "tamper randomness seed");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "PSI scaling benchmark, CSV output");
  bench_cmd->add_option("--domain-sizes", bench.domain_sizes, "comma separated b values");
  bench_cmd->add_option("--owners", bench.owners, "comma separated m values");
  bench_cmd->add_option("--threads", bench.threads, "comma separated worker counts");
  bench_cmd->add_option("--seed", bench.seed, "data seed");
  bench_cmd->add_option("--fill", bench.fill, "fraction of presence bits set");
  bench_cmd->add_option("--out", bench.out, "write CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  try {
    if (setup->parsed()) return cmd_setup(owners, domain_size, max_value, setup_seed, setup_dir);
    if (ingest->parsed()) return cmd_ingest(ing);
    if (query->parsed()) return cmd_query(q);
    if (serve->parsed()) return cmd_serve(srv);
    if (bench_cmd->parsed()) return cmd_bench(bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "prism/csv.hpp"

using namespace prism;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::trunc);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("domain declarations") {
  auto range = parse_domain_values("1..5");
  CHECK(range == std::vector<std::string>{"1", "2", "3", "4", "5"});
  auto list = parse_domain_values("Cancer,Fever,Heart");
  CHECK(list.size() == 3);
  auto file = write_temp("prism_domain.txt", "a\nb\n\nc\n");
  CHECK(parse_domain_values("@" + file) == std::vector<std::string>{"a", "b", "c"});
  CHECK_THROWS_AS(parse_domain_values("9..3"), ingest_error);
}

TEST_CASE("group-by ingestion over an order-key style table") {
  auto csv = write_temp("prism_rows.csv",
                        "OK,PK\n"
                        "7,3\n"
                        "7,4\n"
                        "2,10\n");
  IngestSpec spec;
  spec.csv_path = csv;
  spec.set_attrs = {"OK"};
  spec.agg_attrs = {"PK"};
  spec.domains = {{"OK", parse_domain_values("1..8")}};
  OwnerData data = ingest_csv(spec, 1);
  CHECK(data.table.size() == 8);
  CHECK(data.table.bits[6] == 1);  // OK=7 is cell 6
  CHECK(data.table.payload_sum[0][6] == 7);
  CHECK(data.table.payload_count[6] == 2);
  CHECK(data.table.payload_max[0][6] == 4);
  CHECK(data.table.bits[1] == 1);
  CHECK(data.labels[6] == "7");
}

TEST_CASE("ingestion errors carry the line or value") {
  auto ragged = write_temp("prism_ragged.csv", "OK,PK\n7\n");
  IngestSpec spec;
  spec.csv_path = ragged;
  spec.set_attrs = {"OK"};
  spec.agg_attrs = {"PK"};
  spec.domains = {{"OK", parse_domain_values("1..8")}};
  CHECK_THROWS_WITH_AS(ingest_csv(spec, 1), doctest::Contains("line 2"), ingest_error);

  auto out_of_domain = write_temp("prism_ood.csv", "OK,PK\n9,1\n");
  spec.csv_path = out_of_domain;
  CHECK_THROWS_WITH_AS(ingest_csv(spec, 1), doctest::Contains("'9'"), ingest_error);

  auto negative = write_temp("prism_neg.csv", "OK,PK\n7,-3\n");
  spec.csv_path = negative;
  CHECK_THROWS_AS(ingest_csv(spec, 1), ingest_error);
}

TEST_CASE("decimal scaling multiplies by ten to the k") {
  auto csv = write_temp("prism_dec.csv",
                        "OK,DT\n"
                        "1,0.5\n"
                        "2,8.2\n"
                        "3,8.02\n");
  IngestSpec spec;
  spec.csv_path = csv;
  spec.set_attrs = {"OK"};
  spec.agg_attrs = {"DT"};
  spec.domains = {{"OK", parse_domain_values("1..3")}};
  spec.decimal_scale = 2;
  OwnerData data = ingest_csv(spec, 1);
  CHECK(data.table.payload_sum[0] == std::vector<u64>{50, 820, 802});

  spec.decimal_scale = 1;
  CHECK_THROWS_WITH_AS(ingest_csv(spec, 1), doctest::Contains("scale-decimals"), ingest_error);
}

TEST_CASE("multi-attribute sets flatten to the product domain") {
  auto csv = write_temp("prism_multi.csv",
                        "A,B,X\n"
                        "4,1,2\n"
                        "7,2,3\n"
                        "8,2,4\n");
  IngestSpec spec;
  spec.csv_path = csv;
  spec.set_attrs = {"A", "B"};
  spec.agg_attrs = {"X"};
  spec.domains = {{"A", parse_domain_values("1..8")}, {"B", parse_domain_values("1..2")}};
  OwnerData data = ingest_csv(spec, 1);
  CHECK(data.table.size() == 16);
  CHECK(data.table.bits[3 * 2 + 0] == 1);   // (A=4,B=1)
  CHECK(data.table.bits[6 * 2 + 1] == 1);   // (A=7,B=2)
  CHECK(data.table.bits[7 * 2 + 1] == 1);   // (A=8,B=2)
  CHECK(data.labels[6 * 2 + 1] == "7|2");
}

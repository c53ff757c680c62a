/*
 * Copyright (c) 2026 tsgraph authors.
 *     All rights reserved.
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing,
 *  software distributed under the License is distributed on an "AS
 *  IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
 *  express or implied.  See the License for the specific language
 *  governing permissions and limitations under the License.
 */

// End-to-end checks of the installed command surface; exercises the real
// binary named by TSGRAPH_BIN.

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <json.hpp>

#include "../common/testutil.hpp"

namespace {

using tsgraph::testutil::TempDir;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string binary_path() {
  const char* env = std::getenv("TSGRAPH_BIN");
  return env == nullptr ? "" : env;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const TempDir& dir, const std::string& args) {
  std::string out_path = dir.path() + "/cli.out";
  std::string err_path = dir.path() + "/cli.err";
  std::string cmd = binary_path() + " " + args + " >" + out_path + " 2>" +
                    err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

struct CliFixture {
  TempDir dir;
  std::string root;

  CliFixture() {
    root = dir.path() + "/store";
    write_file(dir.path() + "/schema.json", R"({
      "graph_id": "g",
      "edge_types": {"follows": [{"col": "weight", "type": "double"}]},
      "vertex_attrs": [{"name": "age", "type": "int"}]
    })");
    write_file(dir.path() + "/edges.tsv",
               "1\t2\tfollows\t1000\t1.5\n"
               "1\t3\tfollows\t2000\t0.5\n"
               "2\t3\tfollows\t3000\t1.0\n");
    write_file(dir.path() + "/vertices.tsv",
               "1\tage\t500\t16\n"
               "1\tage\t1500\t17\n");
  }

  RunResult ingest() {
    return run_cli(dir, "--root " + root + " --graph g ingest --schema " +
                            dir.path() + "/schema.json --edges " + dir.path() +
                            "/edges.tsv --vertices " + dir.path() +
                            "/vertices.tsv --n 2 --pv 2");
  }
};

}  // namespace

TEST_CASE("cli ingest reports edges and vertices") {
  if (binary_path().empty()) return;  // only meaningful under ctest
  CliFixture fx;
  RunResult r = fx.ingest();
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("edges=3 vertices=3") != std::string::npos);
}

TEST_CASE("cli ingest rejects malformed lines with the line number") {
  if (binary_path().empty()) return;
  CliFixture fx;
  write_file(fx.dir.path() + "/bad.tsv",
             "1\t2\tfollows\t1000\t1.5\n"
             "oops\n");
  RunResult r = run_cli(fx.dir, "--root " + fx.root +
                                    " --graph g ingest --schema " +
                                    fx.dir.path() + "/schema.json --edges " +
                                    fx.dir.path() + "/bad.tsv");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("bad.tsv:2") != std::string::npos);
}

TEST_CASE("cli ingest refuses an existing graph id") {
  if (binary_path().empty()) return;
  CliFixture fx;
  CHECK(fx.ingest().exit_code == 0);
  RunResult again = fx.ingest();
  CHECK(again.exit_code == 2);
  CHECK(again.err.find("already exists") != std::string::npos);
}

TEST_CASE("cli khop emits a sorted id list") {
  if (binary_path().empty()) return;
  CliFixture fx;
  REQUIRE(fx.ingest().exit_code == 0);
  RunResult r = run_cli(
      fx.dir, "--root " + fx.root + " --graph g query khop --seeds 1 --k 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "1\n2\n3\n");
}

TEST_CASE("cli attribute-at answers by snapshot time") {
  if (binary_path().empty()) return;
  CliFixture fx;
  REQUIRE(fx.ingest().exit_code == 0);
  RunResult early = run_cli(fx.dir, "--root " + fx.root +
                                        " --graph g --at 400 query "
                                        "attribute-at --vertex 1 --attr age");
  CHECK(early.exit_code == 0);
  CHECK(early.out == "absent\n");
  RunResult later = run_cli(fx.dir, "--root " + fx.root +
                                        " --graph g --at 1600 query "
                                        "attribute-at --vertex 1 --attr age");
  CHECK(later.out == "17\n");
  RunResult missing =
      run_cli(fx.dir, "--root " + fx.root +
                          " --graph g query attribute-at --vertex 99 "
                          "--attr age");
  CHECK(missing.exit_code == 3);
}

TEST_CASE("cli run prints stats and honors exit codes") {
  if (binary_path().empty()) return;
  CliFixture fx;
  REQUIRE(fx.ingest().exit_code == 0);
  RunResult pr =
      run_cli(fx.dir, "--root " + fx.root + " --graph g run pagerank");
  CHECK(pr.exit_code == 0);
  CHECK(pr.err.find("supersteps=") != std::string::npos);
  CHECK(pr.err.find("blocks_read=") != std::string::npos);

  RunResult bad_source = run_cli(
      fx.dir, "--root " + fx.root + " --graph g run sssp --source 424242");
  CHECK(bad_source.exit_code == 3);

  RunResult sssp_ok = run_cli(
      fx.dir, "--root " + fx.root +
                  " --graph g run sssp --source 1 --weight-attr weight");
  CHECK(sssp_ok.exit_code == 0);
  CHECK(sssp_ok.out.find("2\t1.5\n") != std::string::npos);
}

TEST_CASE("cli bench emits valid json and rejects unknown codecs") {
  if (binary_path().empty()) return;
  TempDir dir;
  std::string input = dir.path() + "/col.txt";
  {
    std::ofstream out(input);
    uint64_t t = 1'700'000'000'000;
    for (int i = 0; i < 5000; ++i) {
      t += 97;
      out << t << "\n";
    }
  }
  RunResult r = run_cli(dir, "bench --input " + input +
                                 " --type ts --codecs none,delta_ts --json");
  CHECK(r.exit_code == 0);
  auto parsed = nlohmann::json::parse(r.out);
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 2);
  double none_ratio = parsed[0]["ratio"].get<double>();
  double delta_ratio = parsed[1]["ratio"].get<double>();
  CHECK(delta_ratio < none_ratio);

  RunResult bad = run_cli(dir, "bench --input " + input +
                                   " --type ts --codecs snappy");
  CHECK(bad.exit_code == 5);
}

TEST_CASE("cli ingest compresses below the raw input size") {
  if (binary_path().empty()) return;
  TempDir dir;
  std::string root = dir.path() + "/store";
  write_file(dir.path() + "/schema.json", R"({
    "graph_id": "big",
    "edge_types": {"follows": [{"col": "weight", "type": "double"}]},
    "vertex_attrs": []
  })");
  {
    std::ofstream out(dir.path() + "/edges.tsv");
    std::mt19937_64 rng(99);
    uint64_t ts = 1'700'000'000'000;
    for (int i = 0; i < 20000; ++i) {
      ts += rng() % 2000;
      out << (rng() % 500 + 1) << "\t" << (rng() % 500 + 1)
          << "\tfollows\t" << ts << "\t" << (rng() % 16) * 0.25 << "\n";
    }
  }
  RunResult r = run_cli(dir, "--root " + root + " ingest --schema " +
                                 dir.path() + "/schema.json --edges " +
                                 dir.path() + "/edges.tsv --n 2 --pv 2");
  REQUIRE(r.exit_code == 0);
  auto grab = [&](const std::string& key) {
    auto pos = r.out.find(key + "=");
    REQUIRE(pos != std::string::npos);
    return std::stoull(r.out.substr(pos + key.size() + 1));
  };
  CHECK(grab("stored_bytes") < grab("input_bytes"));
}

TEST_CASE("cli stats summarizes the store") {
  if (binary_path().empty()) return;
  CliFixture fx;
  REQUIRE(fx.ingest().exit_code == 0);
  RunResult r = run_cli(fx.dir, "--root " + fx.root + " --graph g stats");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("vertices=3") != std::string::npos);
  CHECK(r.out.find("edges=3") != std::string::npos);
}

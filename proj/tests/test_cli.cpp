/*
 * Copyright 2026 The FALE Plots Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// End-to-end runs of the command-line binary, located via FALE_BIN.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fale/report.hpp"
#include "json.hpp"

namespace {

std::string bin() {
  const char* path = std::getenv("FALE_BIN");
  REQUIRE_MESSAGE(path != nullptr, "FALE_BIN must point at the cli binary");
  return path;
}

// Per-process scratch directory.
const std::string& workdir() {
  static const std::string dir = [] {
    char tmpl[] = "/tmp/fale-cli-test-XXXXXX";
    REQUIRE(::mkdtemp(tmpl) != nullptr);
    return std::string(tmpl);
  }();
  return dir;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const std::string out_path = workdir() + "/stdout.txt";
  const std::string err_path = workdir() + "/stderr.txt";
  const std::string cmd =
      bin() + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

// First stdout line must be "<key> <value>"; returns the value token.
std::string first_value(const RunResult& r, const std::string& key) {
  REQUIRE(r.out.rfind(key + " ", 0) == 0);
  const std::size_t eol = r.out.find('\n');
  return r.out.substr(key.size() + 1, eol - key.size() - 1);
}

// Generates data + schema + trained model once for the whole binary.
struct Corpus {
  std::string data;
  std::string schema;
  std::string model;

  Corpus() {
    const std::string d = workdir();
    data = d + "/demo.csv";
    schema = d + "/demo_schema.json";
    model = d + "/demo_model.json";
    RunResult synth = run("synth --rows 400 --beta 0.3 --seed 11 --out " +
                          data + " --schema-out " + schema);
    REQUIRE(synth.code == 0);
    REQUIRE(synth.out == "rows 400\n");
    RunResult train = run("train --data " + data + " --schema " + schema +
                          " --epochs 40 --out " + model);
    REQUIRE(train.code == 0);
    REQUIRE(train.out.rfind("train_accuracy ", 0) == 0);
  }
};

const Corpus& corpus() {
  static const Corpus c;
  return c;
}

}  // namespace

TEST_CASE("audit happy path") {
  const auto& c = corpus();
  const std::string report = workdir() + "/audit.json";
  const std::string svg = workdir() + "/audit.svg";
  const RunResult r = run("audit --data " + c.data + " --schema " + c.schema +
                          " --model builtin:" + c.model +
                          " --feature x --protected a=1/0 --bins 5" +
                          " --out-json " + report + " --out-svg " + svg);
  CHECK(r.code == 0);
  CHECK(r.err.empty());

  // The stdout summary repeats the report's numbers byte for byte.
  const fale::FaleCurve curve = fale::read_report(slurp(report));
  CHECK(first_value(r, "global_unfairness") ==
        nlohmann::json(curve.global_unfairness).dump());
  CHECK(r.out.find("bin ") != std::string::npos);

  const std::string picture = slurp(svg);
  CHECK(picture.find("<svg") != std::string::npos);
  CHECK(picture.find("class=\"curve\"") != std::string::npos);

  // Reports echo run provenance.
  const auto doc = nlohmann::json::parse(slurp(report));
  CHECK(doc.at("meta").at("dataset_path") == c.data);
  CHECK(doc.at("meta").at("bin_strategy") == "quantile");
}

TEST_CASE("effect-curve happy path") {
  const auto& c = corpus();
  const std::string report = workdir() + "/ale.json";
  const std::string svg = workdir() + "/ale.svg";
  const RunResult r = run("ale --data " + c.data + " --schema " + c.schema +
                          " --model builtin:" + c.model +
                          " --feature x --bins 4 --out-json " + report +
                          " --out-svg " + svg);
  CHECK(r.code == 0);
  const fale::AleCurve curve = fale::read_ale_report(slurp(report));
  CHECK(first_value(r, "center_offset") ==
        nlohmann::json(curve.center_offset).dump());
  CHECK(nlohmann::json::parse(slurp(report)).at("curve_type") == "ale");
}

TEST_CASE("external oracle round trip") {
  const char* responder = std::getenv("FALE_RESPONDER");
  REQUIRE(responder != nullptr);
  const auto& c = corpus();
  const std::string report = workdir() + "/exec.json";
  const RunResult r =
      run("audit --data " + c.data + " --schema " + c.schema +
          " --model \"exec:" + std::string(responder) + " linear\"" +
          " --feature x --protected a=1/0 --bins 4 --out-json " + report +
          " --out-svg " + workdir() + "/exec.svg");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(report)).at("meta").at("model") ==
        "exec:" + std::string(responder) + " linear");
}

TEST_CASE("config errors exit 2 with a one-line message") {
  const auto& c = corpus();
  SUBCASE("examined feature equals the protected attribute") {
    const RunResult r =
        run("audit --data " + c.data + " --schema " + c.schema +
            " --model builtin:" + c.model +
            " --feature a --protected a=1/0 --out-json " + workdir() +
            "/x.json --out-svg " + workdir() + "/x.svg");
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
  SUBCASE("nonpositive bin count") {
    const RunResult r =
        run("audit --data " + c.data + " --schema " + c.schema +
            " --model builtin:" + c.model +
            " --feature x --protected a=1/0 --bins 0 --out-json " +
            workdir() + "/x.json --out-svg " + workdir() + "/x.svg");
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error: ", 0) == 0);
  }
  SUBCASE("malformed protected spec") {
    const RunResult r =
        run("audit --data " + c.data + " --schema " + c.schema +
            " --model builtin:" + c.model +
            " --feature x --protected a --out-json " + workdir() +
            "/x.json --out-svg " + workdir() + "/x.svg");
    CHECK(r.code == 2);
  }
  SUBCASE("unknown fairness measure") {
    const RunResult r =
        run("audit --data " + c.data + " --schema " + c.schema +
            " --model builtin:" + c.model +
            " --feature x --protected a=1/0 --fairness karma --out-json " +
            workdir() + "/x.json --out-svg " + workdir() + "/x.svg");
    CHECK(r.code == 2);
  }
  SUBCASE("colliding output paths") {
    const RunResult r =
        run("audit --data " + c.data + " --schema " + c.schema +
            " --model builtin:" + c.model +
            " --feature x --protected a=1/0 --out-json " + workdir() +
            "/same.out --out-svg " + workdir() + "/same.out");
    CHECK(r.code == 2);
  }
  SUBCASE("unknown flag") {
    const RunResult r = run("audit --no-such-flag");
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error: ", 0) == 0);
  }
  SUBCASE("missing subcommand") {
    const RunResult r = run("");
    CHECK(r.code == 2);
  }
}

TEST_CASE("data errors exit 3") {
  const std::string bad_csv = workdir() + "/bad.csv";
  {
    std::ofstream out(bad_csv);
    out << "x,a,y\nnot-a-number,0,1\n";
  }
  const auto& c = corpus();
  const RunResult r =
      run("audit --data " + bad_csv + " --schema " + c.schema +
          " --model builtin:" + c.model +
          " --feature x --protected a=1/0 --out-json " + workdir() +
          "/x.json --out-svg " + workdir() + "/x.svg");
  CHECK(r.code == 3);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(r.err.find("row 1") != std::string::npos);
}

TEST_CASE("oracle failures exit 4") {
  const auto& c = corpus();
  SUBCASE("unspawnable command") {
    const RunResult r =
        run("audit --data " + c.data + " --schema " + c.schema +
            " --model exec:/no/such/oracle-binary --feature x" +
            " --protected a=1/0 --out-json " + workdir() +
            "/x.json --out-svg " + workdir() + "/x.svg");
    CHECK(r.code == 4);
    CHECK(r.err.rfind("error: ", 0) == 0);
  }
  SUBCASE("crashing oracle") {
    const char* responder = std::getenv("FALE_RESPONDER");
    REQUIRE(responder != nullptr);
    const RunResult r =
        run("audit --data " + c.data + " --schema " + c.schema +
            " --model \"exec:" + std::string(responder) + " crash\"" +
            " --feature x --protected a=1/0 --out-json " + workdir() +
            "/x.json --out-svg " + workdir() + "/x.svg");
    CHECK(r.code == 4);
    CHECK(r.err.find("exited with status 9") != std::string::npos);
  }
}

TEST_CASE("synthetic data generation is reproducible") {
  const std::string a = workdir() + "/synth_a.csv";
  const std::string b = workdir() + "/synth_b.csv";
  REQUIRE(run("synth --rows 200 --seed 4 --out " + a + " --schema-out " +
              workdir() + "/sa.json")
              .code == 0);
  REQUIRE(run("synth --rows 200 --seed 4 --out " + b + " --schema-out " +
              workdir() + "/sb.json")
              .code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(workdir() + "/sa.json") == slurp(workdir() + "/sb.json"));

  const std::string c = workdir() + "/synth_c.csv";
  REQUIRE(run("synth --rows 200 --seed 5 --out " + c + " --schema-out " +
              workdir() + "/sc.json")
              .code == 0);
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("kernel backend override leaves results unchanged") {
  const auto& c = corpus();
  const std::string base = workdir() + "/kern_base.json";
  const std::string scalar = workdir() + "/kern_scalar.json";
  const std::string args =
      "audit --data " + c.data + " --schema " + c.schema +
      " --model builtin:" + c.model + " --feature x --protected a=1/0" +
      " --bins 6 --out-svg " + workdir() + "/kern.svg --out-json ";
  REQUIRE(run(args + base).code == 0);

  const std::string forced = "FALE_KERNELS=scalar " + bin() + " " + args +
                             scalar + " >/dev/null 2>&1";
  REQUIRE(std::system(forced.c_str()) == 0);

  // Backends may reassociate sums, so allow ulp-level drift.
  const fale::FaleCurve a = fale::read_report(slurp(base));
  const fale::FaleCurve b = fale::read_report(slurp(scalar));
  REQUIRE(a.per_bin.size() == b.per_bin.size());
  for (std::size_t i = 0; i < a.per_bin.size(); ++i) {
    CHECK(std::abs(a.per_bin[i].delta - b.per_bin[i].delta) <= 1e-12);
    CHECK(std::abs(a.per_bin[i].centered - b.per_bin[i].centered) <= 1e-12);
    CHECK(a.per_bin[i].n0 == b.per_bin[i].n0);
    CHECK(a.per_bin[i].n1 == b.per_bin[i].n1);
  }
  CHECK(std::abs(a.global_unfairness - b.global_unfairness) <= 1e-12);
}

TEST_CASE("version and help") {
  RunResult v = run("--version");
  CHECK(v.code == 0);
  CHECK(v.out.find('.') != std::string::npos);

  RunResult h = run("--help");
  CHECK(h.code == 0);
  CHECK(h.out.find("audit") != std::string::npos);

  RunResult hs = run("audit --help");
  CHECK(hs.code == 0);
  CHECK(hs.out.find("--protected") != std::string::npos);
}

TEST_CASE("missing input files are data errors") {
  const auto& c = corpus();
  const RunResult r =
      run("audit --data /no/such/file.csv --schema " + c.schema +
          " --model builtin:" + c.model +
          " --feature x --protected a=1/0 --out-json " + workdir() +
          "/x.json --out-svg " + workdir() + "/x.svg");
  CHECK(r.code == 3);
}

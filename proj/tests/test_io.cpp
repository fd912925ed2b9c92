#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "drmmm/trace.hpp"

using namespace drmmm;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path("/tmp/drmmm_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("trace documents keep the fixed schema") {
  MontgomeryContext ctx = make_context(13, 2, 2);

  Json cls = make_trace_classical(ctx, 7, 9);
  CHECK(cls["header"]["mode"] == "classical");
  CHECK(cls["header"]["m"] == "d");
  CHECK(cls["header"]["k"] == 2);
  CHECK(cls["header"]["t"] == 2);
  CHECK(cls["header"]["w"].is_null());
  REQUIRE(cls["iterations"].size() == 2);  // d iterations
  CHECK(cls["iterations"][0]["q_hat"] == "1");
  CHECK(cls["iterations"][0]["carry"].is_null());
  CHECK(cls["summary"]["output"] == "8");
  CHECK(cls["summary"]["cycles"] == 2);

  Json soft = make_trace_drmmm(ctx, 7, 9);
  REQUIRE(soft["iterations"].size() == 4);  // d + t iterations
  CHECK(soft["iterations"][0]["z_terms"][0] == "6c");  // 108
  CHECK(soft["iterations"][3]["q_hat"] == "1");
  CHECK(soft["summary"]["pre_reduction"] == "8");

  Json hard = make_trace_hw(ctx, 7, 9);
  REQUIRE(hard["iterations"].size() == 4);
  CHECK(hard["header"]["w"] == 6);
  CHECK(hard["header"]["w_prime"] == 6);
  for (const auto& it : hard["iterations"]) {
    REQUIRE(it["z_terms"].size() == 3);
    CHECK(it["carry"].contains("c_l"));
    CHECK(it["carry"].contains("c_m"));
    CHECK(it["assertions_passed"] == true);
  }
  CHECK(hard["summary"]["output"] == "8");
  CHECK(hard["summary"]["levels"] == 3);
}

TEST_CASE("vector files round-trip") {
  TempFile tmp("vectors.jsonl");
  std::vector<VectorRecord> recs;
  VectorRecord r;
  r.m = 13;
  r.a = 7;
  r.b = 9;
  r.k = 2;
  r.t = 2;
  r.expected = 8;
  recs.push_back(r);
  r.expected.reset();
  r.a = 11;
  recs.push_back(r);
  save_vector_file(tmp.path, recs);

  std::vector<VectorRecord> loaded = load_vector_file(tmp.path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].m == 13);
  CHECK(loaded[0].a == 7);
  CHECK(loaded[0].k == 2);
  REQUIRE(loaded[0].expected.has_value());
  CHECK(*loaded[0].expected == 8);
  CHECK(!loaded[1].expected.has_value());
  CHECK(loaded[1].a == 11);
}

TEST_CASE("vector files reject malformed records") {
  TempFile tmp("bad.jsonl");
  {
    std::ofstream f(tmp.path);
    f << R"({"M":"d","A":"7","B":"9","k":2,"t":2})" << "\n";
    f << "not json\n";
  }
  CHECK_THROWS_AS(load_vector_file(tmp.path), ParseError);

  {
    std::ofstream f(tmp.path);
    f << R"({"M":"0D","A":"7","B":"9","k":2,"t":2})" << "\n";  // uppercase
  }
  CHECK_THROWS_AS(load_vector_file(tmp.path), ParseError);

  {
    std::ofstream f(tmp.path);
    f << R"({"M":"d","A":"7","k":2,"t":2})" << "\n";  // B missing
  }
  CHECK_THROWS_AS(load_vector_file(tmp.path), ParseError);

  CHECK_THROWS_AS(load_vector_file("/nonexistent/nope.jsonl"), IoError);
}

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sdnsn/service.hpp"
#include "oracles.hpp"

using namespace sdnsn;

namespace {

ServiceChart multimedia_chart() {
  ServiceChart c;
  c.head = MicroserviceSpec{"multimedia", 100, 5, 2};
  c.segments = {
      ChartSegment{"11", {MicroserviceSpec{"videoanalysis", 60, 3, 1}}, "video-aircraft320"},
      ChartSegment{"12", {MicroserviceSpec{"soundanalysis", 40, 3, 1}}, "soundfactory"},
  };
  return c;
}

}  // namespace

TEST_CASE("fnv-1a reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("a") == oracle::fnv64("a"));
  CHECK(fnv1a64("videoanalysis") == oracle::fnv64("videoanalysis"));
  CHECK(hex16(0xcbf29ce484222325ull) == "cbf29ce484222325");
}

TEST_CASE("chart validation rejects structural defects") {
  auto ok = multimedia_chart();
  CHECK_NOTHROW(validate_chart(ok));

  auto dup = ok;
  dup.segments[1].level = "11";
  CHECK_THROWS_AS(validate_chart(dup), InvalidChart);

  auto no_data = ok;
  no_data.segments[0].data.clear();
  CHECK_THROWS_AS(validate_chart(no_data), InvalidChart);

  auto bad_id = ok;
  bad_id.segments[0].microservices[0].id = "face9";
  CHECK_THROWS_AS(validate_chart(bad_id), InvalidChart);

  auto bad_time = ok;
  bad_time.head.exec_time = 0;
  CHECK_THROWS_AS(validate_chart(bad_time), InvalidChart);

  // A segment may carry no processing chain: the data feeds the head directly.
  auto feed_only = ok;
  feed_only.segments[0].microservices.clear();
  CHECK_NOTHROW(validate_chart(feed_only));

  auto no_segments = ok;
  no_segments.segments.clear();
  CHECK_THROWS_AS(validate_chart(no_segments), InvalidChart);

  auto collide = ok;
  collide.segments[0].data = "videoanalysis";
  CHECK_THROWS_AS(validate_chart(collide), InvalidChart);
}

TEST_CASE("a co-located single-segment tree needs no face tokens") {
  ServiceChart c;
  c.head = MicroserviceSpec{"alert", 10, 1, 1};
  c.segments = {ChartSegment{"11", {MicroserviceSpec{"analysis", 5, 1, 1}}, "camera1"}};
  ServiceTree t;
  t.chart = c;
  t.placement = {{"alert", "nsn1"}, {"analysis", "nsn1"}};
  t.hops[{"alert", "analysis"}] = {};
  t.hops[{"analysis", "camera1"}] = {};
  auto n = tree_to_name(t);
  CHECK(serialize_name(n) == "/sd-nsn/exec/alert/S11/analysis/camera1");
}

TEST_CASE("face chains appear wherever placement crosses agents") {
  auto c = multimedia_chart();
  ServiceTree t;
  t.chart = c;
  t.placement = {{"multimedia", "nsn1"}, {"videoanalysis", "nsn3"}, {"soundanalysis", "nsn2"}};
  t.hops[{"multimedia", "videoanalysis"}] = {1};
  t.hops[{"videoanalysis", "video-aircraft320"}] = {30};
  t.hops[{"multimedia", "soundanalysis"}] = {2};
  t.hops[{"soundanalysis", "soundfactory"}] = {};
  auto n = tree_to_name(t);
  CHECK(serialize_name(n) ==
        "/sd-nsn/exec/multimedia/S11/face1/videoanalysis/face30/video-aircraft320"
        "/S12/face2/soundanalysis/soundfactory");

  // A two-hop route expands to two consecutive face tokens.
  t.hops[{"multimedia", "videoanalysis"}] = {7, 1};
  auto n2 = tree_to_name(t);
  CHECK(serialize_name(n2) ==
        "/sd-nsn/exec/multimedia/S11/face7/face1/videoanalysis/face30/video-aircraft320"
        "/S12/face2/soundanalysis/soundfactory");
}

TEST_CASE("missing route between adjacent placements is an error") {
  auto c = multimedia_chart();
  ServiceTree t;
  t.chart = c;
  t.placement = {{"multimedia", "nsn1"}, {"videoanalysis", "nsn3"}, {"soundanalysis", "nsn1"}};
  t.hops[{"multimedia", "videoanalysis"}] = {1};
  t.hops[{"videoanalysis", "video-aircraft320"}] = {30};
  t.hops[{"multimedia", "soundanalysis"}] = {};
  CHECK_THROWS_AS(tree_to_name(t), MissingHop);
}

TEST_CASE("microservice output is definitional over its inputs") {
  MicroserviceDescriptor d{"join", 10, 1, 1, "join"};
  std::vector<std::pair<std::string, Bytes>> in = {
      {"/video-aircraft320", to_bytes("data:video-aircraft320#00ff")},
      {"/soundfactory", to_bytes("data:soundfactory#a0a0")},
  };
  std::string out = to_string(run_microservice(d, in));
  std::string concat = to_string(in[0].second) + to_string(in[1].second);
  CHECK(out == "join(/video-aircraft320,/soundfactory)#" + oracle::hex(oracle::fnv64(concat)));

  // Deterministic, and sensitive to input order.
  CHECK(to_string(run_microservice(d, in)) == out);
  std::swap(in[0], in[1]);
  CHECK(to_string(run_microservice(d, in)) != out);
}

TEST_CASE("microservice output ignores nothing") {
  MicroserviceDescriptor d{"t", 1, 1, 1, "t"};
  std::vector<std::pair<std::string, Bytes>> a = {{"/x", to_bytes("1")}};
  std::vector<std::pair<std::string, Bytes>> b = {{"/x", to_bytes("2")}};
  CHECK(run_microservice(d, a) != run_microservice(d, b));
  std::vector<std::pair<std::string, Bytes>> c = {{"/y", to_bytes("1")}};
  CHECK(run_microservice(d, a) != run_microservice(d, c));
}

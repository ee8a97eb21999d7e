#include <gtest/gtest.h>

#include <random>

#include "bufins/error.hpp"
#include "bufins/generator.hpp"
#include "bufins/io.hpp"
#include "random_instance.hpp"

namespace bufins {
namespace {

constexpr const char* kMinimalNet = R"({
  "source": "src", "library_ref": "lib",
  "sinks": {"s": {"c": 1e-15, "rat": 1e-10}},
  "edges": [{"from": "src", "to": "s", "r": 10, "c": 1e-15}]
})";

std::string with_edges(const std::string& edges, const std::string& internal = "{}") {
  return R"({"source": "src", "library_ref": "lib",
             "sinks": {"s": {"c": 1e-15, "rat": 1e-10}},
             "internal": )" +
         internal + R"(, "edges": )" + edges + "}";
}

template <class E>
std::string error_of(const std::string& text) {
  try {
    parse_net(text);
  } catch (const E& e) {
    return e.what();
  }
  return "<no error>";
}

TEST(LoadNet, MinimalNet) {
  const RoutingTree tree = parse_net(kMinimalNet);
  EXPECT_EQ(tree.vertex_count(), 2u);
  EXPECT_EQ(tree.edge_count(), 1u);
  EXPECT_EQ(tree.sink_count(), 1u);
  EXPECT_EQ(tree.position_count(), 0u);
  EXPECT_EQ(tree.vertex(0).id, "src");
  EXPECT_EQ(tree.post_order().back(), 0u);
}

TEST(LoadNet, UnitsConvertToSi) {
  const RoutingTree tree = load_net(BUFINS_TEST_DATA "/chain_net.json");
  const auto s = *tree.find("s");
  EXPECT_DOUBLE_EQ(tree.vertex(s).sink_c, 3e-15);
  EXPECT_DOUBLE_EQ(tree.vertex(s).rat, 100e-12);
  EXPECT_DOUBLE_EQ(tree.edge(0).c, 2e-15);
  EXPECT_EQ(tree.edge(0).r, 1000.0);

  const BufferLibrary lib = load_library(BUFINS_TEST_DATA "/chain_lib.json");
  EXPECT_EQ(lib[0].r, 1000.0);
  EXPECT_DOUBLE_EQ(lib[0].c, 1e-15);
  EXPECT_DOUBLE_EQ(lib[0].k, 30e-12);
}

TEST(LoadNet, EdgeToMissingVertexNamesIt) {
  const auto msg = error_of<ValidationError>(
      with_edges(R"([{"from": "src", "to": "s", "r": 1, "c": 0},
                     {"from": "s", "to": "ghost", "r": 1, "c": 0}])"));
  EXPECT_NE(msg.find("ghost"), std::string::npos) << msg;
}

TEST(LoadNet, RejectsStructuralErrors) {
  // Cycle between two internal vertices, detached from the source.
  EXPECT_NE(error_of<ValidationError>(with_edges(
                R"([{"from": "src", "to": "s", "r": 1, "c": 0},
                    {"from": "a", "to": "b", "r": 1, "c": 0},
                    {"from": "b", "to": "a", "r": 1, "c": 0}])",
                R"({"a": {}, "b": {}})")),
            "<no error>");
  // Internal leaf.
  EXPECT_NE(error_of<ValidationError>(with_edges(
                R"([{"from": "src", "to": "s", "r": 1, "c": 0},
                    {"from": "src", "to": "a", "r": 1, "c": 0}])",
                R"({"a": {}})"))
                .find("'a'"),
            std::string::npos);
  // Two parents.
  EXPECT_NE(error_of<ValidationError>(with_edges(
                R"([{"from": "src", "to": "a", "r": 1, "c": 0},
                    {"from": "a", "to": "s", "r": 1, "c": 0},
                    {"from": "src", "to": "s", "r": 1, "c": 0}])",
                R"({"a": {}})"))
                .find("more than one parent"),
            std::string::npos);
  // Negative resistance.
  EXPECT_NE(error_of<ValidationError>(with_edges(R"([{"from": "src", "to": "s", "r": -1, "c": 0}])"))
                .find("src->s"),
            std::string::npos);
  // Unconnected sink.
  EXPECT_NE(error_of<ValidationError>(with_edges("[]")), "<no error>");
}

TEST(LoadNet, ParseErrors) {
  EXPECT_THROW(parse_net("{not json"), ParseError);
  EXPECT_THROW(parse_net(R"({"source": "src", "library_ref": "lib", "sinks": {}, "edges": [], "extra": 1})"),
               ParseError);
  EXPECT_THROW(parse_net(with_edges(R"([{"from": "src", "to": "s", "r": 1, "c": 2, "units": {"c": "furlong"}}])")),
               ParseError);
  EXPECT_THROW(parse_net(with_edges(R"([{"from": "src", "to": "s", "r": "1", "c": 2}])")),
               ParseError);
  EXPECT_THROW(load_net("/nonexistent/net.json"), IoError);
}

TEST(LoadNet, UnknownBufferIdCheckedAgainstLibrary) {
  const RoutingTree tree = parse_net(with_edges(
      R"([{"from": "src", "to": "p", "r": 1, "c": 0}, {"from": "p", "to": "s", "r": 1, "c": 0}])",
      R"({"p": {"buffers": ["nope"]}})"));
  const BufferLibrary lib("lib", {{"b", 100, 1e-15, 1e-11}});
  try {
    check_library_refs(tree, lib);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
  }
}

TEST(LoadLibrary, Singleton) {
  const auto lib = parse_library(R"({"name": "one", "buffers": [{"id": "b", "r": 1000, "c": 1e-15, "k": 3e-11}]})");
  EXPECT_EQ(lib.size(), 1u);
  EXPECT_EQ(std::vector<std::uint32_t>(lib.order_by_r().begin(), lib.order_by_r().end()),
            std::vector<std::uint32_t>{0});
  EXPECT_EQ(std::vector<std::uint32_t>(lib.order_by_c().begin(), lib.order_by_c().end()),
            std::vector<std::uint32_t>{0});
}

TEST(LoadLibrary, OrderByRNonIncreasing) {
  const auto lib = parse_library(R"({"name": "two", "buffers": [
      {"id": "big", "r": 180, "c": 23e-15, "k": 3e-11},
      {"id": "small", "r": 7000, "c": 0.7e-15, "k": 3e-11}]})");
  EXPECT_EQ(lib[lib.order_by_r()[0]].id, "small");
  EXPECT_EQ(lib[lib.order_by_r()[1]].id, "big");
  EXPECT_EQ(lib[lib.order_by_c()[0]].id, "small");
}

TEST(LoadLibrary, EqualRTiesByAscendingC) {
  const BufferLibrary lib("tie", {{"hi", 500, 2e-15, 0}, {"lo", 500, 1e-15, 0}});
  EXPECT_EQ(lib[lib.order_by_r()[0]].id, "lo");
  EXPECT_EQ(lib[lib.order_by_r()[1]].id, "hi");

  // Equal R makes every candidate's buffered slack differ by the same
  // constant for both types, so they share a best candidate: brute force over
  // random lists that either order gives the same argmax.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto list = testing::random_si_list(rng, 1 + trial % 20);
    std::size_t best[2] = {0, 0};
    for (int t = 0; t < 2; ++t) {
      const auto& b = lib[lib.order_by_r()[t]];
      for (std::size_t j = 1; j < list.size(); ++j) {
        if (list[j].q - b.r * list[j].c - b.k > list[best[t]].q - b.r * list[best[t]].c - b.k) {
          best[t] = j;
        }
      }
    }
    EXPECT_EQ(best[0], best[1]);
  }
}

TEST(LoadLibrary, Errors) {
  EXPECT_THROW(parse_library(R"({"name": "x", "buffers": []})"), ValidationError);
  EXPECT_THROW(parse_library(R"({"name": "x", "buffers": [{"id": "a", "r": 1, "c": 0, "k": 0},
                                                          {"id": "a", "r": 2, "c": 0, "k": 0}]})"),
               ValidationError);
  EXPECT_THROW(parse_library(R"({"name": "x", "buffers": [{"id": "a", "r": 0, "c": 0, "k": 0}]})"),
               ValidationError);
  EXPECT_THROW(parse_library(R"({"name": "x", "buffers": [{"id": "a", "r": 1, "c": 0}]})"),
               ParseError);
}

TEST(RoundTrip, GeneratedNetAndLibrary) {
  const GeneratedNet net = generate_net(5, 20, 4, 11);
  EXPECT_EQ(parse_net(dump_net(net.tree)), net.tree);
  EXPECT_EQ(parse_library(dump_library(net.library)), net.library);
}

TEST(RoundTrip, RandomInstancesBitExact) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const auto inst = testing::random_instance(
        rng, {testing::uniform_int(rng, 1, 8), testing::uniform_int(rng, 0, 12),
              testing::uniform_int(rng, 1, 5)});
    const RoutingTree back = parse_net(dump_net(inst.tree));
    ASSERT_EQ(back, inst.tree);
    ASSERT_EQ(parse_library(dump_library(inst.lib)), inst.lib);
  }
}

TEST(Assignment, RejectsIllegalPlacements) {
  const RoutingTree tree = parse_net(with_edges(
      R"([{"from": "src", "to": "p", "r": 1, "c": 0}, {"from": "p", "to": "s", "r": 1, "c": 0}])",
      R"({"p": {"buffers": ["a"]}})"));
  const BufferLibrary lib("lib", {{"a", 100, 1e-15, 0}, {"b", 100, 1e-15, 0}});
  EXPECT_NO_THROW(check_assignment(tree, lib, {{{"p", "a"}}}));
  EXPECT_THROW(check_assignment(tree, lib, {{{"p", "b"}}}), ValidationError);
  EXPECT_THROW(check_assignment(tree, lib, {{{"s", "a"}}}), ValidationError);
  EXPECT_THROW(check_assignment(tree, lib, {{{"zz", "a"}}}), ValidationError);
  const Assignment a{{{"p", "a"}}};
  EXPECT_EQ(parse_assignment(dump_assignment(a)), a);
}

}  // namespace
}  // namespace bufins

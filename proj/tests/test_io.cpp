#include <gtest/gtest.h>

#include <functional>

#include "cbd/cbd.hpp"
#include "cbd/io.hpp"
#include "support.hpp"

namespace cbd {
namespace {

std::string data(const std::string& name) { return std::string(CBD_DATA_DIR) + "/" + name; }

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const validation_error& e) {
    return e.what();
  }
  return "";
}

TEST(Io, CanonicalFilesRoundTripByteForByte) {
  for (const char* name : {"c2_1.json", "c2_2.json", "pr_rank2.json", "example1.json"}) {
    const auto text = io::read_text_file(data(name));
    const auto system = io::read_system_file(data(name));
    EXPECT_EQ(io::dump(io::to_json(system)), text) << name;
  }
}

TEST(Io, FilesMatchBuiltFixtures) {
  EXPECT_EQ(io::read_system_file(data("example1.json")), testing::example1());
  EXPECT_EQ(io::read_system_file(data("pr_rank2.json")), testing::pr_rank2());
  EXPECT_EQ(io::read_system_file(data("c2_2.json")), testing::c2_2());
}

TEST(Io, NonCanonicalInputNormalizes) {
  const auto doc = io::parse_json_text(R"({"contents":["a"],"contexts":[
    {"id":"c","contents":["a"],"pmf":{"+":"2/4","−":"1/2"}}]})");
  const auto s = io::system_from_json(doc);
  EXPECT_EQ(io::to_json(s).dump(), R"({"contents":["a"],"contexts":[{"id":"c","contents":["a"],"pmf":{"-":"1/2","+":"1/2"}}]})");
}

TEST(Io, SyntaxErrorsCarryLineAndColumn) {
  const auto msg = message_of([] { io::read_system_file(data("malformed.json")); });
  EXPECT_NE(msg.find("malformed.json:4:"), std::string::npos) << msg;
}

TEST(Io, ValidationErrorsCarryPath) {
  auto msg = message_of([] { io::read_system_file(data("bad_sum.json")); });
  EXPECT_NE(msg.find("bad_sum.json"), std::string::npos) << msg;
  EXPECT_NE(msg.find("5/6"), std::string::npos) << msg;

  msg = message_of([] {
    io::system_from_json(io::parse_json_text(R"({"contents":["a"],"contexts":[{"id":"c","contents":["a"],"pmf":{"+":0.5}}]})"));
  });
  EXPECT_NE(msg.find("/contexts/0/pmf/+"), std::string::npos) << msg;

  msg = message_of([] { io::system_from_json(io::parse_json_text(R"({"contexts":[]})")); });
  EXPECT_NE(msg.find("contents"), std::string::npos) << msg;

  EXPECT_THROW(io::read_system_file(data("does_not_exist.json")), validation_error);
  EXPECT_THROW(io::read_system_file(data("liar3_constraints.json")), validation_error);
}

TEST(Io, ConstraintFiles) {
  const auto liar = io::read_constraint_file(data("liar3_constraints.json"));
  EXPECT_FALSE(liar.prior.has_value());
  EXPECT_EQ(enumerate_realizations(liar.constraints).size(), 8u);
  EXPECT_EQ(epistemic_mixture(enumerate_realizations(liar.constraints)),
            epistemic_mixture(enumerate_realizations(liar_system(3))));

  const auto bad = io::read_constraint_file(data("contradictory_constraints.json"));
  EXPECT_TRUE(enumerate_realizations(bad.constraints).empty());

  const auto weighted = io::constraints_from_json(io::parse_json_text(R"({"contents":["a"],
    "contexts":[{"id":"c","contents":["a"],"allowed":["-","+"]}],"prior":["1/4","3/4"]})"));
  ASSERT_TRUE(weighted.prior.has_value());
  EXPECT_EQ(weighted.prior->at(1), Rational(3, 4));
  EXPECT_THROW(io::constraints_from_json(io::parse_json_text(
                   R"({"contents":["a"],"contexts":[{"id":"c","contents":["a"],"allowed":["-"]}],"prior":"flat"})")),
               validation_error);
}

TEST(Io, ConsistifiedOutputReparses) {
  const auto cs = consistify(testing::example1());
  const auto text = io::dump(io::to_json(cs));
  const auto back = io::system_from_json(io::parse_json_text(text));
  EXPECT_EQ(back, cs.base);
  const auto doc = io::parse_json_text(text);
  EXPECT_EQ(doc["origin"]["contents"]["q2@c5"]["context"], "c5");
  EXPECT_EQ(doc["origin"]["contexts"]["cnt:q3"]["kind"], "content");
}

TEST(Io, ReportIsReproducible) {
  const auto s = testing::example1();
  const io::ReportOptions options{"consistify", std::nullopt};
  const auto a = io::dump(io::report_to_json(s, generalized_fraction(s), options));
  const auto b = io::dump(io::report_to_json(s, generalized_fraction(s), options));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("timing_ms"), std::string::npos);
  const auto doc = io::parse_json_text(a);
  EXPECT_EQ(doc["fraction"]["alpha_max"], "1");
}

}  // namespace
}  // namespace cbd

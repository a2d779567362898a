#include <doctest.h>

#include <sstream>

#include "bnsl/error.hpp"
#include "bnsl/network_io.hpp"
#include "test_support.hpp"

using namespace bnsl;

TEST_CASE("network JSON round trip is identity") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto net = random_network(6, 4, 0.4, seed);
    std::stringstream buf;
    write_network(buf, net);
    const auto back = parse_network(buf);
    CHECK(back.variables() == net.variables());
    CHECK(back.dag() == net.dag());
    for (int i = 0; i < net.size(); ++i) {
      REQUIRE(back.cpt(i).probs.size() == net.cpt(i).probs.size());
      for (std::size_t k = 0; k < net.cpt(i).probs.size(); ++k)
        CHECK(std::abs(back.cpt(i).probs[k] - net.cpt(i).probs[k]) <= 1e-12);
    }
  }
}

TEST_CASE("dataset CSV round trip is identity") {
  const auto data = ancestral_sample(random_network(5, 3, 0.5, 9), 300, 4);
  std::stringstream buf;
  write_dataset(buf, data);
  CHECK(parse_dataset(buf) == data);
}

TEST_CASE("dataset header carries the arity") {
  std::istringstream in("A:2,B:4\n0,3\n1,0\n");
  const auto d = parse_dataset(in);
  CHECK(d.arity(1) == 4);
  CHECK(d.num_rows() == 2);
}

TEST_CASE("dataset cell outside the declared arity is a validation error") {
  std::istringstream in("A:2,B:2\n0,1\n1,2\n");
  try {
    parse_dataset(in, "data.csv");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("data.csv:3") != std::string::npos);
  }
}

TEST_CASE("empty rows section gives a zero-row dataset that scorers reject") {
  std::istringstream in("A:2,B:3\n");
  const auto d = parse_dataset(in);
  CHECK(d.num_rows() == 0);
  CHECK(d.num_vars() == 2);
}

TEST_CASE("malformed dataset files report line and field") {
  std::istringstream no_arity("A,B\n0,1\n");
  CHECK_THROWS_AS(parse_dataset(no_arity), ParseError);
  std::istringstream not_int("A:2,B:2\n0,x\n");
  try {
    parse_dataset(not_int, "d.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("d.csv:2") != std::string::npos);
    CHECK(msg.find("field 2") != std::string::npos);
  }
  std::istringstream short_row("A:2,B:2\n0\n");
  CHECK_THROWS_AS(parse_dataset(short_row), ParseError);
}

TEST_CASE("malformed network files report the field") {
  std::istringstream bad_json("{\"variables\": [");
  CHECK_THROWS_AS(parse_network(bad_json), ParseError);

  std::istringstream missing(R"({"variables":[{"name":"A","arity":2}],"parents":[[]]})");
  CHECK_THROWS_AS(parse_network(missing), ParseError);

  std::istringstream bad_prob(R"({"variables":[{"name":"A","arity":2}],"parents":[[]],"cpts":[[[0.5,"x"]]]})");
  try {
    parse_network(bad_prob);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("cpts[0][0][1]") != std::string::npos);
  }

  std::istringstream cyclic(
      R"({"variables":[{"name":"A","arity":2},{"name":"B","arity":2}],"parents":[[1],[0]],"cpts":[[[0.5,0.5],[0.5,0.5]],[[0.5,0.5],[0.5,0.5]]]})");
  try {
    parse_network(cyclic);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("cycle") != std::string::npos);
  }

  std::istringstream unnormalized(R"({"variables":[{"name":"A","arity":2}],"parents":[[]],"cpts":[[[0.5,0.6]]]})");
  CHECK_THROWS_AS(parse_network(unnormalized), ValidationError);
  std::istringstream again(R"({"variables":[{"name":"A","arity":2}],"parents":[[]],"cpts":[[[0.5,0.6]]]})");
  CHECK(parse_network(again, "x", true).cpt(0).at(0, 0) == doctest::Approx(0.5 / 1.1));
}

TEST_CASE("structure files omit CPTs and load from full networks too") {
  const auto net = random_network(4, 3, 0.5, 2);
  std::stringstream full;
  write_network(full, net);
  const auto s = parse_structure(full);
  CHECK(s.dag == net.dag());

  std::stringstream only;
  write_structure(only, s);
  CHECK(only.str().find("cpts") == std::string::npos);
  const auto s2 = parse_structure(only);
  CHECK(s2.variables == s.variables);
  CHECK(s2.dag == s.dag);
}

#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "betamatch/sweep.hpp"

using namespace betamatch;

namespace {

SweepConfig small_fig2(long grid) {
  SweepConfig c;
  c.grid = grid;
  c.starts = {StartMode{}, StartMode::parse("near_fixed_point(0.01,0110)"), StartMode::parse("near_fixed_point(0.01,0111)")};
  return c;
}

}  // namespace

TEST_CASE("sweep config round trip") {
  SweepConfig c;
  c.field = "tribonacci";
  c.alpha_lo = "2 - beta";
  c.alpha_hi = "1/beta";
  c.grid = 17;
  c.sampling = "random";
  c.starts = {StartMode{}, StartMode::parse("near_fixed_point(1/100,011)")};
  c.cap = 5000;
  c.mode = Mode::Both;
  c.seed = 42;
  c.density_n = 777;
  c.density_eps = 0.025;
  c.output = "out.csv";
  c.format = "jsonl";
  auto back = SweepConfig::parse(c.serialize());
  CHECK(back == c);
  CHECK(back.serialize() == c.serialize());
  CHECK(SweepConfig::parse(SweepConfig{}.serialize()) == SweepConfig{});

  auto d = SweepConfig::parse("# comment\n grid = 3  # trailing\n\nstart = zero_one ; near_fixed_point(0.01,0101)\n");
  CHECK(d.grid == 3);
  REQUIRE(d.starts.size() == 2);
  CHECK(d.starts[1].kind == StartMode::NearFixedPoint);
  CHECK(d.starts[1].e == "0101");
  CHECK(d.starts[1].tag() == "near_fixed_point(0.01,0101)");

  CHECK_THROWS_AS(SweepConfig::parse("colour = blue\n"), Error);
  CHECK_THROWS_AS(SweepConfig::parse("grid = 0\n"), Error);
  CHECK_THROWS_AS(SweepConfig::parse("grid = ten\n"), Error);
  CHECK_THROWS_AS(SweepConfig::parse("start = near_fixed_point(0.01,011)\n"), Error);  // N = 4
  CHECK_THROWS_AS(SweepConfig::parse("start = near_fixed_point(0.01,0000)\n"), Error);
  CHECK_THROWS_AS(SweepConfig::parse("start = somewhere\n"), Error);
  CHECK_THROWS_AS(SweepConfig::parse("alpha_hi = 1\n"), Error);
  CHECK_THROWS_AS(SweepConfig::parse("no equals sign\n"), Error);
  CHECK_THROWS_AS(SweepConfig::load("/nonexistent/cfg"), Error);
}

TEST_CASE("exact grid") {
  SweepConfig c;
  auto f = parse_field(c.field);
  auto a = sweep_alphas(c, f);
  REQUIRE(a.size() == 100);
  CHECK(*a.front().exact == FieldElement::beta_power(f, -3));
  CHECK(*a.back().exact == FieldElement::beta_power(f, -1));
  FieldElement step = (FieldElement::beta_power(f, -1) - FieldElement::beta_power(f, -3)) / FieldElement(f, 99L);
  for (int j : {1, 17, 50, 98}) CHECK(*a[j].exact == FieldElement::beta_power(f, -3) + step * long(j));
  for (size_t j = 1; j < a.size(); ++j) CHECK(a[j].value > a[j - 1].value);

  c.grid = 1;
  auto one = sweep_alphas(c, f);
  REQUIRE(one.size() == 1);
  CHECK(*one[0].exact == FieldElement::beta_power(f, -3));

  c.alpha_lo = "0.1";
  c.alpha_hi = "0.3";
  c.field = "golden";
  c.sampling = "random";
  c.grid = 50;
  auto g = parse_field(c.field);
  auto r1 = sweep_alphas(c, g), r2 = sweep_alphas(c, g);
  for (size_t j = 0; j < r1.size(); ++j) {
    CHECK(*r1[j].exact == *r2[j].exact);
    CHECK(r1[j].value > 0.1);
    CHECK(r1[j].value < 0.3);
    CHECK(r1[j].exact->is_rational());
  }
}

TEST_CASE("sweep records match standalone runs") {
  auto cfg = small_fig2(12);
  auto recs = sweep_matching(cfg);
  REQUIRE(recs.size() == 36);
  auto f = parse_field(cfg.field);
  auto alphas = sweep_alphas(cfg, f);
  for (size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    CHECK(r.index == long(i / 3));
    CHECK(r.start == cfg.starts[i % 3].tag());
    CHECK(r.error.empty());
    MatchingOptions opt;
    opt.keep_trace = false;
    MatchingResult m;
    if (i % 3 == 0) {
      m = matching_index(f, alphas[r.index], opt);
    } else {
      auto& s = cfg.starts[i % 3];
      m = matching_from(f, alphas[r.index], near_fixed_point_start(f, alphas[r.index], parse_param(s.eps, f), s.e), opt);
    }
    CHECK(r.outcome == outcome_name(m.outcome));
    CHECK(r.kappa == m.kappa);
    CHECK(r.iterations == m.iterations);
  }

  // grid = 1 is a direct call
  auto one = small_fig2(1);
  one.starts = {StartMode{}};
  auto single = sweep_matching(one);
  REQUIRE(single.size() == 1);
  CHECK(single[0].kappa == matching_index(f, Param::from_exact(FieldElement::beta_power(f, -3))).kappa);
}

TEST_CASE("sweeps are deterministic and parallel equals serial") {
  auto cfg = small_fig2(40);
  auto text = [](const std::vector<SweepRecord>& r, const char* fmt) {
    std::ostringstream os;
    write_records(os, r, fmt);
    return os.str();
  };
  auto a = sweep_matching(cfg), b = sweep_matching(cfg), s = sweep_matching_serial(cfg);
  CHECK(text(a, "csv") == text(b, "csv"));
  CHECK(text(a, "csv") == text(s, "csv"));
  CHECK(text(a, "jsonl") == text(s, "jsonl"));
  CHECK(sweep_status(a) == 0);

  std::istringstream lines(text(a, "jsonl"));
  std::string line;
  long k = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j["index"].get<long>() == k / 3);
    ++k;
  }
  CHECK(k == 120);
  std::string csv = text(a, "csv");
  CHECK(csv.rfind("index,start,alpha,alpha_exact,outcome,kappa", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 121);
}

TEST_CASE("per point failures do not stop a sweep") {
  SweepConfig c;
  c.grid = 5;
  // p - 2 leaves [0,1] for every alpha here
  c.starts = {StartMode{}, StartMode::parse("near_fixed_point(2,0110)")};
  auto r = sweep_matching(c);
  REQUIRE(r.size() == 10);
  for (size_t i = 0; i < r.size(); ++i) {
    if (i % 2 == 0) {
      CHECK(r[i].error.empty());
    } else {
      CHECK(r[i].outcome == "error");
      CHECK_FALSE(r[i].error.empty());
    }
  }
  CHECK(sweep_status(r) == 1);
}

TEST_CASE("density sweep") {
  SweepConfig c;
  c.field = "tribonacci";
  c.alpha_lo = "0.3";
  c.alpha_hi = "0.5";
  c.grid = 8;
  c.density_n = 20000;
  auto a = sweep_density(c), s = sweep_density_serial(c);
  REQUIRE(a.size() == 8);
  std::ostringstream x, y;
  write_records(x, a, "csv");
  write_records(y, s, "csv");
  CHECK(x.str() == y.str());
  for (auto& r : a) {
    CHECK(r.error.empty());
    if (r.alpha_exact == "1/2")
      CHECK(r.fraction <= 0.05);  // G^4(0) = 0: the critical orbit is periodic
    else
      CHECK(r.fraction > 0.5);
    CHECK(r.first_visit_median <= r.first_visit_max);
  }
  c.density_n = 0;
  for (auto& r : sweep_density(c)) {
    CHECK(r.visited == 1);
    CHECK(r.fraction == doctest::Approx(1.0 / r.cells));
  }
}

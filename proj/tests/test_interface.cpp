#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "addicone/cli.hpp"

using namespace addicone;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path("tmp_iface") / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("rational vectors and matrices round trip through JSON") {
  RatVec v = {Rational(2, 3), Rational(-5), Rational(0)};
  CHECK(ratvec_from_json(ratvec_to_json(v)) == v);
  RatMat m = {{Rational(1), Rational(2)}, {Rational(-7, 4), Rational(0)}};
  CHECK(ratmat_from_json(ratmat_to_json(m)) == m);
}

TEST_CASE("classical distributions round trip through JSON") {
  ClassicalDistribution d({"X1", "X2"}, {2, 3});
  d.p = {0.25, 0.125, 0.125, 0.0, 1.0 / 3.0, 1.0 - 0.5 - 1.0 / 3.0};
  REQUIRE(d.valid());
  const ClassicalDistribution back = distribution_from_json(to_json(d));
  REQUIRE(back.names == d.names);
  REQUIRE(back.alphabet == d.alphabet);
  for (std::size_t i = 0; i < d.p.size(); ++i) CHECK(back.p[i] == d.p[i]);
}

TEST_CASE("density matrices round trip through JSON") {
  std::vector<cplx> bell = {1.0 / std::sqrt(2.0), 0.0, 0.0, cplx(0.0, 1.0 / std::sqrt(2.0))};
  const DensityMatrix rho = pure_state({"X1", "X2"}, {2, 2}, bell);
  const DensityMatrix back = density_from_json(to_json(rho));
  REQUIRE(back.dims == rho.dims);
  REQUIRE(back.names == rho.names);
  for (std::size_t i = 0; i < rho.m.a.size(); ++i)
    CHECK(std::abs(back.m.a[i] - rho.m.a[i]) < 1e-9);
}

TEST_CASE("cones round trip through JSON") {
  ConeH h;
  h.dim = 3;
  h.coords = {"x", "y", "z"};
  h.ineqs = {{Rational(1), Rational(0), Rational(0)},
             {Rational(0), Rational(1), Rational(0)},
             {Rational(1), Rational(1), Rational(0)}};
  h.eqs = {{Rational(0), Rational(0), Rational(1)}};
  const ConeV v = double_description(h);
  const json j = cone_to_json(h, v);
  const ConeH h2 = coneh_from_json(j);
  const ConeV v2 = conev_from_json(j);
  CHECK(h2.coords == h.coords);
  CHECK(cones_equal(h, h2));
  CHECK(cones_equal(v, v2));
  CHECK(cones_equal(h2, v2));
}

TEST_CASE("decoupling codes round trip through JSON and reject bad input") {
  DecouplingCode code;
  code.slots = {{3, 1}, {0, 2}};
  CHECK(code_from_json(code_to_json(code)) == code);
  const json bad = json::parse("[[1,0],[1,0]]");
  CHECK_THROWS_AS(code_from_json(bad), std::invalid_argument);
}

TEST_CASE("channels round trip through JSON, isometry and Kraus forms") {
  Rng rng(5);
  const IsometryChannel ch = random_channel(2, 2, 2, rng);
  const IsometryChannel back = channel_from_json(to_json(ch));
  CHECK(back.d_in == ch.d_in);
  CHECK(back.d_b == ch.d_b);
  CHECK(back.d_e == ch.d_e);
  CHECK(back.valid(1e-9));
  for (std::size_t i = 0; i < ch.u.a.size(); ++i) CHECK(std::abs(back.u.a[i] - ch.u.a[i]) < 1e-9);

  const double g = 0.25;
  json kraus;
  kraus["kraus"] = json::array();
  kraus["kraus"].push_back(
      {{"re", {{1.0, 0.0}, {0.0, std::sqrt(1.0 - g)}}}, {"im", {{0.0, 0.0}, {0.0, 0.0}}}});
  kraus["kraus"].push_back(
      {{"re", {{0.0, std::sqrt(g)}, {0.0, 0.0}}}, {"im", {{0.0, 0.0}, {0.0, 0.0}}}});
  const IsometryChannel ad = channel_from_json(kraus);
  CHECK(ad.valid());
  CHECK(ad.d_in == 2);
  CHECK(ad.d_e == 2);

  json broken = kraus;
  broken["kraus"][0]["re"][0][0] = 0.5;  // no longer trace preserving
  CHECK_THROWS_AS(channel_from_json(broken), std::invalid_argument);
}

TEST_CASE("shortest coset representative picks the sparse form") {
  const RatMat eqs = {{Rational(1), Rational(1), Rational(1), Rational(1)}};
  const RatVec v = {Rational(1), Rational(1), Rational(0), Rational(1)};
  const RatVec nice = nice_representative(v, eqs);
  const RatVec expect = {Rational(0), Rational(0), Rational(-1), Rational(0)};
  CHECK(nice == expect);
  CHECK(nice_representative(v, {}) == v);
}

TEST_CASE("hash function matches known FNV-1a vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("report builders are deterministic") {
  const Report a = report_zero_var();
  const Report b = report_zero_var();
  CHECK(a.data.dump(2) == b.data.dump(2));
  CHECK(a.markdown == b.markdown);
  CHECK(a.csv == b.csv);
  CHECK(a.certified);

  const Report e1 = report_esv_tables();
  const Report e2 = report_esv_tables();
  CHECK(e1.data.dump(2) == e2.data.dump(2));
}

TEST_CASE("one-variable summary table lists all seven cases") {
  const Report rep = report_one_var_all();
  CHECK(rep.certified);
  REQUIRE(rep.data.is_array());
  CHECK(rep.data.size() == 7);
  int data_rows = 0;
  std::istringstream is(rep.markdown);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line.front() == '|' && line.find("case") == std::string::npos &&
        line.find("---") == std::string::npos)
      ++data_rows;
  CHECK(data_rows == 7);
  CHECK(rep.markdown.find("| case | (a,b) | M1 | M2 |") != std::string::npos);
  // Case 2 lists its equivalents under B/E exchange.
  CHECK(rep.markdown.find("(1,3)") != std::string::npos);
}

TEST_CASE("write_report emits the artifact and a manifest, byte-stable") {
  RunManifest manifest;
  manifest.command = "report zero-var";
  manifest.target = "zero-var";
  manifest.format = "json";
  const auto dir1 = fresh_dir("w1");
  const auto dir2 = fresh_dir("w2");
  const Report rep = report_zero_var();

  manifest.out_dir = dir1.string();
  const auto w1 = write_report(rep, manifest, "json");
  REQUIRE(w1.size() == 2);
  CHECK(std::filesystem::exists(dir1 / "zero-var.json"));
  CHECK(std::filesystem::exists(dir1 / "zero-var.manifest.json"));

  manifest.out_dir = dir2.string();
  write_report(rep, manifest, "json");
  CHECK(slurp(dir1 / "zero-var.json") == slurp(dir2 / "zero-var.json"));

  const json mj = json::parse(slurp(dir1 / "zero-var.manifest.json"));
  CHECK(mj.at("version").get<std::string>() == kVersion);
  CHECK(mj.at("command").get<std::string>() == "report zero-var");
  CHECK(mj.at("inputs").is_object());
  CHECK(mj.at("outputs").size() == 1);

  CHECK_THROWS_AS(write_report(rep, manifest, "yaml"), std::invalid_argument);
}

TEST_CASE("command line reports write files and honor formats") {
  const auto dir = fresh_dir("cli_report");
  std::ostringstream out, err;
  const int rc = run_cli({"report", "zero-var", "--format", "markdown", "--out", dir.string()},
                         out, err);
  CHECK(rc == 0);
  CHECK(std::filesystem::exists(dir / "zero-var.md"));
  CHECK(std::filesystem::exists(dir / "zero-var.manifest.json"));
  CHECK(out.str().find("zero-var.md") != std::string::npos);

  std::ostringstream out2, err2;
  const int rc2 = run_cli({"report", "one-var:3,1", "--format", "csv", "--out", dir.string()},
                          out2, err2);
  CHECK(rc2 == 0);
  const std::string csv = slurp(dir / "one-var.csv");
  CHECK(csv.rfind("class_a,class_b,kind,vector,formula", 0) == 0);
  CHECK(csv.find("3,1,facet") != std::string::npos);

  std::ostringstream out3, err3;
  CHECK(run_cli({"report", "multi-var:1,(3,1)", "--out", dir.string()}, out3, err3) == 0);
  CHECK(std::filesystem::exists(dir / "multi-var.json"));
}

TEST_CASE("command line rejects bad usage with exit code 2") {
  std::ostringstream out, err;
  CHECK(run_cli({"report", "bogus"}, out, err) == 2);
  CHECK(run_cli({"report", "one-var:9,9"}, out, err) == 2);
  CHECK(run_cli({"report", "zero-var", "--format", "yaml"}, out, err) == 2);
  CHECK(run_cli({"report", "multi-var:2,(3,1)"}, out, err) == 2);
  CHECK(run_cli({"report", "decouplings", "--aux", "9"}, out, err) == 2);
  CHECK(run_cli({"verify", "bogus"}, out, err) == 2);
  CHECK(run_cli({"verify", "witnesses", "--alpha", "x.json"}, out, err) == 2);
  CHECK(run_cli({"nonsense"}, out, err) == 2);
}

TEST_CASE("command line witness verification passes") {
  const auto dir = fresh_dir("cli_verify");
  std::ostringstream out, err;
  const int rc = run_cli({"verify", "witnesses", "--out", dir.string()}, out, err);
  CHECK(rc == 0);
  const json j = json::parse(out.str());
  CHECK(j.at("passed").get<bool>());
  CHECK(std::filesystem::exists(dir / "verify-witnesses.json"));
  CHECK(std::filesystem::exists(dir / "verify-witnesses.manifest.json"));
}

TEST_CASE("command line numeric verification consumes channel and alpha files") {
  const auto dir = fresh_dir("cli_channel");
  const std::filesystem::path chpath = dir / "channel.json";
  const std::filesystem::path apath = dir / "alpha.json";
  {
    std::ofstream os(chpath);
    os << to_json(identity_channel(2)).dump(2) << "\n";
  }
  {
    std::ofstream os(apath);
    os << ratvec_to_json({Rational(1), Rational(-1), Rational(0)}).dump() << "\n";
  }
  std::ostringstream out, err;
  const int rc = run_cli({"verify", "numeric", "--samples", "4", "--channel", chpath.string(),
                          "--alpha", apath.string(), "--out", dir.string()},
                         out, err);
  INFO(err.str());
  CHECK(rc == 0);
  const json j = json::parse(out.str());
  CHECK(j.at("passed").get<bool>());

  const json mj = json::parse(slurp(dir / "verify-numeric.manifest.json"));
  REQUIRE(mj.at("inputs").is_object());
  CHECK(mj.at("inputs").size() == 2);
  CHECK(mj.at("inputs").at(chpath.string()).get<std::string>() == hash_file(chpath));
}

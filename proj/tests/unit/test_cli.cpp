#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "minkit/channels.hpp"
#include "minkit/error.hpp"
#include "minkit/io.hpp"

using namespace minkit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "minkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / "minkit_test_cli";
  fs::create_directories(dir);
  return dir;
}

std::string write_state(const std::string& name, const DensityMatrix& rho) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << write_state_json(rho);
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>* tags = nullptr) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::invalid_argument&) {
        if (tags) tags->push_back(cell);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("family detection") {
  using cli::Family;
  CHECK(cli::detect_family(make_bell_diagonal(Vec3(0.45, 0.3, 0.2))).family == Family::BellDiagonal);
  CHECK(cli::detect_family(make_bell_diagonal(Vec3(1, -1, 1))).family == Family::Pure);
  CHECK(cli::detect_family(make_werner(3, 0.7)).family == Family::Werner);
  CHECK(cli::detect_family(make_werner(3, 0.7)).x == doctest::Approx(0.7));
  CHECK(cli::detect_family(make_isotropic(3, 0.4)).family == Family::Isotropic);
  CHECK(cli::detect_family(random_density({2, 2}, 3, 1)).family == Family::TwoQubit);
  CHECK(cli::detect_family(random_density({2, 3}, 3, 1)).family == Family::Generic);
  // d = 2 Werner states are Bell-diagonal and are reported as such.
  CHECK(cli::detect_family(make_werner(2, 0.3)).family == Family::BellDiagonal);
}

TEST_CASE("compute reports") {
  const auto bd = run_cli({"compute", write_state("bd.json", make_bell_diagonal(Vec3(0.45, 0.3, 0.2)))});
  REQUIRE(bd.code == 0);
  const auto j = cli::Json::parse(bd.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(j["method"] == "ClosedForm");
  CHECK(j["family"] == "bell_diagonal");
  CHECK(j["residual_vs_oracle"].get<double>() < 1e-6);

  const auto w = cli::Json::parse(run_cli({"compute", write_state("w3.json", make_werner(3, 0.7))}).out);
  CHECK(w["value"].get<double>() == doctest::Approx(0.275).epsilon(1e-12));
  CHECK(w["residual_vs_oracle"].get<double>() < 1e-9);

  const auto prod = run_cli({"compute", write_state("prod.json", validate(tensor_product(identity(2) / 2.0, identity(2) / 2.0), {2, 2}))});
  CHECK(std::abs(cli::Json::parse(prod.out)["value"].get<double>()) < 1e-9);

  const auto num = cli::Json::parse(run_cli({"compute", write_state("g.json", random_density({2, 3}, 2, 5))}).out);
  CHECK(num["family"] == "generic");
  CHECK(num["method"] == "NumericUnique");
  CHECK_FALSE(num.contains("residual_vs_oracle"));
}

TEST_CASE("compute exit codes") {
  const fs::path dir = scratch();
  std::ofstream(dir / "broken.json") << "{\"dims\":[2,2],\"re\":";
  CHECK(run_cli({"compute", (dir / "broken.json").string()}).code == cli::kExitBadInput);
  CHECK(run_cli({"compute", (dir / "missing.json").string()}).code == cli::kExitBadInput);

  std::ofstream(dir / "trace2.json") << R"({"dims":[1,2],"re":[[1,0],[0,1]]})";
  CHECK(run_cli({"compute", (dir / "trace2.json").string()}).code == cli::kExitInvariant);

  const std::string big = write_state("big.json", random_density({9, 8}, 2, 3));
  CHECK(run_cli({"compute", big}).code == cli::kExitDimension);

  const std::string bd = write_state("bd2.json", make_bell_diagonal(Vec3(0.1, 0.2, 0.3)));
  CHECK(run_cli({"compute", bd, "--measure", "nb", "--method", "closed"}).code == cli::kExitNoClosedForm);
  CHECK(run_cli({"compute", bd, "--measure", "n7"}).code == cli::kExitBadInput);
  CHECK(run_cli({"compute", bd, "--grid", "2"}).code == cli::kExitBadInput);
}

TEST_CASE("compute writes a manifest next to --out") {
  const fs::path dir = scratch();
  const std::string state = write_state("m.json", make_bell_diagonal(Vec3(0.2, 0.1, 0.3)));
  const fs::path out = dir / "report.json";
  REQUIRE(run_cli({"compute", state, "--out", out.string()}).code == 0);
  const auto manifest = cli::Json::parse(slurp(out.string() + ".manifest.json"));
  CHECK(manifest["command"] == "compute");
  CHECK(manifest["input_digest"] == cli::sha256_hex(slurp(state)));
  CHECK(manifest["output_digest"] == cli::sha256_hex(slurp(out)));
  CHECK(manifest.contains("version"));
  CHECK(manifest["config"]["sphere_grid"] == 64);
}

TEST_CASE("sha256") {
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("surface rows lie on the level set and re-validate") {
  for (double level : {0.3, 0.45, 0.8}) {
    const auto rows = parse_csv(cli::surface_csv(level, 21));
    REQUIRE_FALSE(rows.empty());
    for (const auto& r : rows) {
      const Vec3 c(r[0], r[1], r[2]);
      CHECK(std::abs(c.cwiseAbs().maxCoeff() - level) <= 1e-9);
      CHECK(in_tetrahedron(c, 1e-11));
      CHECK(std::abs(n1_two_qubit(make_bell_diagonal(c.cwiseMin(1.0).cwiseMax(-1.0))).value - level) <= 1e-9);
    }
  }
  // At or below 1/3 no face point is clipped: 6 full faces of 21×21.
  CHECK(parse_csv(cli::surface_csv(0.3, 21)).size() == 6u * 21 * 21);
  CHECK(parse_csv(cli::surface_csv(0.45, 21)).size() < 6u * 21 * 21);
}

TEST_CASE("surface at level 1 collapses onto the tetrahedron edges") {
  const auto rows = parse_csv(cli::surface_csv(1.0, 21));
  REQUIRE_FALSE(rows.empty());
  for (const auto& r : rows) {
    const Vec3 c(r[0], r[1], r[2]);
    // Two of the four Bell weights vanish on an edge.
    const auto w = bell_eigenvalues(c);
    int zeros = 0;
    for (double v : w) zeros += std::abs(v) < 1e-12 ? 1 : 0;
    CHECK(zeros >= 2);
  }
  CHECK(cli::surface_csv(1.0, 2).find('\n') != std::string::npos);
  CHECK_THROWS_AS(cli::surface_csv(0.0, 21), DomainError);
  CHECK_THROWS_AS(cli::surface_csv(1.5, 21), DomainError);
}

TEST_CASE("region rows and vertices") {
  std::vector<std::string> flags;
  const auto rows = parse_csv(cli::region_csv(3, 13), &flags);
  REQUIRE(rows.size() == flags.size());
  bool saw_origin = false;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Vec3 c(rows[k][0], rows[k][1], rows[k][2]);
    // 12 significant digits move a coordinate by at most 5e-13.
    CHECK(std::string(to_string(freezing_membership(c, 3, 1e-11))) == flags[k]);
    if (c.norm() == 0.0) {
      saw_origin = true;
      CHECK(flags[k] == "boundary");
    }
  }
  CHECK(saw_origin);

  const auto v = cli::region_vertices_json(3);
  CHECK(v["freezing_vertices"].size() == 2);
  CHECK(v["freezing_vertices"][0]["vertices"].size() == 5);

  // Axis 1 is axis 3 with c1 and c3 exchanged.
  std::vector<std::string> f1, f3;
  const auto r1 = parse_csv(cli::region_csv(1, 9), &f1);
  const auto r3 = parse_csv(cli::region_csv(3, 9), &f3);
  REQUIRE(r1.size() == r3.size());
  for (std::size_t k = 0; k < r1.size(); ++k)
    CHECK(std::string(to_string(freezing_membership(Vec3(r1[k][2], r1[k][1], r1[k][0]), 3, 1e-11))) == f1[k]);
}

TEST_CASE("sweep CSV") {
  const auto rows = parse_csv(cli::sweep_csv(Vec3(0.2, 0.3, 0.45), 3, Sided::One, 5.0, 41));
  REQUIRE(rows.size() == 41);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k][4] == 0.45);
    if (k > 0) CHECK(rows[k][5] < rows[k - 1][5]);
  }
  for (const auto& r : parse_csv(cli::sweep_csv(Vec3::Zero(), 3, Sided::One, 5.0, 5))) {
    CHECK(r[4] == 0.0);
    CHECK(r[5] == 0.0);
  }
  CHECK(run_cli({"sweep", "--c0", "1,1,1"}).code == cli::kExitBadInput);
  CHECK(run_cli({"sweep", "--c0", "0.2,0.3,0.45", "--axis", "3"}).code == 0);
}

TEST_CASE("csv formatting") {
  CHECK(cli::fmt12(1.0 / 3.0) == "0.333333333333");
  CHECK(cli::fmt12(-0.0) == "0");
  CHECK(cli::fmt12(0.45) == "0.45");
}

TEST_CASE("audits") {
  const auto mono = run_cli({"audit", "monotonicity", "--count", "5", "--seed", "7"});
  CHECK(mono.code == 0);
  const auto j = cli::Json::parse(mono.out);
  CHECK(j["passed"] == true);
  CHECK(j["pairs"] == 20);
  CHECK(run_cli({"audit", "monotonicity", "--count", "5", "--seed", "7"}).out == mono.out);

  const auto rel = cli::Json::parse(run_cli({"audit", "relations", "--count", "4"}).out);
  CHECK(rel["passed"] == true);
  CHECK(rel["max_residual"].get<double>() <= 1e-8);

  const auto orc = cli::Json::parse(run_cli({"audit", "oracle", "--count", "6"}).out);
  CHECK(orc["passed"] == true);
  CHECK(orc["max_residual_unique"].get<double>() <= 1e-8);
  CHECK(orc["max_manhattan_residual"].get<double>() > 1e-6);

  CHECK(run_cli({"audit", "bogus"}).code == cli::kExitBadInput);
}

TEST_CASE("state subcommand round-trips through compute") {
  const fs::path out = scratch() / "iso.json";
  REQUIRE(run_cli({"state", "isotropic", "--d", "3", "--x", "1", "--out", out.string()}).code == 0);
  const auto r = cli::Json::parse(run_cli({"compute", out.string()}).out);
  CHECK(r["value"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(run_cli({"state", "bell", "--c", "1,1,1"}).code == cli::kExitBadInput);
}

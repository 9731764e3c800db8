#include "commands.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "minkit/channels.hpp"
#include "minkit/error.hpp"
#include "minkit/io.hpp"
#include "minkit/parallel.hpp"

#ifndef MINKIT_VERSION
#define MINKIT_VERSION "unknown"
#endif

namespace minkit::cli {

const char* to_string(Family f) {
  switch (f) {
    case Family::Pure: return "pure";
    case Family::BellDiagonal: return "bell_diagonal";
    case Family::Werner: return "werner";
    case Family::Isotropic: return "isotropic";
    case Family::TwoQubit: return "two_qubit";
    case Family::Generic: return "generic";
  }
  return "?";
}

std::string fmt12(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

namespace {

Json vec_json(const Vec3& v) { return Json::array({v(0), v(1), v(2)}); }

Json matrix_json(const ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array(), s = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      s.push_back(m(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(s));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Json config_json(const OptimizerConfig& cfg) {
  return Json{{"sphere_grid", cfg.sphere_grid},   {"refine_iters", cfg.refine_iters},
              {"restarts", cfg.restarts},         {"tol", cfg.tol},
              {"seed", cfg.seed},                 {"degeneracy_tol", cfg.degeneracy_tol},
              {"branch_threshold", cfg.branch_threshold}};
}

PureState dominant_pure(const DensityMatrix& rho) {
  const HermEig e = hermitian_eig(rho.matrix());
  return PureState::normalized(e.vectors.col(0), rho.dims());
}

// Closed-form value for the detected family, if one exists.
std::optional<MinResult> closed_form(const DensityMatrix& rho, const Detection& det, Measure measure) {
  if (measure == Measure::NB) return std::nullopt;
  switch (det.family) {
    case Family::Pure: {
      const SchmidtForm s = schmidt(dominant_pure(rho));
      const int rank = s.rank();
      MinResult r;
      r.optimal_basis = s.basis_a;
      if (rank <= 2) {
        r.value = measure == Measure::N1 ? n1_pure_2xn(s) : n2_pure_2xn(s);
        return r;
      }
      const bool flat = (s.coefficients.head(rank).array() - 1.0 / rank).abs().maxCoeff() <= kDetectionTol;
      if (measure == Measure::N1 && flat && rank == rho.dims().a) {
        r.value = n1_pure_degenerate_mxm(rank);
        return r;
      }
      return std::nullopt;
    }
    case Family::BellDiagonal: {
      // T is already diagonal: measure along the weakest correlation axis.
      const Vec3 s = sorted_abs(det.c);
      Eigen::Index weakest = 0;
      det.c.cwiseAbs().minCoeff(&weakest);
      MinResult r;
      r.value = measure == Measure::N1 ? s(0) : (s(0) * s(0) + s(1) * s(1)) / 4.0;
      r.optimal_direction = Vec3::Unit(weakest);
      r.optimal_basis = sphere_basis(std::acos(std::clamp((*r.optimal_direction)(2), -1.0, 1.0)),
                                     std::atan2((*r.optimal_direction)(1), (*r.optimal_direction)(0)));
      return r;
    }
    case Family::TwoQubit: {
      MinResult r = measure == Measure::N1 ? n1_two_qubit(rho) : n2_two_qubit(rho);
      if (r.method != Method::ClosedForm) return std::nullopt;
      return r;
    }
    case Family::Werner:
    case Family::Isotropic: {
      if (measure != Measure::N1) return std::nullopt;
      MinResult r;
      r.value = det.family == Family::Werner ? n1_werner(det.d, det.x) : n1_isotropic(det.d, det.x);
      // Every local basis is optimal for these families.
      r.optimal_basis = identity(det.d);
      return r;
    }
    case Family::Generic: return std::nullopt;
  }
  return std::nullopt;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path + " for writing");
  f << bytes;
  if (!f) throw FormatError("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open state file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Manifest {
  std::string command;
  std::vector<std::string> args;
  OptimizerConfig cfg;
  std::string input_digest;
};

// Writes `bytes` to `path` together with `<path>.manifest.json`.
void emit(const std::string& path, const std::string& bytes, const Manifest& m) {
  write_file(path, bytes);
  Json j{{"command", m.command},
         {"args", m.args},
         {"config", config_json(m.cfg)},
         {"seed", m.cfg.seed},
         {"input_digest", m.input_digest},
         {"output", std::filesystem::path(path).filename().string()},
         {"output_digest", sha256_hex(bytes)},
         {"version", MINKIT_VERSION}};
  write_file(path + ".manifest.json", j.dump(2) + "\n");
}

std::vector<double> symmetric_grid(double half_width, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = half_width * (2.0 * i - (points - 1)) / (points - 1);
  return g;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) s += a + '\n';
  return s;
}

}  // namespace

Detection detect_family(const DensityMatrix& rho, double tol) {
  const ComplexMatrix& m = rho.matrix();
  const Dims dims = rho.dims();
  Detection det;

  const double purity = (m * m).trace().real();
  if (std::abs(1.0 - purity) <= tol) {
    det.family = Family::Pure;
    det.residual = std::abs(1.0 - purity);
    return det;
  }

  if (dims == Dims{2, 2}) {
    const BlochForm b = bloch_decompose(rho);
    const Mat3 off = b.t - Mat3(b.t.diagonal().asDiagonal());
    const double res = std::max({b.x.cwiseAbs().maxCoeff(), b.y.cwiseAbs().maxCoeff(), off.cwiseAbs().maxCoeff()});
    if (res <= tol) {
      det.family = Family::BellDiagonal;
      det.c = b.t.diagonal();
      det.residual = res;
      return det;
    }
  }

  if (dims.a == dims.b) {
    const int d = dims.a;
    const double xw = (m * swap_operator(d)).trace().real();
    if (xw >= -1.0 - tol && xw <= 1.0 + tol) {
      const double x = std::clamp(xw, -1.0, 1.0);
      const double res = hs_norm(m - make_werner(d, x).matrix());
      if (res <= tol) return Detection{Family::Werner, Vec3::Zero(), d, x, res};
    }
    const ComplexVector phi = maximally_entangled(d);
    const double xi = (phi.adjoint() * m * phi)(0, 0).real();
    if (xi >= -tol && xi <= 1.0 + tol) {
      const double x = std::clamp(xi, 0.0, 1.0);
      const double res = hs_norm(m - make_isotropic(d, x).matrix());
      if (res <= tol) return Detection{Family::Isotropic, Vec3::Zero(), d, x, res};
    }
  }

  det.family = dims == Dims{2, 2} ? Family::TwoQubit : Family::Generic;
  return det;
}

Json compute_report(const DensityMatrix& rho, Measure measure, MethodChoice method, const OptimizerConfig& cfg) {
  cfg.validate();
  const Detection det = detect_family(rho);
  std::optional<MinResult> closed;
  if (method != MethodChoice::Numeric) closed = closed_form(rho, det, measure);
  if (method == MethodChoice::Closed && !closed)
    throw NoClosedForm(std::string("no closed form for ") + to_string(measure) + " on a " + to_string(det.family) +
                       " state");

  const bool numeric_feasible = rho.dims().total() <= kMaxNumericDimension;
  std::optional<MinResult> numeric;
  if (!closed || numeric_feasible) numeric = numeric_min(rho, measure, cfg);

  const MinResult& chosen = closed ? *closed : *numeric;
  Json j;
  j["value"] = chosen.value;
  j["method"] = to_string(chosen.method);
  j["family"] = to_string(det.family);
  j["measure"] = to_string(measure);
  if (chosen.optimal_basis || chosen.optimal_direction) {
    Json meas = Json::object();
    if (chosen.optimal_direction) meas["direction"] = vec_json(*chosen.optimal_direction);
    if (chosen.optimal_basis) meas["basis"] = matrix_json(*chosen.optimal_basis);
    j["optimal_measurement"] = std::move(meas);
  }
  if (closed && numeric) {
    j["residual_vs_oracle"] = std::abs(closed->value - numeric->value);
    j["oracle_method"] = to_string(numeric->method);
  }
  if (!closed) j["iterations"] = chosen.iterations;
  return j;
}

std::string surface_csv(double level, int resolution) {
  if (!(level > 0.0 && level <= 1.0)) throw DomainError("surface: level must lie in (0, 1]");
  if (resolution < 2) throw DomainError("surface: resolution must be at least 2");
  const std::vector<double> grid = symmetric_grid(level, resolution);
  std::string out = "c1,c2,c3,face_id\n";
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign = 0; sign < 2; ++sign) {
      const int face = 2 * axis + sign;
      const int u = (axis + 1) % 3, v = (axis + 2) % 3;
      for (double a : grid) {
        for (double b : grid) {
          Vec3 c;
          c(axis) = sign == 0 ? level : -level;
          c(u) = a;
          c(v) = b;
          if (!in_tetrahedron(c)) continue;
          out += fmt12(c(0)) + ',' + fmt12(c(1)) + ',' + fmt12(c(2)) + ',' + std::to_string(face) + '\n';
        }
      }
    }
  }
  return out;
}

std::string region_csv(int axis, int resolution) {
  if (axis < 1 || axis > 3) throw DomainError("region: axis must be 1, 2 or 3");
  if (resolution < 2) throw DomainError("region: resolution must be at least 2");
  const std::vector<double> grid = symmetric_grid(1.0, resolution);
  std::string out = "c1,c2,c3,flag\n";
  for (double a : grid)
    for (double b : grid)
      for (double c : grid) {
        const Vec3 p(a, b, c);
        if (!in_tetrahedron(p)) continue;
        out += fmt12(a) + ',' + fmt12(b) + ',' + fmt12(c) + ',' + to_string(freezing_membership(p, axis)) + '\n';
      }
  return out;
}

Json region_vertices_json(int axis) {
  if (axis < 1 || axis > 3) throw DomainError("region: axis must be 1, 2 or 3");
  const auto pieces = freezing_vertices(axis);
  Json j{{"axis", axis}, {"freezing_vertices", Json::array()}};
  const char* signs[] = {"+", "-"};
  for (int k = 0; k < 2; ++k) {
    Json vs = Json::array();
    for (const Vec3& v : pieces[k]) vs.push_back(vec_json(v));
    j["freezing_vertices"].push_back(Json{{"sign", signs[k]}, {"vertices", std::move(vs)}});
  }
  return j;
}

std::string sweep_csv(const Vec3& c0, int axis, Sided sided, double tmax, int points) {
  if (!(tmax > 0.0)) throw DomainError("sweep: tmax must be positive");
  if (points < 2) throw DomainError("sweep: need at least 2 points");
  const std::vector<double> grid = linear_grid(0.0, tmax, points);
  const DynamicsTrace tr = dynamics_sweep(c0, axis, sided, grid);
  std::string out = "gamma_t,c1,c2,c3,n1,n2\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec3& c = tr.c_t[k];
    out += fmt12(grid[k]) + ',' + fmt12(c(0)) + ',' + fmt12(c(1)) + ',' + fmt12(c(2)) + ',' + fmt12(tr.n1_t[k]) +
           ',' + fmt12(tr.n2_t[k]) + '\n';
  }
  return out;
}

namespace {

Json audit_monotonicity(const AuditOptions& opts, const OptimizerConfig& cfg) {
  const MonotonicityReport rep = monotonicity_audit(opts.count, opts.channels, opts.seed, cfg);
  Json cases = Json::array();
  for (const auto& c : rep.cases) {
    cases.push_back(Json{{"state", c.state_index},
                         {"channel", c.channel_index},
                         {"kraus_count", c.kraus_count},
                         {"before", c.before},
                         {"after", c.after},
                         {"allowed", c.allowed},
                         {"method_before", to_string(c.method_before)},
                         {"method_after", to_string(c.method_after)},
                         {"passed", !c.violation}});
  }
  return Json{{"passed", rep.violations == 0},
              {"pairs", rep.cases.size()},
              {"violations", rep.violations},
              {"max_increase", rep.max_increase},
              {"cases", std::move(cases)}};
}

Json relation_case(const std::string& family, Json params, const RelationCheck& r, double tol) {
  return Json{{"family", family},  {"params", std::move(params)}, {"identity", r.identity}, {"lhs", r.lhs},
              {"rhs", r.rhs},      {"residual", r.residual},     {"tol", tol},           {"passed", r.residual <= tol}};
}

Json audit_relations(const AuditOptions& opts, const OptimizerConfig& cfg) {
  constexpr double kTol = 1e-10;
  constexpr double kPureTol = 1e-8;
  std::mt19937_64 rng(opts.seed);
  std::vector<Vec3> bell(opts.count);
  for (auto& c : bell) c = random_tetrahedron_point(rng);
  std::vector<PureState> pures;
  for (int i = 0; i < opts.count; ++i) pures.push_back(random_pure({2, 2 + i % 2}, rng));

  struct Item {
    std::string family;
    int d = 0;
    double x = 0.0;
  };
  std::vector<Item> items;
  for (int d : {2, 3, 4})
    for (int k = 0; k <= 10; ++k) items.push_back({"werner", d, -1.0 + 0.2 * k});
  for (int d : {2, 3})
    for (int k = 0; k <= 10; ++k) items.push_back({"isotropic", d, 0.1 * k});

  std::vector<Json> results(bell.size() + pures.size() + items.size());
  parallel_for(results.size(), [&](std::size_t i) {
    if (i < bell.size()) {
      results[i] = relation_case("bell_diagonal", Json{{"c", vec_json(bell[i])}}, relation_bell_diagonal(bell[i]), kTol);
      return;
    }
    i -= bell.size();
    if (i < pures.size()) {
      const PureState& p = pures[i];
      results[i + bell.size()] = relation_case("pure", Json{{"dims", {p.dims().a, p.dims().b}}},
                                               relation_pure(p, cfg), kPureTol);
      return;
    }
    const Item& it = items[i - pures.size()];
    const RelationCheck r = it.family == "werner" ? relation_werner(it.d, it.x, cfg) : relation_isotropic(it.d, it.x, cfg);
    results[i + bell.size()] = relation_case(it.family, Json{{"d", it.d}, {"x", it.x}}, r, kTol);
  });

  bool passed = true;
  double max_residual = 0.0;
  Json cases = Json::array();
  for (auto& r : results) {
    passed = passed && r["passed"].get<bool>();
    max_residual = std::max(max_residual, r["residual"].get<double>());
    cases.push_back(std::move(r));
  }
  return Json{{"passed", passed}, {"max_residual", max_residual}, {"cases", std::move(cases)}};
}

Json audit_oracle(const AuditOptions& opts, const OptimizerConfig& cfg) {
  constexpr double kUniqueTol = 1e-8;
  constexpr double kSearchTol = 1e-4;
  std::mt19937_64 rng(opts.seed);

  std::vector<DensityMatrix> generic;
  for (int i = 0; static_cast<int>(generic.size()) < opts.count; ++i) {
    DensityMatrix rho = random_density({2, 2}, 1 + i % 4, rng);
    if (bloch_decompose(rho).x.norm() > 0.05) generic.push_back(std::move(rho));
  }
  const int half = std::max(1, opts.count / 2);
  std::vector<Vec3> bell(half);
  for (auto& c : bell) c = random_tetrahedron_point(rng);
  std::vector<PureState> pures;
  for (int i = 0; i < half; ++i) pures.push_back(random_pure({2, 2 + i % 2}, rng));
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  pures.push_back(PureState(phi, {2, 2}));

  const std::size_t n = generic.size() + bell.size() + pures.size();
  std::vector<Json> results(n);
  parallel_for(n, [&](std::size_t i) {
    if (i < generic.size()) {
      const DensityMatrix& rho = generic[i];
      const MinResult closed = n1_two_qubit(rho);
      const MinResult num = n1_numeric(rho, cfg);
      const CanonicalForm cf = canonicalize(rho);
      const double manhattan = n1_two_qubit_formula(cf.bloch.c, cf.bloch.x, XNorm::Manhattan);
      const double res = std::abs(closed.value - num.value);
      results[i] = Json{{"family", "two_qubit"},
                        {"closed", closed.value},
                        {"numeric", num.value},
                        {"numeric_method", to_string(num.method)},
                        {"residual", res},
                        {"manhattan_residual", std::abs(manhattan - num.value)},
                        {"tol", kUniqueTol},
                        {"passed", res <= kUniqueTol && num.method == Method::NumericUnique}};
      return;
    }
    std::size_t k = i - generic.size();
    if (k < bell.size()) {
      const double closed = bell[k].cwiseAbs().maxCoeff();
      const MinResult num = n1_numeric(make_bell_diagonal(bell[k]), cfg);
      const double res = std::abs(closed - num.value);
      results[i] = Json{{"family", "bell_diagonal"},
                        {"c", vec_json(bell[k])},
                        {"closed", closed},
                        {"numeric", num.value},
                        {"numeric_method", to_string(num.method)},
                        {"residual", res},
                        {"tol", kSearchTol},
                        {"passed", res <= kSearchTol}};
      return;
    }
    k -= bell.size();
    const PureState& p = pures[k];
    const SchmidtForm s = schmidt(p);
    const double closed = n1_pure_2xn(s);
    const MinResult num = n1_numeric(p.density(), cfg);
    const double res = std::abs(closed - num.value);
    results[i] = Json{{"family", "pure"},
                      {"dims", {p.dims().a, p.dims().b}},
                      {"schmidt", {s.coefficients(0), s.coefficients(1)}},
                      {"closed", closed},
                      {"numeric", num.value},
                      {"numeric_method", to_string(num.method)},
                      {"residual", res},
                      {"tol", kSearchTol},
                      {"passed", res <= kSearchTol}};
  });

  bool passed = true;
  double max_unique = 0.0, max_search = 0.0, max_manhattan = 0.0;
  Json cases = Json::array();
  for (auto& r : results) {
    passed = passed && r["passed"].get<bool>();
    const double res = r["residual"].get<double>();
    if (r["family"] == "two_qubit") {
      max_unique = std::max(max_unique, res);
      max_manhattan = std::max(max_manhattan, r["manhattan_residual"].get<double>());
    } else {
      max_search = std::max(max_search, res);
    }
    cases.push_back(std::move(r));
  }
  return Json{{"passed", passed},
              {"max_residual_unique", max_unique},
              {"max_residual_search", max_search},
              {"max_manhattan_residual", max_manhattan},
              {"cases", std::move(cases)}};
}

}  // namespace

Json run_audit(const AuditOptions& opts, const OptimizerConfig& cfg) {
  cfg.validate();
  if (opts.count < 1) throw DomainError("audit: count must be at least 1");
  if (opts.channels < 1) throw DomainError("audit: channels must be at least 1");
  Json body;
  if (opts.kind == "monotonicity")
    body = audit_monotonicity(opts, cfg);
  else if (opts.kind == "relations")
    body = audit_relations(opts, cfg);
  else if (opts.kind == "oracle")
    body = audit_oracle(opts, cfg);
  else
    throw DomainError("audit: unknown kind " + opts.kind);
  Json j{{"kind", opts.kind}, {"seed", opts.seed}, {"count", opts.count}};
  for (auto& [key, value] : body.items()) j[key] = value;
  return j;
}

namespace {

DensityMatrix make_state(const std::string& family, const std::vector<double>& c, int d, double x,
                         const std::vector<int>& dims, int rank, std::uint64_t seed) {
  if (family == "bell") {
    if (c.size() != 3) throw DomainError("state: --c needs three values");
    return make_bell_diagonal(Vec3(c[0], c[1], c[2]));
  }
  if (family == "werner") return make_werner(d, x);
  if (family == "isotropic") return make_isotropic(d, x);
  if (dims.size() != 2) throw DomainError("state: --dims needs two values");
  const Dims ds{dims[0], dims[1]};
  if (family == "product") {
    ComplexMatrix m = ComplexMatrix::Zero(ds.total(), ds.total());
    m(0, 0) = 1.0;
    return validate(m, ds);
  }
  if (family == "pure") return random_pure(ds, seed).density();
  if (family == "random") return random_density(ds, rank, seed);
  throw DomainError("state: unknown family " + family);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measurement-induced nonlocality toolkit", "minkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MINKIT_VERSION);

  OptimizerConfig cfg;
  auto add_optimizer_flags = [&](CLI::App* sub) {
    sub->add_option("--grid", cfg.sphere_grid, "Sphere grid resolution")->capture_default_str();
    sub->add_option("--restarts", cfg.restarts, "Optimizer restarts")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "Optimizer convergence tolerance")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  };

  std::string out_path;

  auto* compute = app.add_subcommand("compute", "MIN value of a state file (JSON report on stdout)");
  std::string state_path, measure_name = "n1", method_name = "auto";
  compute->add_option("state", state_path, "State file")->required();
  compute->add_option("--measure", measure_name, "n1 | n2 | nb")
      ->check(CLI::IsMember({"n1", "n2", "nb"}))
      ->capture_default_str();
  compute->add_option("--method", method_name, "auto | closed | numeric")
      ->check(CLI::IsMember({"auto", "closed", "numeric"}))
      ->capture_default_str();
  compute->add_option("--out", out_path, "Also write the report here");
  add_optimizer_flags(compute);

  auto* surface = app.add_subcommand("surface", "Level surface max|c_i| = level inside the tetrahedron (CSV)");
  double level = 0.45;
  int resolution = 41;
  surface->add_option("--level", level, "N1 level in (0, 1]")->capture_default_str();
  surface->add_option("--resolution", resolution, "Grid points per face edge")->capture_default_str();
  surface->add_option("--out", out_path, "CSV path (stdout if omitted)");

  auto* region = app.add_subcommand("region", "Freezing region for a flip axis (CSV + vertex sidecar)");
  int axis = 3;
  int region_resolution = 21;
  region->add_option("--axis", axis, "Flip axis 1, 2 or 3")->capture_default_str();
  region->add_option("--resolution", region_resolution, "Grid points per cube edge")->capture_default_str();
  region->add_option("--out", out_path, "CSV path (stdout if omitted)");

  auto* sweep = app.add_subcommand("sweep", "Flip-channel dynamics of a Bell-diagonal state (CSV)");
  std::vector<double> c0;
  std::string sided_name = "one";
  double tmax = 5.0;
  int points = 41;
  sweep->add_option("--c0", c0, "Initial correlations c1,c2,c3")->delimiter(',')->expected(3)->required();
  sweep->add_option("--axis", axis, "Flip axis 1, 2 or 3")->capture_default_str();
  sweep->add_option("--sided", sided_name, "one | two")->check(CLI::IsMember({"one", "two"}))->capture_default_str();
  sweep->add_option("--tmax", tmax, "Largest gamma*t")->capture_default_str();
  sweep->add_option("--points", points, "Grid points")->capture_default_str();
  sweep->add_option("--out", out_path, "CSV path (stdout if omitted)");

  auto* audit = app.add_subcommand("audit", "Randomized audits (JSON); exit 1 on any failed case");
  AuditOptions audit_opts;
  audit->add_option("kind", audit_opts.kind, "monotonicity | relations | oracle")
      ->check(CLI::IsMember({"monotonicity", "relations", "oracle"}))
      ->required();
  audit->add_option("--count", audit_opts.count, "Random states per family")->capture_default_str();
  audit->add_option("--channels", audit_opts.channels, "Channels per state (monotonicity)")->capture_default_str();
  audit->add_option("--out", out_path, "JSON path (stdout if omitted)");
  add_optimizer_flags(audit);

  auto* state = app.add_subcommand("state", "Write a state file for a known family");
  std::string family;
  std::vector<double> c;
  int d = 2;
  double x = 0.0;
  std::vector<int> dims;
  int rank = 1;
  std::uint64_t state_seed = 0;
  state->add_option("family", family, "bell | werner | isotropic | product | pure | random")
      ->check(CLI::IsMember({"bell", "werner", "isotropic", "product", "pure", "random"}))
      ->required();
  state->add_option("--c", c, "Bell-diagonal correlations c1,c2,c3")->delimiter(',')->expected(3);
  state->add_option("--d", d, "Local dimension (werner, isotropic)");
  state->add_option("--x", x, "Family parameter (werner, isotropic)");
  state->add_option("--dims", dims, "dA,dB (product, pure, random)")->delimiter(',')->expected(2);
  state->add_option("--rank", rank, "Rank (random)");
  state->add_option("--seed", state_seed, "RNG seed (pure, random)");
  state->add_option("--out", out_path, "State path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  Manifest manifest{"", args, cfg, ""};
  auto finish = [&](const std::string& bytes) {
    manifest.cfg = cfg;
    if (out_path.empty())
      out << bytes;
    else
      emit(out_path, bytes, manifest);
  };

  try {
    if (*compute) {
      const std::string text = read_file(state_path);
      const DensityMatrix rho = read_state(text);
      const Measure measure = measure_name == "n1" ? Measure::N1 : measure_name == "n2" ? Measure::N2 : Measure::NB;
      const MethodChoice method = method_name == "auto"     ? MethodChoice::Auto
                                  : method_name == "closed" ? MethodChoice::Closed
                                                            : MethodChoice::Numeric;
      const std::string bytes = compute_report(rho, measure, method, cfg).dump() + "\n";
      out << bytes;
      if (!out_path.empty()) {
        manifest.command = "compute";
        manifest.input_digest = sha256_hex(text);
        manifest.cfg = cfg;
        emit(out_path, bytes, manifest);
      }
    } else if (*surface) {
      manifest.command = "surface";
      manifest.input_digest = sha256_hex(join_args(args));
      finish(surface_csv(level, resolution));
    } else if (*region) {
      manifest.command = "region";
      manifest.input_digest = sha256_hex(join_args(args));
      const std::string csv = region_csv(axis, region_resolution);
      const std::string vertices = region_vertices_json(axis).dump(2) + "\n";
      finish(csv);
      if (!out_path.empty()) emit(out_path + ".vertices.json", vertices, manifest);
    } else if (*sweep) {
      manifest.command = "sweep";
      manifest.input_digest = sha256_hex(join_args(args));
      finish(sweep_csv(Vec3(c0[0], c0[1], c0[2]), axis, sided_name == "one" ? Sided::One : Sided::Two, tmax, points));
    } else if (*audit) {
      manifest.command = "audit";
      manifest.input_digest = sha256_hex(join_args(args));
      audit_opts.seed = cfg.seed;
      const Json report = run_audit(audit_opts, cfg);
      finish(report.dump(2) + "\n");
      if (!report["passed"].get<bool>()) {
        err << "audit " << audit_opts.kind << ": FAILED\n";
        return kExitAuditFailed;
      }
    } else if (*state) {
      manifest.command = "state";
      manifest.input_digest = sha256_hex(join_args(args));
      finish(write_state_json(make_state(family, c, d, x, dims, rank, state_seed)));
    }
  } catch (const NoClosedForm& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoClosedForm;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const InvariantError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace minkit::cli

// Command-line front end: model-operator checks, sector pencils, cylinder
// spectra, the polygon FEM and double-layer solvers, and the reproduction
// suite.  Every subcommand writes a JSON result record plus deterministic
// data files (CSV / JSON) under the output directory.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "cornerkit/acceptance.hpp"
#include "cornerkit/text_io.hpp"

namespace ck = cornerkit;
using Json = nlohmann::ordered_json;

namespace {

#ifndef CORNERKIT_VERSION
#define CORNERKIT_VERSION "0.0.0"
#endif

constexpr const char* kVersion = CORNERKIT_VERSION;

struct CommonOpts {
  std::string out = ".";
  std::uint64_t seed = 20240801;
  double cap = 1.0;
};

std::string default_out_dir() {
  const char* env = std::getenv("CORNERKIT_OUT");
  return env && *env ? env : ".";
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  opts.out = default_out_dir();
  cmd->add_option("--out", opts.out, "output directory");
  cmd->add_option("--seed", opts.seed, "seed for randomized sweeps");
  cmd->add_option("--cap", opts.cap, "size cap factor (1 = full, >= 0.5)");
}

Json json_interval(const ck::SpectrumSet::Interval& iv) {
  Json j = Json::array();
  j.push_back(std::isinf(iv.lo) ? Json("-inf") : Json(iv.lo));
  j.push_back(std::isinf(iv.hi) ? Json("inf") : Json(iv.hi));
  return j;
}

Json json_spectrum(const ck::SpectrumSet& s) {
  Json j;
  j["intervals"] = Json::array();
  for (const auto& iv : s.intervals()) j["intervals"].push_back(json_interval(iv));
  j["points"] = s.points();
  j["display"] = s.str();
  return j;
}

// Record writer: the record carries provenance and timing; the referenced
// data files are byte-deterministic for fixed config and seed.
struct RecordWriter {
  std::string experiment;
  CommonOpts opts;
  Json inputs = Json::object();
  Json outputs = Json::object();
  std::vector<std::string> files;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write_csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::string body = ck::csv_join(header) + "\n";
    for (const auto& row : rows) body += ck::csv_join(row) + "\n";
    ck::write_file_atomic(std::filesystem::path(opts.out) / name, body);
    files.push_back(name);
  }

  void finish() {
    const std::string outName = experiment + "_output.json";
    ck::write_file_atomic(std::filesystem::path(opts.out) / outName, outputs.dump(2) + "\n");
    files.push_back(outName);

    Json record;
    record["experiment"] = experiment;
    record["version"] = kVersion;
    record["seed"] = opts.seed;
    record["inputs"] = inputs;
    record["files"] = files;
    record["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ck::write_file_atomic(std::filesystem::path(opts.out) / (experiment + "_record.json"),
                          record.dump(2) + "\n");
  }
};

Json lie_algebra_json(const ck::LieAlgebraStructure& g) {
  Json j;
  j["dim"] = g.dim();
  auto rep = g.solvability();
  j["abelian"] = g.is_abelian();
  j["solvable"] = rep.solvable;
  j["nilpotent"] = rep.nilpotent;
  Json constants = Json::array();
  for (int i = 0; i < g.dim(); ++i)
    for (int jdx = i + 1; jdx < g.dim(); ++jdx)
      for (int k = 0; k < g.dim(); ++k)
        if (g.structure_constant(i, jdx, k) != 0) {
          Json entry;
          entry["i"] = i;
          entry["j"] = jdx;
          entry["k"] = k;
          entry["c"] = ck::to_string(g.structure_constant(i, jdx, k));
          constants.push_back(entry);
        }
  j["structure_constants"] = constants;
  return j;
}

// ---------------------------------------------------------------------------

int run_vfcheck(const std::string& file, const std::string& preset, CommonOpts opts) {
  RecordWriter rec{"vfcheck", opts};
  std::optional<ck::VfFile> parsed;
  if (!preset.empty()) {
    ck::VectorFieldModule mod = [&]() {
      if (preset == "vb") return ck::model_bases::b_calculus(2);
      if (preset == "v0") return ck::model_bases::zero_calculus(2);
      if (preset == "vsc") return ck::model_bases::scattering_calculus(2);
      if (preset == "vedge") return ck::model_bases::edge_calculus(3, 1);
      throw ck::InvalidArgument("bad_preset", "unknown preset '" + preset + "'");
    }();
    std::vector<ck::Rat> p(mod.chart().dim, ck::Rat(1));
    p[0] = 0;
    parsed.emplace(ck::VfFile{std::move(mod), {p}});
    rec.inputs["preset"] = preset;
  } else if (!file.empty()) {
    parsed.emplace(ck::parse_vf_file(file));
    rec.inputs["file"] = file;
  } else {
    throw ck::InvalidArgument("missing_input", "need a module file or --preset");
  }
  const auto& mod = parsed->module;

  auto closure = mod.check_closure();
  std::cout << "chart dimension " << mod.chart().dim << ", boundary coordinates "
            << mod.chart().boundary << "\n";
  for (const auto& g : mod.generators()) std::cout << "  generator " << g.str() << "\n";
  std::cout << "closed under bracket: " << (closure.closed ? "yes" : "no") << "\n";
  rec.outputs["closed"] = closure.closed;
  if (!closure.closed) {
    std::cout << "  witness [X_" << closure.witness->i + 1 << ", X_" << closure.witness->j + 1
              << "] = " << closure.witness->bracket.str()
              << " has no polynomial expansion in the generators\n";
    rec.outputs["witness"] = {{"i", closure.witness->i},
                              {"j", closure.witness->j},
                              {"bracket", closure.witness->bracket.str()}};
  } else {
    Json table = Json::array();
    for (const auto& [pair, coeffs] : closure.table) {
      Json row;
      row["i"] = pair.first;
      row["j"] = pair.second;
      Json cs = Json::array();
      for (const auto& c : coeffs) cs.push_back(c.str(mod.chart().names));
      row["coefficients"] = cs;
      table.push_back(row);
    }
    rec.outputs["bracket_table"] = table;

    Json points = Json::array();
    for (const auto& p : parsed->points) {
      auto iso = mod.isotropy_algebra(p);
      Json entry;
      Json coords = Json::array();
      for (const auto& c : p) coords.push_back(ck::to_string(c));
      entry["point"] = coords;
      entry["isotropy"] = lie_algebra_json(iso.algebra);
      points.push_back(entry);
      std::cout << "isotropy at (";
      for (size_t i = 0; i < p.size(); ++i) std::cout << (i ? ", " : "") << p[i];
      auto rep = iso.algebra.solvability();
      std::cout << "): dim " << iso.algebra.dim() << (iso.algebra.is_abelian() ? ", abelian" : "")
                << (rep.solvable ? ", solvable" : ", not solvable")
                << (rep.nilpotent ? ", nilpotent" : "") << "\n";
    }
    rec.outputs["points"] = points;
  }
  rec.finish();
  return 0;
}

int run_bops(const std::string& action, const std::vector<std::string>& opFiles, double tau,
             std::vector<double> base, std::vector<double> xi, CommonOpts opts) {
  RecordWriter rec{"bops", opts};
  rec.inputs["action"] = action;
  rec.inputs["operators"] = opFiles;
  if (opFiles.empty()) throw ck::InvalidArgument("missing_operator", "need an operator file");
  ck::BOperator p = ck::parse_boperator_file(opFiles[0]);

  auto termsJson = [](const ck::BOperator& op) {
    Json terms = Json::array();
    for (const auto& [ij, c] : op.terms()) {
      Json t;
      t["i"] = ij.first;
      t["j"] = ij.second;
      t["coefficient"] = c.str();
      terms.push_back(t);
    }
    return terms;
  };

  if (action == "compose") {
    if (opFiles.size() != 2)
      throw ck::InvalidArgument("missing_operator", "compose needs two operator files");
    ck::BOperator q = ck::parse_boperator_file(opFiles[1]);
    ck::BOperator pq = p.compose(q);
    std::cout << "P o Q = " << pq.str() << "\n";
    rec.outputs["result"] = termsJson(pq);
    rec.outputs["order"] = pq.order();
  } else if (action == "indicial") {
    auto family = p.indicial_family();
    std::cout << "indicial family: " << family.str() << "\n";
    Json terms = Json::array();
    for (const auto& [ij, c] : family.terms()) {
      Json t;
      t["iota_power"] = ij.first;
      t["dy_power"] = ij.second;
      t["coefficient"] = c.str();
      terms.push_back(t);
    }
    rec.outputs["family"] = terms;
    rec.outputs["zero"] = family.is_zero();
    const ck::Rat tauRat(static_cast<long long>(std::llround(tau * 1e6)), 1000000LL);
    auto pencil = family.evaluate(tauRat);
    Json pj = Json::array();
    for (const auto& [j, reim] : pencil.coeff) {
      Json t;
      t["dy_power"] = j;
      t["re"] = reim.first.str();
      t["im"] = reim.second.str();
      pj.push_back(t);
    }
    rec.outputs["pencil_at_tau"] = pj;
    rec.outputs["tau"] = tau;
  } else if (action == "symbol") {
    if (base.size() != 2 || xi.size() != 2)
      throw ck::InvalidArgument("bad_covector", "symbol needs --base x,y and --xi a,b");
    auto s = p.principal_symbol(base[0], base[1], xi[0], xi[1]);
    std::cout << "principal symbol = " << s.real() << " + " << s.imag() << "i\n";
    rec.outputs["symbol_re"] = s.real();
    rec.outputs["symbol_im"] = s.imag();
    rec.outputs["order"] = p.order();
  } else if (action == "elliptic") {
    const bool elliptic = ck::is_elliptic(p);
    std::cout << "elliptic on the scan grid: " << (elliptic ? "yes" : "no") << "\n";
    rec.outputs["elliptic"] = elliptic;
  } else {
    throw ck::InvalidArgument("bad_action", "unknown action '" + action + "'");
  }
  rec.finish();
  return 0;
}

int run_pencil(double alpha, const std::string& polygonAngles, const std::string& bc, int count,
               int oracleGrid, CommonOpts opts) {
  RecordWriter rec{"pencil", opts};
  rec.inputs["bc"] = bc;
  rec.inputs["count"] = count;

  ck::EdgeBC bc0 = ck::EdgeBC::dirichlet, bc1 = ck::EdgeBC::dirichlet;
  if (bc == "nn")
    bc0 = bc1 = ck::EdgeBC::neumann;
  else if (bc == "dn")
    bc1 = ck::EdgeBC::neumann;
  else if (bc == "nd")
    bc0 = ck::EdgeBC::neumann;
  else if (bc != "dd")
    throw ck::InvalidArgument("bad_bc", "boundary conditions must be dd, dn, nd or nn");

  if (!polygonAngles.empty()) {
    std::vector<double> angles;
    for (const auto& part : ck::split(polygonAngles, ','))
      angles.push_back(ck::parse_coordinate(part));
    auto w = ck::polygon_weight_window(angles);
    rec.inputs["polygon_angles"] = angles;
    rec.outputs["eta"] = w.eta;
    rec.outputs["window"] = {-w.eta, w.eta};
    rec.outputs["empty"] = w.empty;
    std::cout << "polygon weight window: eta = " << w.eta << " (= pi / max angle)\n";
    rec.finish();
    return 0;
  }

  ck::SectorModel sector{alpha, bc0, bc1};
  rec.inputs["alpha"] = alpha;
  auto report = ck::sector_pencil_eigenvalues(sector, count);
  auto window = ck::weight_window(sector);

  std::vector<std::vector<std::string>> rows;
  int k = 1;
  for (double lambda : report.positive) {
    rows.push_back({std::to_string(k), ck::format_double(lambda)});
    ++k;
  }
  rec.write_csv("pencil_eigenvalues.csv", {"k", "lambda_k"}, rows);

  rec.outputs["eta"] = window.eta;
  rec.outputs["window"] = {-window.eta, window.eta};
  rec.outputs["empty"] = window.empty;
  rec.outputs["mixed_bc"] = report.mixed_bc;
  rec.outputs["has_zero"] = report.has_zero;
  std::cout << "sector alpha = " << alpha << ": eta = " << window.eta
            << (window.empty ? " (window empty)" : "")
            << (report.mixed_bc ? " [mixed conditions: half-integer family]" : "") << "\n";

  if (oracleGrid > 0) {
    auto fd = ck::fd_pencil_eigenvalues(sector, oracleGrid, count);
    double worst = 0;
    for (size_t i = 0; i < report.positive.size() && i < fd.positive.size(); ++i)
      worst = std::max(worst, std::abs(report.positive[i] - fd.positive[i]));
    rec.outputs["oracle_grid"] = oracleGrid;
    rec.outputs["oracle_max_error"] = worst;
    std::cout << "finite-difference oracle (" << oracleGrid
              << " points): max |analytic - fd| = " << worst << "\n";
  }
  rec.finish();
  return 0;
}

ck::EndStructure geometry_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ck::InvalidArgument("io_error", "cannot read " + path);
  Json j = Json::parse(in);
  ck::EndStructure end;
  end.has_zero_dim_face = j.value("has_zero_dim_face", false);
  for (const auto& f : j.at("faces")) {
    ck::Face face;
    face.dim = f.at("dim").get<int>();
    const std::string kind = f.at("kind").get<std::string>();
    face.data.kind = kind == "dirac" ? ck::CrossKind::dirac : ck::CrossKind::laplace;
    face.data.provenance = f.value("provenance", std::string("analytic")) == "discretized"
                               ? ck::Provenance::discretized
                               : ck::Provenance::analytic;
    face.data.eigenvalues = f.at("eigenvalues").get<std::vector<double>>();
    end.faces.push_back(std::move(face));
  }
  return end;
}

int run_spectra(const std::string& geometry, const std::string& file, const std::string& op,
                const std::string& spin, double lambda, bool haveLambda, bool oracle, int modes,
                double length, int tgrid, CommonOpts opts) {
  RecordWriter rec{"spectra", opts};
  rec.inputs["geometry"] = geometry;
  rec.inputs["operator"] = op;

  const ck::SpinStructure spinTag =
      spin == "bounding" ? ck::SpinStructure::bounding : ck::SpinStructure::nonbounding;

  ck::EndStructure end;
  if (geometry == "cylinder") {
    ck::Face face{1, op == "dirac" ? ck::circle_dirac_data(spinTag, modes)
                                   : ck::circle_laplace_data(modes / 2)};
    end.faces.push_back(face);
  } else if (geometry == "multicyl") {
    for (int i = 0; i < 2; ++i)
      end.faces.push_back({1, op == "dirac" ? ck::circle_dirac_data(spinTag, modes)
                                            : ck::circle_laplace_data(modes / 2)});
  } else if (geometry == "file") {
    end = geometry_from_json(file);
    rec.inputs["file"] = file;
  } else {
    throw ck::InvalidArgument("bad_geometry", "geometry must be cylinder, multicyl or file");
  }

  ck::SpectrumSet spectrum = op == "dirac" ? ck::essential_spectrum_dirac(end)
                                           : ck::essential_spectrum_laplace(end);
  rec.outputs["essential_spectrum"] = json_spectrum(spectrum);
  std::cout << "essential spectrum: " << spectrum.str() << "\n";

  if (op == "dirac") {
    auto fred = ck::dirac_fredholm_invertible(end, false);
    rec.outputs["fredholm"] = fred.fredholm;
    rec.outputs["invertible_if_no_l2_kernel"] = fred.invertible;
  }
  if (haveLambda) {
    if (op == "dirac")
      throw ck::InvalidArgument("bad_query", "--lambda applies to the Laplace operator");
    const bool fred = ck::laplace_fredholm(end, lambda);
    rec.inputs["lambda"] = lambda;
    rec.outputs["fredholm"] = fred;
    std::cout << "Laplace - lambda Fredholm at lambda = " << lambda << ": "
              << (fred ? "true" : "false") << "\n";
  }

  if (oracle) {
    ck::SpectraSizeCap cap;
    std::vector<std::vector<std::string>> rows;
    if (op == "dirac") {
      auto spec = ck::discretized_dirac_cylinder(spinTag, modes, length, tgrid, cap);
      for (size_t i = 0; i < spec.eigenvalues.size(); ++i)
        rows.push_back({std::to_string(i), ck::format_double(spec.eigenvalues[i]),
                        ck::format_double(spec.end_mass_fraction[i])});
      rec.write_csv("spectra_eigenvalues.csv", {"index", "eigenvalue", "end_mass"}, rows);
    } else {
      auto eigs = ck::discretized_laplace_cylinder(modes, length, tgrid, cap);
      for (size_t i = 0; i < eigs.size(); ++i)
        rows.push_back({std::to_string(i), ck::format_double(eigs[i])});
      rec.write_csv("spectra_eigenvalues.csv", {"index", "eigenvalue"}, rows);
      rec.outputs["max_gap_mu_0_4"] = ck::max_spectral_gap(eigs, 0.0, 4.0);
    }
    rec.inputs["modes"] = modes;
    rec.inputs["length"] = length;
    rec.inputs["tgrid"] = tgrid;
  }
  rec.finish();
  return 0;
}

int run_fem(const std::string& benchmark, const std::string& polygonFile, double h, int levels,
            const std::string& kappaStr, const std::string& exportMesh, CommonOpts opts) {
  RecordWriter rec{"fem", opts};
  rec.inputs["benchmark"] = benchmark;
  rec.inputs["h"] = h;
  rec.inputs["levels"] = levels;

  std::vector<double> kappa;
  if (!kappaStr.empty())
    for (const auto& part : ck::split(kappaStr, ','))
      kappa.push_back(ck::parse_coordinate(part));

  auto writeStudy = [&](const ck::ConvergenceStudy& study, const std::string& name) {
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < study.rows.size(); ++i) {
      const auto& r = study.rows[i];
      std::string localRate =
          i == 0 ? ""
                 : ck::format_double(std::log(study.rows[i - 1].energy_error / r.energy_error) /
                                     std::log(study.rows[i - 1].h / r.h));
      rows.push_back({ck::format_double(r.h), std::to_string(r.dof),
                      ck::format_double(r.energy_error), localRate});
    }
    rec.write_csv(name, {"h", "dof", "energy_error", "rate"}, rows);
  };

  if (benchmark == "lshape") {
    auto study = ck::convergence_study(
        ck::Polygon::l_shape(), ck::acceptance_detail::lshape_exact,
        ck::acceptance_detail::lshape_grad, [](ck::Vec2) { return 0.0; },
        kappa, h, levels, {{0, 0}});
    writeStudy(study, "fem_convergence.csv");
    rec.outputs["rate"] = study.rate;
    rec.outputs["predicted_rate"] = kappa.empty() ? 2.0 / 3.0 : 1.0;
    std::cout << "L-shape energy rate: " << study.rate << "\n";
    if (!exportMesh.empty()) {
      auto mesh = ck::generate_graded_mesh(ck::Polygon::l_shape(), h, kappa);
      ck::write_file_atomic(std::filesystem::path(opts.out) / exportMesh, ck::mesh_to_text(mesh));
      rec.files.push_back(exportMesh);
    }
  } else if (benchmark == "smooth") {
    auto exact = [](ck::Vec2 p) { return std::sin(ck::kPi * p.x) * std::sinh(ck::kPi * p.y); };
    auto grad = [](ck::Vec2 p) {
      return ck::Vec2{ck::kPi * std::cos(ck::kPi * p.x) * std::sinh(ck::kPi * p.y),
                      ck::kPi * std::sin(ck::kPi * p.x) * std::cosh(ck::kPi * p.y)};
    };
    auto study = ck::convergence_study(ck::Polygon::unit_square(), exact, grad,
                                       [](ck::Vec2) { return 0.0; }, kappa, h, levels);
    writeStudy(study, "fem_convergence.csv");
    rec.outputs["rate"] = study.rate;
    std::cout << "smooth square energy rate: " << study.rate << "\n";
  } else if (benchmark == "square-corner") {
    auto probe = ck::corner_singularity_probe([](ck::Vec2) { return 1.0; }, h);
    rec.outputs["c_log"] = probe.fine.c_log;
    rec.outputs["c_log_coarse"] = probe.coarse.c_log;
    rec.outputs["relative_change"] = probe.relative_change;
    rec.outputs["c_sin"] = probe.fine.c_sin;
    std::cout << "corner probe: c_log = " << probe.fine.c_log << " (stability "
              << probe.relative_change << ")\n";
  } else if (benchmark.empty() && !polygonFile.empty()) {
    auto parsed = ck::parse_polygon_file(polygonFile);
    rec.inputs["polygon"] = polygonFile;
    auto kap = kappa.empty() ? parsed.kappa : kappa;
    auto mesh = ck::generate_graded_mesh(parsed.polygon, h, kap);
    auto sol = ck::solve_poisson(mesh, [](ck::Vec2) { return 1.0; }, [](ck::Vec2) { return 0.0; });
    rec.outputs["nodes"] = mesh.node_count();
    rec.outputs["triangles"] = static_cast<int>(mesh.tris.size());
    double umin = 0, umax = 0;
    for (double v : sol.values) {
      umin = std::min(umin, v);
      umax = std::max(umax, v);
    }
    rec.outputs["u_min"] = umin;
    rec.outputs["u_max"] = umax;
    std::cout << "solved Delta u = 1, u = 0 on " << mesh.node_count() << " nodes; range ["
              << umin << ", " << umax << "]\n";
    if (!exportMesh.empty()) {
      ck::write_file_atomic(std::filesystem::path(opts.out) / exportMesh, ck::mesh_to_text(mesh));
      rec.files.push_back(exportMesh);
    }
  } else {
    throw ck::InvalidArgument("bad_benchmark",
                              "need --benchmark lshape|smooth|square-corner or a polygon file");
  }
  rec.finish();
  return 0;
}

int run_bie(const std::string& shape, const std::string& polygonFile, const std::string& gName,
            int panels, int depth, CommonOpts opts) {
  RecordWriter rec{"bie", opts};
  rec.inputs["shape"] = shape;
  rec.inputs["g"] = gName;
  rec.inputs["panels"] = panels;
  rec.inputs["depth"] = depth;

  ck::Polygon poly = [&]() {
    if (!polygonFile.empty()) {
      rec.inputs["polygon"] = polygonFile;
      return ck::parse_polygon_file(polygonFile).polygon;
    }
    if (shape == "square") return ck::Polygon::unit_square();
    if (shape == "lshape") return ck::Polygon::l_shape();
    if (shape == "disk") return ck::Polygon::regular_ngon(64, 1.0);
    throw ck::InvalidArgument("bad_shape", "shape must be square, lshape or disk");
  }();

  std::function<double(ck::Vec2)> g;
  if (gName == "x2-y2")
    g = [](ck::Vec2 p) { return p.x * p.x - p.y * p.y; };
  else if (gName == "one")
    g = [](ck::Vec2) { return 1.0; };
  else if (gName == "expcos")
    g = [](ck::Vec2 p) { return std::exp(p.x) * std::cos(p.y); };
  else if (gName == "x3")
    g = [](ck::Vec2 p) { return p.x * p.x * p.x - 3.0 * p.x * p.y * p.y; };
  else
    throw ck::InvalidArgument("bad_data", "named data must be x2-y2, one, expcos or x3");

  auto panelization = ck::BoundaryPanelization::build(poly, panels, depth);
  const double gauss = ck::gauss_identity_residual(panelization);
  auto sol = ck::solve_dirichlet(poly, g, panels, depth);

  std::vector<std::vector<std::string>> densityRows;
  for (int i = 0; i < sol.panels().size(); ++i) {
    const auto& node = sol.panels().nodes()[i];
    densityRows.push_back({std::to_string(i), ck::format_double(node.pos.x),
                           ck::format_double(node.pos.y), ck::format_double(sol.density()[i])});
  }
  rec.write_csv("bie_density.csv", {"index", "x", "y", "density"}, densityRows);

  // interior samples halfway between the centroid and each vertex
  ck::Vec2 centroid{0, 0};
  for (const auto& v : poly.vertices()) centroid = centroid + v;
  centroid = centroid * (1.0 / poly.size());
  std::vector<std::vector<std::string>> interiorRows;
  for (const auto& v : poly.vertices()) {
    const ck::Vec2 z = centroid + (v - centroid) * 0.5;
    auto val = sol.evaluate(z);
    interiorRows.push_back({ck::format_double(z.x), ck::format_double(z.y),
                            ck::format_double(val.value), val.reliable ? "1" : "0"});
  }
  rec.write_csv("bie_interior.csv", {"x", "y", "value", "reliable"}, interiorRows);

  rec.outputs["gauss_identity_residual"] = gauss;
  rec.outputs["condition_estimate"] = sol.condition_estimate();
  rec.outputs["nodes"] = sol.panels().size();
  std::cout << "boundary nodes: " << sol.panels().size() << "\n"
            << "gauss identity residual: " << gauss << "\n"
            << "condition estimate: " << sol.condition_estimate() << "\n";
  rec.finish();
  return 0;
}

int run_reproduce(CommonOpts opts) {
  RecordWriter rec{"reproduce", opts};
  ck::AcceptanceConfig config;
  config.seed = opts.seed;
  config.cap = opts.cap;
  auto results = ck::run_acceptance_suite(config);

  bool allPass = true;
  Json list = Json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) {
    allPass = allPass && r.pass;
    std::printf("[%s] %2d %-42s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.details.c_str());
    Json item;
    item["id"] = r.id;
    item["name"] = r.name;
    item["pass"] = r.pass;
    item["details"] = r.details;
    list.push_back(item);
    rows.push_back({std::to_string(r.id), r.name, r.pass ? "pass" : "fail"});
  }
  rec.write_csv("reproduce_summary.csv", {"id", "name", "outcome"}, rows);
  rec.outputs["criteria"] = list;
  rec.outputs["all_pass"] = allPass;
  rec.inputs["cap"] = opts.cap;
  rec.finish();
  std::cout << (allPass ? "all criteria pass" : "criteria failures present") << "\n";
  return allPass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale computations for corner-degenerate elliptic operators"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config");
  app.require_subcommand(1);

  // vfcheck
  auto* vf = app.add_subcommand("vfcheck", "Lie closure and isotropy of a vector field module");
  std::string vfFile, vfPreset;
  CommonOpts vfOpts;
  vf->add_option("file", vfFile, "module description file");
  vf->add_option("--preset", vfPreset, "built-in basis: vb, v0, vsc, vedge");
  add_common(vf, vfOpts);

  // bops
  auto* bo = app.add_subcommand("bops", "totally characteristic operator algebra");
  std::string boAction;
  std::vector<std::string> boFiles;
  double boTau = 1.0;
  std::vector<double> boBase, boXi;
  CommonOpts boOpts;
  bo->add_option("action", boAction, "compose | indicial | symbol | elliptic")->required();
  bo->add_option("operators", boFiles, "operator description file(s)");
  bo->add_option("--tau", boTau, "evaluation point of the transformed family");
  bo->add_option("--base", boBase, "base point x,y")->delimiter(',');
  bo->add_option("--xi", boXi, "covector xi_b,xi_y")->delimiter(',');
  add_common(bo, boOpts);

  // pencil
  auto* pe = app.add_subcommand("pencil", "sector pencil eigenvalues and weight windows");
  double peAlpha = ck::kPi;
  std::string pePolygon, peBC = "dd";
  int peCount = 10, peOracle = 0;
  CommonOpts peOpts;
  pe->add_option("--alpha", peAlpha, "sector opening angle");
  pe->add_option("--polygon", pePolygon, "comma-separated interior angles");
  pe->add_option("--bc", peBC, "edge conditions: dd, dn, nd, nn");
  pe->add_option("--count", peCount, "number of eigenvalues");
  pe->add_option("--oracle", peOracle, "finite-difference grid size (0 = off)");
  add_common(pe, peOpts);

  // spectra
  auto* sp = app.add_subcommand("spectra", "essential spectra on cylindrical ends");
  std::string spGeometry = "cylinder", spFile, spOperator = "laplace", spSpin = "nonbounding";
  double spLambda = 0.0, spLength = 10.0;
  int spModes = 64, spTgrid = 160;
  bool spOracle = false;
  CommonOpts spOpts;
  sp->add_option("--geometry", spGeometry, "cylinder | multicyl | file");
  sp->add_option("--file", spFile, "geometry JSON for --geometry file");
  sp->add_option("--operator", spOperator, "laplace | dirac");
  sp->add_option("--spin", spSpin, "bounding | nonbounding");
  auto* lambdaOpt = sp->add_option("--lambda", spLambda, "Fredholm query point");
  sp->add_flag("--oracle", spOracle, "run the discretized truncation oracle");
  sp->add_option("--modes", spModes, "cross-section modes");
  sp->add_option("--length", spLength, "cylinder length");
  sp->add_option("--tgrid", spTgrid, "axial grid cells");
  add_common(sp, spOpts);

  // fem
  auto* fe = app.add_subcommand("fem", "graded-mesh P1 Poisson solver");
  fe->set_help_flag("--help", "print help");  // frees -h for the mesh size below
  std::string feBenchmark, fePolygon, feKappa, feExport;
  double feH = 0.125;
  int feLevels = 5;
  CommonOpts feOpts;
  fe->add_option("polygon", fePolygon, "polygon file (vertex list)");
  fe->add_option("--benchmark", feBenchmark, "lshape | square-corner | smooth");
  fe->add_option("--h,--hsize", feH, "target mesh size");
  fe->add_option("--levels", feLevels, "refinement levels for studies");
  fe->add_option("--kappa", feKappa, "per-vertex grading parameters, comma separated");
  fe->add_option("--export-mesh", feExport, "write the mesh as a plain-text triangle list");
  add_common(fe, feOpts);

  // bie
  auto* bi = app.add_subcommand("bie", "double layer potential Dirichlet solver");
  std::string biShape = "square", biPolygon, biG = "x2-y2";
  int biPanels = 8, biDepth = 10;
  CommonOpts biOpts;
  bi->add_option("polygon", biPolygon, "polygon file (vertex list)");
  bi->add_option("--shape", biShape, "square | lshape | disk");
  bi->add_option("--g", biG, "named boundary data: x2-y2, one, expcos, x3");
  bi->add_option("--panels", biPanels, "Gauss nodes per panel");
  bi->add_option("--depth", biDepth, "geometric grading depth per corner");
  add_common(bi, biOpts);

  // reproduce
  auto* re = app.add_subcommand("reproduce", "run the full verification suite");
  CommonOpts reOpts;
  add_common(re, reOpts);

  try {
    app.parse(argc, argv);
    if (vf->parsed()) return run_vfcheck(vfFile, vfPreset, vfOpts);
    if (bo->parsed()) return run_bops(boAction, boFiles, boTau, boBase, boXi, boOpts);
    if (pe->parsed()) return run_pencil(peAlpha, pePolygon, peBC, peCount, peOracle, peOpts);
    if (sp->parsed())
      return run_spectra(spGeometry, spFile, spOperator, spSpin, spLambda,
                         lambdaOpt->count() > 0, spOracle, spModes, spLength, spTgrid, spOpts);
    if (fe->parsed()) return run_fem(feBenchmark, fePolygon, feH, feLevels, feKappa, feExport, feOpts);
    if (bi->parsed()) return run_bie(biShape, biPolygon, biG, biPanels, biDepth, biOpts);
    if (re->parsed()) return run_reproduce(reOpts);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ck::CapExceeded& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 4;
  } catch (const ck::InvalidArgument& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 2;
  } catch (const ck::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

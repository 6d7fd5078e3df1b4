#include "ccurves/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccurves/classifier.hpp"
#include "ccurves/constructor.hpp"
#include "ccurves/curve_io.hpp"
#include "ccurves/manifold_io.hpp"
#include "ccurves/report_json.hpp"

namespace ccurves::cli {

namespace {

class UsageError : public Error
{
public:
  using Error::Error;
};

struct ManifoldSource
{
  std::string builtin;
  std::string c2;
  std::string spec;

  bool given() const { return !builtin.empty() || !spec.empty(); }
};

void add_manifold_options(CLI::App * app, ManifoldSource & src)
{
  auto * b = app->add_option("--builtin", src.builtin, "builtin manifold: rkmn or e2");
  auto * s = app->add_option("--spec", src.spec, "manifold spec JSON file");
  b->excludes(s);
  app->add_option("--c2", src.c2, "structure constant of e2 (expression)");
}

std::shared_ptr<const FrameManifold> builtin_by_name(const std::string & name, const std::string & c2)
{
  if (name == "rkmn") {
    if (!c2.empty()) { throw UsageError("--c2 applies to the e2 builtin only"); }
    return std::make_shared<const FrameManifold>(builtin_rkmn());
  }
  if (name == "e2") { return std::make_shared<const FrameManifold>(builtin_e2(c2.empty() ? 2.0 : eval_constant(c2))); }
  throw UsageError("unknown builtin manifold '" + name + "' (expected rkmn or e2)");
}

std::shared_ptr<const FrameManifold> resolve_manifold(const ManifoldSource & src)
{
  if (!src.spec.empty()) {
    std::map<std::string, double> overrides;
    if (!src.c2.empty()) { overrides["c2"] = eval_constant(src.c2); }
    return std::make_shared<const FrameManifold>(load_manifold_file(src.spec, overrides));
  }
  if (!src.builtin.empty()) { return builtin_by_name(src.builtin, src.c2); }
  throw UsageError("exactly one manifold source is required: --builtin NAME or --spec FILE");
}

/// Command-line source first, then the CSV comment line.
std::shared_ptr<const FrameManifold> manifold_for_table(const ManifoldSource & src, const CurveTable & t)
{
  if (src.given()) { return resolve_manifold(src); }
  ManifoldSource from_file;
  if (auto it = t.meta.find("spec"); it != t.meta.end()) {
    from_file.spec = it->second;
  } else if (auto m = t.meta.find("manifold"); m != t.meta.end()) {
    from_file.builtin = m->second;
    if (auto c = t.meta.find("c2"); c != t.meta.end()) { from_file.c2 = c->second; }
  } else {
    throw UsageError("curve file does not name its manifold; pass --builtin or --spec");
  }
  if (!src.c2.empty()) { from_file.c2 = src.c2; }
  return resolve_manifold(from_file);
}

std::pair<double, double> parse_span(const std::string & text)
{
  const auto colon = text.find(':');
  if (colon == std::string::npos) { throw UsageError("span must look like A:B, got '" + text + "'"); }
  return {eval_constant(text.substr(0, colon)), eval_constant(text.substr(colon + 1))};
}

std::vector<std::string> split(const std::string & text, char sep)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(text);
  while (std::getline(is, cell, sep)) {
    if (!cell.empty()) { out.push_back(cell); }
  }
  return out;
}

std::vector<double> parse_list(const std::string & text)
{
  std::vector<double> out;
  for (const auto & t : split(text, ',')) { out.push_back(eval_constant(t)); }
  if (out.empty()) { throw UsageError("empty list '" + text + "'"); }
  return out;
}

Vec parse_vector(const std::string & text)
{
  const auto parts = split(text, ',');
  Vec v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) { v[static_cast<Eigen::Index>(i)] = eval_constant(parts[i]); }
  return v;
}

void emit(std::ostream & out, const nlohmann::json & j) { out << j.dump(2) << '\n'; }

std::string category(const std::exception & e)
{
  if (dynamic_cast<const UsageError *>(&e)) { return "usage"; }
  if (dynamic_cast<const ManifoldError *>(&e)) { return "manifold"; }
  if (dynamic_cast<const ParseError *>(&e) || dynamic_cast<const UnknownIdentifier *>(&e)) { return "expression"; }
  if (dynamic_cast<const AmbiguousOrderError *>(&e)) { return "ambiguous-order"; }
  if (dynamic_cast<const OrderMismatch *>(&e)) { return "order-mismatch"; }
  if (dynamic_cast<const ClassificationFailed *>(&e)) { return "classification-failed"; }
  if (dynamic_cast<const HypothesisViolation *>(&e)) { return "hypothesis"; }
  if (dynamic_cast<const GeodesicError *>(&e)) { return "geodesic"; }
  if (dynamic_cast<const FrameDriftError *>(&e)) { return "frame-drift"; }
  if (dynamic_cast<const IntegrationDiverged *>(&e)) { return "diverged"; }
  if (dynamic_cast<const CurveError *>(&e)) { return "curve"; }
  if (dynamic_cast<const Error *>(&e)) { return "input"; }
  return "internal";
}

template <class W>
void write_output(const std::string & path, std::ostream & out, W write)
{
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream f(path);
  if (!f) { throw Error("cannot write '" + path + "'"); }
  write(f);
  if (!f) { throw Error("write failed for '" + path + "'"); }
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Legendre curves in contact metric manifolds: Frenet data, mean curvature conditions"};
  app.name("ccurves");
  app.require_subcommand(1);

  int status = 0;
  std::function<void()> action;

  // manifold
  auto * man = app.add_subcommand("manifold", "list or check manifolds");
  man->require_subcommand(1);
  auto * man_list = man->add_subcommand("list", "list builtin manifolds");
  man_list->callback([&] {
    action = [&] {
      out << "rkmn\tdim=3\tcoords=x,y,z\tframe=(xi,X,phiX)\t(kappa,mu,nu)-contact metric structure on R^3\n";
      out << "e2\tdim=3\thomogeneous\tframe=(X,phiX,xi)\tparameters: c2>0 (default 2)\n";
    };
  });

  ManifoldSource check_src;
  std::size_t points  = 100;
  std::uint64_t seed  = 0;
  double check_tol    = 0.0;
  double bracket_step = 1e-4;
  bool check_json     = false;
  auto * man_check    = man->add_subcommand("check", "verify the contact metric identities");
  add_manifold_options(man_check, check_src);
  man_check->add_option("--points", points, "number of random sample points")->check(CLI::PositiveNumber);
  man_check->add_option("--seed", seed, "random seed");
  man_check->add_option("--tol", check_tol, "tolerance (default 1e-6, 1e-10 when homogeneous)");
  man_check->add_option("--bracket-step", bracket_step, "finite-difference step for brackets");
  man_check->add_flag("--json", check_json, "emit a JSON report");
  man_check->callback([&] {
    action = [&] {
      const auto M     = resolve_manifold(check_src);
      const double tol = check_tol > 0.0 ? check_tol : (M->homogeneous() ? 1e-10 : 1e-6);
      const auto pts   = M->has_coords() ? random_points(M->coords().size(), points, seed)
                                         : std::vector<std::vector<double>>(1);
      const auto rep = verify_structure(*M, pts, tol, bracket_step);
      if (check_json) {
        emit(out, report_json(rep));
      } else {
        out << "manifold " << M->name() << ": " << (rep.pass ? "pass" : "fail") << " (" << rep.points.size()
            << " points, tol " << tol << ")\n";
        for (const auto & c : rep.constant_checks) {
          out << "  " << c.name << ": " << c.max_violation << (c.pass ? "" : "  FAIL") << '\n';
        }
        for (const auto & c : rep.summary) {
          out << "  " << c.name << ": " << c.max_violation << (c.pass ? "" : "  FAIL") << '\n';
        }
        out << "  min |h|: " << rep.min_h_norm << (rep.non_sasakian ? " (non-Sasakian)" : "") << '\n';
      }
      status = rep.pass ? 0 : 1;
    };
  });

  // curve
  auto * cur = app.add_subcommand("curve", "build, integrate or analyse curves");
  cur->require_subcommand(1);

  std::string example, c2_text = "2", theta_text = "3*pi/4", span_text = "0:1", out_path;
  double step = 1e-3;
  auto * build = cur->add_subcommand("build", "sample one of the example curves");
  build->add_option("--example", example, "ex1, e2-circle or e2-helix")->required();
  build->add_option("--c2", c2_text, "structure constant (expression)");
  build->add_option("--theta", theta_text, "angle (expression)");
  build->add_option("--span", span_text, "arc-length span A:B");
  build->add_option("--step", step, "grid step")->check(CLI::PositiveNumber);
  build->add_option("--out", out_path, "output CSV (default stdout)");
  build->callback([&] {
    action = [&] {
      const auto [a, b] = parse_span(span_text);
      std::optional<Curve> c;
      if (example == "ex1") {
        c = build_example_1(a, b, step);
      } else if (example == "e2-circle") {
        c = build_e2_circle(eval_constant(c2_text), eval_constant(theta_text), a, b, step);
      } else if (example == "e2-helix") {
        c = build_e2_helix(eval_constant(c2_text), eval_constant(theta_text), a, b, step);
      } else {
        throw UsageError("unknown example '" + example + "' (expected ex1, e2-circle or e2-helix)");
      }
      write_output(out_path, out, [&](std::ostream & o) { write_curve_csv(o, *c); });
    };
  });

  ManifoldSource int_src;
  std::string p0_text, frame_text;
  std::vector<std::string> k_texts;
  auto * integ = cur->add_subcommand("integrate", "integrate the Frenet system for prescribed curvatures");
  add_manifold_options(integ, int_src);
  integ->add_option("--p0", p0_text, "initial point, comma separated");
  integ->add_option("--frame", frame_text, "initial frame T;v2;... with comma separated components")->required();
  integ->add_option("--k", k_texts, "curvature k_a as an expression in s (repeat in order)");
  integ->add_option("--span", span_text, "arc-length span A:B");
  integ->add_option("--step", step, "integration step")->check(CLI::PositiveNumber);
  integ->add_option("--out", out_path, "output CSV (default stdout)");
  integ->callback([&] {
    action = [&] {
      FrenetInitialData d;
      d.manifold = resolve_manifold(int_src);
      if (!p0_text.empty()) { d.p0 = parse_vector(p0_text); }
      for (const auto & v : split(frame_text, ';')) { d.frame0.push_back(parse_vector(v)); }
      const std::vector<std::string> s_var{"s"};
      for (const auto & k : k_texts) { d.curvatures.push_back(Expr::parse(k, s_var)); }
      std::tie(d.s0, d.s1) = parse_span(span_text);
      d.step               = step;
      const auto res       = integrate_frenet_curve(d);
      std::map<std::string, std::string> extra;
      if (!int_src.spec.empty()) { extra["spec"] = int_src.spec; }
      write_output(out_path, out, [&](std::ostream & o) { write_curve_csv(o, res.curve, extra); });
    };
  });

  ManifoldSource in_src;
  std::string in_path;
  bool as_json = false, samples = false;
  double rank_tol = 0.0;
  auto * fr       = cur->add_subcommand("frenet", "compute the Frenet apparatus of a sampled curve");
  fr->add_option("--in", in_path, "curve CSV")->required();
  add_manifold_options(fr, in_src);
  fr->add_option("--rank-tol", rank_tol, "absolute rank tolerance (default relative to max k1)");
  fr->add_flag("--json", as_json, "emit a JSON summary instead of CSV");
  fr->add_flag("--samples", samples, "include per-sample values in JSON");
  fr->callback([&] {
    action = [&] {
      const auto t = read_curve_table(in_path);
      const Curve c = curve_from_table(t, manifold_for_table(in_src, t));
      FrenetOptions opts;
      if (rank_tol > 0.0) { opts.rank_tol = rank_tol; }
      const auto f = frenet(c, opts);
      if (as_json) {
        auto j = frenet_json(f, samples);
        const auto g = legendre_scalar(c).values;
        const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
        j["legendre"]         = is_legendre(c);
        j["g_t_phi_h_t"]      = {{"min", *lo}, {"max", *hi}};
        emit(out, j);
        return;
      }
      out << 's';
      for (std::size_t a = 1; a < f.order; ++a) { out << ",k" << a; }
      for (std::size_t a = 1; a <= f.order; ++a) { out << ",eta_v" << a; }
      out << '\n';
      for (std::size_t i = 0; i < c.size(); ++i) {
        out << format_double(f.grid[i]);
        for (const auto & k : f.curvatures) { out << ',' << format_double(k[i]); }
        for (const auto & e : f.eta) { out << ',' << format_double(e[i]); }
        out << '\n';
      }
    };
  });

  std::string kind_text;
  double tol = 1e-4, lambda_floor = 1e-6;
  auto * cls = app.add_subcommand("classify", "decide a C-parallel / C-proper condition");
  cls->add_option("--in", in_path, "curve CSV")->required();
  cls->add_option("--kind", kind_text, "c-parallel-tangent, c-proper-tangent, c-parallel-normal, c-proper-normal")
      ->required();
  add_manifold_options(cls, in_src);
  cls->add_option("--tol", tol, "residual tolerance");
  cls->add_option("--lambda-floor", lambda_floor, "smallest admissible |lambda|");
  cls->add_flag("--samples", samples, "include per-sample lambda");
  cls->callback([&] {
    action = [&] {
      const auto kind = parse_kind(kind_text);
      if (!kind) { throw UsageError("unknown kind '" + kind_text + "'"); }
      const auto t   = read_curve_table(in_path);
      const Curve c  = curve_from_table(t, manifold_for_table(in_src, t));
      const auto rep = classify(c, *kind, ClassifyOptions{tol, lambda_floor});
      emit(out, report_json(rep, samples));
      status = rep.verdict == Verdict::Holds ? 0 : 1;
    };
  });

  std::string theorem_text;
  auto * ver = app.add_subcommand("verify", "check the identities of a characterization");
  ver->add_option("--theorem", theorem_text, "T2.1 .. T3.6")->required();
  ver->add_option("--in", in_path, "curve CSV")->required();
  add_manifold_options(ver, in_src);
  ver->add_option("--tol", tol, "identity tolerance");
  ver->add_option("--lambda-floor", lambda_floor, "smallest admissible |lambda|");
  ver->add_flag("--samples", samples, "include per-sample lambda");
  ver->callback([&] {
    action = [&] {
      const auto id = parse_theorem(theorem_text);
      if (!id) { throw UsageError("unknown theorem id '" + theorem_text + "'"); }
      const auto t   = read_curve_table(in_path);
      const Curve c  = curve_from_table(t, manifold_for_table(in_src, t));
      const auto rep = verify_theorem(*id, c, tol, ClassifyOptions{tol, lambda_floor});
      emit(out, report_json(rep, samples));
      status = rep.pass ? 0 : 1;
    };
  });

  std::string family_text, c2_list, theta_list, kinds_list;
  auto * sw = app.add_subcommand("sweep", "classify a family of E(2) curves over a parameter grid");
  sw->add_option("--family", family_text, "circle or helix")->required();
  sw->add_option("--c2", c2_list, "comma separated c2 values")->required();
  sw->add_option("--theta", theta_list, "comma separated theta values")->required();
  sw->add_option("--kinds", kinds_list, "comma separated condition kinds")->required();
  sw->add_option("--span", span_text, "arc-length span A:B");
  sw->add_option("--step", step, "grid step")->check(CLI::PositiveNumber);
  sw->add_option("--tol", tol, "residual tolerance");
  sw->add_option("--lambda-floor", lambda_floor, "smallest admissible |lambda|");
  sw->add_option("--out", out_path, "output CSV (default stdout)");
  sw->callback([&] {
    action = [&] {
      const auto fam = parse_family(family_text);
      if (!fam) { throw UsageError("unknown family '" + family_text + "'"); }
      std::vector<ConditionKind> kinds;
      for (const auto & k : split(kinds_list, ',')) {
        const auto kind = parse_kind(k);
        if (!kind) { throw UsageError("unknown kind '" + k + "'"); }
        kinds.push_back(*kind);
      }
      SweepOptions opts;
      std::tie(opts.s0, opts.s1) = parse_span(span_text);
      opts.step                  = step;
      opts.classify              = ClassifyOptions{tol, lambda_floor};
      const auto c2s             = parse_list(c2_list);
      const auto thetas          = parse_list(theta_list);
      const auto cells           = sweep(*fam, c2s, thetas, kinds, opts);
      write_output(out_path, out, [&](std::ostream & o) { write_sweep_csv(o, cells); });
      const bool all_hold = std::all_of(cells.begin(), cells.end(), [](const SweepCell & c) {
        return c.report && c.report->verdict == Verdict::Holds;
      });
      status = all_hold ? 0 : 1;
    };
  });

  std::vector<const char *> argv{"ccurves"};
  for (const auto & a : args) { argv.push_back(a.c_str()); }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp & e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp & e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError & e) {
    err << "error[usage]: " << e.what() << '\n';
    return 2;
  }

  try {
    if (action) { action(); }
  } catch (const std::exception & e) {
    err << "error[" << category(e) << "]: " << e.what() << '\n';
    return 2;
  }
  return status;
}

}  // namespace ccurves::cli

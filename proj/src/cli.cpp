#include "roughlim/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "roughlim/analysis.hpp"
#include "roughlim/errors.hpp"
#include "roughlim/oracle.hpp"

namespace roughlim::cli {
namespace {

using json = nlohmann::json;

struct RunConfig {
  std::string command;
  std::string seq_path;
  std::string ideal = "density-zero";
  std::string format = "json";
  std::string norm = "2";
  std::optional<double> r, r_from, r_to, r_step;
  bool oracle = false;
  std::optional<double> lattice;
  std::optional<std::string> grid;
  std::optional<std::string> y1, y2;
  std::string theorem = "all";
};

// ---------------------------------------------------------------------------
// Output

std::string fmt_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool is_scalar(const json& j) { return !j.is_object() && !j.is_array(); }

// nlohmann's default object type is an ordered std::map, so keys come out
// sorted; only float formatting needs overriding.
void dump(const json& j, std::string& out, int level) {
  const std::string pad(static_cast<size_t>(2 * level), ' ');
  const std::string inner(static_cast<size_t>(2 * level + 2), ' ');
  if (j.is_number_float()) {
    out += fmt_number(j.get<double>());
  } else if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += inner + json(it.key()).dump() + ": ";
      dump(it.value(), out, level + 1);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
    if (flat) {
      out += "[";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        dump(j[i], out, level + 1);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += inner;
      dump(j[i], out, level + 1);
    }
    out += "\n" + pad + "]";
  } else {
    out += j.dump();
  }
}

std::string stable_dump(const json& j) {
  std::string s;
  dump(j, s, 0);
  s += "\n";
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join_points(const std::vector<Point>& pts) {
  std::string s;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += pts[i].to_string();
  }
  return s;
}

json point_json(const Point& p) {
  json a = json::array();
  for (double v : p.coords()) a.push_back(v);
  return a;
}

json points_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

json interval_json(const Interval& iv) {
  if (iv.is_empty()) return nullptr;
  return json::array({iv.lo(), iv.hi()});
}

// ---------------------------------------------------------------------------
// Config resolution

double parse_real(const std::string& text, const char* what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw InputError(std::string("bad number for ") + what + ": '" + text + "'");
  return v;
}

Point parse_point(const std::string& text, const char* what) {
  std::vector<double> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) c.push_back(parse_real(item, what));
  if (c.empty()) throw InputError(std::string("empty point for ") + what);
  return Point(std::move(c));
}

std::vector<double> resolve_radii(const RunConfig& cfg, std::vector<double> fallback) {
  const bool sweep = cfg.r_from || cfg.r_to || cfg.r_step;
  if (cfg.r && sweep) throw InputError("--r and --r-from/--r-to/--r-step are exclusive");
  std::vector<double> rs;
  if (cfg.r) {
    rs.push_back(*cfg.r);
  } else if (sweep) {
    if (!cfg.r_from || !cfg.r_to || !cfg.r_step)
      throw InputError("a sweep needs --r-from, --r-to and --r-step");
    if (!(*cfg.r_step > 0)) throw InputError("sweep step must be positive");
    if (*cfg.r_to < *cfg.r_from) throw InputError("sweep end precedes its start");
    const auto count = static_cast<long>(std::floor((*cfg.r_to - *cfg.r_from) / *cfg.r_step + 1e-9)) + 1;
    if (count > 100000) throw InputError("sweep too long");
    for (long i = 0; i < count; ++i) rs.push_back(*cfg.r_from + static_cast<double>(i) * *cfg.r_step);
  } else {
    rs = std::move(fallback);
  }
  if (rs.empty()) throw InputError("no r value given (use --r or a sweep)");
  for (double r : rs)
    if (!(r >= 0) || !std::isfinite(r)) throw InputError("r must be finite and >= 0");
  return rs;
}

Exhaustion resolve_grid(const RunConfig& cfg) {
  return cfg.grid ? Exhaustion::parse(*cfg.grid) : Exhaustion::default_schedule();
}

double resolve_lattice(const RunConfig& cfg) {
  const double h = cfg.lattice.value_or(0.1);
  if (!(h > 0) || !std::isfinite(h)) throw InputError("--lattice must be positive");
  return h;
}

json echo(const RunConfig& cfg, const StructuredSequence& x) {
  json in;
  in["command"] = cfg.command;
  in["seq"] = cfg.seq_path;
  in["sequence"] = x.name();
  in["ideal"] = to_string(parse_ideal(cfg.ideal));
  in["norm"] = NormSpec::parse(cfg.norm).to_string();
  return in;
}

// Lattice box for an oracle scan: the cluster range inflated by r + h.
std::vector<Interval> scan_box(const RoughAnalyzer& a, double r, double h) {
  const auto& cps = a.cluster_points();
  std::vector<Interval> box;
  for (int d = 0; d < a.dim(); ++d) {
    double lo = 0, hi = 0;
    if (!cps.empty()) {
      lo = hi = cps.points[0].point[d];
      for (const auto& c : cps.points) {
        lo = std::min(lo, c.point[d]);
        hi = std::max(hi, c.point[d]);
      }
    }
    box.emplace_back(lo - r - h, hi + r + h);
  }
  return box;
}

std::vector<double> default_eps_policy(double h) { return {h, h / 2, h / 5}; }

// ---------------------------------------------------------------------------
// Commands

struct Output {
  json doc;
  std::string csv;
  int code = kExitOk;
};

Output cmd_analyze(const RunConfig& cfg) {
  const auto x = StructuredSequence::load(cfg.seq_path);
  const auto ideal = parse_ideal(cfg.ideal);
  const auto norm = NormSpec::parse(cfg.norm);
  const RoughAnalyzer a(x, ideal, norm);
  const auto b = is_bounded(x, norm);
  const auto ib = is_I_bounded(x, ideal, norm);

  Output o;
  json& d = o.doc;
  d["input"] = echo(cfg, x);
  d["dim"] = x.dim();
  d["bounded"] = b.holds();
  d["bound_M"] = b.holds() ? json(b.M) : json(nullptr);
  d["unbounded_witness"] = b.witness ? json(b.witness->to_string()) : json(nullptr);
  d["i_bounded"] = ib.holds();
  d["i_bound_M"] = ib.holds() ? json(ib.M) : json(nullptr);
  d["not_i_bounded_witness"] = ib.witness && !ib.holds() ? json(ib.witness->to_string()) : json(nullptr);
  json cps = json::array();
  for (const auto& c : a.cluster_points().points)
    cps.push_back({{"point", point_json(c.point)},
                   {"density", c.density.to_string()},
                   {"density_is_lower_bound", c.at_least}});
  d["cluster_points"] = cps;
  const auto lim = a.i_limit();
  d["i_limit"] = lim ? point_json(*lim) : json(nullptr);

  std::ostringstream csv;
  csv << "field,value\n";
  csv << "dim," << x.dim() << "\n";
  csv << "bounded," << (b.holds() ? "true" : "false") << "\n";
  csv << "i_bounded," << (ib.holds() ? "true" : "false") << "\n";
  std::vector<Point> cp_list;
  for (const auto& c : a.cluster_points().points) cp_list.push_back(c.point);
  csv << "cluster_points," << csv_field(join_points(cp_list)) << "\n";
  csv << "i_limit," << (lim ? csv_field(lim->to_string()) : "") << "\n";

  if (x.dim() == 1) {
    const auto rmin = a.min_roughness_degree();
    d["r_min"] = rmin ? *rmin : std::numeric_limits<double>::infinity();
    d["limsup"] = a.i_bounded() ? json(a.limsup()) : json(nullptr);
    d["liminf"] = a.i_bounded() ? json(a.liminf()) : json(nullptr);
    csv << "limsup," << (a.i_bounded() ? csv_number(a.limsup()) : "") << "\n";
    csv << "liminf," << (a.i_bounded() ? csv_number(a.liminf()) : "") << "\n";
    csv << "r_min," << csv_number(rmin.value_or(std::numeric_limits<double>::infinity())) << "\n";
  }
  o.csv = csv.str();
  return o;
}

Output cmd_limitset(const RunConfig& cfg) {
  const auto x = StructuredSequence::load(cfg.seq_path);
  const auto ideal = parse_ideal(cfg.ideal);
  const auto norm = NormSpec::parse(cfg.norm);
  const RoughAnalyzer a(x, ideal, norm);
  const auto rs = resolve_radii(cfg, {});
  const auto ex = resolve_grid(cfg);
  const std::optional<double> lattice =
      cfg.lattice || (cfg.oracle && x.dim() > 1) ? std::optional<double>(resolve_lattice(cfg))
                                                 : std::nullopt;

  Output o;
  o.doc["input"] = echo(cfg, x);
  o.doc["input"]["oracle"] = cfg.oracle;
  if (cfg.oracle) o.doc["input"]["grid"] = ex.to_string();
  if (lattice) o.doc["input"]["lattice"] = *lattice;

  std::ostringstream csv;
  csv << "r,empty,lo,hi,diameter";
  if (cfg.oracle) csv << ",scan_points,hausdorff";
  csv << "\n";

  json rows = json::array();
  for (double r : rs) {
    const auto s = a.rough_limit_set(r, x.dim() > 1 ? lattice : std::nullopt);
    json row;
    row["r"] = r;
    row["empty"] = s.is_empty();
    if (s.is_empty()) row["empty_reason"] = s.empty_reason;
    if (x.dim() == 1) {
      row["interval"] = interval_json(s.interval);
      row["diameter"] = s.is_empty() ? json(nullptr) : json(interval_diameter(s.interval));
    } else {
      json balls = json::array();
      for (const auto& b : s.balls)
        balls.push_back({{"center", point_json(b.center)}, {"radius", b.radius}});
      row["balls"] = balls;
      if (lattice) row["lattice"] = points_json(s.lattice);
    }
    csv << csv_number(r) << ',' << (s.is_empty() ? "true" : "false") << ',';
    if (x.dim() == 1 && !s.is_empty())
      csv << csv_number(s.interval.lo()) << ',' << csv_number(s.interval.hi()) << ','
          << csv_number(interval_diameter(s.interval));
    else
      csv << ",,";

    if (cfg.oracle) {
      const double h = resolve_lattice(cfg);
      const auto pts = oracle_limit_set_scan(x, ideal, r, scan_box(a, r, h), h,
                                             default_eps_policy(h), ex, norm);
      json orc;
      orc["points"] = points_json(pts);
      csv << ',' << pts.size();
      if (x.dim() == 1) {
        std::vector<double> v;
        for (const auto& p : pts) v.push_back(p[0]);
        const double hd = hausdorff_distance(v, s.interval);
        orc["hausdorff"] = hd;
        csv << ',' << csv_number(hd);
      } else {
        csv << ',';
      }
      row["oracle"] = orc;
    }
    csv << "\n";
    rows.push_back(row);
  }
  o.doc["results"] = rows;
  o.csv = csv.str();
  return o;
}

Output cmd_check(const RunConfig& cfg) {
  static const std::vector<std::string> kTheorems = {
      "diameter", "ball", "cluster-ball", "boundedness", "closedness", "midpoint", "limsup-liminf"};
  if (cfg.theorem != "all" &&
      std::find(kTheorems.begin(), kTheorems.end(), cfg.theorem) == kTheorems.end())
    throw InputError("unknown theorem '" + cfg.theorem + "'");

  const auto x = StructuredSequence::load(cfg.seq_path);
  const auto ideal = parse_ideal(cfg.ideal);
  const auto norm = NormSpec::parse(cfg.norm);
  const RoughAnalyzer a(x, ideal, norm);
  const auto rs = resolve_radii(cfg, {0.0, 0.5, 1.0, 2.0});

  const bool have_ys = cfg.y1 && cfg.y2;
  if (cfg.y1.has_value() != cfg.y2.has_value()) throw InputError("--y1 and --y2 go together");
  if (cfg.theorem == "midpoint" && !have_ys) throw InputError("midpoint needs --y1 and --y2");
  std::optional<Point> y1, y2;
  if (have_ys) {
    y1 = parse_point(*cfg.y1, "--y1");
    y2 = parse_point(*cfg.y2, "--y2");
  }

  auto wanted = [&](const std::string& t) { return cfg.theorem == "all" || cfg.theorem == t; };
  const bool dim1 = x.dim() == 1;

  struct Row {
    std::optional<double> r;
    CheckResult res;
  };
  std::vector<Row> table;
  std::vector<std::string> skipped;
  auto per_r = [&](const std::string& t, auto fn) {
    if (!wanted(t)) return;
    if (!dim1) {
      skipped.push_back(t);
      return;
    }
    for (double r : rs) table.push_back({r, fn(r)});
  };
  per_r("diameter", [&](double r) { return check_diameter(a, r); });
  per_r("ball", [&](double r) { return check_ball_characterization(a, r); });
  per_r("cluster-ball", [&](double r) { return check_cluster_ball(a, r); });
  per_r("closedness", [&](double r) { return check_closedness(a, r); });
  if (wanted("boundedness")) {
    if (dim1) table.push_back({std::nullopt, check_boundedness_equivalence(a)});
    else skipped.push_back("boundedness");
  }
  if (wanted("limsup-liminf")) {
    if (dim1) table.push_back({std::nullopt, check_limsup_liminf(a)});
    else skipped.push_back("limsup-liminf");
  }
  if (wanted("midpoint")) {
    if (have_ys)
      for (double r : rs) table.push_back({r, check_midpoint(a, r, *y1, *y2)});
    else
      skipped.push_back("midpoint");
  }

  Output o;
  o.doc["input"] = echo(cfg, x);
  o.doc["input"]["theorem"] = cfg.theorem;
  if (have_ys) {
    o.doc["input"]["y1"] = point_json(*y1);
    o.doc["input"]["y2"] = point_json(*y2);
  }
  std::ostringstream csv;
  csv << "theorem,r,status,witnesses\n";
  json rows = json::array();
  bool any_fail = false;
  for (const auto& row : table) {
    any_fail = any_fail || row.res.failed();
    json w = json::array();
    std::string wjoined;
    for (const auto& s : row.res.witnesses) {
      w.push_back(s);
      if (!wjoined.empty()) wjoined += "; ";
      wjoined += s;
    }
    rows.push_back({{"theorem", row.res.theorem},
                    {"r", row.r ? json(*row.r) : json(nullptr)},
                    {"status", to_string(row.res.status)},
                    {"witnesses", w}});
    csv << csv_field(row.res.theorem) << ',' << (row.r ? csv_number(*row.r) : "") << ','
        << to_string(row.res.status) << ',' << csv_field(wjoined) << "\n";
  }
  o.doc["checks"] = rows;
  o.doc["skipped"] = skipped;
  o.doc["all_passed"] = !any_fail;
  o.csv = csv.str();
  o.code = any_fail ? kExitCheckFailed : kExitOk;
  return o;
}

Output cmd_oracle_compare(const RunConfig& cfg) {
  const auto x = StructuredSequence::load(cfg.seq_path);
  if (x.dim() != 1) throw InputError("oracle-compare needs a dimension-1 sequence");
  const auto ideal = parse_ideal(cfg.ideal);
  const auto norm = NormSpec::parse(cfg.norm);
  const RoughAnalyzer a(x, ideal, norm);
  const auto rs = resolve_radii(cfg, {});
  const auto ex = resolve_grid(cfg);
  const double h = resolve_lattice(cfg);
  const double tol = 1.5 * h;

  Output o;
  o.doc["input"] = echo(cfg, x);
  o.doc["input"]["grid"] = ex.to_string();
  o.doc["input"]["lattice"] = h;
  o.doc["input"]["eps_policy"] = default_eps_policy(h);
  o.doc["tolerance"] = tol;

  std::ostringstream csv;
  csv << "r,exact_lo,exact_hi,scan_points,scan_lo,scan_hi,hausdorff,agree\n";
  json rows = json::array();
  bool all_agree = true;
  for (double r : rs) {
    const auto s = a.rough_limit_set(r);
    const auto pts = oracle_limit_set_scan(x, ideal, r, scan_box(a, r, h), h,
                                           default_eps_policy(h), ex, norm);
    std::vector<double> v;
    for (const auto& p : pts) v.push_back(p[0]);
    const double hd = hausdorff_distance(v, s.interval);
    const bool agree = hd <= tol;
    all_agree = all_agree && agree;
    rows.push_back({{"r", r},
                    {"exact", interval_json(s.interval)},
                    {"scan_points", v},
                    {"hausdorff", hd},
                    {"agree", agree}});
    csv << csv_number(r) << ',';
    if (!s.interval.is_empty())
      csv << csv_number(s.interval.lo()) << ',' << csv_number(s.interval.hi());
    else
      csv << ',';
    csv << ',' << v.size() << ',';
    if (!v.empty())
      csv << csv_number(*std::min_element(v.begin(), v.end())) << ','
          << csv_number(*std::max_element(v.begin(), v.end()));
    else
      csv << ',';
    csv << ',' << csv_number(hd) << ',' << (agree ? "true" : "false") << "\n";
  }
  o.doc["results"] = rows;
  o.doc["agree"] = all_agree;
  o.csv = csv.str();
  o.code = all_agree ? kExitOk : kExitCheckFailed;
  return o;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seq", cfg.seq_path, "Sequence spec file")->required();
  sub->add_option("--ideal", cfg.ideal, "density-zero | minimal-sa | finite");
  sub->add_option("--format", cfg.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--norm", cfg.norm, "p >= 1 or max");
}

void add_radii(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--r", cfg.r, "Roughness degree");
  sub->add_option("--r-from", cfg.r_from, "Sweep start");
  sub->add_option("--r-to", cfg.r_to, "Sweep end (inclusive)");
  sub->add_option("--r-step", cfg.r_step, "Sweep step");
}

void add_oracle_opts(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--lattice", cfg.lattice, "Lattice step h");
  sub->add_option("--grid", cfg.grid, "Exhaustion stages, e.g. 50x50,100x100,200x200");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Rough ideal convergence of double sequences"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "Boundedness, cluster points, limsup/liminf, r_min");
  add_common(analyze, cfg);

  auto* limitset = app.add_subcommand("limitset", "Rough limit set for r or an r sweep");
  add_common(limitset, cfg);
  add_radii(limitset, cfg);
  add_oracle_opts(limitset, cfg);
  limitset->add_flag("--oracle", cfg.oracle, "Also run the grid oracle scan");

  auto* check = app.add_subcommand("check", "Run theorem checkers");
  add_common(check, cfg);
  add_radii(check, cfg);
  check->add_option("--theorem", cfg.theorem,
                    "diameter | ball | cluster-ball | boundedness | closedness | midpoint | "
                    "limsup-liminf | all");
  check->add_option("--y1", cfg.y1, "Comma-separated point");
  check->add_option("--y2", cfg.y2, "Comma-separated point");

  auto* compare = app.add_subcommand("oracle-compare", "Exact limit set against the grid oracle");
  add_common(compare, cfg);
  add_radii(compare, cfg);
  add_oracle_opts(compare, cfg);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    Output o;
    if (analyze->parsed()) {
      cfg.command = "analyze";
      o = cmd_analyze(cfg);
    } else if (limitset->parsed()) {
      cfg.command = "limitset";
      o = cmd_limitset(cfg);
    } else if (check->parsed()) {
      cfg.command = "check";
      o = cmd_check(cfg);
    } else {
      cfg.command = "oracle-compare";
      o = cmd_oracle_compare(cfg);
    }
    if (cfg.format == "csv")
      out << o.csv;
    else
      out << stable_dump(o.doc);
    return o.code;
  } catch (const UndecidableRegion& e) {
    err << "error: " << e.what() << "\n";
    return kExitUndecidable;
  } catch (const InvalidSequence& e) {
    err << "error: invalid sequence\n" << e.report().to_string();
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace roughlim::cli

// horolab command-line driver
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "horolab/averages.hpp"
#include "horolab/bn.hpp"
#include "horolab/dimension.hpp"
#include "horolab/errors.hpp"
#include "horolab/expsum.hpp"
#include "horolab/fit.hpp"
#include "horolab/funcspace.hpp"
#include "json.hpp"

#ifndef HOROLAB_VERSION
#define HOROLAB_VERSION "dev"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace horo;

namespace {

// 64-bit FNV-1a
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// json numbers: NaN/inf become null
json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw std::runtime_error("cannot write " + tmp.string());
    o << content;
    if (!o.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() {
    auto t = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(t - t0).count();
    t0 = t;
    return s;
  }
};

// everything one command produces
struct Run {
  std::string cmd;
  json config = json::object();
  std::vector<std::string> column_docs;  // "name: meaning [unit]"
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  json summary = json::object();
  json stages = json::object();
  bool table = true;

  std::string hash() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(config.dump()));
    return buf;
  }
  void add(std::vector<std::string> r) { rows.push_back(std::move(r)); }
};

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
  std::optional<double> tol;
  std::string format = "csv";
};

std::string render_csv(const Run& r) {
  std::ostringstream o;
  o << "# horolab " << HOROLAB_VERSION << " " << r.cmd << "\n";
  o << "# config_hash fnv1a64:" << r.hash() << "\n";
  o << "# config " << r.config.dump() << "\n";
  for (const auto& d : r.column_docs) o << "# " << d << "\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i) o << (i ? "," : "") << r.columns[i];
  o << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << row[i];
    o << "\n";
  }
  return o.str();
}

json rows_json(const Run& r) {
  json a = json::array();
  for (const auto& row : r.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < row.size() && i < r.columns.size(); ++i) {
      // keep the printed digits: parse back numbers, leave the rest as strings
      char* end = nullptr;
      double v = std::strtod(row[i].c_str(), &end);
      if (end && *end == 0 && !row[i].empty() && std::isfinite(v))
        o[r.columns[i]] = v;
      else
        o[r.columns[i]] = row[i];
    }
    a.push_back(o);
  }
  return a;
}

// data file, deterministic manifest, and a separate timing record
void persist(const Run& r, const Common& c, const std::string& status, const std::string& error, double wall) {
  fs::path dir = c.out;
  fs::create_directories(dir);
  json outputs = json::array();
  if (r.table) {
    if (c.format == "json") {
      json d = {{"tool", "horolab"},
                {"version", HOROLAB_VERSION},
                {"command", r.cmd},
                {"config_hash", "fnv1a64:" + r.hash()},
                {"columns", r.columns},
                {"column_docs", r.column_docs},
                {"rows", rows_json(r)}};
      write_atomic(dir / (r.cmd + ".json"), d.dump(2) + "\n");
      outputs.push_back(r.cmd + ".json");
    } else {
      write_atomic(dir / (r.cmd + ".csv"), render_csv(r));
      outputs.push_back(r.cmd + ".csv");
    }
  }
  json m = {{"tool", "horolab"},
            {"version", HOROLAB_VERSION},
            {"command", r.cmd},
            {"config", r.config},
            {"config_hash", "fnv1a64:" + r.hash()},
            {"status", status},
            {"summary", r.summary},
            {"outputs", outputs}};
  if (!error.empty()) m["error"] = error;
  write_atomic(dir / (r.cmd + ".manifest.json"), m.dump(2) + "\n");
  json t = {{"command", r.cmd}, {"wall_seconds", wall}, {"stages", r.stages}, {"threads", omp_get_max_threads()}};
  write_atomic(dir / (r.cmd + ".timings.json"), t.dump(2) + "\n");
}

// --- shared option groups -------------------------------------------------

struct FunctionOpts {
  std::string kind = "height";
  double y0 = 1.3, y1 = 2.2, width = 0.2;
  int weight = 1;

  void add(CLI::App* a) {
    a->add_option("--function", kind, "test function: height, angular or zero")
        ->check(CLI::IsMember({"height", "angular", "zero"}));
    a->add_option("--band-y0", y0, "lower edge of the band in Im z");
    a->add_option("--band-y1", y1, "upper edge of the band in Im z");
    a->add_option("--band-width", width, "smoothing width");
    a->add_option("--band-weight", weight, "angular weight");
  }
  TestFunction make() const {
    if (kind == "zero") return constant_function(0);
    if (kind == "angular") return make_angular_band(y0, y1, width, weight);
    return make_height_band(y0, y1, width);
  }
  json echo() const {
    json j = {{"function", kind}};
    if (kind != "zero") {
      j["band_y0"] = y0;
      j["band_y1"] = y1;
      j["band_width"] = width;
      if (kind == "angular") j["band_weight"] = weight;
    }
    return j;
  }
};

std::uint64_t need_seed(const Common& c, const std::string& cmd) {
  if (!c.seed) throw ParameterError(cmd + ": --seed is required for stochastic runs");
  return *c.seed;
}

std::vector<std::size_t> to_sizes(const std::vector<std::int64_t>& v, const char* what) {
  std::vector<std::size_t> out;
  for (auto x : v) {
    if (x < 1) throw ParameterError(std::string(what) + ": N values must be positive");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

// "a/b", integer or finite decimal, exactly
Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos)
      return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    std::string frac = s.substr(dot + 1);
    if (frac.size() > 15 || frac.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(s);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::string whole = s.substr(0, dot);
    const bool neg = !whole.empty() && whole[0] == '-';
    const std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : std::stoll(whole);
    const std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
    return Rational(w * den + (neg ? -f : f), den);
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  } catch (const boost::bad_rational&) {
  }
  throw ParameterError("cannot read '" + s + "' as a rational");
}

std::string rstr(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horolab: sparse horocycle averages, Weyl sums and spectral norms"};
  app.set_version_flag("--version", std::string(HOROLAB_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  if (const char* env = std::getenv("HOROLAB_OUT_DIR"); env && *env) c.out = env;
  if (c.out.empty()) c.out = ".";
  app.set_config("--config", "", "key = value (TOML) configuration file; flags win");
  app.add_option("--seed", c.seed, "master seed for stochastic commands");
  app.add_option("--threads", c.threads, "worker threads (default: hardware)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", c.out, "output directory (default: $HOROLAB_OUT_DIR or .)");
  app.add_option("--tol", c.tol, "command tolerance (see --help of each command)")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format, "series output format")->check(CLI::IsMember({"csv", "json"}));

  Run run;
  std::function<void()> body;

  // orbit ---------------------------------------------------------------------
  std::vector<std::int64_t> poly{0, 0, 1};
  auto* orbit = app.add_subcommand("orbit", "points u_{p(n)} x along the sparse orbit; --tol is the drift tolerance");
  std::int64_t orbit_N = 100;
  double ox = 0, oy = 1, oth = 0;
  bool extended = false, verify = false;
  orbit->add_option("--poly", poly, "integer coefficients, increasing degree")->delimiter(',');
  orbit->add_option("-N,--N", orbit_N, "number of points");
  orbit->add_option("--x", ox, "Re z of the start point");
  orbit->add_option("--y", oy, "Im z of the start point");
  orbit->add_option("--theta", oth, "fibre angle of the start point");
  orbit->add_flag("--extended", extended, "binary128 orbit arithmetic");
  orbit->add_flag("--verify", verify, "run the orbit backwards and check the drift");
  orbit->callback([&] {
    body = [&] {
      run.cmd = "orbit";
      if (orbit_N < 0) throw ParameterError("orbit: N must be >= 0");
      run.config = {{"poly", poly}, {"N", orbit_N}, {"x", ox}, {"y", oy}, {"theta", oth},
                    {"extended", extended}, {"verify", verify}};
      if (c.tol) run.config["tol"] = *c.tol;
      run.column_docs = {"n: index", "t: flow time p(n)", "re_z, im_z: reduced base point", "theta: fibre angle [rad]"};
      run.columns = {"n", "t", "re_z", "im_z", "theta"};
      const auto scheme = SamplingScheme::polynomial(poly);
      const PointX x = make_point(ox, oy, oth);
      OrbitOptions oo;
      oo.precision = extended ? Precision::extended : Precision::standard;
      oo.verify = verify;
      if (c.tol) oo.drift_tol = *c.tol;
      Timer t;
      double drift = 0;
      const auto N = static_cast<std::size_t>(orbit_N);
      const auto times = scheme.times(N);
      const auto pts = N ? orbit_points(x, N, scheme, oo, &drift) : std::vector<PointX>{};
      run.stages["orbit"] = t.lap();
      for (std::size_t i = 0; i < pts.size(); ++i)
        run.add({std::to_string(i), horo::to_string(times[i]), num(pts[i].z.real()), num(pts[i].z.imag()),
                 num(pts[i].theta)});
      run.summary = {{"points", pts.size()}, {"scheme", scheme.describe()}};
      if (verify) run.summary["drift"] = drift;
    };
  });

  // decay ---------------------------------------------------------------------
  auto* decay = app.add_subcommand("decay", "Monte-Carlo L2 norms of sparse averages and the fitted decay rate");
  std::vector<std::int64_t> decay_Ns{16, 32, 64, 128};
  std::size_t samples = 2000;
  double y_cap = 50;
  FunctionOpts dfun;
  decay->add_option("--poly", poly, "integer coefficients, increasing degree")->delimiter(',');
  decay->add_option("-N,--N", decay_Ns, "list of N")->delimiter(',');
  decay->add_option("--samples", samples, "base points per N");
  decay->add_option("--y-cap", y_cap, "cusp truncation height");
  dfun.add(decay);
  decay->callback([&] {
    body = [&] {
      run.cmd = "decay";
      const auto seed = need_seed(c, "decay");
      if (decay_Ns.empty()) throw ParameterError("decay: empty N list");
      run.config = {{"poly", poly}, {"N", decay_Ns}, {"samples", samples}, {"y_cap", y_cap}, {"seed", seed}};
      run.config.update(dfun.echo());
      run.column_docs = {"N: orbit length", "norm: estimated ||A_N f||_2", "stderr: Monte-Carlo standard error"};
      run.columns = {"N", "norm", "stderr"};
      const auto f = dfun.make();
      const auto scheme = SamplingScheme::polynomial(poly);
      Timer t;
      auto d = l2_norms(f, scheme, to_sizes(decay_Ns, "decay"), samples, seed, y_cap);
      run.stages["norms"] = t.lap();
      for (std::size_t i = 0; i < d.Ns.size(); ++i) run.add({std::to_string(d.Ns[i]), num(d.norms[i]), num(d.stderrs[i])});
      if (d.Ns.size() >= 3) {
        fit_decay(d);
        run.summary = {{"fitted", true}, {"alpha", d.alpha}, {"alpha_stderr", d.alpha_stderr},
                       {"residual_rms", d.residual_rms}};
      } else {
        run.summary = {{"fitted", false}, {"reason", "fit needs at least three N"}};
      }
      run.stages["fit"] = t.lap();
    };
  });

  // moments -------------------------------------------------------------------
  auto* moments = app.add_subcommand("moments", "integrals of |S_N/N|^q over a period and the fitted level");
  std::vector<std::int64_t> mom_Ns{32, 64, 128, 256};
  int q = 4;
  bool exact = false;
  moments->add_option("--poly", poly, "integer coefficients, increasing degree")->delimiter(',');
  moments->add_option("-N,--N", mom_Ns, "list of N")->delimiter(',');
  moments->add_option("-q,--q", q, "even moment");
  moments->add_flag("--exact", exact, "add the integer solution count (small N only)");
  moments->callback([&] {
    body = [&] {
      run.cmd = "moments";
      if (q < 2 || q % 2) throw ParameterError("moments: q must be a positive even integer");
      if (mom_Ns.empty()) throw ParameterError("moments: empty N list");
      run.config = {{"poly", poly}, {"N", mom_Ns}, {"q", q}, {"exact", exact}};
      run.column_docs = {"N: sum length", "moment: int_0^1 |S_N(t)/N|^q dt", "grid: sample count",
                         "exact: solution-count value (if requested)"};
      run.columns = {"N", "moment", "grid"};
      if (exact) run.columns.push_back("exact");
      const IntPolynomial p(poly);
      Timer t;
      std::vector<double> xs, ys;
      for (auto N : mom_Ns) {
        if (N < 1) throw ParameterError("moments: N values must be positive");
        auto m = moment_integral(p, N, q, 0, false);
        std::vector<std::string> row{std::to_string(N), num(m.value), std::to_string(m.grid)};
        if (exact) row.push_back(num(moment_exact(p, N, q)));
        run.add(row);
        xs.push_back(double(N));
        ys.push_back(m.value);
      }
      run.stages["moments"] = t.lap();
      if (xs.size() >= 3) {
        auto lf = loglog_fit(xs, ys);
        run.summary = {{"fitted", true}, {"level", -lf.slope}, {"level_stderr", lf.slope_stderr},
                       {"residual_rms", lf.residual_rms}};
      } else {
        run.summary = {{"fitted", false}, {"reason", "fit needs at least three N"}};
      }
    };
  });

  // weyl ----------------------------------------------------------------------
  auto* weyl = app.add_subcommand("weyl", "Weyl sum against its continuous counterpart on a t grid; --tol for the integral");
  std::int64_t weyl_N = 100;
  double t0 = 0.001, t1 = 0.1;
  std::size_t points = 100;
  weyl->add_option("--poly", poly, "integer coefficients, increasing degree")->delimiter(',');
  weyl->add_option("-N,--N", weyl_N, "sum length");
  weyl->add_option("--t0", t0, "first t");
  weyl->add_option("--t1", t1, "last t");
  weyl->add_option("--points", points, "grid points");
  weyl->callback([&] {
    body = [&] {
      run.cmd = "weyl";
      if (weyl_N < 1 || points < 1 || !(t1 >= t0)) throw ParameterError("weyl: need N >= 1, points >= 1, t1 >= t0");
      const double tol = c.tol.value_or(1e-10);
      run.config = {{"poly", poly}, {"N", weyl_N}, {"t0", t0}, {"t1", t1}, {"points", points}, {"tol", tol}};
      run.column_docs = {"t: frequency", "re_s, im_s: sum_{n<N} e(p(n) t)", "re_i, im_i: int_0^N e(p(u) t) du",
                         "gap: |S - I| / N", "i_err: quadrature error bound on I"};
      run.columns = {"t", "re_s", "im_s", "re_i", "im_i", "gap", "i_err"};
      const IntPolynomial p(poly);
      Timer t;
      std::vector<std::vector<std::string>> rows(points);
      for_each_index(points, Backend::openmp, [&](std::size_t i) {
        const double tt = points == 1 ? t0 : t0 + (t1 - t0) * double(i) / double(points - 1);
        const auto S = weyl_sum(p, weyl_N, tt);
        const auto I = continuous_weyl(p, double(weyl_N), tt, tol);
        rows[i] = {num(tt), num(S.real()), num(S.imag()), num(I.value.real()), num(I.value.imag()),
                   num(std::abs(S - I.value) / double(weyl_N)), num(I.error)};
      });
      run.rows = std::move(rows);
      run.stages["weyl"] = t.lap();
      run.summary = {{"points", points}};
    };
  });

  // bn-norm -------------------------------------------------------------------
  auto* bn = app.add_subcommand("bn-norm", "spectral norm of the Weyl kernel against Kirillov test vectors; --tol is the tail cut");
  std::vector<std::int64_t> bn_Ns{16, 32, 64, 128};
  std::vector<double> bn_s{0.05, 0.15, 0.30, 0.45};
  int bn_n = 0;
  BnOptions bo;
  bn->add_option("--poly", poly, "integer coefficients, increasing degree")->delimiter(',');
  bn->add_option("-N,--N", bn_Ns, "list of N")->delimiter(',');
  bn->add_option("-s,--s", bn_s, "complementary-series parameters in (0, 1/2)")->delimiter(',');
  bn->add_option("--basis", bn_n, "basis vector index n, |n| <= 8");
  bn->add_option("--alpha", bo.alpha, "gap zone exponent");
  bn->add_option("--beta", bo.beta, "moment zone exponent");
  bn->callback([&] {
    body = [&] {
      run.cmd = "bn-norm";
      if (bn_Ns.empty() || bn_s.empty()) throw ParameterError("bn-norm: empty N or s list");
      if (std::abs(bn_n) > 8) throw ParameterError("bn-norm: |basis| must be <= 8");
      for (double s : bn_s) check_spectral(s);
      if (c.tol) bo.tail_rel = *c.tol;
      run.config = {{"poly", poly}, {"N", bn_Ns},       {"s", bn_s},
                    {"basis", bn_n}, {"alpha", bo.alpha}, {"beta", bo.beta}, {"tail_rel", bo.tail_rel}};
      run.column_docs = {"s: spectral parameter", "N: sum length", "total: zone_gap + zone_moment + zone_tail",
                         "zone_*: contributions of |t| <= t_gap, t_gap..t_moment, t_moment..t_cut",
                         "tail_bound: envelope bound beyond t_cut (not in total)", "grid: FFT size"};
      run.columns = {"s",         "N",          "total",  "zone_gap", "zone_moment", "zone_tail",
                     "tail_bound", "t_gap",     "t_moment", "t_cut",  "grid"};
      const IntPolynomial p(poly);
      std::vector<KirillovFunction> fs;
      for (double s : bn_s) fs.push_back(kirillov_basis(s, bn_n));
      Timer t;
      std::vector<std::vector<double>> norms(bn_s.size());
      for (auto N : bn_Ns) {
        auto r = bn_spectral_norms(p, N, fs, bo);
        run.stages["N=" + std::to_string(N)] = t.lap();
        for (std::size_t k = 0; k < r.size(); ++k) {
          norms[k].push_back(r[k].total);
          run.add({num(bn_s[k]), std::to_string(N), num(r[k].total), num(r[k].zone_gap), num(r[k].zone_moment),
                   num(r[k].zone_tail), num(r[k].tail_bound), num(r[k].t_gap), num(r[k].t_moment),
                   num(r[k].t_cut), std::to_string(r[k].grid)});
        }
      }
      json fits = json::array();
      if (bn_Ns.size() >= 3) {
        std::vector<double> xs(bn_Ns.begin(), bn_Ns.end());
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t k = 0; k < bn_s.size(); ++k) {
          auto lf = loglog_fit(xs, norms[k]);
          const double delta = -lf.slope / 2;
          lo = std::min(lo, delta);
          hi = std::max(hi, delta);
          fits.push_back({{"s", bn_s[k]}, {"slope", lf.slope}, {"slope_stderr", lf.slope_stderr},
                          {"delta", delta}, {"residual_rms", lf.residual_rms}});
        }
        run.summary = {{"fitted", true}, {"fits", fits}, {"delta_min", lo}, {"delta_spread", hi - lo},
                       {"delta_ceiling", 0.2}};
      } else {
        run.summary = {{"fitted", false}, {"reason", "fit needs at least three N"}, {"delta_ceiling", 0.2}};
      }
    };
  });

  // boxdim --------------------------------------------------------------------
  auto* box = app.add_subcommand("boxdim", "classify grid cells as good or bad and count the bad ones");
  std::int64_t box_N = 64;
  double gamma = 0.1;
  GridSpec grid;
  BoxOptions bxo;
  std::string probe = "center";
  FunctionOpts bfun;
  box->add_option("-N,--N", box_N, "orbit length");
  box->add_option("--gamma", gamma, "goodness exponent: |A_N f| <= N^-gamma");
  box->add_option("--poly", poly, "integer coefficients, increasing degree")->delimiter(',');
  box->add_option("--x0", grid.x0);
  box->add_option("--x1", grid.x1);
  box->add_option("--y0", grid.y0);
  box->add_option("--y1", grid.y1);
  box->add_option("--theta0", grid.th0);
  box->add_option("--theta1", grid.th1);
  box->add_option("--delta", grid.delta, "cell side");
  box->add_option("--probe", probe, "center, or three (center plus two random points)")
      ->check(CLI::IsMember({"center", "three"}));
  box->add_option("--alpha2", bxo.alpha2, "decay exponent alpha'' for the theoretical ratio");
  box->add_option("--eps", bxo.eps, "epsilon for the theoretical ratio");
  box->add_option("--budget", bxo.budget, "maximum number of cells");
  bfun.add(box);
  box->callback([&] {
    body = [&] {
      run.cmd = "boxdim";
      if (box_N < 1) throw ParameterError("boxdim: N must be >= 1");
      grid.validate();
      bxo.probe = probe == "three" ? CellProbe::three : CellProbe::center;
      run.config = {{"poly", poly},    {"N", box_N},       {"gamma", gamma},     {"x0", grid.x0},
                    {"x1", grid.x1},   {"y0", grid.y0},    {"y1", grid.y1},      {"theta0", grid.th0},
                    {"theta1", grid.th1}, {"delta", grid.delta}, {"probe", probe}, {"alpha2", bxo.alpha2},
                    {"eps", bxo.eps}};
      run.config.update(bfun.echo());
      if (bxo.probe == CellProbe::three) run.config["seed"] = bxo.seed = need_seed(c, "boxdim --probe three");
      run.column_docs = {"cell: linear index (x fastest, then y, then theta)", "re_z, im_z, theta: cell centre",
                         "good: 1 if a probe satisfies |A_N f| <= N^-gamma"};
      run.columns = {"cell", "re_z", "im_z", "theta", "good"};
      const auto scheme = SamplingScheme::polynomial(poly);
      bxo.keep_cells = true;
      Timer t;
      auto e = box_count_bad(bfun.make(), static_cast<std::size_t>(box_N), gamma, grid, scheme, bxo);
      run.stages["classify"] = t.lap();
      for (std::size_t i = 0; i < e.total; ++i) {
        const auto x = grid.center(i);
        run.add({std::to_string(i), num(x.z.real()), num(x.z.imag()), num(x.theta), std::to_string(int(e.cell_good[i]))});
      }
      const int d = scheme.degree();
      run.summary = {{"total", e.total},
                     {"good", e.good},
                     {"bad", e.bad},
                     {"bad_fraction", e.bad_fraction},
                     {"bad_fraction_stderr", e.fraction_stderr},
                     {"empirical_ratio", jnum(e.empirical_ratio)},
                     {"packing_ratio", e.packing},
                     {"limit_bound", 3 - bxo.alpha2 / d},
                     {"good_measure_bound", jnum(box_N >= 2 ? good_measure_bound(double(box_N), gamma, bxo.alpha2, bxo.eps)
                                                            : NAN)}};
    };
  });

  // predict -------------------------------------------------------------------
  auto* predict = app.add_subcommand("predict", "closed-form exceptional-set dimension bounds");
  std::vector<std::string> modes, rates;
  std::vector<int> degrees;
  predict->add_option("--mode", modes, "mixing, spectral or gap_free")->delimiter(',');
  predict->add_option("-d,--degree", degrees, "polynomial degree")->delimiter(',');
  predict->add_option("--rate", rates, "alpha, Re(s1) or delta; a/b or decimal")->delimiter(',');
  predict->callback([&] {
    body = [&] {
      run.cmd = "predict";
      std::vector<std::string> m = modes, r = rates;
      std::vector<int> dd = degrees;
      if (m.empty() && r.empty() && dd.empty()) {
        // the spectral-gap and gap-free constants for the squares
        m = {"spectral", "spectral", "gap_free"};
        dd = {2, 2, 2};
        r = {"1/2", "25/64", "1/5"};
      }
      const std::size_t n = std::max({m.size(), r.size(), dd.size()});
      auto pick = [&](const auto& v, std::size_t i, const char* what) {
        if (v.size() == 1) return v[0];
        if (v.size() != n) throw ParameterError(std::string("predict: --") + what + " must have 1 or " + std::to_string(n) + " entries");
        return v[i];
      };
      if (m.empty() || r.empty() || dd.empty()) throw ParameterError("predict: give --mode, --degree and --rate");
      run.config = {{"mode", m}, {"degree", dd}, {"rate", r}};
      run.column_docs = {"mode: bound recipe", "degree: d", "rate: input rate (exact)",
                         "bound_exact: rational value", "bound: decimal value"};
      run.columns = {"mode", "degree", "rate", "bound_exact", "bound"};
      json table = json::array();
      for (std::size_t i = 0; i < n; ++i) {
        const BoundMode mode = parse_bound_mode(pick(m, i, "mode"));
        const int d = pick(dd, i, "degree");
        const Rational rate = parse_rational(pick(r, i, "rate"));
        const Rational b = predicted_bound_exact(mode, d, rate);
        const double bd = predicted_bound(mode, d, boost::rational_cast<double>(rate));
        run.add({to_string(mode), std::to_string(d), rstr(rate), rstr(b), num(bd)});
        table.push_back({{"mode", to_string(mode)}, {"degree", d}, {"rate", rstr(rate)}, {"bound_exact", rstr(b)}, {"bound", bd}});
      }
      run.summary = {{"bounds", table}};
      if (c.format == "json") {
        std::cout << table.dump(2) << "\n";
      } else {
        for (const auto& row : run.rows)
          std::printf("%-9s d=%s rate=%-8s bound=%-10s %s\n", row[0].c_str(), row[1].c_str(), row[2].c_str(),
                      row[3].c_str(), row[4].c_str());
      }
    };
  });

  // correlate -----------------------------------------------------------------
  auto* corr = app.add_subcommand("correlate", "Monte-Carlo matrix coefficients <u_k f, f>");
  std::vector<double> ks{0, 1, 2, 4, 8, 16, 32, 64};
  std::size_t corr_samples = 100000;
  double corr_cap = 50;
  FunctionOpts cfun;
  corr->add_option("-k,--k", ks, "flow times")->delimiter(',');
  corr->add_option("--samples", corr_samples, "Haar samples per k");
  corr->add_option("--y-cap", corr_cap, "cusp truncation height");
  cfun.add(corr);
  corr->callback([&] {
    body = [&] {
      run.cmd = "correlate";
      const auto seed = need_seed(c, "correlate");
      if (ks.empty()) throw ParameterError("correlate: empty k list");
      run.config = {{"k", ks}, {"samples", corr_samples}, {"y_cap", corr_cap}, {"seed", seed}};
      run.config.update(cfun.echo());
      run.column_docs = {"k: flow time", "mean: estimate of <u_k f, f>", "stderr: Monte-Carlo standard error"};
      run.columns = {"k", "mean", "stderr"};
      const auto f = cfun.make();
      Timer t;
      for (std::size_t i = 0; i < ks.size(); ++i) {
        auto e = empirical_correlation(f, ks[i], corr_samples, mix_seed(seed, i), corr_cap);
        run.add({num(ks[i]), num(e.mean), num(e.stderr_)});
      }
      run.stages["correlate"] = t.lap();
      run.summary = {{"points", ks.size()}};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (c.threads > 0) omp_set_num_threads(c.threads);

  Timer wall;
  int code = 0;
  std::string status = "ok", error;
  try {
    body();
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;  // nothing computed yet worth keeping
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    status = "failed";
    error = e.what();
    code = 1;
  }
  try {
    persist(run, c, status, error, wall.lap());
  } catch (const std::exception& e) {
    std::cerr << "error: could not write outputs: " << e.what() << "\n";
    return 1;
  }
  return code;
}
